//! Genus of boundary surfaces from point-type counts.

use digitopo::shapes::{gen_block_3d, gen_frame, gen_shell};
use digitopo::topo3d::{boundary_surfaces, genus};
use digitopo::{oracle, Volume3D};

fn main() -> digitopo::Result<()> {
    let shapes: Vec<(&str, Volume3D)> = vec![
        ("block 3x3x3", gen_block_3d(3, 3, 3)),
        ("frame, 1 hole", gen_frame(1, 1, 1)),
        ("frame, 2 holes", gen_frame(2, 1, 1)),
        ("frame, 5 holes", gen_frame(5, 2, 2)),
        ("shell 5^3 around 1^3", gen_shell([5, 5, 5], [1, 1, 1])?),
    ];

    for (name, vol) in &shapes {
        println!("{name}:");
        for s in boundary_surfaces(vol, false)? {
            let h = s.histogram.expect("formula surfaces carry a histogram");
            println!(
                "  surface at {:?}: m3 {} m4 {} m5 {} m6 {} -> g = {} (curvature {} quarter-pi)",
                s.min_vertex,
                h.m3,
                h.m4,
                h.m5,
                h.m6,
                genus(&h)?,
                h.total_curvature()
            );
        }
        println!("  Euler oracle: {:?}", oracle::genus_by_euler(vol)?);
    }
    Ok(())
}
