//! Makes a salted volume well-composed and shows the result is stable.

use digitopo::shapes::gen_noisy_volume;
use digitopo::topo3d::{find_pathologies_3d, repair_3d, surfaces_of_volume, VolumeOptions};

fn main() -> digitopo::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(11);
    let vol = gen_noisy_volume(seed);
    let before = find_pathologies_3d(&vol);
    println!(
        "seed {seed}: extent {:?}, {} voxels, {} pathologies",
        vol.extent(),
        vol.count_ones(),
        before.len()
    );
    for p in before.iter().take(5) {
        println!("  {:?} at {:?}", p.kind, p.anchor);
    }

    let (fixed, actions) = repair_3d(&vol)?;
    println!("{} flips", actions.len());
    assert!(find_pathologies_3d(&fixed).is_empty());
    assert!(repair_3d(&fixed)?.1.is_empty());

    let out = surfaces_of_volume(
        &fixed,
        VolumeOptions {
            repair: false,
            fallback: false,
        },
    )?;
    let genera: Vec<i64> = out.surfaces.iter().map(|s| s.genus).collect();
    println!("{} surfaces after repair, genera {genera:?}", genera.len());
    Ok(())
}
