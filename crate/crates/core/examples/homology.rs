//! Betti numbers of every object in a volume.

use digitopo::shapes::{gen_block_3d, gen_frame, gen_shell};
use digitopo::topo3d::{analyze_volume, VolumeOptions};
use digitopo::Volume3D;

fn main() -> digitopo::Result<()> {
    let frame = gen_frame(2, 1, 1);
    let shell = gen_shell([5, 5, 5], [1, 1, 1])?;
    let block = gen_block_3d(2, 2, 2);
    let [fx, fy, _] = frame.extent();
    let [sx, ..] = shell.extent();

    // three objects side by side
    let mut scene = Volume3D::new(fx + sx + 4, fy.max(5), 5);
    scene.blit(&frame, [0, 0, 0]);
    scene.blit(&shell, [fx as i64, 0, 0]);
    scene.blit(&block, [(fx + sx) as i64, 0, 0]);

    let outcome = analyze_volume(&scene, VolumeOptions::default())?;
    for c in &outcome.components {
        let r = &c.report;
        println!(
            "object {} at {:?}: {} voxels, {} surfaces, betti {:?}",
            r.component_id,
            c.origin,
            r.voxel_count,
            r.surfaces.len(),
            r.betti
        );
    }
    Ok(())
}
