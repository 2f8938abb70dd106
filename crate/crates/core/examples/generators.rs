//! Seeded shape generators.

use digitopo::shapes::{
    drill_holes_2d, extrude, gen_fat_blob_3d, gen_fat_polyomino_2d, gen_frame_random,
};
use digitopo::topo2d::hole_count;
use digitopo::topo3d::homology;

fn main() -> digitopo::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);

    let poly = gen_fat_polyomino_2d(seed, 600, 3).padded(1);
    let (drilled, holes) = drill_holes_2d(&poly, seed, 2);
    println!("polyomino with {holes} drilled holes:");
    for y in 0..drilled.height() {
        let row: String = (0..drilled.width())
            .map(|x| {
                if drilled.get(x as i64, y as i64) {
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{row}");
    }
    println!("hole count {}", hole_count(&drilled)?.holes);

    let slab = extrude(&drilled.padded(1), 2).padded(1);
    println!("extruded: betti {:?}", homology(&slab)?.betti);

    let blob = gen_fat_blob_3d(seed, 500, 2);
    println!(
        "blob: {} voxels, betti {:?}",
        blob.count_ones(),
        homology(&blob)?.betti
    );

    let frame = gen_frame_random(seed, 6);
    println!(
        "random frame {:?}: betti {:?}",
        frame.extent(),
        homology(&frame)?.betti
    );
    Ok(())
}
