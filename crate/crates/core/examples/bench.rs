//! Times the counting pass on sponges of side n and 2n + 1.

use digitopo::cli::bench;

fn main() -> digitopo::Result<()> {
    let side = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(31);
    for streaming in [false, true] {
        let small = bench(side, streaming)?;
        let large = bench(2 * side + 1, streaming)?;
        println!(
            "{:<9} {:>9} voxels {:>8} us | {:>9} voxels {:>8} us | ratio x100 {}",
            if streaming { "streaming" } else { "memory" },
            small.voxels,
            small.micros,
            large.voxels,
            large.micros,
            100 * large.micros / small.micros.max(1)
        );
    }
    Ok(())
}
