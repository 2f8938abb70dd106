//! Labels a small picture under both adjacencies and prints the label grid.

use digitopo::grid::{label_background_2d, label_components_2d};
use digitopo::{Adjacency, Image2D};

fn main() -> digitopo::Result<()> {
    let img = Image2D::from_rows(&[
        "1100000", //
        "1100100", //
        "0011100", //
        "0000001", //
        "1000010",
    ])?;

    for adj in [Adjacency::Direct2D, Adjacency::Indirect2D] {
        let labels = label_components_2d(&img, adj);
        println!(
            "{adj:?}: {} components, sizes {:?}",
            labels.count(),
            labels.sizes()
        );
        for y in 0..img.height() {
            let row: String = (0..img.width())
                .map(|x| match labels.label_at(x, y, 0) {
                    0 => '.',
                    l => char::from_digit(l, 36).unwrap_or('#'),
                })
                .collect();
            println!("  {row}");
        }
    }

    let bg = label_background_2d(&img, Adjacency::Direct2D);
    println!("background components (4-adjacent): {}", bg.count());
    Ok(())
}
