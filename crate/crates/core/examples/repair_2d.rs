//! Removes speckles and diagonal-only contacts from a noisy picture.

use digitopo::io::{encode_pbm, PbmFormat};
use digitopo::shapes::{gen_fat_polyomino_2d, salt_image};
use digitopo::topo2d::{find_pathologies_2d, remove_speckles, repair_2d};

fn main() -> digitopo::Result<()> {
    let clean = gen_fat_polyomino_2d(7, 120, 2).padded(2);
    let noisy = salt_image(&clean, 7, 60);
    println!(
        "{} pathologies before repair",
        find_pathologies_2d(&noisy).len()
    );

    let (despeckled, speckles) = remove_speckles(&noisy);
    let (fixed, flips) = repair_2d(&despeckled)?;
    println!(
        "{} speckles removed, {} pixels flipped",
        speckles.len(),
        flips.len()
    );
    for a in &flips {
        println!("  {:?} ({}, {}) {:?}", a.op, a.x, a.y, a.reason);
    }
    assert!(find_pathologies_2d(&fixed).is_empty());

    print!(
        "{}",
        String::from_utf8_lossy(&encode_pbm(&fixed, PbmFormat::Plain))
    );
    Ok(())
}
