//! Counts holes from corner pixels and compares with flood fill.
//!
//! Pass a PBM path to analyze a file instead of the built-in example.

use digitopo::topo2d::{check_preconditions_2d, classify_boundary_2d, holes_pipeline};
use digitopo::{io, oracle, Image2D};

fn main() -> digitopo::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => io::read_pbm(path)?,
        None => Image2D::from_rows(&[
            "00000000", "00111111", "01111111", "01110011", "01110011", "00111111", "00111111",
            "00000000",
        ])?,
    };

    let hist = classify_boundary_2d(&img)?;
    let pre = check_preconditions_2d(&img, &hist);
    println!(
        "cp2 {} cp4 {} -> h = {:?} (preconditions {})",
        hist.cp2,
        hist.cp4,
        hist.formula_holes(),
        if pre.ok { "hold" } else { "fail" }
    );

    let outcome = holes_pipeline(&img)?;
    for (c, r) in outcome.components.iter().zip(outcome.reports()) {
        println!(
            "component {}.{} area {:>4}  holes {} via {:?}  flood fill {}",
            r.component_id,
            r.fragment,
            r.area,
            r.holes,
            r.method,
            oracle::holes_by_floodfill(&c.image)
        );
    }
    Ok(())
}
