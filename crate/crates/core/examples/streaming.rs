//! Streams a Vox3 file slab by slab and compares with the in-memory pass.

use digitopo::io::{write_vox3, Vox3Slabs};
use digitopo::shapes::gen_sponge;
use digitopo::topo3d::{genus, stream_surfaces, surfaces_of_volume, VolumeOptions};

fn main() -> digitopo::Result<()> {
    let side = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(31);
    let vol = gen_sponge(side);
    let path = std::env::temp_dir().join(format!("sponge-{side}.vox3"));
    write_vox3(&path, &vol)?;

    let summary = stream_surfaces(&mut Vox3Slabs::open(&path)?)?;
    let total: i64 = summary
        .surfaces
        .iter()
        .map(|s| genus(&s.histogram))
        .sum::<digitopo::Result<i64>>()?;
    println!(
        "streamed: {} slabs, at most {} slab buffers, peak {} bytes",
        summary.stats.slabs_read, summary.stats.peak_slab_buffers, summary.stats.peak_bytes
    );
    println!("{} surfaces, total genus {total}", summary.surfaces.len());

    let whole = surfaces_of_volume(
        &vol,
        VolumeOptions {
            repair: false,
            fallback: false,
        },
    )?;
    let whole_total: i64 = whole.surfaces.iter().map(|s| s.genus).sum();
    println!(
        "in memory: {} surfaces, total genus {whole_total}",
        whole.surfaces.len()
    );
    std::fs::remove_file(path)?;
    Ok(())
}
