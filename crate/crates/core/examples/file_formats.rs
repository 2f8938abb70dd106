//! PBM and Vox3 round trips and the JSON report envelope.

use digitopo::io::{self, PbmFormat, Report};
use digitopo::shapes::{gen_fat_polyomino_2d, gen_frame};
use digitopo::topo2d::holes_pipeline;

fn main() -> digitopo::Result<()> {
    let dir = std::env::temp_dir();
    let img = gen_fat_polyomino_2d(1, 90, 2).padded(1);

    for (fmt, name) in [(PbmFormat::Plain, "p1.pbm"), (PbmFormat::Raw, "p4.pbm")] {
        let path = dir.join(name);
        io::write_pbm(&path, &img, fmt)?;
        assert_eq!(io::read_pbm(&path)?, img);
        println!("{name}: {} bytes", std::fs::metadata(&path)?.len());
        std::fs::remove_file(path)?;
    }

    let frame = gen_frame(2, 1, 1);
    let text = io::encode_vox3(&frame);
    assert_eq!(io::parse_vox3(&text)?, frame);
    print!("{}", String::from_utf8_lossy(&text));

    let bytes = io::encode_pbm(&img, PbmFormat::Plain);
    let records: Vec<_> = holes_pipeline(&img)?.reports().cloned().collect();
    let report = Report::new("holes", io::sha256_hex(&bytes), records, Vec::<()>::new());
    print!("{}", report.to_json());
    Ok(())
}
