use std::path::Path;

use digitopo::cli::{run, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE};
use digitopo::io::{write_pbm, write_vox3, PbmFormat};
use digitopo::shapes::{gen_frame, gen_sponge};
use digitopo::{Image2D, Volume3D};

fn digitopo(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("digitopo").chain(args.iter().copied());
    let code = run(argv.map(std::ffi::OsString::from), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = digitopo(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn matrix7() -> Image2D {
    Image2D::from_rows(&[
        "00000000", "00111100", "01111100", "01110000", "00110000", "00111000", "00111000",
        "00000000",
    ])
    .unwrap()
}

#[test]
fn holes_on_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m7.pbm");
    write_pbm(&file, &matrix7(), PbmFormat::Plain).unwrap();
    let v = json(&["holes", p(&file), "--json"]);
    assert_eq!(v["command"], "holes");
    assert_eq!(v["records"][0]["holes"], 0);
    assert_eq!(v["records"][0]["histogram"]["cp2"], 8);
    assert_eq!(v["records"][0]["histogram"]["cp4"], 4);
}

#[test]
fn genus_of_generated_frame() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("frame.vox3");
    let (code, _, err) = digitopo(&["gen", "frame", "--holes", "1", "-o", p(&file)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v = json(&["genus", p(&file), "--json"]);
    let surfaces = v["records"][0]["surfaces"].as_array().unwrap();
    assert_eq!(surfaces.len(), 1);
    assert_eq!(surfaces[0]["genus"], 1);
}

#[test]
fn json_is_byte_stable_and_streaming_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sponge.vox3");
    write_vox3(&file, &gen_sponge(15)).unwrap();
    let (_, a, _) = digitopo(&["genus", p(&file), "--json"]);
    let (_, b, _) = digitopo(&["genus", p(&file), "--json"]);
    assert_eq!(a, b);
    let (code, c, err) = digitopo(&["genus", p(&file), "--json", "--streaming"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(a, c);
}

#[test]
fn homology_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("frame2.vox3");
    write_vox3(&file, &gen_frame(2, 1, 1)).unwrap();
    let v = json(&["homology", p(&file), "--json"]);
    assert_eq!(v["records"][0]["betti"], serde_json::json!([1, 2, 0, 0]));
}

#[test]
fn disabled_fallback_reports_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("contact.vox3");
    // two cubes meeting along an edge
    let vol = Volume3D::from_slabs(&[
        &["0000", "0000", "0000", "0000"],
        &["0000", "0100", "0010", "0000"],
        &["0000", "0000", "0000", "0000"],
    ])
    .unwrap();
    write_vox3(&file, &vol).unwrap();
    let (code, _, _) = digitopo(&[
        "genus",
        p(&file),
        "--no-repair",
        "--fallback-oracle",
        "false",
    ]);
    assert_eq!(code, EXIT_PRECONDITION);
    let (code, _, err) = digitopo(&["genus", p(&file), "--no-repair"]);
    assert_eq!(code, EXIT_OK, "{err}");
}

#[test]
fn repair_writes_clean_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("diag.pbm");
    let output = dir.path().join("fixed.pbm");
    write_pbm(
        &input,
        &Image2D::from_rows(&["0000", "0110", "0001", "0000"]).unwrap(),
        PbmFormat::Raw,
    )
    .unwrap();
    let v = json(&["repair", p(&input), "-o", p(&output), "--json"]);
    assert!(!v["actions"].as_array().unwrap().is_empty());
    let fixed = digitopo::io::read_pbm(&output).unwrap();
    assert!(digitopo::topo2d::find_pathologies_2d(&fixed).is_empty());
}

#[test]
fn components_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("two.pbm");
    write_pbm(
        &file,
        &Image2D::from_rows(&["10", "01"]).unwrap(),
        PbmFormat::Plain,
    )
    .unwrap();
    let direct = json(&["components", p(&file), "--json"]);
    let indirect = json(&["components", p(&file), "--adjacency", "indirect", "--json"]);
    assert_eq!(direct["records"].as_array().unwrap().len(), 2);
    assert_eq!(indirect["records"].as_array().unwrap().len(), 1);
    let (code, out, _) = digitopo(&["validate", "--suite", "blob", "--count", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(digitopo(&["holes"]).0, EXIT_USAGE);
    assert_eq!(digitopo(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(digitopo(&["--help"]).0, EXIT_OK);
}
