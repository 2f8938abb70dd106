//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or parse failure or a `validate`
//! disagreement, 2 a precondition failure with the oracle fallback disabled,
//! 3 repair non-convergence, 64 usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{label_components_2d, label_components_3d, Adjacency, Image2D, Volume3D};
use crate::io::{self, PbmFormat, Report, Vox3Slabs};
use crate::oracle;
use crate::shapes;
use crate::topo2d::{self, HolesOptions, RepairAction};
use crate::topo3d::{self, RepairAction3D, VolumeOptions};
use crate::Method;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "digitopo",
    version,
    about = "Holes, genus and Betti ranks of binary images and volumes"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Skip speckle removal and pathology repair.
    #[arg(long, global = true)]
    no_repair: bool,
    /// Use flood fill or the Euler characteristic where the formula does not apply.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set, value_name = "BOOL")]
    fallback_oracle: bool,
    /// Count surfaces slab by slab instead of loading the whole volume.
    #[arg(long, global = true)]
    streaming: bool,
    /// Seed for generated shapes and suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label connected components of a PBM image or Vox3 volume.
    Components {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Connectivity::Direct)]
        adjacency: Connectivity,
    },
    /// Count holes of every 4-connected component of a PBM image.
    Holes { input: PathBuf },
    /// Genus of every boundary surface of a Vox3 volume.
    Genus { input: PathBuf },
    /// Betti ranks of every component of a Vox3 volume.
    Homology { input: PathBuf },
    /// Remove pathological contacts and write the result.
    Repair {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check formula results against the oracles, on a file or a seeded suite.
    Validate {
        input: Option<PathBuf>,
        /// Number of seeded inputs to generate instead of reading a file.
        #[arg(long, conflicts_with = "input")]
        count: Option<usize>,
        #[arg(long, value_enum, default_value_t = Suite::Polyomino)]
        suite: Suite,
    },
    /// Write a generated shape.
    Gen {
        #[command(subcommand)]
        shape: Shape,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Time the genus counting pass on sponges of growing size.
    Bench {
        /// Cube sides; each should be 3 mod 4.
        #[arg(long, value_delimiter = ',', default_values_t = [63usize, 131])]
        sides: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Connectivity {
    Direct,
    Indirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Suite {
    /// Fat polyominoes: corner identity and formula against oracles.
    Polyomino,
    /// Multi-component images through the full hole pipeline.
    Scene,
    /// Genus-0 blobs: surface counts against the Euler oracle.
    Blob,
    /// Salted volumes: repair leaves no pathology and is idempotent.
    Noisy,
}

#[derive(Debug, Args)]
struct GenOutput {
    /// Output file; standard output when omitted.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Write 2D shapes as packed P4 instead of P1.
    #[arg(long, global = true)]
    raw: bool,
}

#[derive(Debug, Subcommand)]
enum Shape {
    Block2d {
        w: usize,
        h: usize,
    },
    Block3d {
        nx: usize,
        ny: usize,
        nz: usize,
    },
    Frame {
        #[arg(long, default_value_t = 1)]
        holes: usize,
        #[arg(long, default_value_t = 1)]
        ring_width: usize,
        #[arg(long, default_value_t = 1)]
        thickness: usize,
    },
    /// Frame with seeded tunnel sizes and spacing.
    FrameRandom {
        #[arg(long, default_value_t = 1)]
        holes: usize,
    },
    Shell {
        #[arg(long, value_delimiter = ',', num_args = 3)]
        outer: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 3)]
        cavity: Vec<usize>,
    },
    Polyomino {
        #[arg(long)]
        area: usize,
        #[arg(long, default_value_t = 2)]
        min_width: usize,
    },
    Blob {
        #[arg(long)]
        volume: usize,
        #[arg(long, default_value_t = 2)]
        min_width: usize,
    },
    Sponge {
        side: usize,
    },
    /// Stack copies of a PBM image into a volume.
    Extrude {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        layers: usize,
    },
}

struct Ctx<'a> {
    json: bool,
    repair: bool,
    fallback: bool,
    streaming: bool,
    seed: u64,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn volume_options(&self) -> VolumeOptions {
        VolumeOptions {
            repair: self.repair,
            fallback: self.fallback,
        }
    }

    fn emit<R: Serialize, A: Serialize>(
        &mut self,
        report: &Report<R, A>,
        text: &str,
    ) -> Result<()> {
        if self.json {
            self.out.write_all(report.to_json().as_bytes())?;
        } else {
            self.out.write_all(text.as_bytes())?;
        }
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        repair: !cli.no_repair,
        fallback: cli.fallback_oracle,
        streaming: cli.streaming,
        seed: cli.seed,
        out,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "digitopo: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RepairDidNotConverge { .. } => EXIT_NO_CONVERGENCE,
        Error::Precondition(_) | Error::InvalidSurface(_) | Error::NonManifoldBoundary { .. } => {
            EXIT_PRECONDITION
        }
        _ => EXIT_FAILURE,
    }
}

enum Input {
    Image(Image2D),
    Volume(Volume3D),
}

fn read_input(path: &Path) -> Result<(Input, String)> {
    let bytes = std::fs::read(path)?;
    let digest = io::sha256_hex(&bytes);
    let input = if bytes.starts_with(b"vox3") {
        Input::Volume(io::parse_vox3(&bytes)?)
    } else if bytes.starts_with(b"P") {
        Input::Image(io::parse_pbm(&bytes)?)
    } else {
        return Err(Error::parse(1, "not a PBM image or Vox3 volume"));
    };
    Ok((input, digest))
}

fn read_image(path: &Path) -> Result<(Image2D, String)> {
    match read_input(path)? {
        (Input::Image(img), d) => Ok((img, d)),
        _ => Err(Error::Dimensionality("expected a PBM image")),
    }
}

fn read_volume(path: &Path) -> Result<(Volume3D, String)> {
    match read_input(path)? {
        (Input::Volume(vol), d) => Ok((vol, d)),
        _ => Err(Error::Dimensionality("expected a Vox3 volume")),
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Result<i32> {
    match command {
        Command::Components { input, adjacency } => components(&input, adjacency, ctx),
        Command::Holes { input } => holes(&input, ctx),
        Command::Genus { input } => genus(&input, ctx),
        Command::Homology { input } => homology(&input, ctx),
        Command::Repair { input, output } => repair(&input, &output, ctx),
        Command::Validate {
            input,
            count,
            suite,
        } => match (input, count) {
            (Some(path), _) => validate_file(&path, ctx),
            (None, count) => validate_suite(suite, count.unwrap_or(100), ctx),
        },
        Command::Gen { shape, out } => generate(shape, &out, ctx),
        Command::Bench { sides } => bench_command(&sides, ctx),
    }
}

#[derive(Debug, Serialize)]
struct ComponentRecord {
    id: u32,
    cells: usize,
    /// Smallest cell of the bounding box.
    min: Vec<i64>,
    /// Bounding-box extent.
    size: Vec<usize>,
}

fn components(path: &Path, conn: Connectivity, ctx: &mut Ctx<'_>) -> Result<i32> {
    let (input, digest) = read_input(path)?;
    let direct = matches!(conn, Connectivity::Direct);
    let mut records = Vec::new();
    match input {
        Input::Image(img) => {
            let adj = if direct {
                Adjacency::Direct2D
            } else {
                Adjacency::Indirect2D
            };
            let lab = label_components_2d(&img, adj);
            let sizes = lab.sizes();
            for id in 1..=lab.count() {
                let (c, o) = lab.extract_image_at(id)?;
                records.push(ComponentRecord {
                    id,
                    cells: sizes[id as usize - 1],
                    min: vec![o[0] + 1, o[1] + 1],
                    size: vec![c.width() - 2, c.height() - 2],
                });
            }
        }
        Input::Volume(vol) => {
            let adj = if direct {
                Adjacency::Direct3D
            } else {
                Adjacency::Indirect3D
            };
            let lab = label_components_3d(&vol, adj);
            let sizes = lab.sizes();
            for id in 1..=lab.count() {
                let (c, o) = lab.extract_volume_at(id)?;
                records.push(ComponentRecord {
                    id,
                    cells: sizes[id as usize - 1],
                    min: o.iter().map(|v| v + 1).collect(),
                    size: c.extent().iter().map(|n| n - 2).collect(),
                });
            }
        }
    }
    let mut text = format!("{} components\n", records.len());
    for r in &records {
        text += &format!(
            "component {}: {} cells at {:?} size {:?}\n",
            r.id, r.cells, r.min, r.size
        );
    }
    ctx.emit(
        &Report::new("components", digest, records, Vec::<()>::new()),
        &text,
    )?;
    Ok(EXIT_OK)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Formula => "formula",
        Method::OracleFallback => "oracle fallback",
    }
}

fn holes(path: &Path, ctx: &mut Ctx<'_>) -> Result<i32> {
    let (img, digest) = read_image(path)?;
    let outcome = topo2d::holes_pipeline_with(&img, HolesOptions { repair: ctx.repair })?;
    if !ctx.fallback {
        if let Some(r) = outcome.reports().find(|r| !r.precondition_ok) {
            return Err(Error::Precondition(format!(
                "component {} fragment {} fails the corner-formula preconditions",
                r.component_id, r.fragment
            )));
        }
    }
    let mut text = String::new();
    for r in outcome.reports() {
        let h = &r.histogram;
        text += &format!(
            "component {}.{}: area {}, cp1 {}, cp2 {}, cp3 {}, cp4 {}, holes {} ({})\n",
            r.component_id,
            r.fragment,
            r.area,
            h.cp1,
            h.cp2,
            h.cp3,
            h.cp4,
            r.holes,
            method_name(r.method)
        );
    }
    text += &format!("{} repair actions\n", outcome.actions.len());
    let records: Vec<_> = outcome.reports().cloned().collect();
    ctx.emit(
        &Report::new("holes", digest, records, outcome.actions),
        &text,
    )?;
    Ok(EXIT_OK)
}

fn surface_lines(surfaces: &[topo3d::SurfaceReport]) -> String {
    let mut text = String::new();
    for (k, s) in surfaces.iter().enumerate() {
        let counts = match &s.histogram {
            Some(h) => format!("m3 {}, m4 {}, m5 {}, m6 {}", h.m3, h.m4, h.m5, h.m6),
            None => "no histogram".to_string(),
        };
        text += &format!(
            "  surface {k} at {:?}: {} points, {counts}, genus {}, chi {} ({})\n",
            s.min_vertex,
            s.points,
            s.genus,
            s.chi,
            method_name(s.method)
        );
    }
    text
}

#[derive(Debug, Serialize)]
struct GenusRecord {
    object_voxels: usize,
    boundary_voxels: usize,
    surfaces: Vec<topo3d::SurfaceReport>,
}

fn genus(path: &Path, ctx: &mut Ctx<'_>) -> Result<i32> {
    let opts = ctx.volume_options();
    let streamed = if ctx.streaming {
        let summary = topo3d::stream_surfaces(&mut Vox3Slabs::open(path)?)?;
        topo3d::outcome_from_stream(&summary, opts)
    } else {
        None
    };
    let (outcome, digest) = match streamed {
        Some(outcome) => (outcome, io::sha256_file(path)?),
        None => {
            let (vol, digest) = read_volume(path)?;
            (topo3d::surfaces_of_volume(&vol, opts)?, digest)
        }
    };
    let mut text = format!(
        "{} object voxels, {} boundary voxels, {} surfaces\n",
        outcome.object_voxels,
        outcome.boundary_voxels,
        outcome.surfaces.len()
    );
    text += &surface_lines(&outcome.surfaces);
    text += &format!("{} repair actions\n", outcome.actions.len());
    let record = GenusRecord {
        object_voxels: outcome.object_voxels,
        boundary_voxels: outcome.boundary_voxels,
        surfaces: outcome.surfaces,
    };
    ctx.emit(
        &Report::new("genus", digest, vec![record], outcome.actions),
        &text,
    )?;
    Ok(EXIT_OK)
}

fn homology(path: &Path, ctx: &mut Ctx<'_>) -> Result<i32> {
    let (vol, digest) = read_volume(path)?;
    let outcome = topo3d::analyze_volume(&vol, ctx.volume_options())?;
    let mut text = String::new();
    for r in outcome.reports() {
        text += &format!(
            "component {}.{}: {} voxels, {} boundary, betti {:?}\n",
            r.component_id, r.fragment, r.voxel_count, r.boundary_voxels, r.betti
        );
        text += &surface_lines(&r.surfaces);
    }
    text += &format!("{} repair actions\n", outcome.actions.len());
    let records: Vec<_> = outcome.reports().cloned().collect();
    ctx.emit(
        &Report::new("homology", digest, records, outcome.actions),
        &text,
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum AnyAction {
    Pixel(RepairAction),
    Voxel(RepairAction3D),
}

fn repair(input: &Path, output: &Path, ctx: &mut Ctx<'_>) -> Result<i32> {
    let (data, digest) = read_input(input)?;
    let actions: Vec<AnyAction> = match data {
        Input::Image(img) => {
            let (clean, speckles) = topo2d::remove_speckles(&img);
            let (fixed, fixes) = topo2d::repair_2d(&clean)?;
            io::write_pbm(output, &fixed, PbmFormat::Plain)?;
            speckles
                .into_iter()
                .chain(fixes)
                .map(AnyAction::Pixel)
                .collect()
        }
        Input::Volume(vol) => {
            let (fixed, fixes) = topo3d::repair_3d(&vol)?;
            io::write_vox3(output, &fixed)?;
            fixes.into_iter().map(AnyAction::Voxel).collect()
        }
    };
    let text = format!("{} actions, wrote {}\n", actions.len(), output.display());
    ctx.emit(
        &Report::new("repair", digest, Vec::<()>::new(), actions),
        &text,
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Default, Serialize)]
struct ValidationRecord {
    checked: usize,
    by_formula: usize,
    by_fallback: usize,
    disagreements: Vec<String>,
}

fn validate_file(path: &Path, ctx: &mut Ctx<'_>) -> Result<i32> {
    let (input, digest) = read_input(path)?;
    let mut rec = ValidationRecord::default();
    match input {
        Input::Image(img) => check_image(&img, ctx.repair, "input", &mut rec)?,
        Input::Volume(vol) => check_volume(&vol, ctx.volume_options(), "input", &mut rec)?,
    }
    finish_validation("validate", digest, rec, ctx)
}

fn finish_validation(
    command: &'static str,
    digest: String,
    rec: ValidationRecord,
    ctx: &mut Ctx<'_>,
) -> Result<i32> {
    let ok = rec.disagreements.is_empty();
    let mut text = format!(
        "checked {} ({} formula, {} fallback): {}\n",
        rec.checked,
        rec.by_formula,
        rec.by_fallback,
        if ok { "ok" } else { "DISAGREEMENT" }
    );
    for d in &rec.disagreements {
        text += &format!("  {d}\n");
    }
    ctx.emit(
        &Report::new(command, digest, vec![rec], Vec::<()>::new()),
        &text,
    )?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

/// Formula holes against flood fill and the Euler characteristic.
fn check_image(img: &Image2D, repair: bool, tag: &str, rec: &mut ValidationRecord) -> Result<()> {
    let outcome = topo2d::holes_pipeline_with(img, HolesOptions { repair })?;
    for c in &outcome.components {
        let r = &c.report;
        rec.checked += 1;
        let flood = oracle::holes_by_floodfill(&c.image);
        let euler = 1 - oracle::euler_2d(&c.image).chi;
        match r.method {
            Method::Formula => rec.by_formula += 1,
            Method::OracleFallback => rec.by_fallback += 1,
        }
        if r.holes != flood || flood != euler {
            rec.disagreements.push(format!(
                "{tag} component {}.{}: reported {} ({}), flood fill {flood}, euler {euler}",
                r.component_id,
                r.fragment,
                r.holes,
                method_name(r.method)
            ));
        }
    }
    Ok(())
}

/// Formula genus against the Euler oracle, plus the curvature audit.
fn check_volume(
    vol: &Volume3D,
    opts: VolumeOptions,
    tag: &str,
    rec: &mut ValidationRecord,
) -> Result<()> {
    let outcome = topo3d::analyze_volume(vol, opts)?;
    for c in &outcome.components {
        let oracle_genus = oracle::genus_by_euler(&c.volume)?;
        let reported: Vec<i64> = c.report.surfaces.iter().map(|s| s.genus).collect();
        for s in &c.report.surfaces {
            rec.checked += 1;
            match s.method {
                Method::Formula => rec.by_formula += 1,
                Method::OracleFallback => rec.by_fallback += 1,
            }
            if let Some(h) = &s.histogram {
                if !oracle::curvature_audit(h, s.genus) {
                    rec.disagreements.push(format!(
                        "{tag} surface at {:?}: curvature audit failed",
                        s.min_vertex
                    ));
                }
            }
        }
        if reported != oracle_genus {
            rec.disagreements.push(format!(
                "{tag} component {}.{}: genus {reported:?}, Euler oracle {oracle_genus:?}",
                c.report.component_id, c.report.fragment
            ));
        }
    }
    Ok(())
}

fn validate_suite(suite: Suite, count: usize, ctx: &mut Ctx<'_>) -> Result<i32> {
    let mut rec = ValidationRecord::default();
    for i in 0..count as u64 {
        let seed = ctx.seed.wrapping_add(i);
        let tag = format!("seed {seed}");
        match suite {
            Suite::Polyomino => {
                let area = 16 + crate::rng::Stream::new(seed).below(4081) as usize;
                let img = shapes::gen_fat_polyomino_2d(seed, area, 2);
                let hist = topo2d::classify_boundary_2d(&img)?;
                if hist.cp2 != hist.cp4 + 4 {
                    rec.disagreements
                        .push(format!("{tag}: cp2 {} != cp4 {} + 4", hist.cp2, hist.cp4));
                }
                check_image(&img, ctx.repair, &tag, &mut rec)?;
            }
            Suite::Scene => {
                check_image(&shapes::gen_scene_2d(seed, 64), ctx.repair, &tag, &mut rec)?
            }
            Suite::Blob => {
                let voxels = 64 + crate::rng::Stream::new(seed).below(1985) as usize;
                let vol = shapes::gen_fat_blob_3d(seed, voxels, 2);
                check_volume(&vol, ctx.volume_options(), &tag, &mut rec)?;
            }
            Suite::Noisy => {
                let vol = shapes::gen_noisy_volume(seed);
                let (fixed, _) = topo3d::repair_3d(&vol)?;
                check_volume(&fixed, ctx.volume_options(), &tag, &mut rec)?;
                if !topo3d::find_pathologies_3d(&fixed).is_empty() {
                    rec.disagreements
                        .push(format!("{tag}: pathologies left after repair"));
                }
                if !topo3d::repair_3d(&fixed)?.1.is_empty() {
                    rec.disagreements
                        .push(format!("{tag}: repair is not idempotent"));
                }
            }
        }
    }
    let digest = io::sha256_hex(format!("{suite:?} {} {count}", ctx.seed).as_bytes());
    finish_validation("validate", digest, rec, ctx)
}

fn generate(shape: Shape, out: &GenOutput, ctx: &mut Ctx<'_>) -> Result<i32> {
    let seed = ctx.seed;
    let made = match shape {
        Shape::Block2d { w, h } => Input::Image(shapes::gen_block_2d(w.max(1), h.max(1))),
        Shape::Block3d { nx, ny, nz } => Input::Volume(shapes::gen_block_3d(nx, ny, nz)),
        Shape::Frame {
            holes,
            ring_width,
            thickness,
        } => {
            if ring_width == 0 || thickness == 0 {
                return Err(Error::InvalidShape(
                    "ring width and thickness must be positive".into(),
                ));
            }
            Input::Volume(shapes::gen_frame(holes, ring_width, thickness))
        }
        Shape::FrameRandom { holes } => Input::Volume(shapes::gen_frame_random(seed, holes)),
        Shape::Shell { outer, cavity } => {
            let arr = |v: &[usize]| [v[0], v[1], v[2]];
            Input::Volume(shapes::gen_shell(arr(&outer), arr(&cavity))?)
        }
        Shape::Polyomino { area, min_width } => {
            Input::Image(shapes::gen_fat_polyomino_2d(seed, area, min_width.max(1)))
        }
        Shape::Blob { volume, min_width } => {
            Input::Volume(shapes::gen_fat_blob_3d(seed, volume, min_width.max(1)))
        }
        Shape::Sponge { side } => Input::Volume(shapes::gen_sponge(side)),
        Shape::Extrude { input, layers } => {
            let (img, _) = read_image(&input)?;
            Input::Volume(shapes::extrude(&img, layers.max(1)))
        }
    };
    let bytes = match &made {
        Input::Image(img) => {
            let fmt = if out.raw {
                PbmFormat::Raw
            } else {
                PbmFormat::Plain
            };
            io::encode_pbm(img, fmt)
        }
        Input::Volume(vol) => io::encode_vox3(vol),
    };
    match &out.output {
        Some(path) => std::fs::write(path, &bytes)?,
        None => ctx.out.write_all(&bytes)?,
    }
    Ok(EXIT_OK)
}

/// One timing of the genus counting pass.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BenchRow {
    pub side: usize,
    pub voxels: usize,
    pub streaming: bool,
    pub micros: u128,
    pub surfaces: usize,
    pub total_genus: i64,
    /// Slab-sized buffers held at once; the whole depth when not streaming.
    pub slab_buffers: usize,
    /// Working set of the pass in bytes (occupancy plus labels).
    pub peak_bytes: usize,
}

/// Builds a sponge of the given side and times one genus count over it,
/// without repair.
pub fn bench(side: usize, streaming: bool) -> Result<BenchRow> {
    let vol = shapes::gen_sponge(side);
    let opts = VolumeOptions {
        repair: false,
        fallback: false,
    };
    let start = Instant::now();
    let (outcome, buffers, bytes) = if streaming {
        let summary = topo3d::stream_surfaces(&mut topo3d::VolumeSlabs::new(&vol))?;
        let outcome = topo3d::outcome_from_stream(&summary, opts)
            .ok_or_else(|| Error::InvalidSurface("sponge surface failed the formula".into()))?;
        (
            outcome,
            summary.stats.peak_slab_buffers,
            summary.stats.peak_bytes,
        )
    } else {
        let outcome = topo3d::surfaces_of_volume(&vol, opts)?;
        let [nx, ny, nz] = vol.extent();
        let vertices = (nx + 1) * (ny + 1) * (nz + 1);
        (outcome, nz, vol.len() + vertices)
    };
    let micros = start.elapsed().as_micros();
    Ok(BenchRow {
        side,
        voxels: vol.len(),
        streaming,
        micros,
        surfaces: outcome.surfaces.len(),
        total_genus: outcome.surfaces.iter().map(|s| s.genus).sum(),
        slab_buffers: buffers,
        peak_bytes: bytes,
    })
}

fn bench_command(sides: &[usize], ctx: &mut Ctx<'_>) -> Result<i32> {
    let mut rows = Vec::new();
    let mut text = String::from("side voxels mode micros surfaces genus slab_buffers peak_bytes\n");
    for &side in sides {
        let row = bench(side, ctx.streaming)?;
        text += &format!(
            "{} {} {} {} {} {} {} {}\n",
            row.side,
            row.voxels,
            if row.streaming { "streaming" } else { "memory" },
            row.micros,
            row.surfaces,
            row.total_genus,
            row.slab_buffers,
            row.peak_bytes
        );
        rows.push(row);
    }
    let digest = io::sha256_hex(format!("{sides:?}").as_bytes());
    ctx.emit(&Report::new("bench", digest, rows, Vec::<()>::new()), &text)?;
    Ok(EXIT_OK)
}
