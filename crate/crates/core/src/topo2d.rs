//! Hole counting for 2D binary images from boundary corner counts.
//!
//! A component whose boundary is made of non-crossing simple closed 4-curves
//! with no diagonal-only contacts has `h = 1 + (cp4 - cp2) / 4` holes, where
//! `cp2` counts outward corners and `cp4` inward corners. The pipeline removes
//! speckles, repairs diagonal contacts, checks the preconditions and either
//! applies the formula or falls back to a flood fill.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{label_components_2d, Adjacency, Image2D};
use crate::oracle;
use crate::Method;

/// Boundary-pixel classes of one component.
///
/// `cp_i` counts boundary pixels with exactly `i` foreground 4-neighbors. A
/// pixel is on the boundary when one of its 8 neighbors is background.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CornerHistogram {
    pub cp0: usize,
    pub cp1: usize,
    pub cp2: usize,
    pub cp3: usize,
    pub cp4: usize,
    /// `cp2` pixels whose two neighbors lie in opposite directions.
    pub thin: usize,
}

impl CornerHistogram {
    pub fn boundary_pixels(&self) -> usize {
        self.cp0 + self.cp1 + self.cp2 + self.cp3 + self.cp4
    }

    /// `cp4 - cp2`; the formula needs it to be a multiple of 4.
    pub fn corner_excess(&self) -> i64 {
        self.cp4 as i64 - self.cp2 as i64
    }

    /// `1 + (cp4 - cp2) / 4`, if the division is exact.
    pub fn formula_holes(&self) -> Option<i64> {
        let d = self.corner_excess();
        (d % 4 == 0).then(|| 1 + d / 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PathologyKind2D {
    /// `[[1,0],[0,1]]`
    DiagMain,
    /// `[[0,1],[1,0]]`
    DiagAnti,
}

/// A 2x2 window whose foreground touches only diagonally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pathology2D {
    pub x: i64,
    pub y: i64,
    pub kind: PathologyKind2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RepairOp {
    Delete,
    Add,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RepairReason {
    Speckle,
    PathologyFix,
}

/// One pixel flip made by speckle removal or pathology repair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RepairAction {
    pub x: i64,
    pub y: i64,
    pub op: RepairOp,
    pub reason: RepairReason,
}

impl RepairAction {
    fn translated(self, origin: [i64; 2]) -> Self {
        RepairAction {
            x: self.x + origin[0],
            y: self.y + origin[1],
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleReport {
    /// 4-connected label of the source component.
    pub component_id: u32,
    /// Index of this piece when repair split the source component; 0 otherwise.
    pub fragment: u32,
    pub area: usize,
    pub histogram: CornerHistogram,
    pub holes: i64,
    pub method: Method,
    pub precondition_ok: bool,
}

/// Outcome of [`check_preconditions_2d`], listing offending pixels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub ok: bool,
    pub pathologies: Vec<Pathology2D>,
    pub isolated: Vec<(usize, usize)>,
    pub one_neighbor: Vec<(usize, usize)>,
    pub thin: Vec<(usize, usize)>,
    /// Pixels anchoring a concave corner while not being a four-neighbor
    /// pixel, or anchoring more than one.
    pub corner_mismatch: Vec<(usize, usize)>,
    pub divisible: bool,
}

const DIRECT: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const DIAGONAL: [(i64, i64); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

fn direct_count(img: &Image2D, x: i64, y: i64) -> usize {
    DIRECT
        .iter()
        .filter(|(dx, dy)| img.get(x + dx, y + dy))
        .count()
}

fn indirect_count(img: &Image2D, x: i64, y: i64) -> usize {
    direct_count(img, x, y)
        + DIAGONAL
            .iter()
            .filter(|(dx, dy)| img.get(x + dx, y + dy))
            .count()
}

/// Fills background pixels enclosed by all 8 neighbors and deletes
/// foreground pixels with no foreground among their 8 neighbors. Each pass
/// is one in-place row-major sweep; passes repeat until nothing changes.
pub fn remove_speckles(img: &Image2D) -> (Image2D, Vec<RepairAction>) {
    let mut out = img.clone();
    let mut actions = Vec::new();
    loop {
        let mut changed = false;
        for y in 0..out.height() {
            for x in 0..out.width() {
                let (xi, yi) = (x as i64, y as i64);
                let n = indirect_count(&out, xi, yi);
                let fg = out.get(xi, yi);
                let op = match (fg, n) {
                    (false, 8) => RepairOp::Add,
                    (true, 0) => RepairOp::Delete,
                    _ => continue,
                };
                out.set(x, y, !fg);
                actions.push(RepairAction {
                    x: xi,
                    y: yi,
                    op,
                    reason: RepairReason::Speckle,
                });
                changed = true;
            }
        }
        if !changed {
            return (out, actions);
        }
    }
}

fn pathology_at(img: &Image2D, x: i64, y: i64) -> Option<PathologyKind2D> {
    match img.window2(x, y) {
        [true, false, false, true] => Some(PathologyKind2D::DiagMain),
        [false, true, true, false] => Some(PathologyKind2D::DiagAnti),
        _ => None,
    }
}

/// Every 2x2 window (overhanging ones included) with a diagonal-only
/// contact, in row-major order of the window anchor.
pub fn find_pathologies_2d(img: &Image2D) -> Vec<Pathology2D> {
    let mut out = Vec::new();
    for y in -1..img.height() as i64 {
        for x in -1..img.width() as i64 {
            if let Some(kind) = pathology_at(img, x, y) {
                out.push(Pathology2D { x, y, kind });
            }
        }
    }
    out
}

/// True when no window inside the 4x4 block around the window at `(x, y)`
/// is pathological.
fn region_clean(img: &Image2D, x: i64, y: i64) -> bool {
    (y - 1..=y + 1).all(|wy| (x - 1..=x + 1).all(|wx| pathology_at(img, wx, wy).is_none()))
}

fn toggle(img: &mut Image2D, x: i64, y: i64) {
    let v = img.get(x, y);
    img.set(x as usize, y as usize, !v);
}

/// Chooses and applies one flip resolving the pathology at `(x, y)`.
fn resolve(img: &mut Image2D, x: i64, y: i64) -> RepairAction {
    let cells = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
    let background: Vec<_> = cells
        .iter()
        .copied()
        .filter(|&(cx, cy)| !img.get(cx, cy))
        .collect();
    let foreground: Vec<_> = cells
        .iter()
        .copied()
        .filter(|&(cx, cy)| img.get(cx, cy))
        .collect();

    let candidates = background
        .iter()
        .map(|&c| (c, RepairOp::Add))
        .chain(foreground.iter().map(|&c| (c, RepairOp::Delete)));
    let mut chosen = None;
    for ((cx, cy), op) in candidates {
        if !img.in_bounds(cx, cy) {
            continue;
        }
        toggle(img, cx, cy);
        let clean = region_clean(img, x, y);
        toggle(img, cx, cy);
        if clean {
            chosen = Some(((cx, cy), op));
            break;
        }
    }
    // every flip leaves a pathology nearby: delete the first foreground pixel
    let ((cx, cy), op) = chosen.unwrap_or((foreground[0], RepairOp::Delete));
    toggle(img, cx, cy);
    RepairAction {
        x: cx,
        y: cy,
        op,
        reason: RepairReason::PathologyFix,
    }
}

/// Removes every diagonal-only contact by single-pixel flips.
///
/// For each pathological window the candidates are tried in order: add the
/// first background pixel, add the other, delete the first foreground pixel,
/// delete the other ("first" meaning row-major within the window). The first
/// candidate leaving the surrounding 4x4 block free of pathologies wins; when
/// none does, the first foreground pixel is deleted. Scans repeat until
/// clean, with a cap of `4 * width * height` flips.
pub fn repair_2d(img: &Image2D) -> Result<(Image2D, Vec<RepairAction>)> {
    let mut out = img.clone();
    let mut actions = Vec::new();
    let cap = 4 * img.len();
    loop {
        let found = find_pathologies_2d(&out);
        if found.is_empty() {
            return Ok((out, actions));
        }
        for p in found {
            if pathology_at(&out, p.x, p.y).is_none() {
                continue;
            }
            actions.push(resolve(&mut out, p.x, p.y));
            if actions.len() > cap {
                return Err(Error::RepairDidNotConverge {
                    actions: actions.len(),
                });
            }
        }
    }
}

/// Counts boundary pixels by their number of foreground 4-neighbors.
pub fn classify_boundary_2d(component: &Image2D) -> Result<CornerHistogram> {
    let mut hist = CornerHistogram::default();
    let mut any = false;
    for (x, y) in component.foreground() {
        any = true;
        let (x, y) = (x as i64, y as i64);
        if indirect_count(component, x, y) == 8 {
            continue;
        }
        match direct_count(component, x, y) {
            0 => hist.cp0 += 1,
            1 => hist.cp1 += 1,
            2 => {
                hist.cp2 += 1;
                if is_thin(component, x, y) {
                    hist.thin += 1;
                }
            }
            3 => hist.cp3 += 1,
            _ => hist.cp4 += 1,
        }
    }
    if !any {
        return Err(Error::EmptyComponent);
    }
    Ok(hist)
}

fn is_thin(img: &Image2D, x: i64, y: i64) -> bool {
    let horizontal = img.get(x - 1, y) && img.get(x + 1, y);
    let vertical = img.get(x, y - 1) && img.get(x, y + 1);
    horizontal || vertical
}

/// Number of concave-corner windows anchored on `(x, y)`: a background
/// diagonal neighbor whose two flanking 4-neighbors are foreground.
fn concave_corners(img: &Image2D, x: i64, y: i64) -> usize {
    DIAGONAL
        .iter()
        .filter(|(dx, dy)| !img.get(x + dx, y + dy) && img.get(x + dx, y) && img.get(x, y + dy))
        .count()
}

/// Checks whether the corner formula is valid for this component.
///
/// Passing requires: no pathological windows, no boundary pixel with fewer
/// than two 4-neighbors, no thin pixel (a thin pixel lies on two boundary
/// curves), every concave corner anchored on a distinct four-neighbor pixel,
/// and `cp4 - cp2` divisible by 4.
pub fn check_preconditions_2d(component: &Image2D, hist: &CornerHistogram) -> PreconditionReport {
    let mut report = PreconditionReport {
        pathologies: find_pathologies_2d(component),
        divisible: hist.corner_excess() % 4 == 0,
        ..Default::default()
    };
    for (ux, uy) in component.foreground() {
        let (x, y) = (ux as i64, uy as i64);
        if indirect_count(component, x, y) == 8 {
            continue;
        }
        let n = direct_count(component, x, y);
        match n {
            0 => report.isolated.push((ux, uy)),
            1 => report.one_neighbor.push((ux, uy)),
            2 if is_thin(component, x, y) => report.thin.push((ux, uy)),
            _ => {}
        }
        let k = concave_corners(component, x, y);
        if k > 1 || (k == 1 && n != 4) {
            report.corner_mismatch.push((ux, uy));
        }
    }
    report.ok = report.pathologies.is_empty()
        && report.isolated.is_empty()
        && report.one_neighbor.is_empty()
        && report.thin.is_empty()
        && report.corner_mismatch.is_empty()
        && report.divisible;
    report
}

/// Hole count of one 4-connected component: the corner formula when its
/// preconditions hold, the flood-fill count otherwise.
pub fn hole_count(component: &Image2D) -> Result<HoleReport> {
    let histogram = classify_boundary_2d(component)?;
    let pre = check_preconditions_2d(component, &histogram);
    let (holes, method) = match histogram.formula_holes() {
        Some(h) if pre.ok => (h, Method::Formula),
        _ => (
            oracle::holes_by_floodfill(component),
            Method::OracleFallback,
        ),
    };
    Ok(HoleReport {
        component_id: 0,
        fragment: 0,
        area: component.count_ones(),
        histogram,
        holes,
        method,
        precondition_ok: pre.ok,
    })
}

/// Pipeline switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HolesOptions {
    /// Run speckle removal and pathology repair before counting.
    pub repair: bool,
}

impl Default for HolesOptions {
    fn default() -> Self {
        HolesOptions { repair: true }
    }
}

/// One analyzed piece: its padded image, where that image sits in the
/// source, and the report.
#[derive(Debug, Clone)]
pub struct AnalyzedComponent {
    pub image: Image2D,
    pub origin: [i64; 2],
    pub report: HoleReport,
}

#[derive(Debug, Clone, Default)]
pub struct HolesOutcome {
    pub components: Vec<AnalyzedComponent>,
    /// Flips in source-image coordinates.
    pub actions: Vec<RepairAction>,
}

impl HolesOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &HoleReport> {
        self.components.iter().map(|c| &c.report)
    }
}

/// Label, then per component: remove speckles, repair, classify, count.
pub fn holes_pipeline(img: &Image2D) -> Result<HolesOutcome> {
    holes_pipeline_with(img, HolesOptions::default())
}

pub fn holes_pipeline_with(img: &Image2D, opts: HolesOptions) -> Result<HolesOutcome> {
    let labeling = label_components_2d(img, Adjacency::Direct2D);
    let mut outcome = HolesOutcome::default();
    for id in 1..=labeling.count() {
        let (mut component, origin) = labeling.extract_image_at(id)?;
        if opts.repair {
            let (despeckled, speckles) = remove_speckles(&component);
            let (repaired, fixes) = repair_2d(&despeckled)?;
            outcome.actions.extend(
                speckles
                    .into_iter()
                    .chain(fixes)
                    .map(|a| a.translated(origin)),
            );
            component = repaired;
        }
        // repair deletions may split the component
        let parts = label_components_2d(&component, Adjacency::Direct2D);
        for part in 1..=parts.count() {
            let (image, sub_origin) = parts.extract_image_at(part)?;
            let mut report = hole_count(&image)?;
            report.component_id = id;
            report.fragment = part - 1;
            outcome.components.push(AnalyzedComponent {
                image,
                origin: [origin[0] + sub_origin[0], origin[1] + sub_origin[1]],
                report,
            });
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn matrix7() -> Image2D {
        Image2D::from_rows(&[
            "00000000", "00111100", "01111100", "01110000", "00110000", "00111000", "00111000",
            "00000000",
        ])
        .unwrap()
    }

    pub(crate) fn matrix10() -> Image2D {
        Image2D::from_rows(&[
            "00000000", "00111111", "01111111", "01110011", "01110011", "00111111", "00111111",
            "00000000",
        ])
        .unwrap()
    }

    fn block(w: usize, h: usize, pad: usize) -> Image2D {
        let mut img = Image2D::new(w + 2 * pad, h + 2 * pad);
        for y in 0..h {
            for x in 0..w {
                img.set(x + pad, y + pad, true);
            }
        }
        img
    }

    #[test]
    fn worked_examples_histograms() {
        let h7 = classify_boundary_2d(&matrix7()).unwrap();
        assert_eq!((h7.cp2, h7.cp4), (8, 4));
        let h10 = classify_boundary_2d(&matrix10()).unwrap();
        assert_eq!((h10.cp2, h10.cp4), (6, 6));
    }

    #[test]
    fn worked_examples_holes() {
        let r7 = hole_count(&matrix7()).unwrap();
        assert_eq!((r7.holes, r7.method), (0, Method::Formula));
        let r10 = hole_count(&matrix10()).unwrap();
        assert_eq!((r10.holes, r10.method), (1, Method::Formula));
        assert!(check_preconditions_2d(&matrix10(), &r10.histogram).ok);
    }

    #[test]
    fn small_block() {
        let img = block(2, 2, 1);
        let h = classify_boundary_2d(&img).unwrap();
        assert_eq!((h.cp2, h.cp4, h.thin), (4, 0, 0));
        assert_eq!(hole_count(&img).unwrap().holes, 0);
    }

    #[test]
    fn empty_component_is_an_error() {
        assert!(matches!(
            classify_boundary_2d(&Image2D::new(3, 3)),
            Err(Error::EmptyComponent)
        ));
        assert!(hole_count(&Image2D::new(3, 3)).is_err());
    }

    #[test]
    fn speckles() {
        let mut ring = block(3, 3, 1);
        ring.set(2, 2, false);
        let (filled, actions) = remove_speckles(&ring);
        assert_eq!(filled, block(3, 3, 1));
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].op, RepairOp::Add);

        let mut lone = Image2D::new(5, 5);
        lone.set(2, 2, true);
        let (cleaned, actions) = remove_speckles(&lone);
        assert!(cleaned.is_empty());
        assert_eq!(actions[0].op, RepairOp::Delete);

        let (same, none) = remove_speckles(&matrix7());
        assert_eq!(same, matrix7());
        assert!(none.is_empty());
    }

    #[test]
    fn pathology_scan() {
        let diag = Image2D::from_rows(&["10", "01"]).unwrap();
        assert_eq!(
            find_pathologies_2d(&diag),
            vec![Pathology2D {
                x: 0,
                y: 0,
                kind: PathologyKind2D::DiagMain
            }]
        );
        assert!(find_pathologies_2d(&block(4, 4, 1)).is_empty());
        let staircase = Image2D::from_rows(&["1000", "0100", "0010", "0001"]).unwrap();
        assert_eq!(find_pathologies_2d(&staircase).len(), 3);
        let anti = Image2D::from_rows(&["01", "10"]).unwrap();
        assert_eq!(
            find_pathologies_2d(&anti)[0].kind,
            PathologyKind2D::DiagAnti
        );
    }

    #[test]
    fn repair_single_diagonal() {
        let img = Image2D::from_rows(&["0000", "0100", "0010", "0000"]).unwrap();
        let (fixed, actions) = repair_2d(&img).unwrap();
        // first candidate: add the row-major-first background pixel (2, 1)
        assert_eq!(
            actions,
            vec![RepairAction {
                x: 2,
                y: 1,
                op: RepairOp::Add,
                reason: RepairReason::PathologyFix
            }]
        );
        assert!(find_pathologies_2d(&fixed).is_empty());
    }

    #[test]
    fn repair_clean_is_identity() {
        let (out, actions) = repair_2d(&matrix10()).unwrap();
        assert_eq!(out, matrix10());
        assert!(actions.is_empty());
    }

    #[test]
    fn forced_delete_when_every_flip_backfires() {
        // the contact at (2,2)-(3,3) is hemmed in: each add or delete
        // candidate opens a new diagonal contact next to it
        let img = Image2D::from_rows(&[
            "0000000", "0010100", "0110000", "0001100", "0101000", "0000000", "0000000",
        ])
        .unwrap();
        let found = find_pathologies_2d(&img);
        assert_eq!(found.len(), 1);
        let (fixed, actions) = repair_2d(&img).unwrap();
        assert_eq!(
            actions[0],
            RepairAction {
                x: 2,
                y: 2,
                op: RepairOp::Delete,
                reason: RepairReason::PathologyFix
            }
        );
        assert!(find_pathologies_2d(&fixed).is_empty());
        let (again, none) = repair_2d(&fixed).unwrap();
        assert_eq!(again, fixed);
        assert!(none.is_empty());
    }

    #[test]
    fn checkerboard_converges() {
        let img = Image2D::from_rows(&[
            "00000000", "01010100", "00101010", "01010100", "00101010", "01010100", "00000000",
        ])
        .unwrap();
        let (fixed, actions) = repair_2d(&img).unwrap();
        assert!(find_pathologies_2d(&fixed).is_empty());
        assert!(actions.len() <= 4 * img.len());
    }

    #[test]
    fn preconditions() {
        let ring = Image2D::from_rows(&[
            "0000000", "0111110", "0100010", "0100010", "0100010", "0111110", "0000000",
        ])
        .unwrap();
        let h = classify_boundary_2d(&ring).unwrap();
        assert!(h.thin > 0);
        let pre = check_preconditions_2d(&ring, &h);
        assert!(!pre.ok);
        assert_eq!(pre.thin.len(), 12);

        let single = Image2D::from_rows(&["000", "010", "000"]).unwrap();
        let h = classify_boundary_2d(&single).unwrap();
        let pre = check_preconditions_2d(&single, &h);
        assert!(!pre.ok);
        assert_eq!(pre.isolated, vec![(1, 1)]);
    }

    #[test]
    fn thin_ring_falls_back_to_flood_fill() {
        let ring = Image2D::from_rows(&["11111", "10001", "10001", "10001", "11111"]).unwrap();
        let r = hole_count(&ring).unwrap();
        assert_eq!(r.method, Method::OracleFallback);
        assert!(!r.precondition_ok);
        assert_eq!(r.holes, 1);
    }

    #[test]
    fn s_bend_is_caught_by_corner_check() {
        // two 2-wide bars overlapping diagonally: a cp3 pixel anchors a concave corner
        let img = Image2D::from_rows(&["000000", "000110", "011110", "011000", "000000"]).unwrap();
        let h = classify_boundary_2d(&img).unwrap();
        let pre = check_preconditions_2d(&img, &h);
        assert!(!pre.corner_mismatch.is_empty());
        assert_eq!(hole_count(&img).unwrap().holes, 0);
    }

    #[test]
    fn pipeline_on_worked_examples() {
        let mut canvas = Image2D::new(20, 10);
        canvas.blit(&matrix7(), 0, 1);
        canvas.blit(&matrix10(), 10, 1);
        let out = holes_pipeline(&canvas).unwrap();
        let holes: Vec<_> = out.reports().map(|r| r.holes).collect();
        assert_eq!(holes, vec![0, 1]);
        assert!(out.reports().all(|r| r.method == Method::Formula));
        assert!(out.actions.is_empty());
    }

    #[test]
    fn pipeline_edge_cases() {
        assert!(holes_pipeline(&Image2D::new(6, 6))
            .unwrap()
            .components
            .is_empty());

        let mut ring = block(3, 3, 2);
        ring.set(3, 3, false);
        let out = holes_pipeline(&ring).unwrap();
        assert_eq!(out.components.len(), 1);
        assert_eq!(out.components[0].report.holes, 0);
        assert_eq!(out.components[0].report.method, Method::Formula);
        assert_eq!(
            out.actions,
            vec![RepairAction {
                x: 3,
                y: 3,
                op: RepairOp::Add,
                reason: RepairReason::Speckle
            }]
        );
    }

    #[test]
    fn drilling_a_hole_adds_four_inward_corners() {
        let base = block(10, 10, 1);
        let before = classify_boundary_2d(&base).unwrap();
        let mut drilled = base.clone();
        for (x, y) in [(5, 5), (6, 5), (5, 6), (6, 6)] {
            drilled.set(x, y, false);
        }
        let after = classify_boundary_2d(&drilled).unwrap();
        assert_eq!(after.cp4, before.cp4 + 4);
        assert_eq!(
            hole_count(&drilled).unwrap().holes,
            hole_count(&base).unwrap().holes + 1
        );
    }
}
