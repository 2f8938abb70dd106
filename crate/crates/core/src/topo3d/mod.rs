//! Surface genus and homology ranks of voxel objects.
//!
//! The pipeline: label with 26-adjacency, repair each component, relabel the
//! result with 6-adjacency, then for every piece take the boundary surfaces in
//! point space, classify their points by surface-neighbor count and read off
//! the genus.

pub mod pathology;
pub mod stream;
pub mod surface;

use serde::Serialize;

pub use pathology::{
    find_pathologies_3d, repair_3d, Pathology3D, PathologyKind3D, RepairAction3D, RepairRule3D,
};
pub use stream::{
    stream_surfaces, SlabSource, StreamStats, StreamSummary, StreamedSurface, VolumeSlabs,
};
pub use surface::{
    boundary_voxels, classify_surface, split_surface_components, surface_neighbors, to_point_space,
    SurfaceHistogram, SurfacePointSet,
};

use crate::error::{Error, Result};
use crate::grid::{label_components_3d, Adjacency, Volume3D};
use crate::oracle;
use crate::Method;

/// Genus of a closed digital surface: `1 + (m5 + 2*m6 - m3) / 8`.
pub fn genus(h: &SurfaceHistogram) -> Result<i64> {
    if h.irregular > 0 {
        return Err(Error::InvalidSurface(format!(
            "{} points with a neighbor count outside 3..=6",
            h.irregular
        )));
    }
    let excess = h.m5 as i64 + 2 * h.m6 as i64 - h.m3 as i64;
    if excess % 8 != 0 {
        return Err(Error::InvalidSurface(format!(
            "m5 + 2*m6 - m3 = {excess} is not a multiple of 8"
        )));
    }
    let g = 1 + excess / 8;
    if g < 0 {
        return Err(Error::InvalidSurface(format!("negative genus {g}")));
    }
    Ok(g)
}

/// One boundary surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    /// Smallest vertex in (z, y, x) order.
    pub min_vertex: [i64; 3],
    pub points: usize,
    /// Absent when the surface comes from the Euler oracle.
    pub histogram: Option<SurfaceHistogram>,
    pub genus: i64,
    pub chi: i64,
    pub method: Method,
}

impl SurfaceReport {
    pub(crate) fn from_histogram(
        min_vertex: [i64; 3],
        histogram: SurfaceHistogram,
        genus: i64,
    ) -> Self {
        SurfaceReport {
            min_vertex,
            points: histogram.points(),
            histogram: Some(histogram),
            genus,
            chi: 2 - 2 * genus,
            method: Method::Formula,
        }
    }

    fn translated(mut self, origin: [i64; 3]) -> Self {
        for (c, o) in self.min_vertex.iter_mut().zip(origin) {
            *c += o;
        }
        self
    }
}

/// Invariants of one 6-connected object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TopoReport3D {
    /// Label of the 26-connected component in the source.
    pub component_id: u32,
    /// Index of the 6-connected piece left by repair.
    pub fragment: u32,
    pub voxel_count: usize,
    pub boundary_voxels: usize,
    pub surfaces: Vec<SurfaceReport>,
    pub betti: [i64; 4],
    /// Flips made on the parent component, listed on its first fragment.
    pub repair_actions: Vec<RepairAction3D>,
}

/// Boundary surfaces of `vol`, ordered by smallest vertex.
///
/// With `fallback`, a surface the formula cannot handle makes the whole
/// list come from the cubical Euler oracle instead; without it the formula
/// error is returned.
pub fn boundary_surfaces(vol: &Volume3D, fallback: bool) -> Result<Vec<SurfaceReport>> {
    let points = to_point_space(vol);
    let mut out = Vec::new();
    for part in split_surface_components(&points) {
        let hist = classify_surface(&part);
        let min = part.min_vertex().expect("surface components are nonempty");
        match genus(&hist) {
            Ok(g) => out.push(SurfaceReport::from_histogram(
                min.map(|c| c as i64),
                hist,
                g,
            )),
            Err(_) if fallback => return oracle_surfaces(vol),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn oracle_surfaces(vol: &Volume3D) -> Result<Vec<SurfaceReport>> {
    oracle::surface_complexes(vol)
        .into_iter()
        .map(|(min_vertex, c)| {
            Ok(SurfaceReport {
                min_vertex,
                points: c.v as usize,
                histogram: None,
                genus: c.genus()?,
                chi: c.chi,
                method: Method::OracleFallback,
            })
        })
        .collect()
}

/// Betti ranks of a solid from the genera of its boundary surfaces.
pub fn betti_from_surfaces(surfaces: &[SurfaceReport]) -> [i64; 4] {
    if surfaces.is_empty() {
        return [0; 4];
    }
    [
        1,
        surfaces.iter().map(|s| s.genus).sum(),
        surfaces.len() as i64 - 1,
        0,
    ]
}

/// Invariants of one repaired, 6-connected component. Fails on any surface
/// the formula cannot handle.
pub fn homology(vol: &Volume3D) -> Result<TopoReport3D> {
    homology_with(vol, false)
}

pub fn homology_with(vol: &Volume3D, fallback: bool) -> Result<TopoReport3D> {
    let surfaces = boundary_surfaces(vol, fallback)?;
    Ok(TopoReport3D {
        component_id: 1,
        fragment: 0,
        voxel_count: vol.count_ones(),
        boundary_voxels: boundary_voxels(vol).len(),
        betti: betti_from_surfaces(&surfaces),
        surfaces,
        repair_actions: Vec::new(),
    })
}

/// Pipeline switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VolumeOptions {
    pub repair: bool,
    /// Use the Euler oracle where the formula does not apply.
    pub fallback: bool,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        VolumeOptions {
            repair: true,
            fallback: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzedVolume {
    pub volume: Volume3D,
    pub origin: [i64; 3],
    pub report: TopoReport3D,
}

#[derive(Debug, Clone, Default)]
pub struct VolumeOutcome {
    pub components: Vec<AnalyzedVolume>,
    /// Flips in source coordinates.
    pub actions: Vec<RepairAction3D>,
}

impl VolumeOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &TopoReport3D> {
        self.components.iter().map(|c| &c.report)
    }
}

/// Label (26), repair, relabel (6), then report each piece.
pub fn analyze_volume(vol: &Volume3D, opts: VolumeOptions) -> Result<VolumeOutcome> {
    let labeling = label_components_3d(vol, Adjacency::Indirect3D);
    let mut outcome = VolumeOutcome::default();
    for id in 1..=labeling.count() {
        let (mut component, origin) = labeling.extract_volume_at(id)?;
        let mut actions = Vec::new();
        if opts.repair {
            let (repaired, fixes) = repair_3d(&component)?;
            actions = fixes.into_iter().map(|a| a.translated(origin)).collect();
            component = repaired;
        }
        outcome.actions.extend(actions.iter().copied());
        let pieces = label_components_3d(&component, Adjacency::Direct3D);
        for piece in 1..=pieces.count() {
            let (volume, sub) = pieces.extract_volume_at(piece)?;
            let at = [origin[0] + sub[0], origin[1] + sub[1], origin[2] + sub[2]];
            let mut report = homology_with(&volume, opts.fallback)?;
            report.component_id = id;
            report.fragment = piece - 1;
            report.surfaces = report
                .surfaces
                .into_iter()
                .map(|s| s.translated(at))
                .collect();
            if piece == 1 {
                report.repair_actions = std::mem::take(&mut actions);
            }
            outcome.components.push(AnalyzedVolume {
                volume,
                origin: at,
                report,
            });
        }
    }
    Ok(outcome)
}

/// Boundary surfaces of a whole volume, after optional repair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusOutcome {
    pub object_voxels: usize,
    pub boundary_voxels: usize,
    pub surfaces: Vec<SurfaceReport>,
    pub actions: Vec<RepairAction3D>,
}

/// Repairs the volume as a whole (when asked) and reports every boundary
/// surface in it.
pub fn surfaces_of_volume(vol: &Volume3D, opts: VolumeOptions) -> Result<GenusOutcome> {
    let (work, actions) = if opts.repair {
        repair_3d(vol)?
    } else {
        (vol.clone(), Vec::new())
    };
    Ok(GenusOutcome {
        object_voxels: work.count_ones(),
        boundary_voxels: boundary_voxels(&work).len(),
        surfaces: boundary_surfaces(&work, opts.fallback)?,
        actions,
    })
}

/// The outcome [`surfaces_of_volume`] would give, built from a streamed
/// summary. `None` when the whole volume is needed: repair has work to do,
/// or some surface needs more than the formula.
pub fn outcome_from_stream(summary: &StreamSummary, opts: VolumeOptions) -> Option<GenusOutcome> {
    if opts.repair && summary.pathologies > 0 {
        return None;
    }
    let surfaces = summary
        .surfaces
        .iter()
        .map(|s| {
            genus(&s.histogram)
                .ok()
                .map(|g| SurfaceReport::from_histogram(s.min_vertex, s.histogram, g))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(GenusOutcome {
        object_voxels: summary.object_voxels,
        boundary_voxels: summary.boundary_voxels,
        surfaces,
        actions: Vec::new(),
    })
}
