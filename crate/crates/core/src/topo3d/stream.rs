//! Slab-by-slab surface counting with a fixed number of slab buffers.
//!
//! Slabs arrive in z order. Vertex layer `k` only touches slabs `k-1` and
//! `k`, and the boundary test for slab `k-1` needs slabs `k-2..=k`, so a
//! window of three slabs is enough. Surfaces are tracked with a union-find
//! whose nodes are compacted after every layer down to one node per surface
//! still crossing that layer; surfaces that stop crossing are finished.

use serde::Serialize;

use super::pathology::pathologies_in_layer;
use super::surface::{is_surface_edge, is_surface_vertex, surface_degree, SurfaceHistogram};
use crate::error::Result;
use crate::grid::Volume3D;

/// A source of z-slabs, each `nx * ny` cells row-major, read in order.
pub trait SlabSource {
    fn extent(&self) -> [usize; 3];

    /// Fills `buf` with the next slab.
    fn read_slab(&mut self, buf: &mut [bool]) -> Result<()>;
}

/// Slabs of an in-memory volume.
#[derive(Debug, Clone)]
pub struct VolumeSlabs<'a> {
    volume: &'a Volume3D,
    next: usize,
}

impl<'a> VolumeSlabs<'a> {
    pub fn new(volume: &'a Volume3D) -> Self {
        VolumeSlabs { volume, next: 0 }
    }
}

impl SlabSource for VolumeSlabs<'_> {
    fn extent(&self) -> [usize; 3] {
        self.volume.extent()
    }

    fn read_slab(&mut self, buf: &mut [bool]) -> Result<()> {
        buf.copy_from_slice(self.volume.slab(self.next));
        self.next += 1;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StreamedSurface {
    pub min_vertex: [i64; 3],
    pub histogram: SurfaceHistogram,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StreamStats {
    pub slabs_read: usize,
    /// Most slab-sized occupancy buffers held at once.
    pub peak_slab_buffers: usize,
    /// Largest working set of the counting pass, in bytes.
    pub peak_bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StreamSummary {
    /// Ordered by smallest vertex.
    pub surfaces: Vec<StreamedSurface>,
    pub object_voxels: usize,
    pub boundary_voxels: usize,
    pub pathologies: usize,
    pub stats: StreamStats,
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Acc {
    histogram: SurfaceHistogram,
    min_vertex: [i64; 3],
}

fn scan_key(p: [i64; 3]) -> (i64, i64, i64) {
    (p[2], p[1], p[0])
}

/// Union-find over the vertices of the current layer plus one node per
/// surface carried over from the previous layer.
#[derive(Default)]
struct Forest {
    parent: Vec<u32>,
    acc: Vec<Acc>,
}

impl Forest {
    fn push(&mut self, acc: Acc) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.acc.push(acc);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[gone as usize] = keep;
        let merged = self.acc[gone as usize];
        let acc = &mut self.acc[keep as usize];
        acc.histogram.merge(&merged.histogram);
        if scan_key(merged.min_vertex) < scan_key(acc.min_vertex) {
            acc.min_vertex = merged.min_vertex;
        }
    }

    fn bytes(&self) -> usize {
        self.parent.capacity() * std::mem::size_of::<u32>()
            + self.acc.capacity() * std::mem::size_of::<Acc>()
    }
}

/// Counts boundary voxels, pathological windows and per-surface histograms
/// in one pass over the slabs.
///
/// The result matches the whole-volume functions: `boundary_voxels`,
/// `find_pathologies_3d`, and `classify_surface` over
/// `split_surface_components`.
pub fn stream_surfaces(src: &mut impl SlabSource) -> Result<StreamSummary> {
    let [nx, ny, nz] = src.extent();
    let area = nx * ny;
    let (vx, vy) = (nx + 1, ny + 1);
    // local slabs 0, 1, 2 hold global slabs k-2, k-1, k
    let mut window = Volume3D::new(nx, ny, 3);
    let mut prev_ids = vec![NONE; vx * vy];
    let mut cur_ids = vec![NONE; vx * vy];
    let mut forest = Forest::default();
    let mut finished = Vec::new();
    let mut summary = StreamSummary {
        surfaces: Vec::new(),
        object_voxels: 0,
        boundary_voxels: 0,
        pathologies: 0,
        stats: StreamStats {
            peak_slab_buffers: 3,
            ..Default::default()
        },
    };

    for k in 0..=nz {
        {
            let bits = window.bits_mut();
            bits.copy_within(area.., 0);
            let top = &mut bits[2 * area..];
            if k < nz {
                src.read_slab(top)?;
                summary.stats.slabs_read += 1;
            } else {
                top.fill(false);
            }
        }
        summary.object_voxels += window.slab(2).iter().filter(|&&b| b).count();

        if k >= 1 {
            summary.boundary_voxels += count_boundary_in_slab(&window, 1);
        }
        pathologies_in_layer(&window, 1, |_| summary.pathologies += 1);

        // vertex layer k sits between local slabs 1 and 2
        cur_ids.fill(NONE);
        for j in 0..vy {
            for i in 0..vx {
                let local = [i as i64, j as i64, 2];
                if !is_surface_vertex(&window, local) {
                    continue;
                }
                let mut histogram = SurfaceHistogram::default();
                histogram.record(surface_degree(&window, local));
                let node = forest.push(Acc {
                    histogram,
                    min_vertex: [i as i64, j as i64, k as i64],
                });
                let at = j * vx + i;
                cur_ids[at] = node;
                if i > 0 && cur_ids[at - 1] != NONE && is_surface_edge(&window, local, 0, false) {
                    forest.union(node, cur_ids[at - 1]);
                }
                if j > 0 && cur_ids[at - vx] != NONE && is_surface_edge(&window, local, 1, false) {
                    forest.union(node, cur_ids[at - vx]);
                }
                if prev_ids[at] != NONE && is_surface_edge(&window, local, 2, false) {
                    forest.union(node, prev_ids[at]);
                }
            }
        }

        let bytes = 3 * area * std::mem::size_of::<bool>()
            + (prev_ids.capacity() + cur_ids.capacity()) * std::mem::size_of::<u32>()
            + forest.bytes();
        summary.stats.peak_bytes = summary.stats.peak_bytes.max(bytes);

        // compact: one node per surface that reaches layer k
        let mut next = Forest::default();
        let mut remap = vec![NONE; forest.parent.len()];
        for id in cur_ids.iter_mut().filter(|id| **id != NONE) {
            let root = forest.find(*id);
            if remap[root as usize] == NONE {
                remap[root as usize] = next.push(forest.acc[root as usize]);
            }
            *id = remap[root as usize];
        }
        for node in 0..forest.parent.len() as u32 {
            let root = forest.find(node);
            if root == node && remap[root as usize] == NONE {
                let acc = forest.acc[root as usize];
                finished.push(StreamedSurface {
                    min_vertex: acc.min_vertex,
                    histogram: acc.histogram,
                });
            }
        }
        forest = next;
        std::mem::swap(&mut prev_ids, &mut cur_ids);
    }
    for id in 0..forest.parent.len() as u32 {
        if forest.find(id) == id {
            let acc = forest.acc[id as usize];
            finished.push(StreamedSurface {
                min_vertex: acc.min_vertex,
                histogram: acc.histogram,
            });
        }
    }
    finished.sort_by_key(|s| scan_key(s.min_vertex));
    summary.surfaces = finished;
    Ok(summary)
}

fn count_boundary_in_slab(window: &Volume3D, z: i64) -> usize {
    let (nx, ny) = (window.nx() as i64, window.ny() as i64);
    let mut count = 0;
    for y in 0..ny {
        for x in 0..nx {
            if !window.get(x, y, z) {
                continue;
            }
            let exposed = (-1..=1i64).any(|dz| {
                (-1..=1i64).any(|dy| (-1..=1i64).any(|dx| !window.get(x + dx, y + dy, z + dz)))
            });
            if exposed {
                count += 1;
            }
        }
    }
    count
}
