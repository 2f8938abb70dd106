//! Boundary surfaces in point space.
//!
//! Voxel `(x, y, z)` is the unit cube `[x, x+1] x [y, y+1] x [z, z+1]`; grid
//! vertex `(i, j, k)` is the corner shared by voxels `i-1..=i`, `j-1..=j`,
//! `k-1..=k`. A vertex is a surface point when its incident voxels are mixed,
//! and an edge between two vertices is a surface edge when the four voxels
//! around it are mixed.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Volume3D;

/// Counts of surface points by number of surface neighbors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceHistogram {
    pub m3: usize,
    pub m4: usize,
    pub m5: usize,
    pub m6: usize,
    /// Points with a neighbor count outside 3..=6.
    pub irregular: usize,
}

impl SurfaceHistogram {
    pub fn points(&self) -> usize {
        self.m3 + self.m4 + self.m5 + self.m6 + self.irregular
    }

    pub(crate) fn record(&mut self, degree: usize) {
        match degree {
            3 => self.m3 += 1,
            4 => self.m4 += 1,
            5 => self.m5 += 1,
            6 => self.m6 += 1,
            _ => self.irregular += 1,
        }
    }

    pub(crate) fn merge(&mut self, other: &SurfaceHistogram) {
        self.m3 += other.m3;
        self.m4 += other.m4;
        self.m5 += other.m5;
        self.m6 += other.m6;
        self.irregular += other.irregular;
    }

    /// Total curvature in quarter-pi units (+2, 0, -2, -4 per class).
    pub fn total_curvature(&self) -> i64 {
        2 * self.m3 as i64 - 2 * self.m5 as i64 - 4 * self.m6 as i64
    }
}

/// Object voxels with at least one background voxel among their 26
/// neighbors, in scan order.
pub fn boundary_voxels(vol: &Volume3D) -> Vec<[usize; 3]> {
    boundary_voxels_by(vol.extent(), |x, y, z| vol.get(x, y, z))
}

/// Single pass over the box; at most 27 occupancy reads per voxel.
pub(crate) fn boundary_voxels_by(
    extent: [usize; 3],
    mut get: impl FnMut(i64, i64, i64) -> bool,
) -> Vec<[usize; 3]> {
    let [nx, ny, nz] = extent;
    let mut out = Vec::new();
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let (xi, yi, zi) = (x as i64, y as i64, z as i64);
                if !get(xi, yi, zi) {
                    continue;
                }
                let exposed = (-1..=1i64).any(|dz| {
                    (-1..=1i64).any(|dy| {
                        (-1..=1i64)
                            .any(|dx| (dx, dy, dz) != (0, 0, 0) && !get(xi + dx, yi + dy, zi + dz))
                    })
                });
                if exposed {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Whether the vertex has both object and background voxels around it.
#[inline]
pub(crate) fn is_surface_vertex(vol: &Volume3D, v: [i64; 3]) -> bool {
    let w = vol.window8(v[0] - 1, v[1] - 1, v[2] - 1);
    w.iter().any(|&b| b) && w.iter().any(|&b| !b)
}

/// Whether the unit edge from `v` one step along `axis` (negative when
/// `forward` is false) separates object from background.
#[inline]
pub(crate) fn is_surface_edge(vol: &Volume3D, v: [i64; 3], axis: usize, forward: bool) -> bool {
    let mut cell = v;
    if !forward {
        cell[axis] -= 1;
    }
    let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
    let mut any_in = false;
    let mut any_out = false;
    for db in [-1, 0] {
        for dc in [-1, 0] {
            let mut p = cell;
            p[b] += db;
            p[c] += dc;
            if vol.get(p[0], p[1], p[2]) {
                any_in = true;
            } else {
                any_out = true;
            }
        }
    }
    any_in && any_out
}

/// Number of surface edges at a vertex.
#[inline]
pub(crate) fn surface_degree(vol: &Volume3D, v: [i64; 3]) -> usize {
    (0..3)
        .map(|axis| {
            usize::from(is_surface_edge(vol, v, axis, true))
                + usize::from(is_surface_edge(vol, v, axis, false))
        })
        .sum()
}

/// A set of grid vertices on the boundary of `volume`, sorted in (z, y, x)
/// order.
#[derive(Debug, Clone)]
pub struct SurfacePointSet<'a> {
    volume: &'a Volume3D,
    points: Vec<[usize; 3]>,
}

impl<'a> SurfacePointSet<'a> {
    pub fn volume(&self) -> &'a Volume3D {
        self.volume
    }

    pub fn points(&self) -> &[[usize; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: [usize; 3]) -> bool {
        self.points
            .binary_search_by_key(&(p[2], p[1], p[0]), |q| (q[2], q[1], q[0]))
            .is_ok()
    }

    /// Smallest vertex in (z, y, x) order.
    pub fn min_vertex(&self) -> Option<[usize; 3]> {
        self.points.first().copied()
    }
}

/// Every vertex incident to both an object and a background voxel.
pub fn to_point_space(vol: &Volume3D) -> SurfacePointSet<'_> {
    let [nx, ny, nz] = vol.extent();
    let mut points = Vec::new();
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                if is_surface_vertex(vol, [i as i64, j as i64, k as i64]) {
                    points.push([i, j, k]);
                }
            }
        }
    }
    SurfacePointSet {
        volume: vol,
        points,
    }
}

/// Number of vertices joined to `p` by a surface edge.
pub fn surface_neighbors(p: [usize; 3], s: &SurfacePointSet<'_>) -> Result<usize> {
    if !s.contains(p) {
        return Err(Error::NotOnSurface(p[0], p[1], p[2]));
    }
    Ok(surface_degree(s.volume, p.map(|c| c as i64)))
}

/// Splits a point set into components connected by surface edges, ordered
/// by smallest vertex.
pub fn split_surface_components<'a>(s: &SurfacePointSet<'a>) -> Vec<SurfacePointSet<'a>> {
    let vol = s.volume;
    let [nx, ny, nz] = vol.extent();
    let (vx, vy) = (nx + 1, ny + 1);
    let index = |p: [usize; 3]| (p[2] * vy + p[1]) * vx + p[0];
    // 0 = not in s, 1 = in s and unvisited, 2 = visited
    let mut state = vec![0u8; vx * vy * (nz + 1)];
    for &p in &s.points {
        state[index(p)] = 1;
    }
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for &start in &s.points {
        if state[index(start)] != 1 {
            continue;
        }
        state[index(start)] = 2;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(p) = queue.pop_front() {
            members.push(p);
            let pi = p.map(|c| c as i64);
            for axis in 0..3 {
                for forward in [true, false] {
                    if !is_surface_edge(vol, pi, axis, forward) {
                        continue;
                    }
                    let mut q = pi;
                    q[axis] += if forward { 1 } else { -1 };
                    let qu = q.map(|c| c as usize);
                    if state[index(qu)] == 1 {
                        state[index(qu)] = 2;
                        queue.push_back(qu);
                    }
                }
            }
        }
        members.sort_by_key(|p| (p[2], p[1], p[0]));
        out.push(SurfacePointSet {
            volume: vol,
            points: members,
        });
    }
    out
}

/// Histogram of surface-neighbor counts over one surface component.
pub fn classify_surface(s: &SurfacePointSet<'_>) -> SurfaceHistogram {
    let mut hist = SurfaceHistogram::default();
    for p in &s.points {
        hist.record(surface_degree(s.volume, p.map(|c| c as i64)));
    }
    hist
}
