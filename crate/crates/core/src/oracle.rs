//! Brute-force ground truth: flood-fill hole counts and Euler characteristics
//! of cubical complexes.
//!
//! Nothing here shares code with the corner-counting or surface-classification
//! paths; these functions exist to check them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{label_background_2d, Adjacency, Image2D, Volume3D};
use crate::topo3d::SurfaceHistogram;

/// Cell counts of a cubical complex and its Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CellComplexSummary {
    pub v: i64,
    pub e: i64,
    pub f: i64,
    pub chi: i64,
}

impl CellComplexSummary {
    pub fn new(v: i64, e: i64, f: i64) -> Self {
        CellComplexSummary {
            v,
            e,
            f,
            chi: v - e + f,
        }
    }

    /// Genus of a closed orientable surface with this Euler characteristic.
    pub fn genus(&self) -> Result<i64> {
        if self.chi % 2 != 0 || self.chi > 2 {
            return Err(Error::NonManifoldBoundary { chi: self.chi });
        }
        Ok((2 - self.chi) / 2)
    }
}

/// Hole count as (number of 4-connected background regions) - 1, with the
/// region outside the box counted.
pub fn holes_by_floodfill(component: &Image2D) -> i64 {
    label_background_2d(component, Adjacency::Direct2D).count() as i64 - 1
}

/// Euler characteristic of the union of closed unit squares of the foreground.
pub fn euler_2d(component: &Image2D) -> CellComplexSummary {
    let (w, h) = (component.width() as i64, component.height() as i64);
    let px = |x: i64, y: i64| component.get(x, y);
    let mut v = 0;
    let mut e = 0;
    let mut f = 0;
    // corners (x, y) for x in 0..=w, y in 0..=h touch pixels (x-1..x, y-1..y)
    for y in 0..=h {
        for x in 0..=w {
            if px(x - 1, y - 1) || px(x, y - 1) || px(x - 1, y) || px(x, y) {
                v += 1;
            }
            // horizontal edge (x,y)-(x+1,y) bounds pixels (x, y-1) and (x, y)
            if x < w && (px(x, y - 1) || px(x, y)) {
                e += 1;
            }
            // vertical edge (x,y)-(x,y+1) bounds pixels (x-1, y) and (x, y)
            if y < h && (px(x - 1, y) || px(x, y)) {
                e += 1;
            }
            if x < w && y < h && px(x, y) {
                f += 1;
            }
        }
    }
    CellComplexSummary::new(v, e, f)
}

/// Simple disjoint-set forest over dense indices.
struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// One boundary face: the unit square at `base` spanning the two axes other
/// than `normal`.
#[derive(Debug, Clone, Copy)]
struct Face {
    normal: usize,
    base: [i64; 3],
    /// The object voxel this face bounds.
    inside: [i64; 3],
}

impl Face {
    fn vertices(&self) -> [[i64; 3]; 4] {
        let (a, b) = ((self.normal + 1) % 3, (self.normal + 2) % 3);
        let mut out = [self.base; 4];
        out[1][a] += 1;
        out[2][a] += 1;
        out[2][b] += 1;
        out[3][b] += 1;
        out
    }

    /// Edges as (axis, start vertex).
    fn edges(&self) -> [(usize, [i64; 3]); 4] {
        let (a, b) = ((self.normal + 1) % 3, (self.normal + 2) % 3);
        let p = self.base;
        let mut pa = p;
        pa[a] += 1;
        let mut pb = p;
        pb[b] += 1;
        [(a, p), (b, p), (b, pa), (a, pb)]
    }
}

/// Cell counts of each connected boundary surface of the object, ordered by
/// smallest vertex in (z, y, x) order.
///
/// A boundary face separates an object voxel from a background voxel; faces
/// belong to the same surface when they share an edge, except that where two
/// object voxels meet only along an edge or at a vertex the surface is cut
/// apart, as for a 6-connected object. An odd Euler characteristic on any
/// surface is reported as an error.
pub fn euler_surface_3d(vol: &Volume3D) -> Result<Vec<CellComplexSummary>> {
    surface_complexes(vol)
        .into_iter()
        .map(|(_, summary)| {
            if summary.chi % 2 != 0 {
                Err(Error::NonManifoldBoundary { chi: summary.chi })
            } else {
                Ok(summary)
            }
        })
        .collect()
}

/// Same as [`euler_surface_3d`], also returning each surface's smallest vertex.
pub fn surface_complexes(vol: &Volume3D) -> Vec<([i64; 3], CellComplexSummary)> {
    let [nx, ny, nz] = vol.extent().map(|n| n as i64);
    let mut faces = Vec::new();
    for normal in 0..3 {
        let mut hi = [nx, ny, nz];
        hi[normal] += 1;
        for z in 0..hi[2] {
            for y in 0..hi[1] {
                for x in 0..hi[0] {
                    let mut prev = [x, y, z];
                    prev[normal] -= 1;
                    let here = vol.get(x, y, z);
                    if here != vol.get(prev[0], prev[1], prev[2]) {
                        faces.push(Face {
                            normal,
                            base: [x, y, z],
                            inside: if here { [x, y, z] } else { prev },
                        });
                    }
                }
            }
        }
    }

    let mut at_edge: HashMap<(usize, [i64; 3]), Vec<usize>> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        for edge in face.edges() {
            at_edge.entry(edge).or_default().push(fi);
        }
    }
    // An edge with four faces has two object voxels meeting diagonally; the
    // object is taken as 6-connected, so each voxel's two faces stay together.
    let mut links: Vec<((usize, [i64; 3]), usize, usize)> = Vec::new();
    for (edge, fs) in &at_edge {
        match fs[..] {
            [a, b] => links.push((*edge, a, b)),
            [a, b, c, d] => {
                for (p, q) in [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)] {
                    if faces[p].inside == faces[q].inside {
                        links.push((*edge, p, q));
                    }
                }
            }
            _ => unreachable!("a grid edge bounds two or four boundary faces"),
        }
    }

    let mut dsu = DisjointSet::new(faces.len());
    for &(_, a, b) in &links {
        dsu.union(a, b);
    }
    let root: Vec<usize> = (0..faces.len()).map(|f| dsu.find(f)).collect();

    #[derive(Default)]
    struct Acc {
        v: i64,
        e: i64,
        f: i64,
        min: Option<[i64; 3]>,
    }
    let key = |p: [i64; 3]| (p[2], p[1], p[0]);
    let mut comps: HashMap<usize, Acc> = HashMap::new();
    for &r in &root {
        comps.entry(r).or_default().f += 1;
    }
    for &(_, a, _) in &links {
        comps
            .get_mut(&root[a])
            .expect("linked face has a component")
            .e += 1;
    }

    // A vertex counts once per fan of faces around it, so a surface
    // pinched at a point is counted as if pulled apart there.
    let mut at_vertex: HashMap<[i64; 3], (Vec<usize>, Vec<usize>)> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        for v in face.vertices() {
            at_vertex.entry(v).or_default().0.push(fi);
        }
    }
    for (li, &((axis, start), _, _)) in links.iter().enumerate() {
        let mut end = start;
        end[axis] += 1;
        for v in [start, end] {
            at_vertex
                .get_mut(&v)
                .expect("edge ends are face vertices")
                .1
                .push(li);
        }
    }
    for (v, (fs, ls)) in &at_vertex {
        let mut local = DisjointSet::new(fs.len());
        let slot = |f: usize| fs.iter().position(|&g| g == f).expect("incident face");
        for &li in ls {
            let (_, a, b) = links[li];
            local.union(slot(a), slot(b));
        }
        for i in 0..fs.len() {
            if local.find(i) == i {
                let acc = comps.get_mut(&root[fs[i]]).expect("face has a component");
                acc.v += 1;
                if acc.min.is_none_or(|m| key(*v) < key(m)) {
                    acc.min = Some(*v);
                }
            }
        }
    }

    let mut out: Vec<([i64; 3], CellComplexSummary)> = comps
        .into_values()
        .map(|a| {
            (
                a.min.expect("faces have vertices"),
                CellComplexSummary::new(a.v, a.e, a.f),
            )
        })
        .collect();
    out.sort_by_key(|(min, _)| key(*min));
    out
}

/// Genus per boundary surface from the cubical Euler characteristic.
pub fn genus_by_euler(vol: &Volume3D) -> Result<Vec<i64>> {
    euler_surface_3d(vol)?.iter().map(|c| c.genus()).collect()
}

/// Discrete Gauss-Bonnet check in quarter-pi units: vertex curvatures are
/// +2, 0, -2, -4 for three through six surface neighbors, and a closed
/// surface of genus g has total curvature 8 * (2 - 2g).
pub fn curvature_audit(hist: &SurfaceHistogram, genus: i64) -> bool {
    if hist.irregular != 0 {
        return false;
    }
    let total = 2 * hist.m3 as i64 - 2 * hist.m5 as i64 - 4 * hist.m6 as i64;
    total == 8 * (2 - 2 * genus)
}
