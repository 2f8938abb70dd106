//! Detection and greedy repair of non-well-composed voxel configurations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Volume3D;
use crate::topo2d::RepairOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PathologyKind3D {
    /// Two object voxels touching at a single vertex, the rest of the 2x2x2
    /// block background.
    VertexPair,
    /// Two object voxels touching along an edge parallel to `axis`, the other
    /// two voxels around that edge background.
    EdgePair { axis: usize },
    /// Six object voxels in a 2x2x2 block whose two background voxels are
    /// antipodal.
    ComplementVertexPair,
}

/// One pathological window. `cells` holds the two voxels that define it: the
/// object pair for vertex/edge contacts, the empty pair for the complement
/// case; the first is earlier in scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pathology3D {
    pub anchor: [i64; 3],
    pub kind: PathologyKind3D,
    pub cells: [[i64; 3]; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RepairRule3D {
    /// Fill one empty voxel of a complement configuration.
    FillComplement,
    /// Delete a voxel attached to the rest only through a vertex.
    DeleteVertexContact,
    /// Delete a voxel attached to the rest only through an edge.
    DeleteEdgeContact,
    /// Delete a contact voxel that also has face neighbors, all of which
    /// stay on the boundary.
    DeleteAttached,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RepairAction3D {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub op: RepairOp,
    pub rule: RepairRule3D,
}

impl RepairAction3D {
    pub(crate) fn translated(self, origin: [i64; 3]) -> Self {
        RepairAction3D {
            x: self.x + origin[0],
            y: self.y + origin[1],
            z: self.z + origin[2],
            ..self
        }
    }
}

fn add(p: [i64; 3], d: [i64; 3]) -> [i64; 3] {
    [p[0] + d[0], p[1] + d[1], p[2] + d[2]]
}

fn unit(axis: usize) -> [i64; 3] {
    let mut e = [0; 3];
    e[axis] = 1;
    e
}

/// Scan-order key (z, y, x).
fn scan_key(p: [i64; 3]) -> (i64, i64, i64) {
    (p[2], p[1], p[0])
}

fn ordered(a: [i64; 3], b: [i64; 3]) -> [[i64; 3]; 2] {
    if scan_key(a) <= scan_key(b) {
        [a, b]
    } else {
        [b, a]
    }
}

/// Vertex-window pathology with the 2x2x2 block anchored at `anchor`.
pub(crate) fn vertex_window(vol: &Volume3D, anchor: [i64; 3]) -> Option<Pathology3D> {
    let w = vol.window8(anchor[0], anchor[1], anchor[2]);
    let ones = w.iter().filter(|&&b| b).count();
    let want = match ones {
        2 => true,
        6 => false,
        _ => return None,
    };
    // antipodal index pairs: i and 7 - i
    for i in 0..4 {
        if w[i] == want && w[7 - i] == want {
            let off = |k: usize| [(k & 1) as i64, ((k >> 1) & 1) as i64, ((k >> 2) & 1) as i64];
            let kind = if want {
                PathologyKind3D::VertexPair
            } else {
                PathologyKind3D::ComplementVertexPair
            };
            return Some(Pathology3D {
                anchor,
                kind,
                cells: ordered(add(anchor, off(i)), add(anchor, off(7 - i))),
            });
        }
    }
    None
}

/// Edge-window pathology for the edge parallel to `axis` whose four voxels
/// are `anchor + {0, e_b} + {0, e_c}`.
pub(crate) fn edge_window(vol: &Volume3D, anchor: [i64; 3], axis: usize) -> Option<Pathology3D> {
    let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
    let p00 = anchor;
    let p10 = add(anchor, unit(b));
    let p01 = add(anchor, unit(c));
    let p11 = add(p10, unit(c));
    let g = |p: [i64; 3]| vol.get(p[0], p[1], p[2]);
    let pair = match (g(p00), g(p10), g(p01), g(p11)) {
        (true, false, false, true) => (p00, p11),
        (false, true, true, false) => (p10, p01),
        _ => return None,
    };
    Some(Pathology3D {
        anchor,
        kind: PathologyKind3D::EdgePair { axis },
        cells: ordered(pair.0, pair.1),
    })
}

/// All vertex and edge contacts plus complement configurations.
///
/// Windows are visited in scan order of their anchor (the minimum voxel);
/// at each anchor the 2x2x2 block is checked first, then edges along x, y, z.
/// Windows overhanging the box are included, reading outside as background.
pub fn find_pathologies_3d(vol: &Volume3D) -> Vec<Pathology3D> {
    let mut out = Vec::new();
    for z in -1..vol.nz() as i64 {
        pathologies_in_layer(vol, z, |p| out.push(p));
    }
    out
}

/// Windows anchored in layer `z`, in scan order.
pub(crate) fn pathologies_in_layer(vol: &Volume3D, z: i64, mut emit: impl FnMut(Pathology3D)) {
    let [nx, ny, _] = vol.extent().map(|n| n as i64);
    for y in -1..ny {
        for x in -1..nx {
            let anchor = [x, y, z];
            if let Some(p) = vertex_window(vol, anchor) {
                emit(p);
            }
            for axis in 0..3 {
                // the edge axis coordinate must address a real slab of voxels
                if anchor[axis] < 0 {
                    continue;
                }
                if let Some(p) = edge_window(vol, anchor, axis) {
                    emit(p);
                }
            }
        }
    }
}

fn still_present(vol: &Volume3D, p: &Pathology3D) -> bool {
    let now = match p.kind {
        PathologyKind3D::EdgePair { axis } => edge_window(vol, p.anchor, axis),
        _ => vertex_window(vol, p.anchor),
    };
    now.as_ref() == Some(p)
}

/// Whether `u` touches a background voxel through an edge or a vertex.
fn has_background_contact(vol: &Volume3D, u: [i64; 3]) -> bool {
    for dz in -1..=1i64 {
        for dy in -1..=1i64 {
            for dx in -1..=1i64 {
                if dx.abs() + dy.abs() + dz.abs() < 2 {
                    continue;
                }
                if !vol.get(u[0] + dx, u[1] + dy, u[2] + dz) {
                    return true;
                }
            }
        }
    }
    false
}

const FACE_OFFSETS: [[i64; 3]; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

/// Rule for deleting `v` out of a contact pair, if any applies.
fn deletion_rule(vol: &Volume3D, v: [i64; 3], kind: PathologyKind3D) -> Option<RepairRule3D> {
    let attached: Vec<[i64; 3]> = FACE_OFFSETS
        .iter()
        .map(|&d| add(v, d))
        .filter(|u| vol.get(u[0], u[1], u[2]))
        .collect();
    if attached.is_empty() {
        return Some(match kind {
            PathologyKind3D::VertexPair => RepairRule3D::DeleteVertexContact,
            _ => RepairRule3D::DeleteEdgeContact,
        });
    }
    // every face neighbor must keep a background contact of its own
    attached
        .iter()
        .all(|&u| has_background_contact(vol, u))
        .then_some(RepairRule3D::DeleteAttached)
}

fn index(vol: &Volume3D, v: [i64; 3]) -> usize {
    let [nx, ny, _] = vol.extent();
    (v[2] as usize * ny + v[1] as usize) * nx + v[0] as usize
}

fn fill_complement(
    vol: &mut Volume3D,
    p: &Pathology3D,
    flipped: &mut [bool],
) -> Option<RepairAction3D> {
    let [a, b] = p.cells;
    let na = vol.face_neighbors(a[0], a[1], a[2]);
    let nb = vol.face_neighbors(b[0], b[1], b[2]);
    // most shared faces wins; ties go to the earlier voxel
    let order = if nb > na { [b, a] } else { [a, b] };
    let target = order.into_iter().find(|&v| !flipped[index(vol, v)])?;
    flipped[index(vol, target)] = true;
    vol.set(
        target[0] as usize,
        target[1] as usize,
        target[2] as usize,
        true,
    );
    Some(RepairAction3D {
        x: target[0],
        y: target[1],
        z: target[2],
        op: RepairOp::Add,
        rule: RepairRule3D::FillComplement,
    })
}

fn delete_from_pair(
    vol: &mut Volume3D,
    p: &Pathology3D,
    flipped: &mut [bool],
) -> Option<RepairAction3D> {
    let [a, b] = p.cells;
    let na = vol.face_neighbors(a[0], a[1], a[2]);
    let nb = vol.face_neighbors(b[0], b[1], b[2]);
    // fewer face neighbors first; on a tie the later voxel goes first
    let order = if na < nb { [a, b] } else { [b, a] };
    for v in order {
        if flipped[index(vol, v)] {
            continue;
        }
        if let Some(rule) = deletion_rule(vol, v, p.kind) {
            flipped[index(vol, v)] = true;
            vol.set(v[0] as usize, v[1] as usize, v[2] as usize, false);
            return Some(RepairAction3D {
                x: v[0],
                y: v[1],
                z: v[2],
                op: RepairOp::Delete,
                rule,
            });
        }
    }
    None
}

/// Makes the volume well-composed by greedy local flips.
///
/// Each scan first fills complement configurations (choosing the empty voxel
/// with the most object face neighbors, earlier voxel on ties), then breaks
/// vertex and edge contacts by deleting the pair voxel with fewer object face
/// neighbors (the later one on ties). A voxel that still has face neighbors is
/// deleted only if each of them keeps an edge or vertex contact with the
/// background. A voxel flips at most once: a fill never targets a voxel that
/// was deleted, and a deletion never undoes a fill. Scans repeat until clean;
/// a scan that changes nothing is reported as non-convergence.
pub fn repair_3d(vol: &Volume3D) -> Result<(Volume3D, Vec<RepairAction3D>)> {
    let mut out = vol.clone();
    let mut actions = Vec::new();
    let mut flipped = vec![false; vol.len()];
    loop {
        let found = find_pathologies_3d(&out);
        if found.is_empty() {
            return Ok((out, actions));
        }
        let before = actions.len();
        repair_scan(&mut out, &found, &mut flipped, &mut actions);
        if actions.len() == before {
            return Err(Error::RepairDidNotConverge {
                actions: actions.len(),
            });
        }
    }
}

fn repair_scan(
    out: &mut Volume3D,
    found: &[Pathology3D],
    flipped: &mut [bool],
    actions: &mut Vec<RepairAction3D>,
) {
    for p in found
        .iter()
        .filter(|p| p.kind == PathologyKind3D::ComplementVertexPair)
    {
        if still_present(out, p) {
            actions.extend(fill_complement(out, p, flipped));
        }
    }
    for p in found
        .iter()
        .filter(|p| p.kind != PathologyKind3D::ComplementVertexPair)
    {
        if still_present(out, p) {
            actions.extend(delete_from_pair(out, p, flipped));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vol_with(extent: [usize; 3], cells: &[[usize; 3]]) -> Volume3D {
        let mut v = Volume3D::new(extent[0], extent[1], extent[2]);
        for c in cells {
            v.set(c[0], c[1], c[2], true);
        }
        v
    }

    #[test]
    fn vertex_pair() {
        let v = vol_with([4, 4, 4], &[[1, 1, 1], [2, 2, 2]]);
        let found = find_pathologies_3d(&v);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, PathologyKind3D::VertexPair);
        assert_eq!(found[0].cells, [[1, 1, 1], [2, 2, 2]]);
    }

    #[test]
    fn edge_pair() {
        let v = vol_with([4, 4, 3], &[[1, 1, 1], [2, 2, 1]]);
        let found = find_pathologies_3d(&v);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, PathologyKind3D::EdgePair { axis: 2 });
    }

    #[test]
    fn complement_pair() {
        let mut v = Volume3D::new(4, 4, 4);
        for z in 1..3 {
            for y in 1..3 {
                for x in 1..3 {
                    v.set(x, y, z, true);
                }
            }
        }
        v.set(1, 1, 1, false);
        v.set(2, 2, 2, false);
        let found = find_pathologies_3d(&v);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, PathologyKind3D::ComplementVertexPair);

        let (fixed, actions) = repair_3d(&v).unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].op, RepairOp::Add);
        assert_eq!(actions[0].rule, RepairRule3D::FillComplement);
        // both holes have 3 face neighbors, so the earlier one is filled
        assert_eq!((actions[0].x, actions[0].y, actions[0].z), (1, 1, 1));
        assert!(find_pathologies_3d(&fixed).is_empty());
    }

    #[test]
    fn vertex_pair_repair_deletes_later_voxel() {
        let v = vol_with([4, 4, 4], &[[1, 1, 1], [2, 2, 2]]);
        let (fixed, actions) = repair_3d(&v).unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].rule, RepairRule3D::DeleteVertexContact);
        assert_eq!((actions[0].x, actions[0].y, actions[0].z), (2, 2, 2));
        assert_eq!(fixed.count_ones(), 1);
        assert!(find_pathologies_3d(&fixed).is_empty());
    }

    #[test]
    fn attached_contact_uses_rule_c() {
        // a bar with a voxel hanging off its end by an edge
        let v = vol_with(
            [6, 5, 3],
            &[[1, 1, 1], [2, 1, 1], [3, 1, 1], [4, 2, 1], [4, 3, 1]],
        );
        let (fixed, actions) = repair_3d(&v).unwrap();
        assert!(find_pathologies_3d(&fixed).is_empty());
        assert_eq!(actions.len(), 1);
        // (3,1,1) and (4,2,1) both have one face neighbor; the later one goes
        assert_eq!((actions[0].x, actions[0].y), (4, 2));
        assert_eq!(actions[0].rule, RepairRule3D::DeleteAttached);
    }

    #[test]
    fn clean_frame_is_identity() {
        let frame =
            Volume3D::from_slabs(&[&["00000", "01110", "01010", "01110", "00000"]]).unwrap();
        let (out, actions) = repair_3d(&frame).unwrap();
        assert_eq!(out, frame);
        assert!(actions.is_empty());
    }
}
