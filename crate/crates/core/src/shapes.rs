//! Deterministic and seeded test shapes.
//!
//! All generators pad their output with one background cell on every side
//! unless noted. Seeded generators draw only from [`Stream`], so a seed and
//! parameter set always produce the same bits.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::grid::{Image2D, Volume3D};
use crate::rng::Stream;
use crate::topo3d::pathology::{edge_window, vertex_window};

pub fn gen_block_2d(w: usize, h: usize) -> Image2D {
    let mut img = Image2D::new(w + 2, h + 2);
    for y in 0..h {
        for x in 0..w {
            img.set(x + 1, y + 1, true);
        }
    }
    img
}

pub fn gen_block_3d(nx: usize, ny: usize, nz: usize) -> Volume3D {
    let mut vol = Volume3D::new(nx + 2, ny + 2, nz + 2);
    fill_box(&mut vol, [1, 1, 1], [nx, ny, nz], true);
    vol
}

fn fill_box(vol: &mut Volume3D, at: [usize; 3], size: [usize; 3], value: bool) {
    for z in at[2]..at[2] + size[2] {
        for y in at[1]..at[1] + size[1] {
            for x in at[0]..at[0] + size[0] {
                vol.set(x, y, z, value);
            }
        }
    }
}

/// A slab pierced by `holes` unit tunnels in a row, `ring_width` voxels of
/// material around and between them, `thickness` voxels deep. Its boundary
/// is one surface of genus `holes`; `holes = 0` gives a solid block.
///
/// # Panics
/// Panics if `ring_width` or `thickness` is zero.
pub fn gen_frame(holes: usize, ring_width: usize, thickness: usize) -> Volume3D {
    assert!(ring_width > 0 && thickness > 0, "frame needs material");
    let w = ring_width;
    let nx = holes * (1 + w) + w;
    let ny = 1 + 2 * w;
    let mut vol = gen_block_3d(nx, ny, thickness);
    for k in 0..holes {
        fill_box(
            &mut vol,
            [1 + w + k * (1 + w), 1 + w, 1],
            [1, 1, thickness],
            false,
        );
    }
    vol
}

/// A frame with `holes` tunnels whose sizes, spacing, offsets and thickness
/// are drawn from the seed (each between 1 and 3).
pub fn gen_frame_random(seed: u64, holes: usize) -> Volume3D {
    let mut rng = Stream::new(seed);
    let border = rng.range(1, 3) as usize;
    let thickness = rng.range(1, 3) as usize;
    let tunnels: Vec<[usize; 2]> = (0..holes)
        .map(|_| [rng.range(1, 3) as usize, rng.range(1, 3) as usize])
        .collect();
    let gaps: Vec<usize> = (1..holes).map(|_| rng.range(1, 3) as usize).collect();
    let tallest = tunnels.iter().map(|t| t[1]).max().unwrap_or(0);
    let nx = 2 * border + tunnels.iter().map(|t| t[0]).sum::<usize>() + gaps.iter().sum::<usize>();
    let ny = 2 * border + tallest;
    let mut vol = gen_block_3d(nx.max(1), ny, thickness);
    let mut x = 1 + border;
    for (k, t) in tunnels.iter().enumerate() {
        let dy = rng.below((tallest - t[1] + 1) as u64) as usize;
        fill_box(
            &mut vol,
            [x, 1 + border + dy, 1],
            [t[0], t[1], thickness],
            false,
        );
        x += t[0] + gaps.get(k).copied().unwrap_or(0);
    }
    vol
}

/// Solid box of size `outer` with a centered empty box of size `cavity`.
pub fn gen_shell(outer: [usize; 3], cavity: [usize; 3]) -> Result<Volume3D> {
    let mut vol = gen_block_3d(outer[0], outer[1], outer[2]);
    if cavity.contains(&0) {
        return Ok(vol);
    }
    if (0..3).any(|i| cavity[i] + 2 > outer[i]) {
        return Err(Error::InvalidShape(format!(
            "cavity {cavity:?} does not fit strictly inside {outer:?}"
        )));
    }
    let at = [0, 1, 2].map(|i| 1 + (outer[i] - cavity[i]) / 2);
    fill_box(&mut vol, at, cavity, false);
    Ok(vol)
}

/// Stacks `layers` copies of `img` along z, without extra padding.
///
/// # Panics
/// Panics if `layers` is zero.
pub fn extrude(img: &Image2D, layers: usize) -> Volume3D {
    let mut vol = Volume3D::new(img.width(), img.height(), layers);
    for z in 0..layers {
        for (x, y) in img.foreground() {
            vol.set(x, y, z, true);
        }
    }
    vol
}

/// A `side`-cube with unit tunnels along every axis wherever two coordinates
/// are 3 mod 4. With `side = 4m + 3` every wall is three voxels thick.
pub fn gen_sponge(side: usize) -> Volume3D {
    let mut vol = Volume3D::new(side + 2, side + 2, side + 2);
    for z in 0..side {
        for y in 0..side {
            for x in 0..side {
                let hits = [x, y, z].iter().filter(|&&c| c % 4 == 3).count();
                if hits < 2 {
                    vol.set(x + 1, y + 1, z + 1, true);
                }
            }
        }
    }
    vol
}

/// Simply connected, 4-connected polyomino of `min_width`-square supercells.
///
/// Grows from one supercell by adding random face neighbors, accepting a
/// cell only if it creates no diagonal-only contact and touches the shape
/// in a single arc, so no hole can close. The area is `target_area` rounded
/// down to a multiple of `min_width^2`, at least one supercell.
///
/// # Panics
/// Panics if `min_width` is zero.
pub fn gen_fat_polyomino_2d(seed: u64, target_area: usize, min_width: usize) -> Image2D {
    assert!(min_width > 0, "min_width must be positive");
    let mut rng = Stream::new(seed);
    let cells = (target_area / (min_width * min_width)).max(1);
    let grown = accrete(&mut rng, cells, [0, 0, 0], &FACES_2D, addable_2d);
    render_2d(&grown, min_width)
}

/// Genus-0 solid of `min_width`-cube supercells, grown like
/// [`gen_fat_polyomino_2d`]: each added cell meets the solid in a
/// contractible patch of its boundary and creates no edge or vertex contact.
///
/// # Panics
/// Panics if `min_width` is zero.
pub fn gen_fat_blob_3d(seed: u64, target_volume: usize, min_width: usize) -> Volume3D {
    assert!(min_width > 0, "min_width must be positive");
    let mut rng = Stream::new(seed);
    let cube = min_width.pow(3);
    let cells = (target_volume / cube).max(1);
    let grown = accrete(&mut rng, cells, [0, 0, 0], &FACES_3D, addable_3d);
    render_3d(&grown, min_width)
}

type Cell = [i32; 3];

const FACES_2D: [Cell; 4] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];
const FACES_3D: [Cell; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

fn offset(c: Cell, d: Cell) -> Cell {
    [c[0] + d[0], c[1] + d[1], c[2] + d[2]]
}

/// Grows `cells` cells from `start`, in insertion order.
///
/// A rejected cell leaves the frontier and comes back when one of its
/// neighbors joins.
fn accrete(
    rng: &mut Stream,
    cells: usize,
    start: Cell,
    faces: &[Cell],
    addable: fn(&HashSet<Cell>, Cell) -> bool,
) -> Vec<Cell> {
    let mut order = vec![start];
    let mut set: HashSet<Cell> = HashSet::from([start]);
    let mut frontier: Vec<Cell> = Vec::new();
    let mut queued: HashSet<Cell> = HashSet::new();
    let enqueue =
        |c: Cell, set: &HashSet<Cell>, frontier: &mut Vec<Cell>, queued: &mut HashSet<Cell>| {
            for &d in faces {
                let n = offset(c, d);
                if !set.contains(&n) && queued.insert(n) {
                    frontier.push(n);
                }
            }
        };
    enqueue(start, &set, &mut frontier, &mut queued);
    while order.len() < cells && !frontier.is_empty() {
        let c = frontier.swap_remove(rng.index(frontier.len()));
        queued.remove(&c);
        if addable(&set, c) {
            set.insert(c);
            order.push(c);
            enqueue(c, &set, &mut frontier, &mut queued);
        }
    }
    order
}

fn addable_2d(set: &HashSet<Cell>, c: Cell) -> bool {
    let has = |dx: i32, dy: i32| (dx, dy) == (0, 0) || set.contains(&[c[0] + dx, c[1] + dy, 0]);
    // no diagonal-only contact in the four windows around c
    for (wx, wy) in [(-1, -1), (0, -1), (-1, 0), (0, 0)] {
        let w = [
            has(wx, wy),
            has(wx + 1, wy),
            has(wx, wy + 1),
            has(wx + 1, wy + 1),
        ];
        if (w[0] && w[3] && !w[1] && !w[2]) || (w[1] && w[2] && !w[0] && !w[3]) {
            return false;
        }
    }
    let others = |dx: i32, dy: i32| (dx, dy) != (0, 0) && has(dx, dy);
    // boundary of c: corners (a, b) in {0,1}^2 and the four edges
    let corner = |a: i32, b: i32| (a - 1..=a).any(|dx| (b - 1..=b).any(|dy| others(dx, dy)));
    let corners = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
    // edges in cycle order: bottom, right, top, left
    let edges = [others(0, -1), others(1, 0), others(0, 1), others(-1, 0)];
    let v = corners.iter().filter(|&&b| b).count() as i32;
    let e = edges.iter().filter(|&&b| b).count() as i32;
    if v - e != 1 {
        return false;
    }
    // on a 4-cycle, V - E = 1 means one arc or several; count arcs
    let mut dsu = [0usize, 1, 2, 3];
    for (k, &present) in edges.iter().enumerate() {
        if present {
            union(&mut dsu, k, (k + 1) % 4);
        }
    }
    components(&mut dsu, &corners) == 1
}

fn addable_3d(set: &HashSet<Cell>, c: Cell) -> bool {
    // 3x3x3 neighborhood with c at (1, 1, 1)
    let mut local = Volume3D::new(3, 3, 3);
    for z in 0..3 {
        for y in 0..3 {
            for x in 0..3 {
                let p = [c[0] + x - 1, c[1] + y - 1, c[2] + z - 1];
                if set.contains(&p) {
                    local.set(x as usize, y as usize, z as usize, true);
                }
            }
        }
    }
    let patch = |local: &Volume3D| {
        // vertices of c are grid vertices (1..=2)^3 of the local box
        let vertex = |v: [i64; 3]| {
            local
                .window8(v[0] - 1, v[1] - 1, v[2] - 1)
                .iter()
                .any(|&b| b)
        };
        let mut corners = [false; 8];
        for (k, slot) in corners.iter_mut().enumerate() {
            *slot = vertex(corner_of(k));
        }
        let mut dsu: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
        let mut e = 0;
        for k in 0..8 {
            for axis in 0..3 {
                if k & (1 << axis) != 0 {
                    continue;
                }
                let from = corner_of(k);
                let mut touched = false;
                for (db, dc) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let mut cell = from;
                    cell[(axis + 1) % 3] -= db;
                    cell[(axis + 2) % 3] -= dc;
                    touched |= local.get(cell[0], cell[1], cell[2]);
                }
                if touched {
                    e += 1;
                    union(&mut dsu, k, k | (1 << axis));
                }
            }
        }
        let f = local.face_neighbors(1, 1, 1) as i32;
        let v = corners.iter().filter(|&&b| b).count() as i32;
        (v - e + f, components(&mut dsu, &corners))
    };
    let (chi, parts) = patch(&local);
    if chi != 1 || parts != 1 {
        return false;
    }
    local.set(1, 1, 1, true);
    for anchor in (0..8).map(|k| [k & 1, (k >> 1) & 1, (k >> 2) & 1].map(|b| b as i64)) {
        if vertex_window(&local, anchor).is_some() {
            return false;
        }
        for axis in 0..3 {
            if anchor[axis] == 1 && edge_window(&local, anchor, axis).is_some() {
                return false;
            }
        }
    }
    true
}

/// Local grid vertex for corner index `k` (bit i set = +1 along axis i).
fn corner_of(k: usize) -> [i64; 3] {
    [
        1 + (k & 1) as i64,
        1 + ((k >> 1) & 1) as i64,
        1 + ((k >> 2) & 1) as i64,
    ]
}

fn find(dsu: &mut [usize], mut x: usize) -> usize {
    while dsu[x] != x {
        x = dsu[x];
    }
    x
}

fn union(dsu: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(dsu, a), find(dsu, b));
    dsu[ra.max(rb)] = ra.min(rb);
}

/// Number of groups among the present elements.
fn components(dsu: &mut [usize], present: &[bool]) -> usize {
    let mut roots = HashSet::new();
    for (k, &p) in present.iter().enumerate() {
        if p {
            roots.insert(find(dsu, k));
        }
    }
    roots.len()
}

fn render_2d(cells: &[Cell], s: usize) -> Image2D {
    let lo = [0, 1].map(|i| cells.iter().map(|c| c[i]).min().unwrap_or(0));
    let hi = [0, 1].map(|i| cells.iter().map(|c| c[i]).max().unwrap_or(0));
    let w = (hi[0] - lo[0] + 1) as usize * s;
    let h = (hi[1] - lo[1] + 1) as usize * s;
    let mut img = Image2D::new(w + 2, h + 2);
    for c in cells {
        let (bx, by) = (
            (c[0] - lo[0]) as usize * s + 1,
            (c[1] - lo[1]) as usize * s + 1,
        );
        for dy in 0..s {
            for dx in 0..s {
                img.set(bx + dx, by + dy, true);
            }
        }
    }
    img
}

fn render_3d(cells: &[Cell], s: usize) -> Volume3D {
    let lo = [0, 1, 2].map(|i| cells.iter().map(|c| c[i]).min().unwrap_or(0));
    let hi = [0, 1, 2].map(|i| cells.iter().map(|c| c[i]).max().unwrap_or(0));
    let size = [0, 1, 2].map(|i| (hi[i] - lo[i] + 1) as usize * s);
    let mut vol = Volume3D::new(size[0] + 2, size[1] + 2, size[2] + 2);
    for c in cells {
        let at = [0, 1, 2].map(|i| (c[i] - lo[i]) as usize * s + 1);
        fill_box(&mut vol, at, [s, s, s], true);
    }
    vol
}

/// Cuts up to `count` 2x2 holes into `img`, each surrounded by at least two
/// foreground pixels on every side (so holes stay two pixels apart).
/// Returns the image and the number of holes cut.
pub fn drill_holes_2d(img: &Image2D, seed: u64, count: usize) -> (Image2D, usize) {
    let mut out = img.clone();
    let mut rng = Stream::new(seed);
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut cut = 0;
    if w < 6 || h < 6 {
        return (out, 0);
    }
    for _ in 0..count * 64 {
        if cut == count {
            break;
        }
        let x = rng.range(2, (w - 4) as u64) as i64;
        let y = rng.range(2, (h - 4) as u64) as i64;
        let solid = (y - 2..y + 4).all(|yy| (x - 2..x + 4).all(|xx| out.get(xx, yy)));
        if solid {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                out.set((x + dx) as usize, (y + dy) as usize, false);
            }
            cut += 1;
        }
    }
    (out, cut)
}

/// Flips each pixel with probability `per_mille / 1000`.
pub fn salt_image(img: &Image2D, seed: u64, per_mille: u32) -> Image2D {
    let mut rng = Stream::new(seed);
    let mut out = img.clone();
    for y in 0..img.height() {
        for x in 0..img.width() {
            if rng.chance(per_mille) {
                out.set(x, y, !img.get(x as i64, y as i64));
            }
        }
    }
    out
}

/// Flips each voxel with probability `per_mille / 1000`.
pub fn salt_volume(vol: &Volume3D, seed: u64, per_mille: u32) -> Volume3D {
    let mut rng = Stream::new(seed);
    let mut out = vol.clone();
    for z in 0..vol.nz() {
        for y in 0..vol.ny() {
            for x in 0..vol.nx() {
                if rng.chance(per_mille) {
                    out.set(x, y, z, !vol.get(x as i64, y as i64, z as i64));
                }
            }
        }
    }
    out
}

/// A `size` x `size` canvas holding one to five fat polyominoes, some with
/// drilled holes, possibly overlapping, sometimes lightly salted.
pub fn gen_scene_2d(seed: u64, size: usize) -> Image2D {
    let mut rng = Stream::new(seed);
    let mut img = Image2D::new(size, size);
    let blobs = rng.range(1, 5);
    for _ in 0..blobs {
        let area = rng.range(16, 400) as usize;
        let shape = gen_fat_polyomino_2d(rng.next_u64(), area, 2);
        let (shape, _) = drill_holes_2d(&shape, rng.next_u64(), rng.range(0, 3) as usize);
        let ox = rng.below(size as u64) as i64 - shape.width() as i64 / 2;
        let oy = rng.below(size as u64) as i64 - shape.height() as i64 / 2;
        img.blit(&shape, ox, oy);
    }
    if rng.chance(500) {
        img = salt_image(&img, rng.next_u64(), 5);
    }
    img
}

/// A fat blob or random frame, then 5% of the voxels in its box flipped.
pub fn gen_noisy_volume(seed: u64) -> Volume3D {
    let mut rng = Stream::new(seed);
    let base = if rng.chance(500) {
        gen_fat_blob_3d(rng.next_u64(), rng.range(64, 512) as usize, 2)
    } else {
        gen_frame_random(rng.next_u64(), rng.range(1, 4) as usize)
    };
    salt_volume(&base, rng.next_u64(), 50)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{label_components_2d, label_components_3d, Adjacency};
    use crate::oracle;
    use crate::topo2d::{check_preconditions_2d, classify_boundary_2d, find_pathologies_2d};
    use crate::topo3d::find_pathologies_3d;

    #[test]
    fn blocks_and_frames() {
        assert_eq!(gen_block_2d(2, 2).count_ones(), 4);
        assert_eq!(gen_block_3d(4, 4, 4).count_ones(), 64);
        let f1 = gen_frame(1, 1, 1);
        assert_eq!(f1.extent(), [5, 5, 3]);
        assert_eq!(f1.count_ones(), 8);
        assert_eq!(oracle::genus_by_euler(&f1).unwrap(), vec![1]);
        assert_eq!(
            oracle::genus_by_euler(&gen_frame(2, 1, 1)).unwrap(),
            vec![2]
        );
        assert_eq!(
            oracle::genus_by_euler(&gen_frame(0, 2, 1)).unwrap(),
            vec![0]
        );
        assert_eq!(
            oracle::genus_by_euler(&gen_frame(5, 2, 3)).unwrap(),
            vec![5]
        );
    }

    #[test]
    fn random_frames() {
        for seed in 0..40 {
            let vol = gen_frame_random(seed, 6);
            assert_eq!(label_components_3d(&vol, Adjacency::Direct3D).count(), 1);
            assert_eq!(
                oracle::genus_by_euler(&vol).unwrap(),
                vec![6],
                "seed {seed}"
            );
            assert!(find_pathologies_3d(&vol).is_empty());
        }
        assert_eq!(gen_frame_random(9, 3), gen_frame_random(9, 3));
    }

    #[test]
    fn shells() {
        let s = gen_shell([3, 3, 3], [1, 1, 1]).unwrap();
        assert_eq!(s.count_ones(), 26);
        assert_eq!(oracle::genus_by_euler(&s).unwrap(), vec![0, 0]);
        assert_eq!(
            oracle::genus_by_euler(&gen_shell([5, 5, 5], [1, 1, 1]).unwrap())
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            oracle::genus_by_euler(&gen_shell([3, 3, 3], [0, 0, 0]).unwrap())
                .unwrap()
                .len(),
            1
        );
        assert!(gen_shell([3, 3, 3], [2, 1, 1]).is_err());
    }

    #[test]
    fn extrusion() {
        let img = gen_block_2d(2, 3);
        let vol = extrude(&img, 2);
        assert_eq!(vol.count_ones(), 12);
        assert_eq!(vol.nz(), 2);
        assert!(extrude(&Image2D::new(3, 3), 2).is_empty());
    }

    #[test]
    fn sponge_is_clean() {
        let vol = gen_sponge(11);
        assert!(find_pathologies_3d(&vol).is_empty());
        assert_eq!(label_components_3d(&vol, Adjacency::Direct3D).count(), 1);
        let g = oracle::genus_by_euler(&vol).unwrap();
        assert_eq!(g.len(), 1);
        // 2 x 2 tunnels along each of three axes, all crossing
        assert!(g[0] > 0);
    }

    #[test]
    fn polyominoes() {
        for seed in 0..200 {
            let area = 16 + (seed as usize * 37) % 600;
            let img = gen_fat_polyomino_2d(seed, area, 2);
            assert_eq!(img.count_ones(), area / 4 * 4, "seed {seed}");
            assert_eq!(label_components_2d(&img, Adjacency::Direct2D).count(), 1);
            assert_eq!(oracle::holes_by_floodfill(&img), 0, "seed {seed}");
            assert!(find_pathologies_2d(&img).is_empty());
            let hist = classify_boundary_2d(&img).unwrap();
            assert!(
                check_preconditions_2d(&img, &hist).ok,
                "seed {seed}: {img:?}"
            );
            assert_eq!(hist.cp2, hist.cp4 + 4);
        }
        assert_eq!(
            gen_fat_polyomino_2d(1, 300, 2),
            gen_fat_polyomino_2d(1, 300, 2)
        );
        assert_ne!(
            gen_fat_polyomino_2d(1, 300, 2),
            gen_fat_polyomino_2d(2, 300, 2)
        );
    }

    #[test]
    fn blobs() {
        for seed in 0..60 {
            let vol = gen_fat_blob_3d(seed, 8 * (10 + seed as usize * 3), 2);
            assert_eq!(
                vol.count_ones(),
                8 * (10 + seed as usize * 3),
                "seed {seed}"
            );
            assert!(find_pathologies_3d(&vol).is_empty(), "seed {seed}");
            assert_eq!(
                oracle::genus_by_euler(&vol).unwrap(),
                vec![0],
                "seed {seed}"
            );
        }
    }

    #[test]
    fn drilling() {
        let img = gen_block_2d(12, 12);
        let (holey, cut) = drill_holes_2d(&img, 3, 2);
        assert_eq!(cut, 2);
        assert_eq!(oracle::holes_by_floodfill(&holey), 2);
        assert_eq!(holey.count_ones(), 144 - 8);
    }

    #[test]
    fn scenes_and_noise_are_seeded() {
        assert_eq!(gen_scene_2d(4, 64), gen_scene_2d(4, 64));
        assert_eq!(gen_noisy_volume(4), gen_noisy_volume(4));
        let base = gen_block_3d(6, 6, 6);
        let salted = salt_volume(&base, 1, 50);
        let flipped = base
            .bits()
            .iter()
            .zip(salted.bits())
            .filter(|(a, b)| a != b)
            .count();
        assert!(flipped > 0 && flipped < base.len() / 5);
    }
}
