//! Dense binary grids, adjacency relations and connected-component labeling.
//!
//! Both grid types treat every coordinate outside their box as background,
//! so neighborhood queries never need edge special-casing. Coordinates passed
//! to the read accessors are signed for that reason.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Neighbor relation between grid cells.
///
/// Direct adjacency is L1 distance 1 (4-neighbors in 2D, 6 in 3D); indirect
/// adjacency is L-infinity distance 1 (8 in 2D, 26 in 3D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Adjacency {
    Direct2D,
    Indirect2D,
    Direct3D,
    Indirect3D,
}

impl Adjacency {
    pub fn is_3d(self) -> bool {
        matches!(self, Adjacency::Direct3D | Adjacency::Indirect3D)
    }

    pub fn is_direct(self) -> bool {
        matches!(self, Adjacency::Direct2D | Adjacency::Direct3D)
    }

    /// Number of neighbors a cell has under this relation.
    pub fn degree(self) -> usize {
        match self {
            Adjacency::Direct2D => 4,
            Adjacency::Indirect2D => 8,
            Adjacency::Direct3D => 6,
            Adjacency::Indirect3D => 26,
        }
    }

    /// Whether two points (of equal dimension) are adjacent.
    pub fn adjacent(self, p: &[i64], q: &[i64]) -> bool {
        debug_assert_eq!(p.len(), q.len());
        let diffs = p.iter().zip(q).map(|(a, b)| (a - b).abs());
        if self.is_direct() {
            diffs.sum::<i64>() == 1
        } else {
            diffs.max().unwrap_or(0) == 1
        }
    }

    /// Neighbor offsets as `(dx, dy, dz)`; 2D kinds have `dz == 0`.
    pub fn offsets(self) -> Vec<(i64, i64, i64)> {
        let dz_range: &[i64] = if self.is_3d() { &[-1, 0, 1] } else { &[0] };
        let mut out = Vec::with_capacity(self.degree());
        for &dz in dz_range {
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    let l1 = dx.abs() + dy.abs() + dz.abs();
                    if l1 == 0 || (self.is_direct() && l1 != 1) {
                        continue;
                    }
                    out.push((dx, dy, dz));
                }
            }
        }
        out
    }
}

/// Row-major binary image. `true` is foreground.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image2D {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Image2D {
    /// All-background image.
    ///
    /// # Panics
    /// Panics if either extent is zero.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "image extents must be positive");
        Image2D {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidShape("image extents must be positive".into()));
        }
        if bits.len() != width * height {
            return Err(Error::InvalidShape(format!(
                "{}x{} image needs {} cells, got {}",
                width,
                height,
                width * height,
                bits.len()
            )));
        }
        Ok(Image2D {
            width,
            height,
            bits,
        })
    }

    /// Builds an image from rows of `'0'`/`'1'` characters (whitespace ignored).
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let mut bits = Vec::new();
        let mut width = None;
        for (line, row) in rows.iter().enumerate() {
            let cells: Vec<bool> = row
                .as_ref()
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' | '.' => Ok(false),
                    '1' | '#' => Ok(true),
                    other => Err(Error::parse(
                        line + 1,
                        format!("unexpected character {other:?}"),
                    )),
                })
                .collect::<Result<_>>()?;
            match width {
                None => width = Some(cells.len()),
                Some(w) if w != cells.len() => {
                    return Err(Error::parse(line + 1, "ragged row"));
                }
                _ => {}
            }
            bits.extend(cells);
        }
        Image2D::from_bits(width.unwrap_or(0), rows.len(), bits)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Occupancy at `(x, y)`; background outside the box.
    #[inline]
    pub fn get(&self, x: i64, y: i64) -> bool {
        self.in_bounds(x, y) && self.bits[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        assert!(
            x < self.width && y < self.height,
            "({x}, {y}) out of bounds"
        );
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Foreground coordinates in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    /// Occupancy of the 2x2 block anchored at `(x, y)`.
    ///
    /// Bit order is `[(x, y), (x+1, y), (x, y+1), (x+1, y+1)]`, i.e. index
    /// `dx + 2*dy`.
    pub fn window2(&self, x: i64, y: i64) -> [bool; 4] {
        [
            self.get(x, y),
            self.get(x + 1, y),
            self.get(x, y + 1),
            self.get(x + 1, y + 1),
        ]
    }

    /// Copy with `pad` background cells added on every side.
    pub fn padded(&self, pad: usize) -> Image2D {
        let mut out = Image2D::new(self.width + 2 * pad, self.height + 2 * pad);
        for (x, y) in self.foreground() {
            out.set(x + pad, y + pad, true);
        }
        out
    }

    /// Places `other` with its origin at `(ox, oy)`, OR-ing occupancy.
    /// Cells falling outside are dropped.
    pub fn blit(&mut self, other: &Image2D, ox: i64, oy: i64) {
        for (x, y) in other.foreground() {
            let (tx, ty) = (x as i64 + ox, y as i64 + oy);
            if self.in_bounds(tx, ty) {
                self.set(tx as usize, ty as usize, true);
            }
        }
    }
}

impl fmt::Debug for Image2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Image2D {}x{}", self.width, self.height)?;
        for row in self.bits.chunks(self.width) {
            let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Binary voxel volume, x fastest, then y, then z.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Volume3D {
    nx: usize,
    ny: usize,
    nz: usize,
    bits: Vec<bool>,
}

impl Volume3D {
    /// # Panics
    /// Panics if any extent is zero.
    pub fn new(nx: usize, ny: usize, nz: usize) -> Self {
        assert!(
            nx > 0 && ny > 0 && nz > 0,
            "volume extents must be positive"
        );
        Volume3D {
            nx,
            ny,
            nz,
            bits: vec![false; nx * ny * nz],
        }
    }

    pub fn from_bits(nx: usize, ny: usize, nz: usize, bits: Vec<bool>) -> Result<Self> {
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::InvalidShape(
                "volume extents must be positive".into(),
            ));
        }
        if bits.len() != nx * ny * nz {
            return Err(Error::InvalidShape(format!(
                "{nx}x{ny}x{nz} volume needs {} cells, got {}",
                nx * ny * nz,
                bits.len()
            )));
        }
        Ok(Volume3D { nx, ny, nz, bits })
    }

    /// Builds a volume from z-slabs, each given as rows of `'0'`/`'1'`.
    pub fn from_slabs<S: AsRef<str>>(slabs: &[&[S]]) -> Result<Self> {
        let images = slabs
            .iter()
            .map(|rows| Image2D::from_rows(rows))
            .collect::<Result<Vec<_>>>()?;
        let first = images
            .first()
            .ok_or_else(|| Error::InvalidShape("no slabs".into()))?;
        let (nx, ny) = (first.width(), first.height());
        if images
            .iter()
            .any(|im| im.width() != nx || im.height() != ny)
        {
            return Err(Error::InvalidShape("slabs differ in size".into()));
        }
        let bits = images
            .iter()
            .flat_map(|im| im.bits().iter().copied())
            .collect();
        Volume3D::from_bits(nx, ny, images.len(), bits)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn extent(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// One contiguous z-slab, row-major in (x, y).
    pub fn slab(&self, z: usize) -> &[bool] {
        let area = self.nx * self.ny;
        &self.bits[z * area..(z + 1) * area]
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    #[inline]
    pub fn in_bounds(&self, x: i64, y: i64, z: i64) -> bool {
        x >= 0
            && y >= 0
            && z >= 0
            && (x as usize) < self.nx
            && (y as usize) < self.ny
            && (z as usize) < self.nz
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (z * self.ny + y) * self.nx + x
    }

    /// Occupancy at `(x, y, z)`; background outside the box.
    #[inline]
    pub fn get(&self, x: i64, y: i64, z: i64) -> bool {
        self.in_bounds(x, y, z) && self.bits[self.index(x as usize, y as usize, z as usize)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        assert!(
            x < self.nx && y < self.ny && z < self.nz,
            "({x}, {y}, {z}) out of bounds"
        );
        let i = self.index(x, y, z);
        self.bits[i] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Object voxel coordinates in scan order.
    pub fn foreground(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let (nx, ny) = (self.nx, self.ny);
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| [i % nx, (i / nx) % ny, i / (nx * ny)])
    }

    /// Occupancy of the 2x2x2 block anchored at `(x, y, z)`; index
    /// `dx + 2*dy + 4*dz`.
    pub fn window8(&self, x: i64, y: i64, z: i64) -> [bool; 8] {
        let mut out = [false; 8];
        for (i, cell) in out.iter_mut().enumerate() {
            let (dx, dy, dz) = ((i & 1) as i64, ((i >> 1) & 1) as i64, ((i >> 2) & 1) as i64);
            *cell = self.get(x + dx, y + dy, z + dz);
        }
        out
    }

    /// Number of object voxels among the six face neighbors.
    pub fn face_neighbors(&self, x: i64, y: i64, z: i64) -> usize {
        [
            (1, 0, 0),
            (-1, 0, 0),
            (0, 1, 0),
            (0, -1, 0),
            (0, 0, 1),
            (0, 0, -1),
        ]
        .iter()
        .filter(|(dx, dy, dz)| self.get(x + dx, y + dy, z + dz))
        .count()
    }

    pub fn padded(&self, pad: usize) -> Volume3D {
        let mut out = Volume3D::new(self.nx + 2 * pad, self.ny + 2 * pad, self.nz + 2 * pad);
        for [x, y, z] in self.foreground() {
            out.set(x + pad, y + pad, z + pad, true);
        }
        out
    }

    /// Places `other` with its origin at `origin`, OR-ing occupancy.
    pub fn blit(&mut self, other: &Volume3D, origin: [i64; 3]) {
        for [x, y, z] in other.foreground() {
            let t = [
                x as i64 + origin[0],
                y as i64 + origin[1],
                z as i64 + origin[2],
            ];
            if self.in_bounds(t[0], t[1], t[2]) {
                self.set(t[0] as usize, t[1] as usize, t[2] as usize, true);
            }
        }
    }
}

impl fmt::Debug for Volume3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Volume3D {}x{}x{}", self.nx, self.ny, self.nz)?;
        for z in 0..self.nz {
            for row in self.slab(z).chunks(self.nx) {
                let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                writeln!(f, "  {line}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Per-cell component labels. 0 marks cells outside every labeled component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<u32>,
    count: u32,
    adjacency: Adjacency,
    extent: [usize; 3],
}

impl Labeling {
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    pub fn extent(&self) -> [usize; 3] {
        self.extent
    }

    pub fn label_at(&self, x: usize, y: usize, z: usize) -> u32 {
        let [nx, ny, _] = self.extent;
        self.labels[(z * ny + y) * nx + x]
    }

    /// Number of cells carrying each label; index 0 is unlabeled.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count as usize + 1];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    fn bounding_box(&self, id: u32) -> Result<([usize; 3], [usize; 3])> {
        if id == 0 || id > self.count {
            return Err(Error::NoSuchComponent(id));
        }
        let [nx, ny, _] = self.extent;
        let mut lo = [usize::MAX; 3];
        let mut hi = [0usize; 3];
        let mut seen = false;
        for (i, _) in self.labels.iter().enumerate().filter(|(_, &l)| l == id) {
            seen = true;
            let p = [i % nx, (i / nx) % ny, i / (nx * ny)];
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        if !seen {
            // the outer background region may lie entirely in the implicit pad
            return Err(Error::NoSuchComponent(id));
        }
        Ok((lo, hi))
    }

    /// Tight copy of one 2D component with a one-cell background pad,
    /// plus the source coordinate of the copy's origin.
    pub fn extract_image_at(&self, id: u32) -> Result<(Image2D, [i64; 2])> {
        if self.adjacency.is_3d() {
            return Err(Error::Dimensionality("labeling is three-dimensional"));
        }
        let (lo, hi) = self.bounding_box(id)?;
        let mut out = Image2D::new(hi[0] - lo[0] + 3, hi[1] - lo[1] + 3);
        let nx = self.extent[0];
        for (i, _) in self.labels.iter().enumerate().filter(|(_, &l)| l == id) {
            out.set(i % nx - lo[0] + 1, i / nx - lo[1] + 1, true);
        }
        Ok((out, [lo[0] as i64 - 1, lo[1] as i64 - 1]))
    }

    pub fn extract_image(&self, id: u32) -> Result<Image2D> {
        self.extract_image_at(id).map(|(img, _)| img)
    }

    /// Tight copy of one 3D component with a one-cell background pad,
    /// plus the source coordinate of the copy's origin.
    pub fn extract_volume_at(&self, id: u32) -> Result<(Volume3D, [i64; 3])> {
        if !self.adjacency.is_3d() {
            return Err(Error::Dimensionality("labeling is two-dimensional"));
        }
        let (lo, hi) = self.bounding_box(id)?;
        let mut out = Volume3D::new(hi[0] - lo[0] + 3, hi[1] - lo[1] + 3, hi[2] - lo[2] + 3);
        let [nx, ny, _] = self.extent;
        for (i, _) in self.labels.iter().enumerate().filter(|(_, &l)| l == id) {
            let p = [i % nx, (i / nx) % ny, i / (nx * ny)];
            out.set(p[0] - lo[0] + 1, p[1] - lo[1] + 1, p[2] - lo[2] + 1, true);
        }
        Ok((out, [lo[0] as i64 - 1, lo[1] as i64 - 1, lo[2] as i64 - 1]))
    }

    pub fn extract_volume(&self, id: u32) -> Result<Volume3D> {
        self.extract_volume_at(id).map(|(vol, _)| vol)
    }
}

/// Breadth-first labeling over a box; labels follow scan order of each
/// component's first cell.
fn flood_label(
    extent: [usize; 3],
    member: impl Fn(usize) -> bool,
    offsets: &[(i64, i64, i64)],
) -> (Vec<u32>, u32) {
    let [nx, ny, nz] = extent;
    let n = nx * ny * nz;
    let mut labels = vec![0u32; n];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != 0 || !member(start) {
            continue;
        }
        count += 1;
        labels[start] = count;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y, z) = (
                (i % nx) as i64,
                ((i / nx) % ny) as i64,
                (i / (nx * ny)) as i64,
            );
            for &(dx, dy, dz) in offsets {
                let (qx, qy, qz) = (x + dx, y + dy, z + dz);
                if qx < 0
                    || qy < 0
                    || qz < 0
                    || qx as usize >= nx
                    || qy as usize >= ny
                    || qz as usize >= nz
                {
                    continue;
                }
                let j = (qz as usize * ny + qy as usize) * nx + qx as usize;
                if labels[j] == 0 && member(j) {
                    labels[j] = count;
                    queue.push_back(j);
                }
            }
        }
    }
    (labels, count)
}

/// Labels the foreground of a 2D image.
///
/// # Panics
/// Panics if `adj` is a 3D kind.
pub fn label_components_2d(img: &Image2D, adj: Adjacency) -> Labeling {
    assert!(!adj.is_3d(), "2D labeling needs a 2D adjacency");
    let extent = [img.width(), img.height(), 1];
    let bits = img.bits();
    let (labels, count) = flood_label(extent, |i| bits[i], &adj.offsets());
    Labeling {
        labels,
        count,
        adjacency: adj,
        extent,
    }
}

/// Labels the object voxels of a volume.
///
/// # Panics
/// Panics if `adj` is a 2D kind.
pub fn label_components_3d(vol: &Volume3D, adj: Adjacency) -> Labeling {
    assert!(adj.is_3d(), "3D labeling needs a 3D adjacency");
    let extent = vol.extent();
    let bits = vol.bits();
    let (labels, count) = flood_label(extent, |i| bits[i], &adj.offsets());
    Labeling {
        labels,
        count,
        adjacency: adj,
        extent,
    }
}

/// Labels the complement of the foreground, including the implicit
/// background beyond the image edge. The region reachable from outside the
/// box is always label 1, even when none of its cells lie inside the image.
///
/// # Panics
/// Panics if `adj` is a 3D kind.
pub fn label_background_2d(img: &Image2D, adj: Adjacency) -> Labeling {
    assert!(!adj.is_3d(), "2D labeling needs a 2D adjacency");
    let padded = img.padded(1);
    let (pw, ph) = (padded.width(), padded.height());
    let bits = padded.bits();
    // padded (0, 0) is background and first in scan order, so the outer region is 1
    let (plabels, count) = flood_label([pw, ph, 1], |i| !bits[i], &adj.offsets());
    let mut labels = Vec::with_capacity(img.len());
    for y in 0..img.height() {
        for x in 0..img.width() {
            labels.push(plabels[(y + 1) * pw + x + 1]);
        }
    }
    Labeling {
        labels,
        count,
        adjacency: adj,
        extent: [img.width(), img.height(), 1],
    }
}
