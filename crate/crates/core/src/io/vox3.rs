//! The Vox3 text volume format.
//!
//! ```text
//! vox3 <nx> <ny> <nz>
//! <ny lines of nx '0'/'1' characters>   slab z = 0
//! <blank line>
//! <ny lines>                            slab z = 1
//! ...
//! ```
//!
//! Every line ends in `\n`, including the last; nothing follows the last slab.

use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Volume3D;
use crate::topo3d::SlabSource;

pub fn read_vox3(path: impl AsRef<Path>) -> Result<Volume3D> {
    parse_vox3(&fs::read(path)?)
}

pub fn write_vox3(path: impl AsRef<Path>, vol: &Volume3D) -> Result<()> {
    fs::write(path, encode_vox3(vol))?;
    Ok(())
}

pub fn encode_vox3(vol: &Volume3D) -> Vec<u8> {
    let [nx, ny, nz] = vol.extent();
    let mut out = format!("vox3 {nx} {ny} {nz}\n").into_bytes();
    for z in 0..nz {
        if z > 0 {
            out.push(b'\n');
        }
        for row in vol.slab(z).chunks(nx) {
            out.extend(row.iter().map(|&b| if b { b'1' } else { b'0' }));
            out.push(b'\n');
        }
    }
    out
}

pub fn parse_vox3(data: &[u8]) -> Result<Volume3D> {
    let mut slabs = Vox3Slabs::new(data)?;
    let [nx, ny, nz] = slabs.extent();
    let mut vol = Volume3D::new(nx, ny, nz);
    let area = nx * ny;
    for z in 0..nz {
        slabs.read_slab(&mut vol.bits_mut()[z * area..(z + 1) * area])?;
    }
    Ok(vol)
}

/// Reads a Vox3 stream one slab at a time.
pub struct Vox3Slabs<R> {
    reader: R,
    extent: [usize; 3],
    next: usize,
    line: usize,
    buf: String,
}

impl Vox3Slabs<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Vox3Slabs::new(BufReader::new(File::open(path)?))
    }
}

impl<R: BufRead> Vox3Slabs<R> {
    pub fn new(reader: R) -> Result<Self> {
        let mut s = Vox3Slabs {
            reader,
            extent: [0; 3],
            next: 0,
            line: 0,
            buf: String::new(),
        };
        let header = s.line()?.ok_or_else(|| Error::parse(1, "empty file"))?;
        let mut parts = header.split(' ');
        if parts.next() != Some("vox3") {
            return Err(Error::parse(1, "expected header \"vox3 <nx> <ny> <nz>\""));
        }
        let mut dims = [0usize; 3];
        for (d, name) in dims.iter_mut().zip(["nx", "ny", "nz"]) {
            *d = parts
                .next()
                .and_then(|p| p.parse().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::parse(1, format!("bad or missing {name}")))?;
        }
        if parts.next().is_some() {
            return Err(Error::parse(1, "extra fields in header"));
        }
        s.extent = dims;
        Ok(s)
    }

    /// Next line without its newline; `None` at end of input.
    fn line(&mut self) -> Result<Option<String>> {
        self.buf.clear();
        let n = self.reader.read_line(&mut self.buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::InvalidData {
                Error::parse(self.line + 1, "not valid UTF-8")
            } else {
                Error::Io(e)
            }
        })?;
        if n == 0 {
            return Ok(None);
        }
        self.line += 1;
        match self.buf.strip_suffix('\n') {
            Some(text) => Ok(Some(text.to_string())),
            None => Err(Error::parse(self.line, "missing trailing newline")),
        }
    }

    fn expect_line(&mut self) -> Result<String> {
        self.line()?
            .ok_or_else(|| Error::parse(self.line + 1, "unexpected end of file"))
    }
}

impl<R: BufRead> SlabSource for Vox3Slabs<R> {
    fn extent(&self) -> [usize; 3] {
        self.extent
    }

    fn read_slab(&mut self, out: &mut [bool]) -> Result<()> {
        let [nx, ny, nz] = self.extent;
        if self.next >= nz {
            return Err(Error::parse(self.line, "read past the last slab"));
        }
        if self.next > 0 {
            let sep = self.expect_line()?;
            if !sep.is_empty() {
                return Err(Error::parse(
                    self.line,
                    "expected a blank line between slabs",
                ));
            }
        }
        for y in 0..ny {
            let row = self.expect_line()?;
            if row.len() != nx {
                return Err(Error::parse(
                    self.line,
                    format!("row has {} cells, expected {nx}", row.len()),
                ));
            }
            for (x, c) in row.bytes().enumerate() {
                out[y * nx + x] = match c {
                    b'1' => true,
                    b'0' => false,
                    _ => {
                        return Err(Error::parse(
                            self.line,
                            format!("unexpected character {:?}", c as char),
                        ))
                    }
                };
            }
        }
        self.next += 1;
        if self.next == nz && self.line()?.is_some() {
            return Err(Error::parse(self.line, "content after the last slab"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::gen_frame;

    #[test]
    fn format_is_exact() {
        let frame = Volume3D::from_slabs(&[&["111", "101", "111"]]).unwrap();
        assert_eq!(encode_vox3(&frame), b"vox3 3 3 1\n111\n101\n111\n");
        let two = Volume3D::from_slabs(&[&["10"], &["01"]]).unwrap();
        assert_eq!(encode_vox3(&two), b"vox3 2 1 2\n10\n\n01\n");
    }

    #[test]
    fn round_trips() {
        for vol in [
            gen_frame(1, 1, 1),
            gen_frame(3, 2, 2),
            Volume3D::new(3, 2, 4),
        ] {
            assert_eq!(parse_vox3(&encode_vox3(&vol)).unwrap(), vol);
        }
    }

    #[test]
    fn errors() {
        let bad = |s: &str| parse_vox3(s.as_bytes()).unwrap_err();
        assert!(matches!(
            bad("vox3 2 2 1\n10\n1\n"),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            bad("vox3 2 1 1\n12\n"),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            bad("vox3 2 1 1\n10"),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            bad("vox3 2 1 2\n10\n01\n"),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            bad("vox3 2 1 1\n10\n\n"),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            bad("vox3 2 1 2\n10\n"),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            bad("vox 2 1 1\n10\n"),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(bad("vox3 2 0 1\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(bad(""), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn streams_slabs() {
        let vol = gen_frame(2, 1, 3);
        let bytes = encode_vox3(&vol);
        let streamed =
            crate::topo3d::stream_surfaces(&mut Vox3Slabs::new(&bytes[..]).unwrap()).unwrap();
        let direct =
            crate::topo3d::stream_surfaces(&mut crate::topo3d::VolumeSlabs::new(&vol)).unwrap();
        assert_eq!(streamed, direct);
    }
}
