//! Netpbm bitmaps, plain (`P1`) and raw (`P4`). Black (1) is foreground.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Image2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmFormat {
    /// `P1`, ASCII digits.
    Plain,
    /// `P4`, rows packed eight pixels per byte, most significant bit first.
    Raw,
}

pub fn read_pbm(path: impl AsRef<Path>) -> Result<Image2D> {
    parse_pbm(&fs::read(path)?)
}

pub fn write_pbm(path: impl AsRef<Path>, img: &Image2D, format: PbmFormat) -> Result<()> {
    fs::write(path, encode_pbm(img, format))?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.data.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
        }
        Some(b)
    }

    /// Skips whitespace and `#` comments.
    fn skip_blank(&mut self) {
        while let Some(b) = self.peek() {
            if b == b'#' {
                while let Some(c) = self.bump() {
                    if c == b'\n' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_blank();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        let n: usize = text
            .parse()
            .map_err(|_| Error::parse(self.line, format!("expected {what}")))?;
        if n == 0 {
            return Err(Error::parse(self.line, format!("{what} must be positive")));
        }
        Ok(n)
    }
}

pub fn parse_pbm(data: &[u8]) -> Result<Image2D> {
    let mut cur = Cursor {
        data,
        pos: 0,
        line: 1,
    };
    let raw = match data.get(..2) {
        Some(b"P1") => false,
        Some(b"P4") => true,
        _ => return Err(Error::parse(1, "expected magic P1 or P4")),
    };
    cur.pos = 2;
    if cur
        .peek()
        .is_some_and(|b| !b.is_ascii_whitespace() && b != b'#')
    {
        return Err(Error::parse(1, "expected magic P1 or P4"));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let mut img = Image2D::new(width, height);

    if raw {
        // exactly one whitespace byte separates the header from the body
        match cur.bump() {
            Some(b) if b.is_ascii_whitespace() => {}
            _ => return Err(Error::parse(cur.line, "expected whitespace after height")),
        }
        let stride = width.div_ceil(8);
        let body = &data[cur.pos..];
        if body.len() < stride * height {
            return Err(Error::parse(
                cur.line,
                format!(
                    "truncated body: need {} bytes, found {}",
                    stride * height,
                    body.len()
                ),
            ));
        }
        for y in 0..height {
            let row = &body[y * stride..(y + 1) * stride];
            for x in 0..width {
                if row[x / 8] & (0x80 >> (x % 8)) != 0 {
                    img.set(x, y, true);
                }
            }
        }
        return Ok(img);
    }

    for y in 0..height {
        for x in 0..width {
            cur.skip_blank();
            match cur.bump() {
                Some(b'1') => img.set(x, y, true),
                Some(b'0') => {}
                Some(b) => {
                    return Err(Error::parse(
                        cur.line,
                        format!("unexpected byte {:?} in body", b as char),
                    ))
                }
                None => {
                    return Err(Error::parse(
                        cur.line,
                        format!(
                            "truncated body: {} of {} pixels",
                            y * width + x,
                            width * height
                        ),
                    ))
                }
            }
        }
    }
    Ok(img)
}

pub fn encode_pbm(img: &Image2D, format: PbmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::new();
    match format {
        PbmFormat::Plain => {
            out.extend_from_slice(format!("P1\n{w} {h}\n").as_bytes());
            for row in img.bits().chunks(w) {
                // plain PBM lines should stay under 70 characters
                for chunk in row.chunks(64) {
                    out.extend(chunk.iter().map(|&b| if b { b'1' } else { b'0' }));
                    out.push(b'\n');
                }
            }
        }
        PbmFormat::Raw => {
            out.extend_from_slice(format!("P4\n{w} {h}\n").as_bytes());
            for row in img.bits().chunks(w) {
                for byte in row.chunks(8) {
                    let packed =
                        byte.iter()
                            .enumerate()
                            .fold(0u8, |acc, (i, &b)| if b { acc | (0x80 >> i) } else { acc });
                    out.push(packed);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Image2D {
        Image2D::from_rows(&["0110", "1001", "0110"]).unwrap()
    }

    #[test]
    fn plain_with_comments() {
        let text = b"P1\n# a comment\n4 3 # trailing\n0 1 1 0\n1001\n0110\n";
        assert_eq!(parse_pbm(text).unwrap(), sample());
    }

    #[test]
    fn round_trips() {
        let wide = crate::shapes::gen_fat_polyomino_2d(5, 400, 2);
        for img in [sample(), wide] {
            for fmt in [PbmFormat::Plain, PbmFormat::Raw] {
                assert_eq!(parse_pbm(&encode_pbm(&img, fmt)).unwrap(), img);
            }
        }
    }

    #[test]
    fn raw_packing() {
        let bytes = encode_pbm(&sample(), PbmFormat::Raw);
        assert_eq!(
            &bytes[bytes.len() - 3..],
            &[0b0110_0000, 0b1001_0000, 0b0110_0000]
        );
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(
            parse_pbm(b"P2\n1 1\n1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_pbm(b"P1\n\nx 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_pbm(b"P1\n2 2\n1 0\n1\n"),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(matches!(
            parse_pbm(b"P1\n2 1\n12\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_pbm(b"P4\n9 2\n\x00\x00\x00").is_err());
        assert!(parse_pbm(b"P1\n0 2\n").is_err());
    }
}
