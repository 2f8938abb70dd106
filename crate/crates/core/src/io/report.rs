//! Versioned JSON reports.

use std::fs::File;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// One command's output. Contains no timestamps or paths, so the same input
/// and flags always serialize to the same bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report<R, A> {
    pub schema_version: u32,
    pub command: &'static str,
    /// Hex SHA-256 of the input file's bytes.
    pub input_sha256: String,
    pub records: Vec<R>,
    pub actions: Vec<A>,
}

impl<R: Serialize, A: Serialize> Report<R, A> {
    pub fn new(
        command: &'static str,
        input_sha256: String,
        records: Vec<R>,
        actions: Vec<A>,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            input_sha256,
            records,
            actions,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex(&Sha256::digest(data))
}

/// Digest of a file, read in chunks.
pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let mut hasher = Sha256::new();
    std::io::copy(&mut File::open(path)?, &mut hasher)?;
    Ok(hex(&hasher.finalize()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn stable_bytes() {
        let a = Report::new(
            "holes",
            sha256_hex(b"P1\n1 1\n1\n"),
            vec![1, 2],
            Vec::<u8>::new(),
        )
        .to_json();
        let b = Report::new(
            "holes",
            sha256_hex(b"P1\n1 1\n1\n"),
            vec![1, 2],
            Vec::<u8>::new(),
        )
        .to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["records"][1], 2);
    }
}
