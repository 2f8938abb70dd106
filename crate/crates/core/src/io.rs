//! File formats and reports.

mod pbm;
mod report;
mod vox3;

pub use pbm::{encode_pbm, parse_pbm, read_pbm, write_pbm, PbmFormat};
pub use report::{sha256_file, sha256_hex, Report, SCHEMA_VERSION};
pub use vox3::{encode_vox3, parse_vox3, read_vox3, write_vox3, Vox3Slabs};
