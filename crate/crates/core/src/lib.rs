//! Topological invariants of binary images and voxel volumes, computed in
//! digital space.
//!
//! * [`topo2d`] counts holes of 2D components from boundary corner counts,
//!   after removing speckles and repairing diagonal-only contacts.
//! * [`topo3d`] finds the boundary surfaces of voxel objects, classifies their
//!   points by surface-neighbor count, and derives genus and Betti ranks.
//! * [`oracle`] recomputes the same quantities by flood fill and cubical
//!   Euler characteristics, for validation and as a fallback.
//! * [`shapes`] builds deterministic and seeded test inputs.
//! * [`io`] reads and writes PBM images, Vox3 volumes and JSON reports.
//!
//! ```
//! use digitopo::grid::Image2D;
//! use digitopo::topo2d::hole_count;
//!
//! let ring = Image2D::from_rows(&[
//!     "000000", "011110", "011110", "010010", "011110", "000000",
//! ]).unwrap();
//! assert_eq!(hole_count(&ring).unwrap().holes, 1);
//! ```
//!
//! The `examples/` directory has one runnable program per capability.

pub mod cli;
pub mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod rng;
pub mod shapes;
pub mod topo2d;
pub mod topo3d;

use serde::Serialize;

pub use error::{Error, Result};
pub use grid::{Adjacency, Image2D, Labeling, Volume3D};

/// How a reported invariant was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Corner or surface-point counting.
    Formula,
    /// Flood fill or cubical Euler characteristic.
    OracleFallback,
}
