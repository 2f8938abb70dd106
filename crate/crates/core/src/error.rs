use thiserror::Error;

/// Errors produced by the analysis pipelines and file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no such component: {0}")]
    NoSuchComponent(u32),

    #[error("component is empty")]
    EmptyComponent,

    #[error("repair did not converge after {actions} actions")]
    RepairDidNotConverge { actions: usize },

    #[error("not a valid digital surface: {0}")]
    InvalidSurface(String),

    #[error("non-orientable or non-manifold boundary (chi = {chi})")]
    NonManifoldBoundary { chi: i64 },

    #[error("point ({0}, {1}, {2}) is not on the surface")]
    NotOnSurface(usize, usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid shape parameters: {0}")]
    InvalidShape(String),

    #[error("dimensionality mismatch: {0}")]
    Dimensionality(&'static str),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
