use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("corrupt image file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },

    #[error("cannot write {path}: {reason}")]
    Unwritable { path: PathBuf, reason: String },

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("seed ({x}, {y}) lies outside the image")]
    SeedOutOfBounds { x: usize, y: usize },

    #[error("watershed needs at least two distinct marker labels, found {0}")]
    TooFewMarkers(usize),

    #[error("no lesion candidate found")]
    NoLesionCandidate,

    #[error("config: {0}")]
    Config(String),

    #[error("no images found in {0}")]
    EmptyDirectory(PathBuf),

    #[error("no ground-truth mask for image {0}")]
    MissingTruth(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn check_dims(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, actual })
        }
    }
}
