use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("unsupported raster format in {path}: {format}")]
    UnsupportedFormat { path: PathBuf, format: String },

    #[error("image has zero area")]
    ZeroArea,

    #[error("malformed {what} at {path}:{line}: {reason}")]
    Malformed {
        what: &'static str,
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("dataset manifest {0} lists no images")]
    EmptyManifest(PathBuf),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("histogram is empty or has zero total mass")]
    EmptyHistogram,

    #[error("no intersecting regions at any level")]
    NoFeasibleLevel,

    #[error("no intersecting regions survived")]
    NoIntersections,

    #[error("watershed requires at least one marker")]
    EmptyMarkers,

    #[error("marker {label} has pixel {pixel} outside the mask")]
    MarkerOutsideMask { label: u32, pixel: usize },

    #[error("placed {placed} of {requested} {what} before exhausting the retry budget ({constraint})")]
    Placement {
        what: &'static str,
        placed: usize,
        requested: usize,
        constraint: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the command-line tool: 2 for input/output
    /// problems, 3 for failures inside the detection pipeline.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Decode { .. }
            | Error::UnsupportedFormat { .. }
            | Error::ZeroArea
            | Error::Malformed { .. }
            | Error::EmptyManifest(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidConfig(_) => 2,
            _ => 3,
        }
    }

    /// Short machine-readable identifier used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Decode { .. } => "decode",
            Error::UnsupportedFormat { .. } => "unsupported_format",
            Error::ZeroArea => "zero_area",
            Error::Malformed { .. } => "malformed_input",
            Error::EmptyManifest(_) => "empty_manifest",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidConfig(_) => "invalid_config",
            Error::EmptyHistogram => "empty_histogram",
            Error::NoFeasibleLevel => "no_feasible_level",
            Error::NoIntersections => "no_intersections",
            Error::EmptyMarkers => "empty_markers",
            Error::MarkerOutsideMask { .. } => "marker_outside_mask",
            Error::Placement { .. } => "placement",
        }
    }
}

pub(crate) fn check_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
