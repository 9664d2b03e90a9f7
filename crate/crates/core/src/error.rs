//! Error type shared across the library.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed pixmap header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0}, only 255 is supported")]
    UnsupportedMaxval(u64),

    #[error("truncated pixel payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("invalid image dimensions {width}x{height}")]
    BadDimensions { width: usize, height: usize },

    #[error("invalid channel count {0}, must be 1 or 3")]
    BadChannels(usize),

    #[error("sample buffer holds {got} values, expected {want}")]
    BadBufferLength { want: usize, got: usize },

    #[error("sample {0} is not a finite value in [0, 255]")]
    SampleOutOfRange(f64),

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("shape mismatch: {0}x{1}x{2} vs {3}x{4}x{5}")]
    ShapeMismatch(usize, usize, usize, usize, usize, usize),

    #[error("noise thickness must be >= 1 pixel")]
    BadThickness,

    #[error("downscale factor must be >= 1")]
    BadFactor,

    #[error("upsample target {0}x{1} is smaller than source {2}x{3}")]
    UpsampleTargetTooSmall(usize, usize, usize, usize),

    #[error("mask has no missing pixels")]
    NoMissingPixels,

    #[error("mask marks every pixel missing")]
    AllPixelsMissing,

    #[error("invalid inpaint parameters: {0}")]
    BadInpaintParams(String),

    #[error("invalid scratch spec: {0}")]
    BadScratchSpec(String),

    #[error("invalid voting weights: {0}")]
    BadWeights(String),

    #[error("invalid ray samples: {0}")]
    BadRaySamples(String),

    #[error("image {0}x{1} is smaller than the {2}x{2} ssim window")]
    TooSmallForSsim(usize, usize, usize),
}
