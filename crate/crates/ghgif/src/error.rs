use thiserror::Error;

/// Errors produced by the filtering library.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was handed images of different sizes.
    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {got_width}x{got_height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        got_width: usize,
        got_height: usize,
    },

    /// A parameter violated its precondition (non-positive sigma, zero
    /// radius, lambda out of range, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data contained a NaN or infinity. The index names the first
    /// offending sample in row-major order.
    #[error("non-finite sample {value} at index {index} (x={x}, y={y})")]
    NonFinite {
        index: usize,
        x: usize,
        y: usize,
        value: f64,
    },

    /// File or stream error while reading or writing an image.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// An image file could not be parsed, or uses an unsupported layout.
    #[error("unsupported or malformed image data: {0}")]
    Format(String),

    /// An internal identity that must hold by construction failed to hold.
    /// Indicates a bug in the library, not in the caller's input.
    #[error("internal consistency failure in {context}: residual {residual:.3e} exceeds {tolerance:.3e}")]
    Inconsistency {
        context: String,
        residual: f64,
        tolerance: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn dims(ew: usize, eh: usize, gw: usize, gh: usize) -> Self {
        Error::DimensionMismatch {
            expected_width: ew,
            expected_height: eh,
            got_width: gw,
            got_height: gh,
        }
    }
}
