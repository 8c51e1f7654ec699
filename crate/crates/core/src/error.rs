use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("not an FQ_n edge: {u} - {v}")]
    NotAnEdge { u: String, v: String },

    #[error("identical endpoints: {0}")]
    IdenticalEndpoints(String),

    #[error("{what} = {value} out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("degenerate drawing: {0}")]
    Degenerate(String),

    #[error("malformed document: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, value: impl TryInto<i64>, min: i64, max: i64) -> Self {
        Error::OutOfRange {
            what,
            value: value.try_into().unwrap_or(i64::MAX),
            min,
            max,
        }
    }
}

/// Returns `Ok(())` when `min <= value <= max`.
pub(crate) fn check_range(what: &'static str, value: u32, min: u32, max: u32) -> Result<()> {
    if value < min || value > max {
        Err(Error::range(what, value, min as i64, max as i64))
    } else {
        Ok(())
    }
}
