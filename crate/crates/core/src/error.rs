use thiserror::Error;

/// Failures raised by the model, oracle and design layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("non-finite input for `{0}`")]
    NonFinite(&'static str),

    /// The requested post-selection has vanishing probability (a dark port),
    /// so normalized densities and conditional means are undefined.
    #[error(
        "zero post-selection probability (normalization {norm:e} below threshold {threshold:e})"
    )]
    ZeroProbability { norm: f64, threshold: f64 },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("grid too narrow: estimated truncated mass {tail_mass:e} exceeds {limit:e}")]
    InsufficientGrid { tail_mass: f64, limit: f64 },

    #[error("phase sampling too coarse: delta * dx = {phase_step} exceeds {limit}")]
    Aliasing { phase_step: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be strictly positive",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    finite(name, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative",
        })
    }
}
