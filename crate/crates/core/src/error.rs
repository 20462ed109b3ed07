use thiserror::Error;

/// Errors raised by parameter validation, numerical routines and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnobError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge on [{lower}, {upper}]: error estimate {error:e} above tolerance {tolerance:e}")]
    QuadratureNonConvergence {
        lower: f64,
        upper: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("singular matching system (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },

    #[error("grid alignment violated: {0}")]
    GridAlignment(String),

    #[error("horizon {t} is not a multiple of the step {dt}")]
    SchemeMismatch { t: f64, dt: f64 },

    #[error("empty sample")]
    EmptySamples,
}

pub type Result<T> = std::result::Result<T, SnobError>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> SnobError {
    SnobError::InvalidParameter {
        name,
        value,
        reason,
    }
}

/// Rejects NaN/infinite values and values not strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(invalid(name, value, "must be finite"));
    }
    if value <= 0.0 {
        return Err(invalid(name, value, "must be > 0"));
    }
    Ok(value)
}

pub(crate) fn require_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(invalid(name, value, "must be finite"));
    }
    if value < 0.0 {
        return Err(invalid(name, value, "must be >= 0"));
    }
    Ok(value)
}
