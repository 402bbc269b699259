use thiserror::Error;

/// Errors raised by state construction, kernel reduction and the spectral pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("invalid {name}: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("amplitudes are not normalised: |a0|^2 + |a1|^2 = {0}")]
    Normalization(f64),

    #[error("quadratic form is not negative definite (a*b - c^2 = {0})")]
    NotIntegrable(f64),

    #[error("state is separable: cross coefficient is zero")]
    Separable,

    #[error("wavefunction is not negligible at the grid boundary (relative amplitude {0:e})")]
    BoundaryMass(f64),

    #[error("matrix side {side} exceeds the configured cap {cap}")]
    MatrixTooLarge { side: usize, cap: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error(
        "kernel is not positive semidefinite: eigenvalue {eigenvalue:e} against sum {raw_sum:e}"
    )]
    NotPositive { eigenvalue: f64, raw_sum: f64 },

    #[error("spectrum sum must be positive, got {0}")]
    NonPositiveSum(f64),

    #[error("no trace target: kernel has no analytic trace and none was supplied")]
    MissingTraceTarget,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            reason: format!("expected a finite value, got {value}"),
        })
    }
}
