//! Mutual information, outage simulation, slope fitting and DMT bounds.

mod bounds;
mod mi;
mod outage;
mod slope;

use thiserror::Error;

use crate::matrix::{BuildError, EvalError};

pub use bounds::{bound_eval, bound_sanity, guard_bound_asymptotic, transmit_bound, transmit_diversity, SanityReport};
pub use mi::{mutual_info, mutual_info_sweep};
pub use outage::{
    db_to_linear, outage_curve, outage_prob, r_prime_factor, OutageCurve, OutageEstimator, OutagePoint, RatePolicy,
    RateTarget,
};
pub use slope::{dmt_slope, SlopeFit, MIN_OUTAGES};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("SNR must be positive and finite, got {0}")]
    InvalidSnr(f64),
    #[error("log-determinant is not finite")]
    NonFinite,
    #[error("rate must be non-negative, got {0}")]
    NegativeRate(f64),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl InfoError {
    pub fn code(&self) -> &'static str {
        match self {
            InfoError::InvalidSnr(_) => "invalid-snr",
            InfoError::NonFinite => "non-finite",
            InfoError::NegativeRate(_) => "negative-rate",
            InfoError::NoTrials => "no-trials",
            InfoError::InsufficientData(_) => "insufficient-data",
            InfoError::InvalidRegime(_) => "invalid-regime",
            InfoError::Build(_) => "model-mismatch",
            InfoError::Eval(_) => "unresolved-symbol",
        }
    }
}
