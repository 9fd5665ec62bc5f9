//! Error type shared by all walk operations.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum WalkError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("site {x} outside lattice [{x_min}, {x_max}]")]
    SiteOutOfRange { x: i64, x_min: i64, x_max: i64 },

    #[error("invalid site range [{lo}, {hi}]")]
    InvalidRange { lo: i64, hi: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lattice too small: window must cover [{needed_lo}, {needed_hi}]")]
    LatticeTooSmall { needed_lo: i64, needed_hi: i64 },

    #[error("dense oracle unsupported: {0}")]
    UnsupportedDense(String),

    #[error("on phase boundary: {0}")]
    OnPhaseBoundary(String),

    #[error("integration failure at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, WalkError>;
