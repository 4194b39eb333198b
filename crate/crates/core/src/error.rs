use thiserror::Error;

/// Errors produced by the two-qubit toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("correlation matrix does not describe a positive state (min eigenvalue {min_eigenvalue:.3e})")]
    UnphysicalCorrelations { min_eigenvalue: f64 },

    #[error("reduced state is singular (eigenvalue {eigenvalue:.3e}); no full-rank normal form")]
    SingularMarginal { eigenvalue: f64 },

    #[error("filter annihilates the state (success probability {probability:.3e})")]
    AnnihilatedState { probability: f64 },

    #[error("state has no spin correlations; optimal settings are undefined")]
    DegenerateState,

    #[error("malformed state JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
