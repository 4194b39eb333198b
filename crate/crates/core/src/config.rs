//! Numerical tolerances shared by every module.

/// Single tuning point for all thresholds used in the toolkit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, trace and positivity slack accepted on ingestion.
    pub validation: f64,
    /// Fixed-point and Jacobi convergence threshold.
    pub convergence: f64,
    /// Smallest eigenvalue / determinant / probability treated as non-zero.
    pub rank_tol: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        validation: 1e-8,
        convergence: 1e-10,
        rank_tol: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
