//! Two-qubit states and their Pauli correlation representation.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with the first factor the "A"
//! qubit. The correlation table is indexed by μ, ν ∈ {0, 1, 2, 3} with σ₀ the
//! identity: `R̃[μ][ν] = tr(ρ σ_μ ⊗ σ_ν)`.

mod json;
mod sample;

pub use json::{matrix_from_pairs, matrix_to_pairs, parse_state_json, state_to_json, StateJson};
pub use sample::{
    random_filter_factor, random_local_unitary, random_rotation, random_simplex,
    random_unit_vector, random_unitary, sample_state, sample_state_with, SeedStream, StateKind,
};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkernel::{
    hermitian_eigensystem, hermitian_eigenvalues, real_svd, ComplexMatrix, RealMatrix, SvdResult,
    C64,
};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// σ_μ for μ = 0 (identity), 1 (x), 2 (y), 3 (z).
pub fn pauli(mu: usize) -> ComplexMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match mu {
        0 => ComplexMatrix::from_rows(&[[l, o], [o, l]]),
        1 => ComplexMatrix::from_rows(&[[o, l], [l, o]]),
        2 => ComplexMatrix::from_rows(&[[o, -i], [i, o]]),
        3 => ComplexMatrix::from_rows(&[[l, o], [o, -l]]),
        _ => panic!("Pauli index {mu} out of range"),
    }
}

/// σ_μ ⊗ σ_ν.
pub fn pauli_pair(mu: usize, nu: usize) -> ComplexMatrix {
    pauli(mu).kron(&pauli(nu))
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn vector(self) -> [C64; 4] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        let v = self.vector();
        ComplexMatrix::outer(&v, &v)
    }
}

/// One defect found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    Shape { rows: usize, cols: usize },
    NonFinite,
    NotHermitian { defect: f64 },
    Trace { trace: f64 },
    NotPositive { min_eigenvalue: f64 },
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::Shape { rows, cols } => write!(f, "expected 4x4, got {rows}x{cols}"),
            ValidationIssue::NonFinite => write!(f, "non-finite entries"),
            ValidationIssue::NotHermitian { defect } => {
                write!(f, "not Hermitian (defect {defect:.3e})")
            }
            ValidationIssue::Trace { trace } => write!(f, "trace {trace} differs from 1"),
            ValidationIssue::NotPositive { min_eigenvalue } => {
                write!(f, "negative eigenvalue {min_eigenvalue:.3e}")
            }
        }
    }
}

/// Result of checking a candidate density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks Hermiticity, unit trace and positivity, flagging each defect beyond
/// `tol.validation` separately.
pub fn validate(m: &ComplexMatrix, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport {
        hermiticity_defect: f64::NAN,
        trace_defect: f64::NAN,
        min_eigenvalue: f64::NAN,
        issues: Vec::new(),
    };
    if m.rows() != 4 || m.cols() != 4 {
        report.issues.push(ValidationIssue::Shape {
            rows: m.rows(),
            cols: m.cols(),
        });
        return report;
    }
    if !m.is_finite() {
        report.issues.push(ValidationIssue::NonFinite);
        return report;
    }
    report.hermiticity_defect = m.hermiticity_defect();
    if report.hermiticity_defect > tol.validation {
        report.issues.push(ValidationIssue::NotHermitian {
            defect: report.hermiticity_defect,
        });
    }
    let trace = m.trace().re;
    report.trace_defect = (trace - 1.0).abs();
    if report.trace_defect > tol.validation {
        report.issues.push(ValidationIssue::Trace { trace });
    }
    // Positivity is judged on the Hermitian part so that it is reported even
    // when Hermiticity fails.
    let spectrum = hermitian_eigenvalues(&m.hermitian_part()).expect("Hermitian part is Hermitian");
    report.min_eigenvalue = spectrum[3];
    if report.min_eigenvalue < -tol.validation {
        report.issues.push(ValidationIssue::NotPositive {
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    report
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::DEFAULT)
    }

    /// Validates `matrix`; small rounding defects are repaired by taking the
    /// Hermitian part, clipping eigenvalues in `[-tol, 0)` to zero and
    /// renormalizing the trace.
    pub fn with_tolerances(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let report = validate(&matrix, tol);
        if !report.is_valid() {
            let msg = report
                .issues
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::Validation(msg));
        }
        let herm = matrix.hermitian_part();
        let cleaned = if report.min_eigenvalue < 0.0 {
            let eig = hermitian_eigensystem(&herm)?;
            eig.map_values(|x| x.max(0.0))
        } else {
            herm
        };
        Ok(Self::normalized_unchecked(cleaned))
    }

    /// Wraps a matrix known to be PSD up to rounding, forcing exact Hermiticity
    /// and unit trace.
    pub(crate) fn normalized_unchecked(matrix: ComplexMatrix) -> Self {
        let mut m = matrix.hermitian_part();
        let tr = m.trace().re;
        m = m.scale_real(1.0 / tr);
        for i in 0..4 {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        }
        Self { matrix: m }
    }

    /// Projector onto the normalized vector `psi`.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        if psi.len() != 4 {
            return Err(Error::Validation(format!(
                "state vector must have 4 amplitudes, got {}",
                psi.len()
            )));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Validation(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::normalized_unchecked(ComplexMatrix::outer(&v, &v)))
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix::identity(4).scale_real(0.25),
        }
    }

    /// Projector onto a computational basis state, `index` in 0..4.
    pub fn basis(index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self { matrix: m }
    }

    pub fn bell(state: BellState) -> Self {
        Self::normalized_unchecked(state.projector())
    }

    /// Σ w_k |B_k⟩⟨B_k| with weights on (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻).
    pub fn bell_diagonal(weights: [f64; 4]) -> Result<Self> {
        check_probability_vector(&weights, 1e-9)?;
        let m = BellState::ALL
            .iter()
            .zip(weights)
            .fold(ComplexMatrix::zeros(4, 4), |acc, (b, w)| {
                acc + b.projector().scale_real(w)
            });
        Ok(Self::normalized_unchecked(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Eigenvalues sorted descending.
    pub fn spectrum(&self) -> [f64; 4] {
        let v = hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian");
        [v[0], v[1], v[2], v[3]]
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        // tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.entries().map(|z| z.norm_sqr()).sum()
    }

    /// Base-2 von Neumann entropy.
    pub fn entropy(&self) -> f64 {
        self.spectrum()
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.log2())
            .sum::<f64>()
            .max(0.0)
    }

    /// ρ_A = tr_B ρ.
    pub fn reduced_a(&self) -> ComplexMatrix {
        let m = &self.matrix;
        ComplexMatrix::from_fn(2, 2, |i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)])
    }

    /// ρ_B = tr_A ρ.
    pub fn reduced_b(&self) -> ComplexMatrix {
        let m = &self.matrix;
        ComplexMatrix::from_fn(2, 2, |i, j| m[(i, j)] + m[(2 + i, 2 + j)])
    }

    /// ρ^{T_B}.
    pub fn partial_transpose_b(&self) -> ComplexMatrix {
        let m = &self.matrix;
        ComplexMatrix::from_fn(4, 4, |r, c| {
            let (a, b) = (r / 2, r % 2);
            let (a2, b2) = (c / 2, c % 2);
            m[(2 * a + b2, 2 * a2 + b)]
        })
    }

    /// UρU† for a 4×4 unitary.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::normalized_unchecked(*u * self.matrix * u.adjoint())
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†.
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Self {
        self.conjugate_by(&ua.kron(ub))
    }

    /// R̃_μν = tr(ρ σ_μ ⊗ σ_ν).
    pub fn correlation(&self) -> CorrelationMatrix {
        let table =
            RealMatrix::from_fn(4, 4, |mu, nu| (self.matrix * pauli_pair(mu, nu)).trace().re);
        CorrelationMatrix(table)
    }

    /// The 3×3 spin-correlation block R.
    pub fn corr_block(&self) -> CorrBlock {
        self.correlation().block()
    }
}

pub fn check_probability_vector(p: &[f64; 4], tol: f64) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < -tol) {
        return Err(Error::Domain(format!("weights {p:?} must be non-negative")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::Domain(format!("weights {p:?} sum to {sum}, not 1")));
    }
    Ok(())
}

/// The 4×4 Pauli expectation table R̃ with R̃₀₀ = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix(RealMatrix);

impl CorrelationMatrix {
    pub fn new(table: RealMatrix) -> Result<Self> {
        if table.rows() != 4 || table.cols() != 4 {
            return Err(Error::Validation("correlation matrix must be 4x4".into()));
        }
        if !table.is_finite() {
            return Err(Error::Validation(
                "correlation matrix has non-finite entries".into(),
            ));
        }
        let tol = Tolerances::DEFAULT.validation;
        if (table[(0, 0)] - 1.0).abs() > tol {
            return Err(Error::Validation(format!(
                "correlation entry (0,0) is {}, expected 1",
                table[(0, 0)]
            )));
        }
        if table.max_abs() > 1.0 + tol {
            return Err(Error::Validation(
                "correlation entries must lie in [-1, 1]".into(),
            ));
        }
        Ok(Self(table))
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.0[(mu, nu)]
    }

    pub fn block(&self) -> CorrBlock {
        CorrBlock(self.0.block(1, 1, 3, 3))
    }

    /// Bloch vector of qubit A (R̃_i0).
    pub fn local_a(&self) -> [f64; 3] {
        [self.0[(1, 0)], self.0[(2, 0)], self.0[(3, 0)]]
    }

    /// Bloch vector of qubit B (R̃_0j).
    pub fn local_b(&self) -> [f64; 3] {
        [self.0[(0, 1)], self.0[(0, 2)], self.0[(0, 3)]]
    }

    /// ρ = ¼ Σ R̃_μν σ_μ ⊗ σ_ν, rejected when not positive.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        from_correlation(self)
    }
}

/// Lower-right 3×3 block of R̃.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrBlock(pub RealMatrix);

impl CorrBlock {
    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn svd(&self) -> SvdResult {
        real_svd(&self.0).expect("finite 3x3 block")
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> [f64; 3] {
        let s = self.svd().singulars;
        [s[0], s[1], s[2]]
    }
}

/// Reconstructs ρ from its correlation table.
pub fn from_correlation(corr: &CorrelationMatrix) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for mu in 0..4 {
        for nu in 0..4 {
            let w = corr.get(mu, nu);
            if w != 0.0 {
                m = m + pauli_pair(mu, nu).scale_real(0.25 * w);
            }
        }
    }
    let min = hermitian_eigenvalues(&m)?[3];
    if min < -Tolerances::DEFAULT.validation {
        return Err(Error::UnphysicalCorrelations {
            min_eigenvalue: min,
        });
    }
    DensityMatrix::new(m)
}
