//! Concurrence, entanglement of formation and negativity.

use crate::error::{Error, Result};
use crate::numkernel::{
    complex_singular_values, hermitian_eigensystem, hermitian_eigenvalues, ComplexMatrix,
};
use crate::qstate::{pauli_pair, DensityMatrix};

/// Concurrence together with the square roots of the spin-flip eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub value: f64,
    /// √l₁ ≥ √l₂ ≥ √l₃ ≥ √l₄.
    pub spin_flip_spectrum: [f64; 4],
}

/// ρ̃ = (σ_y⊗σ_y) ρ̄ (σ_y⊗σ_y).
///
/// ρ̄ is the entrywise conjugate in the computational basis, which equals ρᵀ
/// for Hermitian ρ.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    let yy = pauli_pair(2, 2);
    (yy * rho.matrix().conj() * yy).hermitian_part()
}

/// Eigenvalues of ρ below this are rounding noise and dropped from √ρ.
const RANK_CUTOFF: f64 = 1e-14;

/// √l₁ ≥ … ≥ √l₄, where l_i are the eigenvalues of the Hermitian matrix
/// √ρ ρ̃ √ρ.
///
/// Since √ρ ρ̃ √ρ = M M† with M = √ρ √ρ̃ and √ρ̃ = (σ_y⊗σ_y) √ρ̄ (σ_y⊗σ_y),
/// the square roots are taken directly as singular values of M; this keeps
/// the error of small √l_i at machine precision instead of its square root.
pub fn spin_flip_roots(rho: &DensityMatrix) -> [f64; 4] {
    let eig = hermitian_eigensystem(rho.matrix()).expect("density matrix is Hermitian");
    let root = eig.map_values(|x| if x > RANK_CUTOFF { x.sqrt() } else { 0.0 });
    let yy = pauli_pair(2, 2);
    let flipped_root = yy * root.conj() * yy;
    let s = complex_singular_values(&(root * flipped_root)).expect("finite product");
    [s[0], s[1], s[2], s[3]]
}

/// Eigenvalues l₁ ≥ … ≥ l₄ of √ρ ρ̃ √ρ (non-negative by construction).
pub fn spin_flip_eigenvalues(rho: &DensityMatrix) -> [f64; 4] {
    spin_flip_roots(rho).map(|x| x * x)
}

/// Wootters concurrence C = max(0, √l₁ − √l₂ − √l₃ − √l₄).
pub fn concurrence(rho: &DensityMatrix) -> ConcurrenceValue {
    let roots = spin_flip_roots(rho);
    let value = (roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0);
    ConcurrenceValue {
        value,
        spin_flip_spectrum: roots,
    }
}

/// Binary entropy in bits, with 0·lg 0 = 0.
fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation as a function of the concurrence (bits).
pub fn eof(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!("concurrence {c} outside [0, 1]")));
    }
    Ok(binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0))
}

/// N = max(0, −2 λ_min(ρ^{T_B})).
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let ev =
        hermitian_eigenvalues(&rho.partial_transpose_b()).expect("partial transpose is Hermitian");
    (-2.0 * ev[3]).max(0.0)
}
