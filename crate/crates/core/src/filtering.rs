//! Local filtering (SLOCC) operations and the Bell-diagonal normal form.
//!
//! A filter (A, B) maps ρ to (A⊗B)ρ(A⊗B)†/p. In the correlation picture the
//! same map is R̃ ↦ Λ(A)·R̃·Λ(B)ᵀ followed by division by the (0,0) entry,
//! where Λ(M)_μν = ½ tr(σ_μ M σ_ν M†) is a proper orthochronous Lorentz
//! transformation when det M = 1.

use crate::chsh::max_violation;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkernel::{
    complex_singular_values, psd_inv_sqrt, real_svd, ComplexMatrix, RealMatrix, C64,
};
use crate::qstate::{pauli, CorrelationMatrix, DensityMatrix};

/// Ordered pair of 2×2 filter factors acting on qubits A and B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFilter {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl LocalFilter {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        for (name, m) in [("A", &a), ("B", &b)] {
            if m.rows() != 2 || m.cols() != 2 {
                return Err(Error::Domain(format!("filter factor {name} must be 2x2")));
            }
            if !m.is_finite() {
                return Err(Error::Domain(format!(
                    "filter factor {name} has non-finite entries"
                )));
            }
        }
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self {
            a: ComplexMatrix::identity(2),
            b: ComplexMatrix::identity(2),
        }
    }

    /// A ⊗ B.
    pub fn operator(&self) -> ComplexMatrix {
        self.a.kron(&self.b)
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &LocalFilter) -> LocalFilter {
        LocalFilter {
            a: next.a * self.a,
            b: next.b * self.b,
        }
    }

    /// Both factors invertible with |det| ≥ `rank_tol` after rescaling.
    pub fn is_reversible(&self, rank_tol: f64) -> bool {
        let r = self.rescaled();
        det2(&r.a).norm() >= rank_tol && det2(&r.b).norm() >= rank_tol
    }

    /// Each factor divided by its operator norm; the induced state map is
    /// unchanged.
    pub fn rescaled(&self) -> LocalFilter {
        LocalFilter {
            a: scale_to_unit_norm(&self.a),
            b: scale_to_unit_norm(&self.b),
        }
    }
}

fn det2(m: &ComplexMatrix) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn operator_norm(m: &ComplexMatrix) -> f64 {
    complex_singular_values(m).expect("finite factor")[0]
}

fn scale_to_unit_norm(m: &ComplexMatrix) -> ComplexMatrix {
    let n = operator_norm(m);
    if n > 0.0 {
        m.scale_real(1.0 / n)
    } else {
        *m
    }
}

/// Applies the filter and renormalizes; returns the success probability
/// p = tr((A⊗B)ρ(A⊗B)†) for the factors as given.
pub fn apply_filter(rho: &DensityMatrix, filter: &LocalFilter) -> Result<(DensityMatrix, f64)> {
    apply_filter_with(rho, filter, &Tolerances::DEFAULT)
}

pub fn apply_filter_with(
    rho: &DensityMatrix,
    filter: &LocalFilter,
    tol: &Tolerances,
) -> Result<(DensityMatrix, f64)> {
    let k = filter.operator();
    let out = k * *rho.matrix() * k.adjoint();
    let p = out.trace().re;
    if !(p >= tol.rank_tol) {
        return Err(Error::AnnihilatedState { probability: p });
    }
    Ok((DensityMatrix::normalized_unchecked(out), p))
}

/// 4×4 real matrix preserving the Minkowski metric η = diag(1, −1, −1, −1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(pub RealMatrix);

impl LorentzMatrix {
    pub fn as_matrix(&self) -> &RealMatrix {
        &self.0
    }

    /// max |Λᵀ η Λ − η|.
    pub fn metric_defect(&self) -> f64 {
        let eta = RealMatrix::from_diagonal(&[1.0, -1.0, -1.0, -1.0]);
        (self.0.transpose() * eta * self.0).max_abs_diff(&eta)
    }

    pub fn is_proper_orthochronous(&self, tol: f64) -> bool {
        self.metric_defect() <= tol
            && self.0[(0, 0)] > 0.0
            && (self.0.determinant() - 1.0).abs() <= tol
    }
}

/// Λ_μν = ½ tr(σ_μ M σ_ν M†) for M rescaled to det M = 1.
pub fn lorentz_of_slocc(m: &ComplexMatrix) -> Result<LorentzMatrix> {
    lorentz_of_slocc_with(m, &Tolerances::DEFAULT)
}

pub fn lorentz_of_slocc_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<LorentzMatrix> {
    if m.rows() != 2 || m.cols() != 2 || !m.is_finite() {
        return Err(Error::Domain(
            "SLOCC factor must be a finite 2x2 matrix".into(),
        ));
    }
    let det = det2(m);
    if det.norm() < tol.rank_tol {
        return Err(Error::Domain(format!(
            "SLOCC factor is singular (|det| = {:.3e})",
            det.norm()
        )));
    }
    let normalized = m.scale(C64::new(1.0, 0.0) / det.sqrt());
    Ok(LorentzMatrix(lorentz_unnormalized(&normalized)))
}

fn lorentz_unnormalized(m: &ComplexMatrix) -> RealMatrix {
    let md = m.adjoint();
    RealMatrix::from_fn(4, 4, |mu, nu| {
        0.5 * (pauli(mu) * *m * pauli(nu) * md).trace().re
    })
}

/// R̃ of the filtered state predicted from the Lorentz picture:
/// Λ(A)·R̃·Λ(B)ᵀ divided by its (0,0) entry.
pub fn transform_correlation(
    corr: &CorrelationMatrix,
    filter: &LocalFilter,
) -> Result<CorrelationMatrix> {
    let la = lorentz_of_slocc(&filter.a)?;
    let lb = lorentz_of_slocc(&filter.b)?;
    let t = *la.as_matrix() * *corr.as_matrix() * la_transpose(&lb);
    let norm = t[(0, 0)];
    if !(norm > 0.0) {
        return Err(Error::AnnihilatedState { probability: norm });
    }
    CorrelationMatrix::new(t.scale(1.0 / norm))
}

fn la_transpose(l: &LorentzMatrix) -> RealMatrix {
    l.as_matrix().transpose()
}

/// SU(2) element whose adjoint action on Pauli vectors is the proper
/// rotation `o`, i.e. U (v·σ) U† = (o v)·σ.
pub fn unitary_of_rotation(o: &RealMatrix) -> ComplexMatrix {
    let r = |i: usize, j: usize| o[(i, j)];
    let trace = r(0, 0) + r(1, 1) + r(2, 2);
    let (w, x, y, z) = if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        (
            0.25 * s,
            (r(2, 1) - r(1, 2)) / s,
            (r(0, 2) - r(2, 0)) / s,
            (r(1, 0) - r(0, 1)) / s,
        )
    } else if r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2) {
        let s = (1.0 + r(0, 0) - r(1, 1) - r(2, 2)).sqrt() * 2.0;
        (
            (r(2, 1) - r(1, 2)) / s,
            0.25 * s,
            (r(0, 1) + r(1, 0)) / s,
            (r(0, 2) + r(2, 0)) / s,
        )
    } else if r(1, 1) > r(2, 2) {
        let s = (1.0 + r(1, 1) - r(0, 0) - r(2, 2)).sqrt() * 2.0;
        (
            (r(0, 2) - r(2, 0)) / s,
            (r(0, 1) + r(1, 0)) / s,
            0.25 * s,
            (r(1, 2) + r(2, 1)) / s,
        )
    } else {
        let s = (1.0 + r(2, 2) - r(0, 0) - r(1, 1)).sqrt() * 2.0;
        (
            (r(1, 0) - r(0, 1)) / s,
            (r(0, 2) + r(2, 0)) / s,
            (r(1, 2) + r(2, 1)) / s,
            0.25 * s,
        )
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    let minus_i = C64::new(0.0, -1.0);
    pauli(0).scale_real(w / n)
        + (pauli(1).scale_real(x / n) + pauli(2).scale_real(y / n) + pauli(3).scale_real(z / n))
            .scale(minus_i)
}

/// Output of [`normal_form`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormResult {
    /// Final (or best, when not converged) iterate.
    pub state: DensityMatrix,
    /// Cumulative filter with both factors scaled to operator norm 1.
    pub filter: LocalFilter,
    /// tr((A⊗B)ρ(A⊗B)†) for the rescaled cumulative filter.
    pub success_probability: f64,
    pub iterations: usize,
    pub converged: bool,
    /// ‖ρ_A − I/2‖_F + ‖ρ_B − I/2‖_F of `state`.
    pub marginal_defect: f64,
}

impl NormalFormResult {
    pub fn beta(&self) -> f64 {
        max_violation(&self.state).beta
    }
}

pub const DEFAULT_NORMAL_FORM_TOL: f64 = 1e-10;
pub const DEFAULT_NORMAL_FORM_MAX_ITER: usize = 10_000;

fn marginal_defect(rho: &DensityMatrix) -> f64 {
    let half = ComplexMatrix::identity(2).scale_real(0.5);
    (rho.reduced_a() - half).frobenius_norm() + (rho.reduced_b() - half).frobenius_norm()
}

/// Brings ρ to its Bell-diagonal normal form by alternating marginal
/// whitening, then rotates the spin-correlation block to diagonal form.
///
/// Each stage applies ((2ρ_A)^(−1/2) ⊗ I) and then (I ⊗ (2ρ_B)^(−1/2)) to the
/// current iterate. Iteration stops once the marginal defect is at most `tol`
/// or after `max_iter` stages; in the latter case the last iterate is still
/// returned with `converged = false`. States whose normal form is reached only
/// asymptotically (rank-deficient, quasi-distillable) end this way.
///
/// The final local rotation makes the block diag(d₁, d₂, d₃) with
/// d₁ ≥ d₂ ≥ |d₃| and d₃ carrying the sign of det R. It is skipped when the
/// block is already diagonal, so Bell-diagonal input keeps the identity filter.
pub fn normal_form(rho: &DensityMatrix, tol: f64, max_iter: usize) -> Result<NormalFormResult> {
    normal_form_with(rho, tol, max_iter, &Tolerances::DEFAULT)
}

pub fn normal_form_with(
    rho: &DensityMatrix,
    tol: f64,
    max_iter: usize,
    tolerances: &Tolerances,
) -> Result<NormalFormResult> {
    let mut state = *rho;
    let mut cumulative = LocalFilter::identity();
    let mut iterations = 0;
    let mut defect = marginal_defect(&state);

    while defect > tol && iterations < max_iter {
        let fa = psd_inv_sqrt(&state.reduced_a().scale_real(2.0), tolerances.rank_tol)?;
        let stage_a = LocalFilter {
            a: fa,
            b: ComplexMatrix::identity(2),
        };
        state = apply_filter_with(&state, &stage_a, tolerances)?.0;

        let fb = psd_inv_sqrt(&state.reduced_b().scale_real(2.0), tolerances.rank_tol)?;
        let stage_b = LocalFilter {
            a: ComplexMatrix::identity(2),
            b: fb,
        };
        state = apply_filter_with(&state, &stage_b, tolerances)?.0;

        // Rescale every stage to keep the product bounded when the filters
        // diverge (asymptotic normal forms).
        cumulative = cumulative.then(&stage_a).then(&stage_b).rescaled();
        iterations += 1;
        defect = marginal_defect(&state);
    }
    let converged = defect <= tol;

    let block = state.corr_block();
    let off_diagonal = (0..3)
        .flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| block.as_matrix()[(i, j)].abs())
        .fold(0.0, f64::max);
    let block_is_canonical = {
        let m = block.as_matrix();
        let d = [m[(0, 0)], m[(1, 1)], m[(2, 2)]];
        d[0] >= d[1] && d[1] >= d[2].abs()
    };
    if off_diagonal > tol.max(1e-14) || !block_is_canonical && off_diagonal > 0.0 {
        let rotation = diagonalizing_rotation(block.as_matrix())?;
        state = apply_filter_with(&state, &rotation, tolerances)?.0;
        cumulative = cumulative.then(&rotation);
    }

    let filter = cumulative.rescaled();
    let k = filter.operator();
    let success_probability = (k * *rho.matrix() * k.adjoint()).trace().re;

    Ok(NormalFormResult {
        state,
        filter,
        success_probability,
        iterations,
        converged,
        marginal_defect: marginal_defect(&state),
    })
}

/// Local unitaries (W_A, W_B) with Λ(W_A)·R·Λ(W_B)ᵀ diagonal.
fn diagonalizing_rotation(block: &RealMatrix) -> Result<LocalFilter> {
    let svd = real_svd(block)?;
    let mut u = svd.left;
    let mut v = svd.right;
    for m in [&mut u, &mut v] {
        if m.determinant() < 0.0 {
            for i in 0..3 {
                m[(i, 2)] = -m[(i, 2)];
            }
        }
    }
    Ok(LocalFilter {
        a: unitary_of_rotation(&u.transpose()),
        b: unitary_of_rotation(&v.transpose()),
    })
}

/// True iff every off-diagonal entry of R̃ has magnitude at most `tol`.
pub fn is_bell_diagonal(rho: &DensityMatrix, tol: f64) -> bool {
    let corr = rho.correlation();
    (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
        .all(|(i, j)| corr.get(i, j).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::concurrence;
    use crate::qstate::{
        random_filter_factor, random_rotation, random_unitary, sample_state_with, BellState,
        SeedStream, StateKind,
    };

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn pure_schmidt(conc: f64) -> DensityMatrix {
        let lp = ((1.0 + conc).sqrt() + (1.0 - conc).sqrt()) / 2.0;
        let lm = ((1.0 + conc).sqrt() - (1.0 - conc).sqrt()) / 2.0;
        DensityMatrix::from_pure(&[c(lp), c(0.0), c(0.0), c(lm)]).unwrap()
    }

    #[test]
    fn identity_filter_is_a_no_op() {
        let rho = sample_state_with(&mut SeedStream::new(1).rng(0), StateKind::MixedHs);
        let (out, p) = apply_filter(&rho, &LocalFilter::identity()).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn filtering_a_bell_state() {
        let f = LocalFilter::new(
            ComplexMatrix::from_real_diagonal(&[1.0, 0.5]),
            ComplexMatrix::identity(2),
        )
        .unwrap();
        let (out, p) = apply_filter(&DensityMatrix::bell(BellState::PhiPlus), &f).unwrap();
        // ∝ |00⟩ + ½|11⟩: norm² 1.25, p = 1.25/2, C = 2·(1·½)/1.25.
        assert!((p - 0.625).abs() < 1e-15);
        assert!((concurrence(&out).value - 0.8).abs() < 1e-12);
        let expected = DensityMatrix::from_pure(&[c(1.0), c(0.0), c(0.0), c(0.5)]).unwrap();
        assert!(out.matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn annihilating_filter_is_rejected() {
        let f = LocalFilter::new(
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
            ComplexMatrix::identity(2),
        )
        .unwrap();
        assert!(matches!(
            apply_filter(&DensityMatrix::basis(0), &f),
            Err(Error::AnnihilatedState { .. })
        ));
    }

    #[test]
    fn filtered_states_stay_physical() {
        let stream = SeedStream::new(2);
        for i in 0..200 {
            let mut rng = stream.rng(i);
            let rho = sample_state_with(&mut rng, StateKind::MixedHs);
            let f = LocalFilter::new(
                random_filter_factor(&mut rng),
                random_filter_factor(&mut rng),
            )
            .unwrap();
            let (out, _) = apply_filter(&rho, &f).unwrap();
            let report = crate::qstate::validate(out.matrix(), &Tolerances::DEFAULT);
            assert!(report.is_valid(), "{report:?}");
        }
    }

    #[test]
    fn lorentz_of_identity_and_rotations() {
        let l = lorentz_of_slocc(&ComplexMatrix::identity(2)).unwrap();
        assert!(l.as_matrix().max_abs_diff(&RealMatrix::identity(4)) < 1e-15);

        let stream = SeedStream::new(3);
        for i in 0..100 {
            let u = random_unitary(&mut stream.rng(i), 2);
            let l = lorentz_of_slocc(&u).unwrap();
            let m = l.as_matrix();
            assert!((m[(0, 0)] - 1.0).abs() < 1e-12);
            for k in 1..4 {
                assert!(m[(0, k)].abs() < 1e-12 && m[(k, 0)].abs() < 1e-12);
            }
            let o = m.block(1, 1, 3, 3);
            assert!((o.transpose() * o).max_abs_diff(&RealMatrix::identity(3)) < 1e-12);
            assert!((o.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_filter_is_a_boost() {
        // M = diag(s, 1/s): Λ mixes components 0 and 3 with cosh/sinh of 2 ln s.
        let s: f64 = 1.7;
        let l = lorentz_of_slocc(&ComplexMatrix::from_real_diagonal(&[s, 1.0 / s])).unwrap();
        let (ch, sh) = ((s * s + 1.0 / (s * s)) / 2.0, (s * s - 1.0 / (s * s)) / 2.0);
        let expected = RealMatrix::from_rows(&[
            [ch, 0.0, 0.0, sh],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [sh, 0.0, 0.0, ch],
        ]);
        assert!(l.as_matrix().max_abs_diff(&expected) < 1e-13);
        assert!(l.is_proper_orthochronous(1e-8));
    }

    #[test]
    fn singular_factor_has_no_lorentz_image() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(lorentz_of_slocc(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn random_factors_give_proper_orthochronous_maps() {
        let stream = SeedStream::new(4);
        for i in 0..200 {
            let l = lorentz_of_slocc(&random_filter_factor(&mut stream.rng(i))).unwrap();
            assert!(l.is_proper_orthochronous(1e-8), "{:?}", l);
        }
    }

    #[test]
    fn lorentz_covariance_of_filtering() {
        let stream = SeedStream::new(5);
        for i in 0..500 {
            let mut rng = stream.rng(i);
            let rho = sample_state_with(&mut rng, StateKind::MixedHs);
            let f = LocalFilter::new(
                random_filter_factor(&mut rng),
                random_filter_factor(&mut rng),
            )
            .unwrap();
            let predicted = transform_correlation(&rho.correlation(), &f).unwrap();
            let actual = apply_filter(&rho, &f).unwrap().0.correlation();
            assert!(predicted.as_matrix().max_abs_diff(actual.as_matrix()) <= 1e-8);
        }
    }

    #[test]
    fn rotation_unitary_correspondence() {
        let stream = SeedStream::new(6);
        for i in 0..300 {
            let o = random_rotation(&mut stream.rng(i));
            let u = unitary_of_rotation(&o);
            assert!((u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
            let block = lorentz_of_slocc(&u).unwrap().as_matrix().block(1, 1, 3, 3);
            assert!(block.max_abs_diff(&o) < 1e-12);
        }
        // Rotations by π hit the non-trace branches.
        for diag in [[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]] {
            let o = RealMatrix::from_diagonal(&diag);
            let block = lorentz_of_slocc(&unitary_of_rotation(&o))
                .unwrap()
                .as_matrix()
                .block(1, 1, 3, 3);
            assert!(block.max_abs_diff(&o) < 1e-12);
        }
    }

    #[test]
    fn bell_diagonal_input_keeps_identity_filter() {
        let rho = DensityMatrix::bell_diagonal([0.5, 0.25, 0.15, 0.1]).unwrap();
        let nf = normal_form(&rho, 1e-10, 100).unwrap();
        assert!(nf.converged);
        assert!(nf.iterations <= 1);
        assert!(nf.filter.a.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(nf.filter.b.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!((nf.success_probability - 1.0).abs() < 1e-12);
        assert!(nf.state.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn pure_state_is_whitened_to_a_maximally_entangled_state() {
        let nf = normal_form(&pure_schmidt(0.6), 1e-10, 100).unwrap();
        assert!(nf.converged);
        assert!((concurrence(&nf.state).value - 1.0).abs() < 1e-8);
        assert!((nf.beta() - 2f64.sqrt()).abs() < 1e-8);
        // Success probability of the optimal (norm-1) filter: 2λ₋² for λ₊ ≥ λ₋.
        let lm = ((1.6f64).sqrt() - (0.4f64).sqrt()) / 2.0;
        assert!((nf.success_probability - 2.0 * lm * lm).abs() < 1e-10);
    }

    #[test]
    fn product_state_has_no_full_rank_normal_form() {
        assert!(matches!(
            normal_form(&DensityMatrix::basis(0), 1e-10, 100),
            Err(Error::SingularMarginal { .. })
        ));
    }

    #[test]
    fn quasi_distillable_state_does_not_converge() {
        // ½|Φ⁺⟩⟨Φ⁺| + ½|01⟩⟨01| approaches a Bell state only asymptotically.
        let m = DensityMatrix::bell(BellState::PhiPlus)
            .matrix()
            .scale_real(0.5)
            + DensityMatrix::basis(1).matrix().scale_real(0.5);
        let rho = DensityMatrix::new(m).unwrap();
        let nf = normal_form(&rho, 1e-10, 2000).unwrap();
        assert!(!nf.converged);
        assert_eq!(nf.iterations, 2000);
        assert!(nf.beta() > max_violation(&rho).beta);
        assert!(nf.success_probability > 0.0);
    }

    #[test]
    fn normal_form_of_random_states() {
        let stream = SeedStream::new(7);
        for i in 0..100 {
            let rho = sample_state_with(&mut stream.rng(i), StateKind::MixedHs);
            let nf = normal_form(&rho, 1e-10, 10_000).unwrap();
            assert!(nf.converged, "state {i} did not converge");
            assert!(nf.marginal_defect <= 1e-10);
            assert!(is_bell_diagonal(&nf.state, 1e-7));
            let d = nf.state.corr_block();
            let m = d.as_matrix();
            assert!(m[(0, 0)] >= m[(1, 1)] && m[(1, 1)] >= m[(2, 2)].abs() - 1e-12);
            // The cumulative filter reproduces the normal form from ρ.
            let (again, p) = apply_filter(&rho, &nf.filter).unwrap();
            assert!(again.matrix().max_abs_diff(nf.state.matrix()) < 1e-8);
            assert!((p - nf.success_probability).abs() < 1e-12);
            assert!(p > 0.0 && p <= 1.0 + 1e-12);
        }
    }

    fn probe_filter(rng: &mut rand_chacha::ChaCha20Rng) -> LocalFilter {
        LocalFilter::new(random_filter_factor(rng), random_filter_factor(rng)).unwrap()
    }

    #[test]
    fn normal_form_maximizes_concurrence() {
        let stream = SeedStream::new(9);
        for i in 0..40 {
            let mut rng = stream.rng(i);
            let rho = sample_state_with(&mut rng, StateKind::MixedHs);
            let nf = normal_form(&rho, 1e-10, 10_000).unwrap();
            assert!(nf.converged);
            let c_nf = concurrence(&nf.state).value;
            for _ in 0..50 {
                let (filtered, _) = apply_filter(&rho, &probe_filter(&mut rng)).unwrap();
                assert!(c_nf >= concurrence(&filtered).value - 1e-7);
                if nf.beta() <= 1.0 {
                    assert!(max_violation(&filtered).beta <= 1.0);
                }
            }
        }
    }

    #[test]
    fn normal_form_maximizes_violation_of_violating_states() {
        let stream = SeedStream::new(11);
        let mut checked = 0;
        for i in 0..40 {
            let mut rng = stream.rng(i);
            // A hidden Bell-diagonal core with β > 1, disguised by a filter.
            let w = 0.8 + 0.2 * rand::Rng::random::<f64>(&mut rng);
            let rest = (1.0 - w) / 3.0;
            let core = DensityMatrix::bell_diagonal([w, rest, rest, rest]).unwrap();
            let rho = apply_filter(&core, &probe_filter(&mut rng)).unwrap().0;
            let nf = normal_form(&rho, 1e-10, 10_000).unwrap();
            assert!(nf.converged);
            let beta_nf = nf.beta();
            assert!((beta_nf - max_violation(&core).beta).abs() < 1e-8);
            assert!(beta_nf >= max_violation(&rho).beta - 1e-9);
            for _ in 0..50 {
                let (filtered, _) = apply_filter(&rho, &probe_filter(&mut rng)).unwrap();
                let beta = max_violation(&filtered).beta;
                if beta > 1.0 {
                    checked += 1;
                    assert!(beta_nf >= beta - 1e-7, "state {i}: {beta_nf} < {beta}");
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn sub_threshold_violation_can_grow_under_filtering() {
        // I/4 is its own normal form with β = 0, yet filtering towards |00⟩
        // pushes β up to 1 without exceeding it.
        let eps = 1e-3;
        let f = LocalFilter::new(
            ComplexMatrix::from_real_diagonal(&[1.0, eps]),
            ComplexMatrix::from_real_diagonal(&[1.0, eps]),
        )
        .unwrap();
        let mixed = DensityMatrix::maximally_mixed();
        assert_eq!(normal_form(&mixed, 1e-10, 10).unwrap().beta(), 0.0);
        let beta = max_violation(&apply_filter(&mixed, &f).unwrap().0).beta;
        assert!(beta > 0.99 && beta <= 1.0);
    }

    #[test]
    fn normal_form_is_unique_up_to_local_unitaries() {
        let stream = SeedStream::new(10);
        let key = |nf: &NormalFormResult| {
            let m = *nf.state.corr_block().as_matrix();
            let mut d = [m[(0, 0)].abs(), m[(1, 1)].abs(), m[(2, 2)].abs()];
            d.sort_by(|a, b| b.total_cmp(a));
            (d, m.determinant().signum())
        };
        for i in 0..50 {
            let mut rng = stream.rng(i);
            let rho = sample_state_with(&mut rng, StateKind::MixedHs);
            let first = apply_filter(&rho, &probe_filter(&mut rng)).unwrap().0;
            let second = apply_filter(&rho, &probe_filter(&mut rng)).unwrap().0;
            let (d1, s1) = key(&normal_form(&first, 1e-10, 10_000).unwrap());
            let (d2, s2) = key(&normal_form(&second, 1e-10, 10_000).unwrap());
            for k in 0..3 {
                assert!((d1[k] - d2[k]).abs() <= 1e-6, "state {i}: {d1:?} vs {d2:?}");
            }
            if d1[2] > 1e-6 {
                assert_eq!(s1, s2);
            }
        }
    }

    #[test]
    fn is_bell_diagonal_examples() {
        assert!(is_bell_diagonal(&DensityMatrix::maximally_mixed(), 1e-12));
        assert!(!is_bell_diagonal(&DensityMatrix::basis(0), 1e-12));
        for b in BellState::ALL {
            assert!(is_bell_diagonal(&DensityMatrix::bell(b), 1e-12));
        }
    }
}
