//! CHSH Bell operators and the maximal violation of a two-qubit state.
//!
//! The operator for unit vectors (a, b) on qubit A and (c, d) on qubit B is
//!
//! ```text
//! B = ½ Σ_ij [a_i (c_j + d_j) + b_i (c_j − d_j)] σ_i ⊗ σ_j
//! ```
//!
//! so local-realistic models satisfy tr(ρB) ≤ 1 and quantum states reach at
//! most √2. Literature using the unnormalized CHSH combination reports every
//! value here multiplied by 2.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numkernel::{dot, hermitian_eigenvalues, norm, ComplexMatrix, RealMatrix};
use crate::qstate::{
    check_probability_vector, pauli_pair, random_unit_vector, CorrBlock, DensityMatrix,
};

const UNIT_TOL: f64 = 1e-10;
const REFINE_MAX_SWEEPS: usize = 500;
const REFINE_MIN_GAIN: f64 = 1e-12;

/// Measurement directions: a, b for qubit A and c, d for qubit B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSettings {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub d: [f64; 3],
}

impl BellSettings {
    pub fn new(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            let n = norm(&v);
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::Domain(format!(
                    "setting {name} has norm {n}, expected 1"
                )));
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// W with B = Σ_ij W_ij σ_i ⊗ σ_j.
    pub fn coefficient_matrix(&self) -> RealMatrix {
        RealMatrix::from_fn(3, 3, |i, j| {
            0.5 * (self.a[i] * (self.c[j] + self.d[j]) + self.b[i] * (self.c[j] - self.d[j]))
        })
    }

    /// The twelve direction components in the order a, b, c, d.
    pub fn to_array(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, v) in [self.a, self.b, self.c, self.d].iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(v);
        }
        out
    }
}

/// Hermitian CHSH operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOperator {
    matrix: ComplexMatrix,
}

impl BellOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let v = hermitian_eigenvalues(&self.matrix).expect("Bell operator is Hermitian");
        [v[0], v[1], v[2], v[3]]
    }
}

/// Maximal violation with the singular values it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaValue {
    pub beta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

pub fn bell_operator(settings: &BellSettings) -> BellOperator {
    let w = settings.coefficient_matrix();
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..3 {
        for j in 0..3 {
            if w[(i, j)] != 0.0 {
                m = m + pauli_pair(i + 1, j + 1).scale_real(w[(i, j)]);
            }
        }
    }
    BellOperator { matrix: m }
}

/// tr(ρB).
pub fn chsh_value(rho: &DensityMatrix, settings: &BellSettings) -> f64 {
    (*rho.matrix() * *bell_operator(settings).matrix())
        .trace()
        .re
}

/// The same expectation evaluated in the correlation picture, Σ R_ij W_ij.
pub fn chsh_value_from_block(block: &CorrBlock, settings: &BellSettings) -> f64 {
    let w = settings.coefficient_matrix();
    let r = block.as_matrix();
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| r[(i, j)] * w[(i, j)])
        .sum()
}

/// β(ρ) = √(σ₁² + σ₂²) from the two largest singular values of R.
pub fn max_violation(rho: &DensityMatrix) -> BetaValue {
    beta_of_block(&rho.corr_block())
}

pub fn beta_of_block(block: &CorrBlock) -> BetaValue {
    let s = block.singular_values();
    BetaValue {
        beta: s[0].hypot(s[1]),
        sigma1: s[0],
        sigma2: s[1],
    }
}

/// Settings attaining β(ρ).
///
/// With R = U·diag(σ)·Vᵀ (rows of R belong to qubit A), the optimum uses the
/// best rank-two approximation of R: a, b = cos θ·u₁ ± sin θ·u₂ and c, d = v₁,
/// v₂, where tan θ = σ₂/σ₁.
pub fn optimal_settings(rho: &DensityMatrix) -> Result<(BellSettings, BetaValue)> {
    let block = rho.corr_block();
    let svd = block.svd();
    let (s1, s2) = (svd.singulars[0], svd.singulars[1]);
    let beta = s1.hypot(s2);
    if beta <= 1e-12 {
        return Err(Error::DegenerateState);
    }
    let (cos, sin) = (s1 / beta, s2 / beta);
    let u1 = svd.left.column(0);
    let u2 = svd.left.column(1);
    let v1 = svd.right.column(0);
    let v2 = svd.right.column(1);
    let a: [f64; 3] = std::array::from_fn(|k| cos * u1[k] + sin * u2[k]);
    let b: [f64; 3] = std::array::from_fn(|k| cos * u1[k] - sin * u2[k]);
    let c: [f64; 3] = std::array::from_fn(|k| v1[k]);
    let d: [f64; 3] = std::array::from_fn(|k| v2[k]);
    let settings = BellSettings::new(unit(a), unit(b), unit(c), unit(d))?;
    Ok((
        settings,
        BetaValue {
            beta,
            sigma1: s1,
            sigma2: s2,
        },
    ))
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = norm(&v);
    v.map(|x| x / n)
}

fn quadruple_value(r: &RealMatrix, q: &[[f64; 3]; 4]) -> f64 {
    let [a, b, c, d] = q;
    let cpd: Vec<f64> = (0..3).map(|k| c[k] + d[k]).collect();
    let cmd: Vec<f64> = (0..3).map(|k| c[k] - d[k]).collect();
    0.5 * (dot(a, &r.mul_vec(&cpd)) + dot(b, &r.mul_vec(&cmd)))
}

/// Replaces `target` by the normalized `v` unless `v` vanishes.
fn assign_direction(target: &mut [f64; 3], v: &[f64]) {
    let n = norm(v);
    if n > 1e-300 {
        *target = [v[0] / n, v[1] / n, v[2] / n];
    }
}

/// Coordinate ascent: each direction in turn is set to its exact optimum
/// given the other three.
fn refine_quadruple(r: &RealMatrix, q: &mut [[f64; 3]; 4]) -> f64 {
    let rt = r.transpose();
    let mut value = quadruple_value(r, q);
    for _ in 0..REFINE_MAX_SWEEPS {
        let [a, b, c, d] = q;
        let cpd: Vec<f64> = (0..3).map(|k| c[k] + d[k]).collect();
        let cmd: Vec<f64> = (0..3).map(|k| c[k] - d[k]).collect();
        assign_direction(a, &r.mul_vec(&cpd));
        assign_direction(b, &r.mul_vec(&cmd));
        let apb: Vec<f64> = (0..3).map(|k| a[k] + b[k]).collect();
        let amb: Vec<f64> = (0..3).map(|k| a[k] - b[k]).collect();
        assign_direction(c, &rt.mul_vec(&apb));
        assign_direction(d, &rt.mul_vec(&amb));
        let next = quadruple_value(r, q);
        let gain = next - value;
        value = next.max(value);
        if gain < REFINE_MIN_GAIN {
            break;
        }
    }
    value
}

/// Search-based estimate of β(ρ), independent of the singular-value formula.
///
/// Draws `n_random` uniformly random direction quadruples and keeps the best
/// CHSH value. With `refine`, the best few starts are polished by coordinate
/// ascent until the gain per sweep drops below 1e−12 (at most 500 sweeps).
pub fn brute_force_beta<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    n_random: usize,
    refine: bool,
    rng: &mut R,
) -> Result<f64> {
    if n_random == 0 {
        return Err(Error::Domain(
            "brute force needs at least one random start".into(),
        ));
    }
    let r = *rho.corr_block().as_matrix();
    let mut starts: Vec<(f64, [[f64; 3]; 4])> = (0..n_random)
        .map(|_| {
            let q: [[f64; 3]; 4] = std::array::from_fn(|_| random_unit_vector(rng));
            (quadruple_value(&r, &q), q)
        })
        .collect();
    starts.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = starts[0].0;
    if refine {
        for (_, q) in starts.iter_mut().take(8) {
            best = best.max(refine_quadruple(&r, q));
        }
    }
    Ok(best)
}

/// max over unitaries U of tr(UρU†B) for a state with the given spectrum:
/// the sorted inner product Σ λ_i↓ b_i↓.
pub fn max_over_unitaries(spectrum: [f64; 4], op: &BellOperator) -> Result<f64> {
    check_probability_vector(&spectrum, 1e-9)?;
    let mut lambda = spectrum;
    lambda.sort_by(|x, y| y.total_cmp(x));
    let b = op.eigenvalues();
    Ok(lambda.iter().zip(&b).map(|(l, e)| l * e).sum())
}

/// β of the Bell-diagonal state with eigenvalues λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄:
/// √2·√((λ₂ − λ₃)² + (λ₁ − λ₄)²).
pub fn bell_diagonal_beta(lambda: [f64; 4]) -> Result<f64> {
    check_probability_vector(&lambda, 1e-9)?;
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Domain(format!(
            "eigenvalues {lambda:?} are not sorted descending"
        )));
    }
    let [l1, l2, l3, l4] = lambda;
    Ok(std::f64::consts::SQRT_2 * (l2 - l3).hypot(l1 - l4))
}
