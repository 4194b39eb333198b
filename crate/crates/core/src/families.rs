//! Named state families, the curves bounding the concurrence–violation
//! region, and sampling of that region.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chsh::max_violation;
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::numkernel::{hermitian_eigenvalues, ComplexMatrix, RealMatrix, C64};
use crate::qstate::{
    check_probability_vector, pauli_pair, sample_state_with, BellState, CorrelationMatrix,
    DensityMatrix, SeedStream, StateKind,
};

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {x} outside [0, 1]")))
    }
}

/// Schmidt coefficients (λ₊, λ₋) of the pure state with concurrence `c`.
pub fn schmidt_coefficients(c: f64) -> Result<(f64, f64)> {
    check_unit_interval("concurrence", c)?;
    let (p, m) = ((1.0 + c).sqrt(), (1.0 - c).sqrt());
    Ok(((p + m) / 2.0, (p - m) / 2.0))
}

/// λ₊|00⟩ + λ₋|11⟩ with concurrence `c`.
pub fn pure_schmidt(c: f64) -> Result<DensityMatrix> {
    let (lp, lm) = schmidt_coefficients(c)?;
    let z = C64::new(0.0, 0.0);
    DensityMatrix::from_pure(&[C64::new(lp, 0.0), z, z, C64::new(lm, 0.0)])
}

/// p|Φ⁺⟩⟨Φ⁺| + (1 − p) I/4.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let m = BellState::PhiPlus.projector().scale_real(p)
        + ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    Ok(DensityMatrix::normalized_unchecked(m))
}

/// ½ [[0,0,0,0],[0,1−a,C,0],[0,C,1+a,0],[0,0,0,0]], requiring |a| ≤ √(1 − C²).
///
/// a = 0 gives a Bell-diagonal state and |a| = √(1 − C²) a pure one.
pub fn rank2_family(c: f64, a: f64) -> Result<DensityMatrix> {
    check_unit_interval("concurrence", c)?;
    let bound = (1.0 - c * c).sqrt();
    if !(a.abs() <= bound + 1e-12) {
        return Err(Error::Domain(format!(
            "|a| = {} exceeds sqrt(1 - C^2) = {bound}",
            a.abs()
        )));
    }
    let r = |x: f64| C64::new(x / 2.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let m = ComplexMatrix::from_rows(&[
        [z, z, z, z],
        [z, r(1.0 - a), r(c), z],
        [z, r(c), r(1.0 + a), z],
        [z, z, z, z],
    ]);
    // Clamp the boundary case |a| slightly above the bound back onto PSD.
    DensityMatrix::new(m)
}

/// C|Φ⁺⟩⟨Φ⁺| + (1 − C)|01⟩⟨01|, for C ∈ (0, 1].
pub fn mems(c: f64) -> Result<DensityMatrix> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Domain(format!("concurrence {c} outside (0, 1]")));
    }
    let m = BellState::PhiPlus.projector().scale_real(c)
        + DensityMatrix::basis(1).matrix().scale_real(1.0 - c);
    Ok(DensityMatrix::normalized_unchecked(m))
}

/// Bell-diagonal state with the spectrum sorted descending onto
/// (Φ⁺, Φ⁻, Ψ⁺, Ψ⁻); the largest β among all states with that spectrum.
pub fn spectrum_maximizer(spectrum: [f64; 4]) -> Result<DensityMatrix> {
    check_probability_vector(&spectrum, 1e-9)?;
    let mut sorted = spectrum;
    sorted.sort_by(|a, b| b.total_cmp(a));
    DensityMatrix::bell_diagonal(sorted)
}

/// ¼(I⊗I + a I⊗σ_z + b σ_z⊗I + x σ_x⊗σ_x + y σ_y⊗σ_y + z σ_z⊗σ_z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalForm {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
    pub b: f64,
}

impl ExtremalForm {
    pub fn new(x: f64, y: f64, z: f64, a: f64, b: f64) -> Self {
        Self { x, y, z, a, b }
    }

    /// Smallest slack among −1 ≤ z ≤ 1 and the two positivity constraints
    /// (1 + z)² − (a + b)² ≥ (x − y)², (1 − z)² − (a − b)² ≥ (x + y)².
    pub fn feasibility_margin(&self) -> f64 {
        let Self { x, y, z, a, b } = *self;
        let plus = (1.0 + z).powi(2) - (a + b).powi(2) - (x - y).powi(2);
        let minus = (1.0 - z).powi(2) - (a - b).powi(2) - (x + y).powi(2);
        plus.min(minus).min(1.0 - z.abs())
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        [self.x, self.y, self.z, self.a, self.b]
            .iter()
            .all(|v| v.is_finite())
            && self.feasibility_margin() >= -tol
    }

    pub fn correlation_table(&self) -> RealMatrix {
        RealMatrix::from_rows(&[
            [1.0, 0.0, 0.0, self.a],
            [0.0, self.x, 0.0, 0.0],
            [0.0, 0.0, self.y, 0.0],
            [self.b, 0.0, 0.0, self.z],
        ])
    }

    /// ½ max[0, |x − y| − √((1 − z)² − (a − b)²), |x + y| − √((1 + z)² − (a + b)²)].
    pub fn concurrence_formula(&self) -> f64 {
        let Self { x, y, z, a, b } = *self;
        let root = |v: f64| v.max(0.0).sqrt();
        let first = (x - y).abs() - root((1.0 - z).powi(2) - (a - b).powi(2));
        let second = (x + y).abs() - root((1.0 + z).powi(2) - (a + b).powi(2));
        0.5 * first.max(second).max(0.0)
    }
}

/// Uniform draw from the feasible set inside [−1, 1]⁵ (rejection sampling).
pub fn random_extremal_form<R: rand::Rng + ?Sized>(rng: &mut R) -> ExtremalForm {
    loop {
        let mut u = || 2.0 * rng.random::<f64>() - 1.0;
        let e = ExtremalForm::new(u(), u(), u(), u(), u());
        if e.feasibility_margin() > 0.0 {
            return e;
        }
    }
}

/// The state of `e` together with its closed-form concurrence.
pub fn extremal_form_state(e: &ExtremalForm) -> Result<(DensityMatrix, f64)> {
    let m = [
        (0, 0, 1.0),
        (0, 3, e.a),
        (3, 0, e.b),
        (1, 1, e.x),
        (2, 2, e.y),
        (3, 3, e.z),
    ]
    .iter()
    .fold(ComplexMatrix::zeros(4, 4), |acc, &(mu, nu, w)| {
        acc + pauli_pair(mu, nu).scale_real(w / 4.0)
    });
    if !e.is_feasible(1e-12) {
        let min_eigenvalue = if m.is_finite() {
            hermitian_eigenvalues(&m).map(|v| v[3]).unwrap_or(f64::NAN)
        } else {
            f64::NAN
        };
        return Err(Error::UnphysicalCorrelations { min_eigenvalue });
    }
    CorrelationMatrix::new(e.correlation_table())?;
    Ok((DensityMatrix::new(m)?, e.concurrence_formula()))
}

/// Curves bounding β as a function of the concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCurve {
    /// √(1 + C²), reached by pure states.
    Upper,
    /// √2·C, reached by `mems` for C ≥ 1/3.
    Lower,
    /// Local-realistic bound 1.
    Threshold,
    /// √2(2C + 1)/3, lower bound for Bell-diagonal states, reached by
    /// Werner states.
    BellDiagonalLower,
}

impl BoundCurve {
    pub const ALL: [BoundCurve; 4] = [
        BoundCurve::Upper,
        BoundCurve::Lower,
        BoundCurve::Threshold,
        BoundCurve::BellDiagonalLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundCurve::Upper => "upper",
            BoundCurve::Lower => "lower",
            BoundCurve::Threshold => "threshold",
            BoundCurve::BellDiagonalLower => "bell-diagonal-lower",
        }
    }

    pub fn eval(self, c: f64) -> f64 {
        match self {
            BoundCurve::Upper => (1.0 + c * c).sqrt(),
            BoundCurve::Lower => SQRT_2 * c,
            BoundCurve::Threshold => 1.0,
            BoundCurve::BellDiagonalLower => SQRT_2 * (2.0 * c + 1.0) / 3.0,
        }
    }
}

pub fn bound_curves() -> [BoundCurve; 4] {
    BoundCurve::ALL
}

/// Ensembles and one-parameter lines for [`region_sample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    MixedHs,
    PureHaar,
    BellDiagonal,
    /// Werner states with C evenly spaced on [0, 1].
    WernerLine,
    /// `mems` with C evenly spaced on [1/3, 1].
    MemsLine,
    /// `pure_schmidt` with C evenly spaced on [0, 1].
    PureLine,
}

impl RegionKind {
    pub const ALL: [RegionKind; 6] = [
        RegionKind::MixedHs,
        RegionKind::PureHaar,
        RegionKind::BellDiagonal,
        RegionKind::WernerLine,
        RegionKind::MemsLine,
        RegionKind::PureLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionKind::MixedHs => "mixed-hs",
            RegionKind::PureHaar => "pure-haar",
            RegionKind::BellDiagonal => "bell-diagonal",
            RegionKind::WernerLine => "werner-line",
            RegionKind::MemsLine => "mems-line",
            RegionKind::PureLine => "pure-line",
        }
    }

    fn ensemble(self) -> Option<StateKind> {
        match self {
            RegionKind::MixedHs => Some(StateKind::MixedHs),
            RegionKind::PureHaar => Some(StateKind::PureHaar),
            RegionKind::BellDiagonal => Some(StateKind::BellDiagonal),
            _ => None,
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown region kind '{s}'")))
    }
}

/// One point of the concurrence–violation region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionRecord {
    pub kind: RegionKind,
    pub concurrence: f64,
    pub beta: f64,
    pub purity: f64,
    pub entropy: f64,
}

impl RegionRecord {
    pub fn of_state(kind: RegionKind, rho: &DensityMatrix) -> Self {
        Self {
            kind,
            concurrence: concurrence(rho).value,
            beta: max_violation(rho).beta,
            purity: rho.purity(),
            entropy: rho.entropy(),
        }
    }
}

fn grid(i: usize, n: usize, lo: f64, hi: f64) -> f64 {
    if n == 1 {
        hi
    } else {
        (lo + (hi - lo) * i as f64 / (n - 1) as f64).min(hi)
    }
}

/// State `index` of a region sample; ensemble draws use stream `index` of
/// `seed`, lines ignore the seed.
pub fn region_state(seed: u64, index: usize, n: usize, kind: RegionKind) -> DensityMatrix {
    match (kind.ensemble(), kind) {
        (Some(ensemble), _) => {
            sample_state_with(&mut SeedStream::new(seed).rng(index as u64), ensemble)
        }
        (None, RegionKind::WernerLine) => {
            let c = grid(index, n, 0.0, 1.0);
            werner((2.0 * c + 1.0) / 3.0).expect("p in [1/3, 1]")
        }
        (None, RegionKind::MemsLine) => {
            mems(grid(index, n, 1.0 / 3.0, 1.0)).expect("C in [1/3, 1]")
        }
        (None, _) => pure_schmidt(grid(index, n, 0.0, 1.0)).expect("C in [0, 1]"),
    }
}

/// `n` records for `kind`, identical for identical `(seed, n, kind)`
/// regardless of thread count.
pub fn region_sample(seed: u64, n: usize, kind: RegionKind) -> Vec<RegionRecord> {
    (0..n)
        .into_par_iter()
        .map(|i| RegionRecord::of_state(kind, &region_state(seed, i, n, kind)))
        .collect()
}

pub const REGION_CSV_HEADER: &str = "kind,C,beta,purity,entropy";

pub fn write_region_csv<W: Write>(out: &mut W, records: &[RegionRecord]) -> io::Result<()> {
    writeln!(out, "{REGION_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{:.15e},{:.15e},{:.15e},{:.15e}",
            r.kind, r.concurrence, r.beta, r.purity, r.entropy
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::bell_diagonal_beta;
    use crate::qstate::random_unitary;
    use rand::Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pure_schmidt_examples() {
        let bell = pure_schmidt(1.0).unwrap();
        assert!(
            bell.matrix()
                .max_abs_diff(DensityMatrix::bell(BellState::PhiPlus).matrix())
                < 1e-15
        );
        assert!(close(max_violation(&bell).beta, SQRT_2, 1e-12));

        let product = pure_schmidt(0.0).unwrap();
        assert!(
            product
                .matrix()
                .max_abs_diff(DensityMatrix::basis(0).matrix())
                < 1e-15
        );
        assert!(close(max_violation(&product).beta, 1.0, 1e-12));

        let rho = pure_schmidt(0.6).unwrap();
        assert!(close(concurrence(&rho).value, 0.6, 1e-9));
        assert!(close(max_violation(&rho).beta, 1.16619, 1e-5));
        assert!(close(max_violation(&rho).beta, 1.36f64.sqrt(), 1e-9));

        assert!(matches!(pure_schmidt(1.1), Err(Error::Domain(_))));
        assert!(pure_schmidt(-0.1).is_err());
    }

    #[test]
    fn werner_examples() {
        let bell = werner(1.0).unwrap();
        assert!(
            bell.matrix()
                .max_abs_diff(DensityMatrix::bell(BellState::PhiPlus).matrix())
                < 1e-15
        );
        let mixed = werner(0.0).unwrap();
        assert!(close(concurrence(&mixed).value, 0.0, 1e-12));
        assert_eq!(max_violation(&mixed).beta, 0.0);

        let rho = werner(0.9).unwrap();
        let c = concurrence(&rho).value;
        let beta = max_violation(&rho).beta;
        assert!(close(c, 0.85, 1e-9));
        assert!(close(beta, 1.27279, 1e-5));
        assert!(close(beta, BoundCurve::BellDiagonalLower.eval(c), 1e-9));
        assert!(werner(1.5).is_err());
    }

    #[test]
    fn rank2_family_examples() {
        let bell_diag = rank2_family(0.6, 0.0).unwrap();
        assert!(crate::filtering::is_bell_diagonal(&bell_diag, 1e-12));
        assert!(close(max_violation(&bell_diag).beta, 1.16619, 1e-5));

        let pure = rank2_family(0.6, 0.8).unwrap();
        assert!(close(pure.purity(), 1.0, 1e-12));

        let rho = rank2_family(0.6, 0.3).unwrap();
        assert!(close(concurrence(&rho).value, 0.6, 1e-9));
        assert!(close(max_violation(&rho).beta, 1.36f64.sqrt(), 1e-9));

        assert!(matches!(rank2_family(0.6, 0.9), Err(Error::Domain(_))));
        assert!(rank2_family(1.2, 0.0).is_err());
    }

    #[test]
    fn rank2_family_matches_pure_state_violation() {
        let mut rng = SeedStream::new(40).rng(0);
        for _ in 0..200 {
            let c: f64 = rng.random();
            let bound = (1.0 - c * c).sqrt();
            let a = bound * (2.0 * rng.random::<f64>() - 1.0);
            let rho = rank2_family(c, a).unwrap();
            assert!(close(concurrence(&rho).value, c, 1e-9));
            assert!(close(max_violation(&rho).beta, (1.0 + c * c).sqrt(), 1e-9));
        }
    }

    #[test]
    fn mems_examples() {
        assert!(close(
            max_violation(&mems(1.0).unwrap()).beta,
            SQRT_2,
            1e-12
        ));
        assert!(close(
            max_violation(&mems(0.8).unwrap()).beta,
            1.13137,
            1e-5
        ));
        let low = max_violation(&mems(0.6).unwrap()).beta;
        assert!(close(low, 0.84853, 1e-5) && low < 1.0);
        for k in 0..=50 {
            let c = 1.0 / 3.0 + (2.0 / 3.0) * k as f64 / 50.0;
            let rho = mems(c).unwrap();
            assert!(close(concurrence(&rho).value, c, 1e-9));
            assert!(close(max_violation(&rho).beta, SQRT_2 * c, 1e-9));
        }
        assert!(mems(0.0).is_err());
        assert!(mems(1.01).is_err());
    }

    #[test]
    fn extremal_form_examples() {
        let e = ExtremalForm::new(0.6, 0.6, -0.6, 0.2, 0.2);
        let (rho, c) = extremal_form_state(&e).unwrap();
        assert!(close(c, 0.6, 1e-12));
        assert!(close(concurrence(&rho).value, 0.6, 1e-8));
        assert!(close(max_violation(&rho).beta, SQRT_2 * 0.6, 1e-9));

        // (1, 1, 1) is not a state; (1, −1, 1) is |Φ⁺⟩.
        assert!(matches!(
            extremal_form_state(&ExtremalForm::new(1.0, 1.0, 1.0, 0.0, 0.0)),
            Err(Error::UnphysicalCorrelations { .. })
        ));
        let (bell, c) = extremal_form_state(&ExtremalForm::new(1.0, -1.0, 1.0, 0.0, 0.0)).unwrap();
        assert!(close(c, 1.0, 1e-12));
        assert!(
            bell.matrix()
                .max_abs_diff(DensityMatrix::bell(BellState::PhiPlus).matrix())
                < 1e-12
        );
    }

    #[test]
    fn extremal_form_constraints_are_positivity() {
        let mut rng = SeedStream::new(41).rng(0);
        for _ in 0..2000 {
            let mut u = || 2.0 * rng.random::<f64>() - 1.0;
            let e = ExtremalForm::new(u(), u(), u(), u(), u());
            let m = [
                (0, 0, 1.0),
                (0, 3, e.a),
                (3, 0, e.b),
                (1, 1, e.x),
                (2, 2, e.y),
                (3, 3, e.z),
            ]
            .iter()
            .fold(ComplexMatrix::zeros(4, 4), |acc, &(mu, nu, w)| {
                acc + pauli_pair(mu, nu).scale_real(w / 4.0)
            });
            let psd = hermitian_eigenvalues(&m).unwrap()[3] >= -1e-12;
            if (e.feasibility_margin().abs()) > 1e-9 {
                assert_eq!(e.is_feasible(0.0), psd, "{e:?}");
            }
        }
    }

    #[test]
    fn bound_curve_examples() {
        assert!(close(BoundCurve::Upper.eval(1.0), SQRT_2, 1e-15));
        assert!(close(BoundCurve::Lower.eval(1.0), SQRT_2, 1e-15));
        assert!(close(
            BoundCurve::BellDiagonalLower.eval(1.0),
            SQRT_2,
            1e-15
        ));
        for curve in bound_curves() {
            let vals: Vec<f64> = (0..=100).map(|k| curve.eval(k as f64 / 100.0)).collect();
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            assert!(vals.iter().all(|v| (0.0..=SQRT_2 + 1e-15).contains(v)));
        }
    }

    #[test]
    fn spectrum_maximizer_examples() {
        let bell = spectrum_maximizer([0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(close(max_violation(&bell).beta, SQRT_2, 1e-12));
        let mixed = spectrum_maximizer([0.25; 4]).unwrap();
        assert!(close(max_violation(&mixed).beta, 0.0, 1e-12));
        assert!(matches!(
            spectrum_maximizer([0.5, 0.5, 0.5, -0.5]),
            Err(Error::Validation(_)) | Err(Error::Domain(_))
        ));

        let spectrum = [0.5, 0.25, 0.15, 0.1];
        let best = spectrum_maximizer(spectrum).unwrap();
        let beta = max_violation(&best).beta;
        assert!(close(beta, bell_diagonal_beta(spectrum).unwrap(), 1e-12));
        let mut rng = SeedStream::new(42).rng(0);
        for _ in 0..200 {
            let rotated = best.conjugate_by(&random_unitary(&mut rng, 4));
            assert!(max_violation(&rotated).beta <= beta + 1e-9);
        }
    }

    #[test]
    fn region_lines_follow_their_curves() {
        for r in region_sample(0, 100, RegionKind::PureLine) {
            assert!(close(r.beta, BoundCurve::Upper.eval(r.concurrence), 1e-9));
        }
        for r in region_sample(0, 100, RegionKind::WernerLine) {
            assert!(close(
                r.beta,
                BoundCurve::BellDiagonalLower.eval(r.concurrence),
                1e-9
            ));
        }
        for r in region_sample(0, 100, RegionKind::MemsLine) {
            assert!(close(r.beta, BoundCurve::Lower.eval(r.concurrence), 1e-9));
        }
    }

    #[test]
    fn region_sample_stays_inside_bounds_and_is_deterministic() {
        let records = region_sample(7, 2000, RegionKind::MixedHs);
        assert_eq!(records, region_sample(7, 2000, RegionKind::MixedHs));
        assert_ne!(records, region_sample(8, 2000, RegionKind::MixedHs));
        for r in &records {
            assert!(r.beta >= BoundCurve::Lower.eval(r.concurrence) - 1e-9);
            assert!(r.beta <= BoundCurve::Upper.eval(r.concurrence) + 1e-9);
        }
    }

    #[test]
    fn bell_diagonal_band() {
        for r in region_sample(3, 2000, RegionKind::BellDiagonal) {
            assert!(r.beta <= BoundCurve::Upper.eval(r.concurrence) + 1e-9);
            if r.concurrence > 0.0 {
                assert!(r.beta >= BoundCurve::BellDiagonalLower.eval(r.concurrence) - 1e-9);
            }
        }
        // The maximally mixed state is Bell diagonal but below the band.
        assert!(BoundCurve::BellDiagonalLower.eval(0.0) > 0.0);
    }

    #[test]
    fn mems_entropy_is_maximal_at_fixed_concurrence() {
        let stream = SeedStream::new(43);
        let mut compared = 0;
        for i in 0..20_000 {
            let rho = sample_state_with(&mut stream.rng(i), StateKind::MixedHs);
            let c = concurrence(&rho).value;
            if c >= 2.0 / 3.0 {
                compared += 1;
                assert!(rho.entropy() <= mems(c).unwrap().entropy() + 1e-6);
            }
        }
        // Pure-state lines contribute points near C = 1 as well.
        for r in region_sample(0, 50, RegionKind::PureLine) {
            if r.concurrence >= 2.0 / 3.0 {
                assert!(r.entropy <= mems(r.concurrence).unwrap().entropy() + 1e-6);
            }
        }
        assert!(compared > 0);
    }

    #[test]
    fn werner_entropy_exceeds_mems_below_two_thirds() {
        let c = 0.6;
        let w = werner((2.0 * c + 1.0) / 3.0).unwrap();
        assert!(close(concurrence(&w).value, c, 1e-9));
        assert!(w.entropy() > mems(c).unwrap().entropy());
    }

    #[test]
    fn csv_layout() {
        let records = region_sample(0, 3, RegionKind::PureLine);
        let mut buf = Vec::new();
        write_region_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,C,beta,purity,entropy");
        assert_eq!(lines.len(), 4);
        let fields: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(fields[0], "pure-line");
        assert!(close(fields[1].parse::<f64>().unwrap(), 1.0, 1e-12));
        assert!(fields[1].len() >= 16);
    }

    #[test]
    fn region_kind_names_round_trip() {
        for k in RegionKind::ALL {
            assert_eq!(k.name().parse::<RegionKind>().unwrap(), k);
        }
        assert!("werner".parse::<RegionKind>().is_err());
    }
}
