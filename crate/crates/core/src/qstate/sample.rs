//! Seeded random states, unitaries and filters.
//!
//! Stream-splitting rule: the `index`-th independent sample drawn under a
//! master `seed` uses `ChaCha20Rng::seed_from_u64(seed)` switched to stream
//! `index`. Samples are therefore reproducible individually and can be
//! generated in any order or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{BellState, DensityMatrix};
use crate::numkernel::{ComplexMatrix, RealMatrix, C64};

/// Source of per-sample generators derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generator for the `index`-th sample.
    pub fn rng(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A stream for a nested task, e.g. the probes belonging to one sample.
    pub fn child(&self, index: u64) -> SeedStream {
        SeedStream::new(self.rng(index).random())
    }
}

/// Ensembles understood by [`sample_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Projector onto a Haar-random vector.
    PureHaar,
    /// Hilbert–Schmidt measure: GG†/tr(GG†) with G complex Ginibre.
    MixedHs,
    /// Uniform simplex weights on the four Bell projectors.
    BellDiagonal,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::PureHaar => "pure-haar",
            StateKind::MixedHs => "mixed-hs",
            StateKind::BellDiagonal => "bell-diagonal",
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pure-haar" => Ok(StateKind::PureHaar),
            "mixed-hs" => Ok(StateKind::MixedHs),
            "bell-diagonal" => Ok(StateKind::BellDiagonal),
            other => Err(format!("unknown state kind '{other}'")),
        }
    }
}

/// Deterministic sample for `seed` (stream 0 of that seed).
pub fn sample_state(seed: u64, kind: StateKind) -> DensityMatrix {
    sample_state_with(&mut SeedStream::new(seed).rng(0), kind)
}

pub fn sample_state_with<R: Rng + ?Sized>(rng: &mut R, kind: StateKind) -> DensityMatrix {
    match kind {
        StateKind::PureHaar => {
            let psi: Vec<C64> = (0..4).map(|_| gaussian_complex(rng)).collect();
            DensityMatrix::from_pure(&psi).expect("Gaussian vector is non-zero")
        }
        StateKind::MixedHs => {
            let g = ginibre(rng, 4);
            DensityMatrix::normalized_unchecked(g * g.adjoint())
        }
        StateKind::BellDiagonal => {
            let w = random_simplex(rng);
            let m = BellState::ALL
                .iter()
                .zip(w)
                .fold(ComplexMatrix::zeros(4, 4), |acc, (b, x)| {
                    acc + b.projector().scale_real(x)
                });
            DensityMatrix::normalized_unchecked(m)
        }
    }
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian_complex(rng))
}

/// Uniform point on the probability simplex with four vertices.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let e: [f64; 4] = std::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
    let total: f64 = e.iter().sum();
    e.map(|x| x / total)
}

/// Haar-random n×n unitary (Gram–Schmidt on a Ginibre matrix).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Independent Haar unitaries on each qubit, returned as U_A ⊗ U_B.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    random_unitary(rng, 2).kron(&random_unitary(rng, 2))
}

/// Uniform direction in three dimensions.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-12 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniformly distributed proper rotation of R³.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> RealMatrix {
    let a = random_unit_vector(rng);
    let mut b = random_unit_vector(rng);
    let d: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    b = std::array::from_fn(|i| b[i] - d * a[i]);
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    b = b.map(|x| x / nb);
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    RealMatrix::from_fn(3, 3, |i, j| [a, b, c][j][i])
}

/// Generic 2×2 filter factor with complex Gaussian entries (invertible with
/// probability one).
pub fn random_filter_factor<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    ginibre(rng, 2)
}
