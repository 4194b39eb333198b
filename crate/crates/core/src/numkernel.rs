//! Dense kernels for matrices of dimension at most four.
//!
//! Everything in the toolkit lives in a 4-dimensional Hilbert space, so the
//! matrices are stored inline in fixed arrays and copied freely. Eigen- and
//! singular-value problems are solved with cyclic Jacobi sweeps, which are
//! unconditionally stable at this size.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const MAX_DIM: usize = 4;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

const MAX_SWEEPS: usize = 100;

/// Complex matrix with at most four rows and columns, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: [C64; MAX_DIM * MAX_DIM],
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows <= MAX_DIM && cols <= MAX_DIM,
            "matrix dimensions {rows}x{cols} exceed {MAX_DIM}"
        );
        Self {
            rows,
            cols,
            data: [ZERO; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(n, m, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), m, "ragged matrix rows");
            row[j]
        })
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry of |H − H†|; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// (H + H†)/2.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    /// Kronecker product; the result must still fit in 4×4.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).map(move |j| self[(i, j)]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (*self - *other).max_abs()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * MAX_DIM + j]
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        ComplexMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Real matrix with at most four rows and columns, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: [f64; MAX_DIM * MAX_DIM],
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows <= MAX_DIM && cols <= MAX_DIM,
            "matrix dimensions {rows}x{cols} exceed {MAX_DIM}"
        );
        Self {
            rows,
            cols,
            data: [0.0; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_fn(n, m, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), m, "ragged matrix rows");
            row[j]
        })
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    /// Sub-block starting at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).map(move |j| self[(i, j)]))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(f64::abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(f64::is_finite)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        assert!(self.rows == self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = *self;
        let mut det = 1.0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[(x, k)].abs().total_cmp(&a[(y, k)].abs()))
                .unwrap();
            if a[(pivot, k)] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in (k + 1)..n {
                let factor = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= factor * v;
                }
            }
        }
        det
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| C64::new(self[(i, j)], 0.0))
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * MAX_DIM + j]
    }
}

impl Mul for RealMatrix {
    type Output = RealMatrix;
    fn mul(self, rhs: RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        RealMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }
}

impl Add for RealMatrix {
    type Output = RealMatrix;
    fn add(self, rhs: RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }
}

impl Sub for RealMatrix {
    type Output = RealMatrix;
    fn sub(self, rhs: RealMatrix) -> RealMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.8} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Eigenvalues sorted descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    /// Rebuilds V·f(Λ)·V†.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.vectors * ComplexMatrix::from_real_diagonal(&mapped) * self.vectors.adjoint()
    }
}

/// Real singular value decomposition `M = left · diag(singulars) · rightᵀ`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: RealMatrix,
    /// Non-negative, sorted descending.
    pub singulars: Vec<f64>,
    pub right: RealMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> RealMatrix {
        self.left * RealMatrix::from_diagonal(&self.singulars) * self.right.transpose()
    }
}

/// Eigenvalues (descending) and eigenvectors of a Hermitian matrix of size ≤ 4.
///
/// Solved directly in complex arithmetic with cyclic Jacobi rotations: each
/// rotation first removes the phase of the pivot and then applies a real
/// Givens rotation.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_square() {
        return Err(Error::Validation(format!(
            "eigensystem of non-square {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let scale = h.max_abs().max(1.0);
    let defect = h.hermiticity_defect();
    if defect > 1e-10 * scale {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }

    let n = h.rows();
    let mut a = h.hermitian_part();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= (f64::EPSILON * scale).powi(2) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate_hermitian(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

fn jacobi_rotate_hermitian(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let b = a[(p, q)];
    let r = b.norm();
    if r == 0.0 {
        return;
    }
    let phase = b / r;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary acting on the (p, q) plane: phase removal followed by a Givens rotation.
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = phase.conj() * (-s);
    let u_qq = phase.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigensystem(h).map(|e| e.values)
}

/// Singular value decomposition of a real square matrix of size ≤ 4
/// (one-sided Jacobi).
pub fn real_svd(m: &RealMatrix) -> Result<SvdResult> {
    if m.rows() != m.cols() {
        return Err(Error::Validation(format!(
            "svd expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    let mut a = *m;
    let mut v = RealMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for k in 0..n {
                    alpha += a[(k, i)] * a[(k, i)];
                    beta += a[(k, j)] * a[(k, j)];
                    gamma += a[(k, i)] * a[(k, j)];
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let (x, y) = (a[(k, i)], a[(k, j)]);
                    a[(k, i)] = c * x - s * y;
                    a[(k, j)] = s * x + c * y;
                    let (x, y) = (v[(k, i)], v[(k, j)]);
                    v[(k, i)] = c * x - s * y;
                    v[(k, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| a[(k, j)] * a[(k, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));

    let singulars: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = RealMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let cutoff = singulars.first().copied().unwrap_or(0.0) * 1e-14;
    let mut left_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > cutoff && norms[j] > f64::MIN_POSITIVE {
            left_cols.push((0..n).map(|k| a[(k, j)] / norms[j]).collect());
        } else {
            left_cols.push(vec![0.0; n]);
            deficient.push(slot);
        }
    }
    complete_orthonormal(&mut left_cols, &deficient);
    let left = RealMatrix::from_fn(n, n, |i, j| left_cols[j][i]);

    Ok(SvdResult {
        left,
        singulars,
        right,
    })
}

/// Singular values (descending) of a complex square matrix.
///
/// One-sided Jacobi: the absolute error of each value is of order ε·‖M‖, so
/// tiny singular values are not polluted by squaring.
pub fn complex_singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Validation(
            "singular values of non-square matrix".into(),
        ));
    }
    if !m.is_finite() {
        return Err(Error::Validation("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    let mut a = *m;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..n {
                    alpha += a[(k, i)].norm_sqr();
                    beta += a[(k, j)].norm_sqr();
                    gamma += a[(k, i)].conj() * a[(k, j)];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column j by the phase of γ, then apply a real rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..n {
                    let x = a[(k, i)];
                    let y = a[(k, j)] * phase;
                    a[(k, i)] = x * c - y * s;
                    a[(k, j)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| a[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Fills the columns listed in `missing` with unit vectors orthogonal to all others.
fn complete_orthonormal(cols: &mut [Vec<f64>], missing: &[usize]) {
    let n = cols.len();
    for &slot in missing {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 0.0;
        for e in 0..n {
            let mut cand = vec![0.0; n];
            cand[e] = 1.0;
            for (k, other) in cols.iter().enumerate() {
                // Unfilled slots are still zero and drop out of the projection.
                if k == slot {
                    continue;
                }
                let dot: f64 = cand.iter().zip(other).map(|(x, y)| x * y).sum();
                for (c, o) in cand.iter_mut().zip(other) {
                    *c -= dot * o;
                }
            }
            let norm = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = Some(cand.iter().map(|x| x / norm).collect());
            }
        }
        cols[slot] = best.expect("orthonormal completion exists");
    }
}

/// Inverse square root of a Hermitian positive-definite matrix.
///
/// Fails with [`Error::SingularMarginal`] when the smallest eigenvalue is
/// below `rank_tol`.
pub fn psd_inv_sqrt(p: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem(p)?;
    let smallest = *eig.values.last().expect("non-empty spectrum");
    if smallest < rank_tol {
        return Err(Error::SingularMarginal {
            eigenvalue: smallest,
        });
    }
    Ok(eig.map_values(|x| 1.0 / x.sqrt()))
}

/// Square root of a Hermitian positive-semidefinite matrix; negative
/// eigenvalues are clipped to zero.
pub fn psd_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem(p)?;
    Ok(eig.map_values(|x| x.max(0.0).sqrt()))
}

/// Euclidean norm of a real vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}
