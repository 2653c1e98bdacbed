//! Dense complex linear algebra: Hermitian eigendecomposition, fractional
//! pseudo-powers, and rank/nullspace extraction.
//!
//! The eigensolver is a cyclic Jacobi iteration with complex plane rotations.
//! It is deliberately simple: deterministic sweep order, no pivot searching,
//! provably convergent for Hermitian input. All matrices handled here are
//! small (dimension well below 100), where Jacobi is both fast enough and
//! bit-reproducible across runs.

use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{lit, Scalar};

/// Default relative tolerance deciding when an eigenvalue counts as zero.
///
/// An eigenvalue is treated as zero when `lambda <= tol * max(lambda_max, 1)`.
pub fn default_rank_tol<T: Scalar>() -> T {
    lit(1e-9)
}

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    /// Input to the Hermitian eigensolver failed the symmetry check.
    #[error("matrix is not Hermitian: max |M - M^dagger| = {defect:e}")]
    NonHermitianInput { defect: f64 },
    /// The Jacobi iteration did not reach the convergence threshold.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    /// A square matrix was required.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    /// Row data with uneven lengths was supplied.
    #[error("ragged row data: row {row} has {len} entries, expected {expected}")]
    RaggedRows { row: usize, len: usize, expected: usize },
    /// A nonpositive tolerance was supplied.
    #[error("tolerance must be positive, got {tol:e}")]
    InvalidTolerance { tol: f64 },
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from row data, rejecting ragged input.
    pub fn from_rows(data: Vec<Vec<Complex<T>>>) -> Result<Self, LinalgError> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for (r, row) in data.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRows {
                    row: r,
                    len: row.len(),
                    expected: cols,
                });
            }
            entries.extend(row);
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a square matrix from real row data. Test and catalog helper.
    pub fn from_real_rows(data: &[&[T]]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        Self::from_fn(rows, cols, |r, c| Complex::new(data[r][c], T::zero()))
    }

    /// Rank-one matrix `u v^dagger`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.entries[r * self.cols + c] = v;
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Complex<T> {
        debug_assert!(self.is_square());
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    /// Entrywise scaling by a complex factor.
    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Entrywise scaling by a real factor.
    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for c in 0..self.cols {
                    acc += self.get(r, c) * v[c];
                }
                acc
            })
            .collect()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.norm())
            .fold(T::zero(), T::max)
    }

    /// `max |M - M^dagger|` over entries; zero for exactly Hermitian input.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

impl<T: Scalar> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.entries[r * self.cols + c]
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.get(r, c) + a * rhs.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }
}

/// Spectral decomposition of a Hermitian matrix, with the rank decision
/// attached so that every pseudo-power derived from it shares the same cutoff.
#[derive(Debug, Clone)]
pub struct MetricSpectrum<T> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
    rank: usize,
    tolerance_used: T,
}

impl<T: Scalar> MetricSpectrum<T> {
    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as matrix columns, ordered like the eigenvalues.
    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    /// Number of eigenvalues above the zero cutoff.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Absolute cutoff below which an eigenvalue is treated as zero.
    pub fn tolerance_used(&self) -> T {
        self.tolerance_used
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn eigenvector(&self, i: usize) -> Vec<Complex<T>> {
        (0..self.dim()).map(|r| self.eigenvectors.get(r, i)).collect()
    }

    /// Fractional pseudo-power `sum_{lambda_i > cutoff} lambda_i^a v_i v_i^dagger`.
    ///
    /// Eigenvalues at or below the cutoff are mapped to zero for every
    /// exponent, so negative powers act on the range only (pseudo-inverse
    /// semantics). Tiny negative eigenvalues from roundoff are excluded by the
    /// same rule. `a = 0` therefore yields the orthogonal projector onto the
    /// range; callers that need the convention `g^0 = identity` handle that
    /// case themselves.
    pub fn fractional_pseudo_power(&self, a: T) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            if lambda <= self.tolerance_used {
                continue;
            }
            let w = lambda.powf(a);
            let v = self.eigenvector(i);
            for r in 0..n {
                for c in 0..n {
                    let acc = out.get(r, c) + v[r] * v[c].conj() * Complex::new(w, T::zero());
                    out.set(r, c, acc);
                }
            }
        }
        // exact Hermitian symmetry regardless of accumulation order
        let half = Complex::new(lit::<T>(0.5), T::zero());
        ComplexMatrix::from_fn(n, n, |r, c| (out.get(r, c) + out.get(c, r).conj()) * half)
    }

    /// Orthonormal basis of the eigenspace with eigenvalues at or below the
    /// cutoff. Empty for full-rank input.
    pub fn nullspace_basis(&self) -> Vec<Vec<Complex<T>>> {
        (0..self.dim())
            .filter(|&i| self.eigenvalues[i] <= self.tolerance_used)
            .map(|i| self.eigenvector(i))
            .collect()
    }

    /// `V diag(lambda) V^dagger`; reproduces the decomposed matrix.
    pub fn reassemble(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |r, c| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..n {
                acc += self.eigenvectors.get(r, i)
                    * self.eigenvectors.get(c, i).conj()
                    * Complex::new(self.eigenvalues[i], T::zero());
            }
            acc
        })
    }
}

const MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic Jacobi with complex plane rotations.
///
/// `tol` is the relative rank tolerance recorded in the result: an eigenvalue
/// counts as zero when `lambda <= tol * max(lambda_max, 1)`. The sweep order
/// is the row-major upper triangle and the iteration stops once the
/// off-diagonal Frobenius norm falls below `1e-12` times the input norm, so
/// the output is identical run to run.
pub fn hermitian_eig<T: Scalar>(
    m: &ComplexMatrix<T>,
    tol: T,
) -> Result<MetricSpectrum<T>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !(tol > T::zero()) {
        return Err(LinalgError::InvalidTolerance {
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = m.rows();
    let herm_gate = lit::<T>(1e-10).max(T::epsilon() * lit(16.0) * m.max_abs());
    let defect = m.hermiticity_defect();
    if defect > herm_gate {
        return Err(LinalgError::NonHermitianInput {
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Work on the exactly Hermitian part; the defect is below the gate.
    let half = Complex::new(lit::<T>(0.5), T::zero());
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (m.get(r, c) + m.get(c, r).conj()) * half);
    for i in 0..n {
        let d = a.get(i, i);
        a.set(i, i, Complex::new(d.re, T::zero()));
    }
    let mut v = ComplexMatrix::identity(n);

    let norm = a.frobenius_norm();
    let converge_tol = lit::<T>(1e-12).max(T::epsilon() * lit(4.0));
    let threshold = norm * converge_tol;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        off = (off + off).sqrt();
        if off <= threshold {
            converged = true;
            break;
        }

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq / Complex::new(mag, T::zero());
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;

                // rotation angle zeroing the (p,q) entry
                let tau = (aqq - app) / ((mag + mag));
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let cs = Complex::new(c, T::zero());
                let s_phase = phase * Complex::new(s, T::zero());
                let s_phase_conj = s_phase.conj();

                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a.get(j, p);
                    let ajq = a.get(j, q);
                    let new_jp = ajp * cs - ajq * s_phase_conj;
                    let new_jq = ajp * s_phase + ajq * cs;
                    a.set(j, p, new_jp);
                    a.set(j, q, new_jq);
                    a.set(p, j, new_jp.conj());
                    a.set(q, j, new_jq.conj());
                }
                let two = T::one() + T::one();
                let new_pp = c * c * app - two * s * c * mag + s * s * aqq;
                let new_qq = s * s * app + two * s * c * mag + c * c * aqq;
                a.set(p, p, Complex::new(new_pp, T::zero()));
                a.set(q, q, Complex::new(new_qq, T::zero()));
                a.set(p, q, Complex::new(T::zero(), T::zero()));
                a.set(q, p, Complex::new(T::zero(), T::zero()));

                for j in 0..n {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp * cs - vjq * s_phase_conj);
                    v.set(j, q, vjp * s_phase + vjq * cs);
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    // sort descending; stable order within degenerate blocks
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .re
            .partial_cmp(&a.get(i, i).re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));

    let lambda_max = eigenvalues.first().copied().unwrap_or(T::zero());
    let cutoff = tol * lambda_max.max(T::one());
    let rank = eigenvalues.iter().filter(|&&l| l > cutoff).count();

    Ok(MetricSpectrum {
        eigenvalues,
        eigenvectors,
        rank,
        tolerance_used: cutoff,
    })
}
