//! Density operators, Bloch-vector conversions, and the Hilbert-Schmidt
//! inner product.

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{hermitian_eig, ComplexMatrix, LinalgError};
use crate::scalar::{lit, Scalar};

/// A single invariant a candidate density matrix failed.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityViolation {
    NotHermitian { defect: f64 },
    TraceNotOne { defect: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl std::fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotHermitian { defect } => write!(f, "not Hermitian (defect {defect:e})"),
            Self::TraceNotOne { defect } => write!(f, "trace differs from one by {defect:e}"),
            Self::NotPsd { min_eigenvalue } => {
                write!(f, "not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

/// Errors for state handling and conversions.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum StateError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("Bloch vector lies outside the unit ball: |v| = {norm}")]
    OutsideBall { norm: f64 },
    #[error("operation requires a qubit state, got dimension {dim}")]
    WrongDimension { dim: usize },
    #[error("not a density operator: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidDensity { violations: Vec<DensityViolation> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Trace-one positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T> {
    matrix: ComplexMatrix<T>,
    dim: usize,
}

impl<T: Scalar> DensityOperator<T> {
    /// Wraps a matrix without validation; the caller guarantees Hermiticity,
    /// unit trace, and positive semidefiniteness. Use [`validate_density`]
    /// for untrusted input.
    pub fn new_unchecked(matrix: ComplexMatrix<T>) -> Self {
        debug_assert!(matrix.is_square());
        let dim = matrix.rows();
        Self { matrix, dim }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> T {
        let sq = &self.matrix * &self.matrix;
        sq.trace().re
    }
}

/// Qubit state coordinates in the Pauli expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

pub fn pauli_x<T: Scalar>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[T::zero(), T::one()], &[T::one(), T::zero()]])
}

pub fn pauli_y<T: Scalar>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, Complex::new(T::zero(), -T::one()));
    m.set(1, 0, Complex::new(T::zero(), T::one()));
    m
}

pub fn pauli_z<T: Scalar>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real_rows(&[&[T::one(), T::zero()], &[T::zero(), -T::one()]])
}

/// Hilbert-Schmidt inner product `tr(A^dagger B)`.
///
/// Conjugate-symmetric: `hs_inner(a, b) = conj(hs_inner(b, a))`.
pub fn hs_inner<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<Complex<T>, StateError> {
    if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(StateError::DimensionMismatch {
            left: format!("{}x{}", a.rows(), a.cols()),
            right: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.entries().iter().zip(b.entries()) {
        acc += x.conj() * y;
    }
    Ok(acc)
}

/// Builds the qubit density matrix `(1/2)(I + x sx + y sy + z sz)`.
pub fn bloch_to_density<T: Scalar>(v: &BlochVector<T>) -> Result<DensityOperator<T>, StateError> {
    let norm = v.norm();
    if norm > T::one() + lit(1e-9) {
        return Err(StateError::OutsideBall {
            norm: norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = lit::<T>(0.5);
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex::new(half * (T::one() + v.z), T::zero()));
    m.set(0, 1, Complex::new(half * v.x, -half * v.y));
    m.set(1, 0, Complex::new(half * v.x, half * v.y));
    m.set(1, 1, Complex::new(half * (T::one() - v.z), T::zero()));
    Ok(DensityOperator::new_unchecked(m))
}

/// Pauli expectation values `(tr(rho sx), tr(rho sy), tr(rho sz))` of a qubit state.
pub fn density_to_bloch<T: Scalar>(rho: &DensityOperator<T>) -> Result<BlochVector<T>, StateError> {
    if rho.dim() != 2 {
        return Err(StateError::WrongDimension { dim: rho.dim() });
    }
    let m = rho.matrix();
    let x = (m.get(0, 1) + m.get(1, 0)).re;
    let y = (m.get(1, 0) - m.get(0, 1)).im;
    let z = (m.get(0, 0) - m.get(1, 1)).re;
    Ok(BlochVector::new(x, y, z))
}

/// Checks Hermiticity, unit trace, and positive semidefiniteness within `tol`,
/// reporting every violated invariant at once.
pub fn validate_density<T: Scalar>(
    m: &ComplexMatrix<T>,
    tol: T,
) -> Result<DensityOperator<T>, StateError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let mut violations = Vec::new();

    let herm = m.hermiticity_defect();
    if herm > tol {
        violations.push(DensityViolation::NotHermitian {
            defect: herm.to_f64().unwrap_or(f64::NAN),
        });
    }

    let trace = m.trace();
    let trace_defect = (trace - Complex::new(T::one(), T::zero())).norm();
    if trace_defect > tol {
        violations.push(DensityViolation::TraceNotOne {
            defect: trace_defect.to_f64().unwrap_or(f64::NAN),
        });
    }

    // PSD check on the Hermitian part; boundary (pure) states are fine here,
    // which is why this is an eigenvalue check and not a Cholesky attempt.
    let half = Complex::new(lit::<T>(0.5), T::zero());
    let herm_part =
        ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| (m.get(r, c) + m.get(c, r).conj()) * half);
    let spec = hermitian_eig(&herm_part, crate::linalg::default_rank_tol())?;
    let min_eig = spec
        .eigenvalues()
        .last()
        .copied()
        .unwrap_or_else(T::zero);
    if min_eig < -tol {
        violations.push(DensityViolation::NotPsd {
            min_eigenvalue: min_eig.to_f64().unwrap_or(f64::NAN),
        });
    }

    if violations.is_empty() {
        Ok(DensityOperator::new_unchecked(m.clone()))
    } else {
        Err(StateError::InvalidDensity { violations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn hs_inner_identity_pair() {
        let id = ComplexMatrix::<f64>::identity(2);
        let v = hs_inner(&id, &id).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hs_inner_projector_forms_agree() {
        let p = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let q = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!((hs_inner(&p, &q).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hs_inner_pauli_orthogonality() {
        let v = hs_inner(&pauli_x::<f64>(), &pauli_y::<f64>()).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn hs_inner_conjugate_symmetry() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(0.3, 0.1), c(-0.2, 0.5)],
            vec![c(0.0, -0.4), c(1.1, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(vec![
            vec![c(-0.9, 0.2), c(0.4, 0.4)],
            vec![c(0.6, 0.0), c(0.0, -1.3)],
        ])
        .unwrap();
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn bloch_origin_is_maximally_mixed() {
        let rho = bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]);
        assert_eq!(rho.matrix(), &expect);
    }

    #[test]
    fn bloch_poles_match_printed_matrices() {
        let north = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(
            north.matrix(),
            &ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])
        );
        let plus = bloch_to_density(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(
            plus.matrix(),
            &ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
        );
    }

    #[test]
    fn bloch_rejects_outside_ball() {
        match bloch_to_density(&BlochVector::new(1.2, 0.0, 0.0)) {
            Err(StateError::OutsideBall { norm }) => assert!((norm - 1.2).abs() < 1e-12),
            other => panic!("expected OutsideBall, got {other:?}"),
        }
    }

    #[test]
    fn density_to_bloch_examples() {
        let mixed = bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        let v = density_to_bloch(&mixed).unwrap();
        assert_eq!((v.x, v.y, v.z), (0.0, 0.0, 0.0));

        let zero_state = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let v = density_to_bloch(&zero_state).unwrap();
        assert_eq!((v.x, v.y, v.z), (0.0, 0.0, 1.0));

        // y-polarized state written out by hand
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.5, 0.0), c(0.0, -0.5)],
            vec![c(0.0, 0.5), c(0.5, 0.0)],
        ])
        .unwrap();
        let rho = DensityOperator::new_unchecked(m);
        let v = density_to_bloch(&rho).unwrap();
        assert!((v.x.abs()) < 1e-15 && (v.y - 1.0).abs() < 1e-15 && v.z.abs() < 1e-15);
    }

    #[test]
    fn density_to_bloch_rejects_non_qubit() {
        let rho = DensityOperator::new_unchecked(ComplexMatrix::<f64>::identity(3).scale_re(1.0 / 3.0));
        assert!(matches!(
            density_to_bloch(&rho),
            Err(StateError::WrongDimension { dim: 3 })
        ));
    }

    #[test]
    fn validate_density_accepts_mixed_state() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]);
        assert!(validate_density(&m, 1e-10).is_ok());
    }

    #[test]
    fn validate_density_flags_negative_eigenvalue() {
        let m = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]);
        match validate_density(&m, 1e-10) {
            Err(StateError::InvalidDensity { violations }) => {
                assert_eq!(violations.len(), 1);
                assert!(matches!(
                    violations[0],
                    DensityViolation::NotPsd { min_eigenvalue } if (min_eigenvalue + 0.5).abs() < 1e-12
                ));
            }
            other => panic!("expected InvalidDensity, got {other:?}"),
        }
    }

    #[test]
    fn validate_density_reports_all_violations() {
        // traceless and indefinite at once
        match validate_density(&pauli_x::<f64>(), 1e-10) {
            Err(StateError::InvalidDensity { violations }) => {
                assert!(violations
                    .iter()
                    .any(|v| matches!(v, DensityViolation::TraceNotOne { .. })));
                assert!(violations
                    .iter()
                    .any(|v| matches!(v, DensityViolation::NotPsd { .. })));
            }
            other => panic!("expected InvalidDensity, got {other:?}"),
        }
    }

    #[test]
    fn purity_of_pure_and_mixed_states() {
        let pure = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-14);
        let mixed = bloch_to_density(&BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!((mixed.purity() - 0.5).abs() < 1e-14);
    }
}
