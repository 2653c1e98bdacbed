//! Sigma-parametrized quasiprobability vectors, operator reconstruction,
//! invisible complements of incomplete measurements, and Kirkwood-Dirac
//! distributions.

use num_complex::Complex;
use thiserror::Error;

use crate::frame::{dual_frame, outcome_distribution, FrameError, MeasurementSet};
use crate::linalg::{ComplexMatrix, LinalgError};
use crate::quantum::DensityOperator;
use crate::scalar::{lit, Scalar};

/// Errors for quasiprobability construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuasiprobError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("basis is not orthonormal: max deviation {defect:e}")]
    NotOrthonormal { defect: f64 },
    #[error("vanishing overlap <b_{b_index}|a_{a_index}>: modulus {modulus:e}")]
    VanishingOverlap {
        a_index: usize,
        b_index: usize,
        modulus: f64,
    },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Outcome-indexed quasiprobability vector together with the deconvolution
/// exponent it was produced with.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiprobVector<T> {
    sigma: T,
    entries: Vec<Complex<T>>,
    nullspace_dim: usize,
    canonical: bool,
}

impl<T: Scalar> QuasiprobVector<T> {
    pub(crate) fn new(sigma: T, entries: Vec<Complex<T>>, nullspace_dim: usize, canonical: bool) -> Self {
        Self {
            sigma,
            entries,
            nullspace_dim,
            canonical,
        }
    }

    /// Wraps externally supplied entries (a parsed file, say) so they can be
    /// fed back into [`reconstruct`]. The nullspace descriptor is unknown for
    /// such data, so the vector is marked non-canonical.
    pub fn from_entries(sigma: T, entries: Vec<Complex<T>>) -> Self {
        Self {
            sigma,
            entries,
            nullspace_dim: 0,
            canonical: false,
        }
    }

    /// Deconvolution exponent.
    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dimension of the metric nullspace, i.e. how many directions the
    /// representation is free to shift in without changing the outcomes.
    pub fn nullspace_dim(&self) -> usize {
        self.nullspace_dim
    }

    /// True when the vector is the plain pseudo-inverse solution with no
    /// nullspace shift applied.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Largest entry-wise imaginary magnitude.
    pub fn max_imag(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.im.abs())
            .fold(T::zero(), T::max)
    }
}

/// Part of a state invisible to an informationally incomplete measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Complement<T> {
    nu: ComplexMatrix<T>,
    norm: T,
}

impl<T: Scalar> Complement<T> {
    pub fn nu(&self) -> &ComplexMatrix<T> {
        &self.nu
    }

    /// Hilbert-Schmidt norm of the invisible part.
    pub fn norm(&self) -> T {
        self.norm
    }
}

/// Canonical quasiprobability `P_sigma = g^{-sigma} Q`.
///
/// For singular metrics the pseudo-inverse solution is returned: the unique
/// minimum-norm vector with no nullspace component. `sigma = 0` returns the
/// outcome distribution itself.
pub fn quasiprob<T: Scalar>(
    set: &MeasurementSet<T>,
    rho: &DensityOperator<T>,
    sigma: T,
) -> Result<QuasiprobVector<T>, QuasiprobError> {
    let q = outcome_distribution(set, rho)?;
    let spec = set.metric_spectrum()?;
    let nullspace_dim = spec.dim() - spec.rank();
    let entries = if sigma == T::zero() {
        q
    } else {
        spec.fractional_pseudo_power(-sigma).mul_vec(&q)
    };
    Ok(QuasiprobVector::new(sigma, entries, nullspace_dim, true))
}

/// Rebuilds the operator `sum_l p(l) Delta_{1-sigma}(l)` encoded by a
/// quasiprobability vector.
///
/// For informationally complete sets this is the represented state itself;
/// for incomplete sets it is the projection of the state onto the span of
/// the measurement operators, missing exactly the orthogonal complement.
pub fn reconstruct<T: Scalar>(
    set: &MeasurementSet<T>,
    p: &QuasiprobVector<T>,
) -> Result<ComplexMatrix<T>, QuasiprobError> {
    if p.len() != set.len() {
        return Err(QuasiprobError::DimensionMismatch {
            left: format!("{} outcomes", set.len()),
            right: format!("{} entries", p.len()),
        });
    }
    let duals = dual_frame(set, T::one() - p.sigma())?;
    let d = set.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (entry, dual) in p.entries().iter().zip(&duals) {
        acc = &acc + &dual.scale(*entry);
    }
    Ok(acc)
}

/// Orthogonal complement `nu = rho - sum_l P(l) Pi_l`, the part of the state
/// the measurement cannot see. Zero (up to roundoff) for complete sets.
pub fn complement<T: Scalar>(
    set: &MeasurementSet<T>,
    rho: &DensityOperator<T>,
) -> Result<Complement<T>, QuasiprobError> {
    let p = quasiprob(set, rho, T::one())?;
    let visible = reconstruct(set, &p)?;
    let nu = rho.matrix() - &visible;
    let norm = nu.frobenius_norm();
    Ok(Complement { nu, norm })
}

fn check_orthonormal<T: Scalar>(basis: &[Vec<Complex<T>>], dim: usize) -> Result<(), QuasiprobError> {
    if basis.len() != dim || basis.iter().any(|v| v.len() != dim) {
        return Err(QuasiprobError::DimensionMismatch {
            left: format!("{} vectors", basis.len()),
            right: format!("dimension {dim}"),
        });
    }
    let mut defect = T::zero();
    for (i, vi) in basis.iter().enumerate() {
        for (j, vj) in basis.iter().enumerate() {
            let mut inner = Complex::new(T::zero(), T::zero());
            for (a, b) in vi.iter().zip(vj) {
                inner += a.conj() * b;
            }
            let target = if i == j { T::one() } else { T::zero() };
            defect = defect.max((inner - Complex::new(target, T::zero())).norm());
        }
    }
    if defect > lit(1e-10) {
        return Err(QuasiprobError::NotOrthonormal {
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn inner<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Kirkwood-Dirac distribution `P(k,l) = <a_k|b_l><b_l|rho|a_k>` over two
/// orthonormal bases, flattened row-major in `(k, l)`.
///
/// Entries are genuinely complex in general; they sum to one exactly by the
/// resolution of the identity. The same numbers fall out of the generic
/// pipeline applied to [`kd_measurement_set`] at `sigma = 1`.
pub fn kirkwood_dirac<T: Scalar>(
    basis_a: &[Vec<Complex<T>>],
    basis_b: &[Vec<Complex<T>>],
    rho: &DensityOperator<T>,
) -> Result<QuasiprobVector<T>, QuasiprobError> {
    let d = rho.dim();
    check_orthonormal(basis_a, d)?;
    check_orthonormal(basis_b, d)?;
    let overlap_floor = lit::<T>(1e-10);
    let mut entries = Vec::with_capacity(d * d);
    for (k, a_k) in basis_a.iter().enumerate() {
        // rho |a_k>
        let rho_a: Vec<Complex<T>> = rho.matrix().mul_vec(a_k);
        for (l, b_l) in basis_b.iter().enumerate() {
            let ov = inner(a_k, b_l); // <a_k|b_l>
            if ov.norm() <= overlap_floor {
                return Err(QuasiprobError::VanishingOverlap {
                    a_index: k,
                    b_index: l,
                    modulus: ov.norm().to_f64().unwrap_or(0.0),
                });
            }
            let b_rho_a = inner(b_l, &rho_a); // <b_l|rho|a_k>
            entries.push(ov * b_rho_a);
        }
    }
    Ok(QuasiprobVector::new(T::one(), entries, 0, true))
}

/// Weak-measurement operator set `Pi_(k,l) = |b_l><a_k| / <a_k|b_l>` whose
/// outcome distribution and full deconvolution reproduce the Kirkwood-Dirac
/// values. The metric tensor is diagonal with entries `1/|<a_k|b_l>|^2`.
pub fn kd_measurement_set<T: Scalar>(
    basis_a: &[Vec<Complex<T>>],
    basis_b: &[Vec<Complex<T>>],
) -> Result<MeasurementSet<T>, QuasiprobError> {
    let d = basis_a.len();
    check_orthonormal(basis_a, d)?;
    check_orthonormal(basis_b, d)?;
    let overlap_floor = lit::<T>(1e-10);
    let mut operators = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for (k, a_k) in basis_a.iter().enumerate() {
        for (l, b_l) in basis_b.iter().enumerate() {
            let ov = inner(a_k, b_l);
            if ov.norm() <= overlap_floor {
                return Err(QuasiprobError::VanishingOverlap {
                    a_index: k,
                    b_index: l,
                    modulus: ov.norm().to_f64().unwrap_or(0.0),
                });
            }
            let inv = Complex::new(T::one(), T::zero()) / ov;
            let op = ComplexMatrix::from_fn(d, d, |r, c| b_l[r] * a_k[c].conj() * inv);
            operators.push(op);
            labels.push(format!("({k},{l})"));
        }
    }
    MeasurementSet::new(operators, Some(labels)).map_err(Into::into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, standard_basis_pair, BasisPairKind, CatalogId};
    use crate::frame::metric_tensor;
    use crate::quantum::{bloch_to_density, pauli_z, BlochVector};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn qubit(x: f64, y: f64, z: f64) -> DensityOperator<f64> {
        bloch_to_density(&BlochVector::new(x, y, z)).unwrap()
    }

    #[test]
    fn tetrahedron_mixed_state_full_deconvolution() {
        let set = catalog::<f64>(CatalogId::Tetrahedron);
        let p = quasiprob(&set, &qubit(0.0, 0.0, 0.0), 1.0).unwrap();
        for e in p.entries() {
            assert!((e - c(0.5, 0.0)).norm() < 1e-12);
        }
        assert!(p.is_canonical());
        assert_eq!(p.nullspace_dim(), 0);
    }

    #[test]
    fn sigma_zero_returns_outcome_distribution() {
        let set = catalog::<f64>(CatalogId::Square);
        let rho = qubit(0.2, -0.4, 0.6);
        let p = quasiprob(&set, &rho, 0.0).unwrap();
        let q = outcome_distribution(&set, &rho).unwrap();
        assert_eq!(p.entries(), &q[..]);
    }

    #[test]
    fn trine_x_polarized_state_concentrates() {
        let set = catalog::<f64>(CatalogId::Trine);
        let p = quasiprob(&set, &qubit(1.0, 0.0, 0.0), 1.0).unwrap();
        let expect = [1.5, 0.0, 0.0];
        for (e, want) in p.entries().iter().zip(expect) {
            assert!((e - c(want, 0.0)).norm() < 1e-12, "{e} vs {want}");
        }
    }

    #[test]
    fn reconstruct_complete_set_returns_state() {
        let set = catalog::<f64>(CatalogId::Tetrahedron);
        let rho = qubit(0.31, -0.44, 0.29);
        let p = quasiprob(&set, &rho, 1.0).unwrap();
        let rebuilt = reconstruct(&set, &p).unwrap();
        assert!((&rebuilt - rho.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn reconstruct_trine_drops_z_component() {
        let set = catalog::<f64>(CatalogId::Trine);
        let p = quasiprob(&set, &qubit(0.0, 0.0, 0.7), 1.0).unwrap();
        let rebuilt = reconstruct(&set, &p).unwrap();
        let mixed = ComplexMatrix::<f64>::identity(2).scale_re(0.5);
        assert!((&rebuilt - &mixed).frobenius_norm() < 1e-12);
    }

    #[test]
    fn reconstruct_zero_vector_is_zero_matrix() {
        let set = catalog::<f64>(CatalogId::Octahedron);
        let zero = QuasiprobVector::from_entries(1.0, vec![c(0.0, 0.0); 6]);
        let rebuilt = reconstruct(&set, &zero).unwrap();
        assert!(rebuilt.max_abs() < 1e-15);
    }

    #[test]
    fn reconstruct_rejects_wrong_entry_count() {
        let set = catalog::<f64>(CatalogId::Trine);
        let bad = QuasiprobVector::from_entries(1.0, vec![c(1.0, 0.0); 4]);
        assert!(matches!(
            reconstruct(&set, &bad),
            Err(QuasiprobError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complement_vanishes_for_complete_sets() {
        let set = catalog::<f64>(CatalogId::Tetrahedron);
        let nu = complement(&set, &qubit(0.3, 0.2, -0.6)).unwrap();
        assert!(nu.norm() < 1e-12);
    }

    #[test]
    fn complement_of_trine_is_z_part() {
        let set = catalog::<f64>(CatalogId::Trine);
        let z = -0.43;
        let nu = complement(&set, &qubit(0.25, 0.1, z)).unwrap();
        let expect = pauli_z::<f64>().scale_re(z / 2.0);
        assert!((nu.nu() - &expect).max_abs() < 1e-12);
    }

    #[test]
    fn complement_of_square_at_north_pole() {
        let set = catalog::<f64>(CatalogId::Square);
        let nu = complement(&set, &qubit(0.0, 0.0, 1.0)).unwrap();
        let expect = pauli_z::<f64>().scale_re(0.5);
        assert!((nu.nu() - &expect).max_abs() < 1e-12);
        assert!((nu.norm() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn complement_is_orthogonal_to_operators() {
        for id in CatalogId::ALL {
            let set = catalog::<f64>(id);
            let nu = complement(&set, &qubit(-0.2, 0.5, 0.4)).unwrap();
            for op in set.operators() {
                let v = crate::quantum::hs_inner(op, nu.nu()).unwrap();
                assert!(v.norm() < 1e-12, "{id:?}");
            }
        }
    }

    #[test]
    fn kd_plus_state_values() {
        let (a, b) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let plus = qubit(1.0, 0.0, 0.0);
        let p = kirkwood_dirac(&a, &b, &plus).unwrap();
        let expect = [0.5, 0.0, 0.5, 0.0]; // (k,l) row-major: (0,0),(0,1),(1,0),(1,1)
        for (e, want) in p.entries().iter().zip(expect) {
            assert!((e - c(want, 0.0)).norm() < 1e-12, "{e} vs {want}");
        }
    }

    #[test]
    fn kd_mixed_state_is_uniform() {
        let (a, b) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let p = kirkwood_dirac(&a, &b, &qubit(0.0, 0.0, 0.0)).unwrap();
        for e in p.entries() {
            assert!((e - c(0.25, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn kd_entries_sum_to_one() {
        let (a, b) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let p = kirkwood_dirac(&a, &b, &qubit(0.3, 0.5, -0.4)).unwrap();
        let sum: Complex<f64> = p.entries().iter().sum();
        assert!((sum - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kd_rejects_identical_bases() {
        let (a, _) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let rho = qubit(0.0, 0.0, 0.0);
        assert!(matches!(
            kirkwood_dirac(&a, &a, &rho),
            Err(QuasiprobError::VanishingOverlap { .. })
        ));
    }

    #[test]
    fn kd_rejects_non_orthonormal_basis() {
        let bad = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
        let (_, b) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let rho = qubit(0.0, 0.0, 0.0);
        assert!(matches!(
            kirkwood_dirac(&bad, &b, &rho),
            Err(QuasiprobError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn kd_set_metric_is_diagonal_two() {
        let (a, b) = standard_basis_pair::<f64>(BasisPairKind::ComputationalHadamard).unwrap();
        let set = kd_measurement_set(&a, &b).unwrap();
        assert_eq!(set.len(), 4);
        let g = metric_tensor(&set);
        for k in 0..4 {
            for l in 0..4 {
                let expect = if k == l { 2.0 } else { 0.0 };
                assert!((g.get(k, l) - c(expect, 0.0)).norm() < 1e-12);
            }
        }
        assert_eq!(set.labels()[1], "(0,1)");
    }

    #[test]
    fn kd_set_trivial_dimension_one() {
        let one = vec![vec![c(1.0, 0.0)]];
        let set = kd_measurement_set(&one, &one).unwrap();
        assert_eq!(set.len(), 1);
        let g = metric_tensor(&set);
        assert!((g.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kd_set_fourier_metric() {
        let (a, b) = standard_basis_pair::<f64>(BasisPairKind::Fourier(3)).unwrap();
        let set = kd_measurement_set(&a, &b).unwrap();
        assert_eq!(set.len(), 9);
        let g = metric_tensor(&set);
        for k in 0..9 {
            for l in 0..9 {
                let expect = if k == l { 3.0 } else { 0.0 };
                assert!((g.get(k, l) - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
