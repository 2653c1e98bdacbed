//! Measurement-operator sets, their metric (Gram) tensor, outcome
//! distributions, dual frames, and informational-completeness classification.

use std::sync::OnceLock;

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{default_rank_tol, hermitian_eig, ComplexMatrix, LinalgError, MetricSpectrum};
use crate::quantum::{hs_inner, DensityOperator, StateError};
use crate::scalar::{lit, Scalar};

/// Errors for measurement-set construction and queries.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FrameError {
    #[error("a measurement set needs at least one operator")]
    Empty,
    #[error("operator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    OperatorShape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("{labels} labels supplied for {outcomes} outcomes")]
    LabelCount { labels: usize, outcomes: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<StateError> for FrameError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::DimensionMismatch { left, right } => {
                FrameError::DimensionMismatch { left, right }
            }
            StateError::Linalg(e) => FrameError::Linalg(e),
            other => FrameError::DimensionMismatch {
                left: other.to_string(),
                right: String::new(),
            },
        }
    }
}

/// Ordered set of measurement operators over one Hilbert space.
///
/// Outcome order is the construction order and is preserved through every
/// derived vector; nothing is ever sorted. The metric-tensor spectrum is
/// computed lazily at the default rank tolerance and memoized, so repeated
/// queries (a region scan, say) share one rank decision.
#[derive(Debug)]
pub struct MeasurementSet<T> {
    dim: usize,
    operators: Vec<ComplexMatrix<T>>,
    labels: Vec<String>,
    spectrum: OnceLock<Result<MetricSpectrum<T>, LinalgError>>,
}

impl<T: Scalar> Clone for MeasurementSet<T> {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            operators: self.operators.clone(),
            labels: self.labels.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl<T: Scalar> MeasurementSet<T> {
    /// Builds a set from operators sharing one square dimension.
    /// Labels default to `k0`, `k1`, ...
    pub fn new(
        operators: Vec<ComplexMatrix<T>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, FrameError> {
        let first = operators.first().ok_or(FrameError::Empty)?;
        let dim = first.rows();
        for (index, op) in operators.iter().enumerate() {
            if !op.is_square() || op.rows() != dim {
                return Err(FrameError::OperatorShape {
                    index,
                    rows: op.rows(),
                    cols: op.cols(),
                    dim,
                });
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != operators.len() {
                    return Err(FrameError::LabelCount {
                        labels: l.len(),
                        outcomes: operators.len(),
                    });
                }
                l
            }
            None => (0..operators.len()).map(|k| format!("k{k}")).collect(),
        };
        Ok(Self {
            dim,
            operators,
            labels,
            spectrum: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    pub fn operator(&self, k: usize) -> &ComplexMatrix<T> {
        &self.operators[k]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Cached spectral decomposition of the metric tensor at the default
    /// rank tolerance.
    pub fn metric_spectrum(&self) -> Result<&MetricSpectrum<T>, LinalgError> {
        self.spectrum
            .get_or_init(|| hermitian_eig(&metric_tensor(self), default_rank_tol()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Dimension of the metric tensor's nullspace.
    pub fn nullspace_dim(&self) -> Result<usize, LinalgError> {
        let spec = self.metric_spectrum()?;
        Ok(spec.dim() - spec.rank())
    }
}

/// POVM validation summary. `is_povm` holds exactly when all three defects
/// pass the tolerance the report was produced with.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmReport<T> {
    pub is_povm: bool,
    pub hermiticity_defect: T,
    pub min_eigenvalue: T,
    pub completeness_defect: T,
}

/// Informational-completeness classification of a measurement set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletenessClass {
    pub dim: usize,
    pub span_rank: usize,
    pub outcome_count: usize,
    /// The operators span the full operator space (`span_rank = dim^2`).
    pub is_complete: bool,
    /// The Gram matrix is singular (`span_rank < outcome_count`).
    pub is_overcomplete: bool,
}

/// Gram matrix `g[k][l] = tr(Pi_k^dagger Pi_l)` of the set's operators.
pub fn metric_tensor<T: Scalar>(set: &MeasurementSet<T>) -> ComplexMatrix<T> {
    let n = set.len();
    ComplexMatrix::from_fn(n, n, |k, l| {
        hs_inner(set.operator(k), set.operator(l)).expect("operators share one dimension")
    })
}

/// Outcome distribution `Q(k) = tr(Pi_k^dagger rho)`.
///
/// For a POVM the entries are real, nonnegative, and sum to one; for general
/// (weak) operator sets they may be complex.
pub fn outcome_distribution<T: Scalar>(
    set: &MeasurementSet<T>,
    rho: &DensityOperator<T>,
) -> Result<Vec<Complex<T>>, FrameError> {
    if rho.dim() != set.dim() {
        return Err(FrameError::DimensionMismatch {
            left: format!("set dim {}", set.dim()),
            right: format!("state dim {}", rho.dim()),
        });
    }
    set.operators()
        .iter()
        .map(|op| hs_inner(op, rho.matrix()).map_err(Into::into))
        .collect()
}

/// Frame operators `Delta_sigma(j) = sum_l (g^{-sigma})[l][j] Pi_l`.
///
/// `sigma = 0` returns the original operators unchanged (the zeroth power of
/// the metric is the identity by convention); other exponents act on the
/// range of the metric only.
pub fn dual_frame<T: Scalar>(
    set: &MeasurementSet<T>,
    sigma: T,
) -> Result<Vec<ComplexMatrix<T>>, FrameError> {
    if sigma == T::zero() {
        return Ok(set.operators().to_vec());
    }
    let spec = set.metric_spectrum()?;
    let w = spec.fractional_pseudo_power(-sigma);
    let n = set.len();
    let d = set.dim();
    let mut duals = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = ComplexMatrix::zeros(d, d);
        for l in 0..n {
            acc = &acc + &set.operator(l).scale(w.get(l, j));
        }
        duals.push(acc);
    }
    Ok(duals)
}

/// Rank of the metric tensor and the completeness flags derived from it.
pub fn classify_completeness<T: Scalar>(
    set: &MeasurementSet<T>,
) -> Result<CompletenessClass, FrameError> {
    let spec = set.metric_spectrum()?;
    let span_rank = spec.rank();
    let outcome_count = set.len();
    let dim = set.dim();
    Ok(CompletenessClass {
        dim,
        span_rank,
        outcome_count,
        is_complete: span_rank == dim * dim,
        is_overcomplete: span_rank < outcome_count,
    })
}

/// Measures how far the set is from a POVM: Hermiticity of each operator,
/// positivity of each operator, and the completeness relation `sum Pi = I`.
pub fn validate_povm<T: Scalar>(
    set: &MeasurementSet<T>,
    tol: T,
) -> Result<PovmReport<T>, FrameError> {
    let d = set.dim();
    let mut hermiticity_defect = T::zero();
    let mut min_eigenvalue = T::infinity();
    let mut total = ComplexMatrix::zeros(d, d);
    let half = Complex::new(lit::<T>(0.5), T::zero());
    for op in set.operators() {
        hermiticity_defect = hermiticity_defect.max(op.hermiticity_defect());
        // positivity read off the Hermitian part so the report stays
        // meaningful for weak (non-Hermitian) sets
        let herm = ComplexMatrix::from_fn(d, d, |r, c| (op.get(r, c) + op.get(c, r).conj()) * half);
        let spec = hermitian_eig(&herm, default_rank_tol())?;
        if let Some(&smallest) = spec.eigenvalues().last() {
            min_eigenvalue = min_eigenvalue.min(smallest);
        }
        total = &total + op;
    }
    let completeness_defect = (&total - &ComplexMatrix::identity(d)).max_abs();
    let is_povm =
        hermiticity_defect <= tol && min_eigenvalue >= -tol && completeness_defect <= tol;
    Ok(PovmReport {
        is_povm,
        hermiticity_defect,
        min_eigenvalue,
        completeness_defect,
    })
}
