//! Exact constructors for four standard qubit measurement geometries and the
//! basis pairs used for Kirkwood-Dirac distributions.
//!
//! Every matrix entry is assembled from closed-form expressions (square
//! roots and rationals), never from rounded decimal literals, so golden
//! comparisons against the known Gram matrices hold at machine precision.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use thiserror::Error;

use crate::frame::MeasurementSet;
use crate::linalg::ComplexMatrix;
use crate::scalar::{lit, Scalar};

/// Errors for catalog lookups and basis-pair construction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog id `{name}` (expected tetrahedron, trine, octahedron, or square)")]
    UnknownCatalogId { name: String },
    #[error("fourier basis pair needs dimension >= 2, got {dim}")]
    InvalidDimension { dim: usize },
    #[error("degenerate basis pair: overlap modulus {modulus:e} below 1e-10")]
    DegenerateBasis { modulus: f64 },
}

/// The four built-in qubit measurement sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogId {
    /// Symmetric informationally complete four-outcome POVM.
    Tetrahedron,
    /// Three equatorial states; blind to the z axis.
    Trine,
    /// Six Pauli eigenstates; informationally overcomplete.
    Octahedron,
    /// Four equatorial states; incomplete and overcomplete at once.
    Square,
}

impl CatalogId {
    pub const ALL: [CatalogId; 4] = [
        CatalogId::Tetrahedron,
        CatalogId::Trine,
        CatalogId::Octahedron,
        CatalogId::Square,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogId::Tetrahedron => "tetrahedron",
            CatalogId::Trine => "trine",
            CatalogId::Octahedron => "octahedron",
            CatalogId::Square => "square",
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        match s {
            "tetrahedron" => Ok(CatalogId::Tetrahedron),
            "trine" => Ok(CatalogId::Trine),
            "octahedron" => Ok(CatalogId::Octahedron),
            "square" => Ok(CatalogId::Square),
            other => Err(CatalogError::UnknownCatalogId {
                name: other.to_string(),
            }),
        }
    }
}

/// Basis pairs for Kirkwood-Dirac constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisPairKind {
    /// Computational basis against the Hadamard basis (qubits).
    ComputationalHadamard,
    /// Computational basis against the discrete Fourier basis in dimension `d`.
    Fourier(usize),
}

fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Cube root of unity `exp(2 pi i / 3) = (-1 + i sqrt(3)) / 2`.
fn omega<T: Scalar>() -> Complex<T> {
    let half = lit::<T>(0.5);
    c(-half, lit::<T>(3.0).sqrt() * half)
}

/// Powers of omega for j in {0, 1, 2}, written in closed form so no
/// complex multiplication noise enters the operator entries.
fn omega_pow<T: Scalar>(j: usize) -> Complex<T> {
    match j {
        0 => c(T::one(), T::zero()),
        1 => omega(),
        _ => omega::<T>().conj(),
    }
}

/// Builds one of the four catalog measurement sets.
///
/// Outcome orders: the tetrahedron lists the pole state first and the three
/// equatorial-belt states after it; trine outcomes are `0,1,2`; octahedron
/// and square outcomes follow `x+, x-, y+, y-(, z+, z-)`.
pub fn catalog<T: Scalar>(id: CatalogId) -> MeasurementSet<T> {
    let ops_and_labels: (Vec<ComplexMatrix<T>>, Vec<&str>) = match id {
        CatalogId::Tetrahedron => {
            let third = T::one() / lit::<T>(3.0);
            let sixth = T::one() / lit::<T>(6.0);
            let s2_6 = lit::<T>(2.0).sqrt() / lit::<T>(6.0);
            // pole operator |0><0| / 2
            let mut ops = vec![ComplexMatrix::from_fn(2, 2, |r, cl| {
                if r == 0 && cl == 0 {
                    c(lit(0.5), T::zero())
                } else {
                    c(T::zero(), T::zero())
                }
            })];
            // (|0> + sqrt(2) w^j |1>)/sqrt(3), projected and halved
            for j in 0..3 {
                let w = omega_pow::<T>(j);
                let mut m = ComplexMatrix::zeros(2, 2);
                m.set(0, 0, c(sixth, T::zero()));
                m.set(0, 1, w.conj() * c(s2_6, T::zero()));
                m.set(1, 0, w * c(s2_6, T::zero()));
                m.set(1, 1, c(third, T::zero()));
                ops.push(m);
            }
            (ops, vec!["0", "1", "2", "3"])
        }
        CatalogId::Trine => {
            let third = T::one() / lit::<T>(3.0);
            let mut ops = Vec::with_capacity(3);
            for j in 0..3 {
                let w = omega_pow::<T>(j);
                let mut m = ComplexMatrix::zeros(2, 2);
                m.set(0, 0, c(third, T::zero()));
                m.set(0, 1, w.conj() * c(third, T::zero()));
                m.set(1, 0, w * c(third, T::zero()));
                m.set(1, 1, c(third, T::zero()));
                ops.push(m);
            }
            (ops, vec!["0", "1", "2"])
        }
        CatalogId::Octahedron => {
            let w = T::one() / lit::<T>(3.0);
            (
                pauli_eigenprojectors::<T>(true)
                    .into_iter()
                    .map(|p| p.scale_re(w))
                    .collect(),
                vec!["x+", "x-", "y+", "y-", "z+", "z-"],
            )
        }
        CatalogId::Square => {
            let w = lit::<T>(0.5);
            (
                pauli_eigenprojectors::<T>(false)
                    .into_iter()
                    .map(|p| p.scale_re(w))
                    .collect(),
                vec!["x+", "x-", "y+", "y-"],
            )
        }
    };
    let labels = ops_and_labels.1.into_iter().map(String::from).collect();
    MeasurementSet::new(ops_and_labels.0, Some(labels))
        .expect("catalog operators are well formed")
}

/// Rank-one projectors onto the Pauli eigenstates, ordered
/// `x+, x-, y+, y-` and, when `with_z` is set, `z+, z-` after them.
fn pauli_eigenprojectors<T: Scalar>(with_z: bool) -> Vec<ComplexMatrix<T>> {
    let half = lit::<T>(0.5);
    let zero = T::zero();
    let mut out = Vec::with_capacity(if with_z { 6 } else { 4 });

    // |x+-><x+-| = (I +- sx)/2
    for sign in [T::one(), -T::one()] {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, c(half, zero));
        m.set(0, 1, c(sign * half, zero));
        m.set(1, 0, c(sign * half, zero));
        m.set(1, 1, c(half, zero));
        out.push(m);
    }
    // |y+-><y+-| = (I +- sy)/2
    for sign in [T::one(), -T::one()] {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, c(half, zero));
        m.set(0, 1, c(zero, -sign * half));
        m.set(1, 0, c(zero, sign * half));
        m.set(1, 1, c(half, zero));
        out.push(m);
    }
    if with_z {
        for sign in [T::one(), -T::one()] {
            let mut m = ComplexMatrix::zeros(2, 2);
            m.set(0, 0, c(half * (T::one() + sign), zero));
            m.set(1, 1, c(half * (T::one() - sign), zero));
            out.push(m);
        }
    }
    out
}

/// Returns an orthonormal basis pair with all pairwise overlaps nonzero,
/// as column vectors.
pub fn standard_basis_pair<T: Scalar>(
    kind: BasisPairKind,
) -> Result<(Vec<Vec<Complex<T>>>, Vec<Vec<Complex<T>>>), CatalogError> {
    match kind {
        BasisPairKind::ComputationalHadamard => {
            let one = Complex::new(T::one(), T::zero());
            let zero = Complex::new(T::zero(), T::zero());
            let h = Complex::new(T::one() / lit::<T>(2.0).sqrt(), T::zero());
            let basis_a = vec![vec![one, zero], vec![zero, one]];
            let basis_b = vec![vec![h, h], vec![h, -h]];
            Ok((basis_a, basis_b))
        }
        BasisPairKind::Fourier(d) => {
            if d < 2 {
                return Err(CatalogError::InvalidDimension { dim: d });
            }
            let zero = Complex::new(T::zero(), T::zero());
            let one = Complex::new(T::one(), T::zero());
            let basis_a: Vec<Vec<Complex<T>>> = (0..d)
                .map(|k| {
                    let mut v = vec![zero; d];
                    v[k] = one;
                    v
                })
                .collect();
            let inv_sqrt_d = T::one() / T::from_usize(d).unwrap().sqrt();
            let tau = lit::<T>(std::f64::consts::TAU);
            let basis_b: Vec<Vec<Complex<T>>> = (0..d)
                .map(|l| {
                    (0..d)
                        .map(|k| {
                            let angle = tau * T::from_usize(k * l % d).unwrap()
                                / T::from_usize(d).unwrap();
                            Complex::from_polar(inv_sqrt_d, angle)
                        })
                        .collect()
                })
                .collect();
            // overlap moduli are 1/sqrt(d) by construction; the guard only
            // fires for absurd dimensions
            if inv_sqrt_d < lit(1e-10) {
                return Err(CatalogError::DegenerateBasis {
                    modulus: inv_sqrt_d.to_f64().unwrap_or(0.0),
                });
            }
            Ok((basis_a, basis_b))
        }
    }
}
