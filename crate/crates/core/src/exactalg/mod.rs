//! Exact integer matrix kernel.
//!
//! Everything here works over `BigInt` (or exact rationals internally); no
//! floating point is used anywhere in the crate.

mod enumerate;
mod inertia;
mod lattice;
mod matrix;
pub(crate) mod smallalg;
pub(crate) mod smallform;
mod symplectic;
mod witness;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use enumerate::ShellVectors;
pub use inertia::{signature_symmetric, SignatureTriple};
pub use lattice::{invariant_factors, is_primitive_set};
pub use matrix::IntMatrix;
pub use symplectic::{integral_symplectic_basis, symplectic_basis_mod2};
pub use witness::{congruence_apply, CongruenceWitness, ElementaryOp, OpKind};

pub(crate) use witness::CongruenceBuilder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("form is not unimodular")]
    NotUnimodular,
    #[error("form is not alternating mod 2 (odd diagonal entry at {index})")]
    NotAlternatingMod2 { index: usize },
    #[error("form is degenerate mod 2")]
    DegenerateMod2,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("elementary operation {position} is malformed for dimension {dim}")]
    MalformedOp { position: usize, dim: usize },
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    determinant(m).abs().is_one()
}
