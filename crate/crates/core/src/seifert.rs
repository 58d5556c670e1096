//! Knots presented by Seifert matrices.
//!
//! A [`SeifertKnot`] is a Seifert matrix `A` together with the handle index
//! `k`; it stands for a `(2k+1)`-knot. The intersection form on the Seifert
//! hypersurface is `A + (-1)^{k+1} ᵗA`, skew-symmetric for even `k` and
//! symmetric for odd `k`. Only matrices whose intersection form is unimodular
//! are accepted, since those are the ones that come from sphere knots.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::exactalg::{
    determinant, signature_symmetric, symplectic_basis_mod2, AlgError, IntMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeifertError {
    #[error("Seifert matrix has odd rank {0}")]
    OddRank(usize),
    #[error("intersection form is not unimodular (determinant {det})")]
    NonUnimodularIntersectionForm { det: BigInt },
    #[error("invariant needs k {expected}, got k = {k}")]
    WrongParity { k: u32, expected: &'static str },
    #[error("knots have different handle index: k = {0} and k = {1}")]
    ParityMismatch(u32, u32),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// An element of `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Z2(bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    pub fn from_int(x: &BigInt) -> Self {
        Z2(x.is_odd())
    }

    pub fn value(self) -> u8 {
        u8::from(self.0)
    }

    pub fn is_zero(self) -> bool {
        !self.0
    }
}

impl Add for Z2 {
    type Output = Z2;

    fn add(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

impl std::ops::Mul for Z2 {
    type Output = Z2;

    fn mul(self, rhs: Z2) -> Z2 {
        Z2(self.0 & rhs.0)
    }
}

impl std::iter::Sum for Z2 {
    fn sum<I: Iterator<Item = Z2>>(iter: I) -> Z2 {
        iter.fold(Z2::ZERO, Add::add)
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Seifert matrix plus handle index; the algebraic stand-in for a `(2k+1)`-knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertKnot {
    k: u32,
    a: IntMatrix,
}

/// Arf invariant (even `k`) or signature (odd `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnotInvariants {
    pub arf: Option<Z2>,
    pub sigma: Option<i64>,
    pub parity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorVariants {
    /// `-K`: Seifert matrix `(-1)^k ᵗA`.
    pub minus: SeifertKnot,
    /// `K*`: Seifert matrix `(-1)^{k+1} ᵗA`.
    pub star: SeifertKnot,
    /// `-K*`: Seifert matrix `-A`.
    pub minus_star: SeifertKnot,
}

/// `A + (-1)^{k+1} ᵗA`.
pub fn intersection_form_of(k: u32, a: &IntMatrix) -> IntMatrix {
    let t = a.transpose();
    let sum = if k % 2 == 0 { a.sub(&t) } else { a.add(&t) };
    sum.expect("transpose has the same dimension")
}

/// Checks that `a` is a Seifert matrix of a `(2k+1)`-knot.
pub fn validate(k: u32, a: IntMatrix) -> Result<SeifertKnot, SeifertError> {
    SeifertKnot::new(k, a)
}

impl SeifertKnot {
    pub fn new(k: u32, a: IntMatrix) -> Result<Self, SeifertError> {
        if a.dim() % 2 == 1 {
            return Err(SeifertError::OddRank(a.dim()));
        }
        let det = determinant(&intersection_form_of(k, &a));
        if !det.abs().is_one() {
            return Err(SeifertError::NonUnimodularIntersectionForm { det });
        }
        Ok(Self { k, a })
    }

    /// The trivial knot, presented by the `0 × 0` matrix.
    pub fn trivial(k: u32) -> Self {
        Self {
            k,
            a: IntMatrix::zeros(0),
        }
    }

    /// The trivial knot presented by `⊕ [[0,1],[0,0]]` with `pairs` blocks.
    pub fn trivial_blocks(k: u32, pairs: usize) -> Self {
        Self {
            k,
            a: IntMatrix::trivial_seifert(pairs),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Knot dimension `n = 2k + 1`.
    pub fn n(&self) -> u64 {
        2 * u64::from(self.k) + 1
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn is_k_even(&self) -> bool {
        self.k % 2 == 0
    }

    pub fn intersection_form(&self) -> IntMatrix {
        intersection_form_of(self.k, &self.a)
    }

    /// `q(v) = θ(v, v) mod 2`.
    pub fn quadratic_refinement(&self, v: &[BigInt]) -> Z2 {
        Z2::from_int(&self.a.bilinear(v, v))
    }

    /// Arf invariant `Σ q(xᵢ) q(yᵢ)` over a symplectic basis (even `k` only).
    pub fn arf(&self) -> Result<Z2, SeifertError> {
        if !self.is_k_even() {
            return Err(SeifertError::WrongParity {
                k: self.k,
                expected: "even",
            });
        }
        let basis = symplectic_basis_mod2(&self.intersection_form())?;
        let b = basis.apply(&self.a)?;
        Ok((0..b.dim() / 2)
            .map(|i| Z2::from_int(&b[(2 * i, 2 * i)]) * Z2::from_int(&b[(2 * i + 1, 2 * i + 1)]))
            .sum())
    }

    /// Signature of `A + ᵗA` (odd `k` only).
    pub fn sigma(&self) -> Result<i64, SeifertError> {
        if self.is_k_even() {
            return Err(SeifertError::WrongParity {
                k: self.k,
                expected: "odd",
            });
        }
        Ok(signature_symmetric(&self.intersection_form())?.signature())
    }

    pub fn invariants(&self) -> Result<KnotInvariants, SeifertError> {
        Ok(if self.is_k_even() {
            KnotInvariants {
                arf: Some(self.arf()?),
                sigma: None,
                parity: 0,
            }
        } else {
            KnotInvariants {
                arf: None,
                sigma: Some(self.sigma()?),
                parity: 1,
            }
        })
    }

    pub fn mirror_variants(&self) -> MirrorVariants {
        let t = self.a.transpose();
        let (minus, star) = if self.is_k_even() {
            (t.clone(), t.neg())
        } else {
            (t.neg(), t)
        };
        // all three have intersection form ±J or ±ᵗJ, so they stay valid
        MirrorVariants {
            minus: Self { k: self.k, a: minus },
            star: Self { k: self.k, a: star },
            minus_star: Self {
                k: self.k,
                a: self.a.neg(),
            },
        }
    }

    pub fn minus_star(&self) -> Self {
        Self {
            k: self.k,
            a: self.a.neg(),
        }
    }

    /// Connected sum: block direct sum of the Seifert matrices.
    pub fn connected_sum(&self, other: &Self) -> Result<Self, SeifertError> {
        same_k(self, other)?;
        Ok(Self {
            k: self.k,
            a: self.a.direct_sum(&other.a),
        })
    }

    /// Replaces `A` with `S · A · ᵗS` for a unimodular `S` (same knot, new basis).
    pub fn change_basis(&self, s: &IntMatrix) -> Result<Self, SeifertError> {
        let a = crate::exactalg::congruence_apply(&self.a, s)?;
        Self::new(self.k, a)
    }
}

pub(crate) fn same_k(a: &SeifertKnot, b: &SeifertKnot) -> Result<(), SeifertError> {
    if a.k != b.k {
        return Err(SeifertError::ParityMismatch(a.k, b.k));
    }
    Ok(())
}

pub fn connected_sum(k1: &SeifertKnot, k2: &SeifertKnot) -> Result<SeifertKnot, SeifertError> {
    k1.connected_sum(k2)
}
