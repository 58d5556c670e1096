//! Normal forms for unimodular lattices.
//!
//! [`hyperbolize`] splits an indefinite even unimodular symmetric form into
//! hyperbolic planes `[[0,1],[1,0]]`, one isotropic vector at a time.
//! [`even_diagonal_symplectic`] finds an integral symplectic basis for the
//! Seifert pairing of an even-`k` knot in which every `θ(x, x)` is even; this
//! exists exactly when the Arf invariant vanishes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::exactalg::{
    determinant, integral_symplectic_basis, signature_symmetric, AlgError, CongruenceBuilder,
    CongruenceWitness, IntMatrix, ShellVectors,
};
use crate::exactalg::smallform::SmallForm;
use crate::seifert::{SeifertError, SeifertKnot};

/// Default coefficient bound for the isotropic-vector search.
pub const DEFAULT_ISOTROPIC_BOUND: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperbolicError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(Precondition),
    #[error("no isotropic vector with coefficients bounded by {bound}")]
    SearchExhausted { bound: u32 },
    #[error("Arf invariant is 1; no basis with all θ(x, x) even exists")]
    ArfNonzero,
    #[error("needs k even, got k = {0}")]
    WrongParity(u32),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    NotSymmetric,
    OddDiagonal { index: usize },
    NotUnimodular { det: BigInt },
    NonzeroSignature { signature: i64 },
}

impl std::fmt::Display for Precondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotSymmetric => write!(f, "form is not symmetric"),
            Self::OddDiagonal { index } => write!(f, "diagonal entry {index} is odd"),
            Self::NotUnimodular { det } => write!(f, "determinant is {det}"),
            Self::NonzeroSignature { signature } => write!(f, "signature is {signature}"),
        }
    }
}

fn check_even_unimodular_neutral(g: &IntMatrix) -> Result<(), HyperbolicError> {
    let fail = |p| Err(HyperbolicError::PreconditionFailed(p));
    if !g.is_symmetric() {
        return fail(Precondition::NotSymmetric);
    }
    let signature = signature_symmetric(g)?.signature();
    if signature != 0 {
        return fail(Precondition::NonzeroSignature { signature });
    }
    if let Some(index) = (0..g.dim()).find(|&i| g[(i, i)].is_odd()) {
        return fail(Precondition::OddDiagonal { index });
    }
    let det = determinant(g);
    if !(det.is_one() || (-&det).is_one()) {
        return fail(Precondition::NotUnimodular { det });
    }
    Ok(())
}

/// Finds `S` with `S · g · ᵗS = ⊕ [[0,1],[1,0]]`.
///
/// `g` must be symmetric, even, unimodular and of signature zero. Before each
/// split the remaining block is greedily reduced, then isotropic vectors are
/// searched in that basis by iterative deepening on the coefficient bound up
/// to `search_bound`. Exhausting the bound is reported as an error.
pub fn hyperbolize(g: &IntMatrix, search_bound: u32) -> Result<CongruenceWitness, HyperbolicError> {
    check_even_unimodular_neutral(g)?;
    let n = g.dim();
    let mut b = CongruenceBuilder::new(g);
    for e in (0..n).step_by(2) {
        b.form_reduce(e..n);
        let rest = b.form().principal_block(e, n);
        let v = find_isotropic(&rest, search_bound)
            .ok_or(HyperbolicError::SearchExhausted { bound: search_bound })?;
        let coeffs: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
        b.install_primitive(e, &coeffs);
        let f = b
            .isolate_unit_partner(e, e + 1..n)
            .ok_or(AlgError::NotUnimodular)?;
        b.rotate_into(f, e + 1);
        let f = e + 1;
        // make f isotropic: g(f - a e, f - a e) = g(f, f) - 2a
        let half: BigInt = b.at(f, f) / 2;
        b.add_multiple(f, e, -half);
        for w in e + 2..n {
            let c = -b.at(w, f).clone();
            b.add_multiple(w, e, c);
            let c = -b.at(w, e).clone();
            b.add_multiple(w, f, c);
        }
    }
    let (witness, form) = b.into_parts();
    debug_assert_eq!(form, IntMatrix::hyperbolic(n / 2));
    Ok(witness)
}

/// First primitive isotropic vector of `g` in [`ShellVectors`] order.
fn find_isotropic(g: &IntMatrix, bound: u32) -> Option<Vec<i64>> {
    let form = SmallForm::new(g);
    ShellVectors::new(form.dim(), bound).find(|v| {
        form.vanishes(v, v) && v.iter().fold(0i64, |acc, &x| acc.gcd(&x)) == 1
    })
}

/// Integral symplectic basis of `K` in which all diagonal Seifert entries are even.
///
/// For `B = S · A · ᵗS` the result satisfies `B - ᵗB = ⊕ [[0,1],[-1,0]]` and
/// `B_ii ≡ 0 (mod 2)`. Pairs with one odd diagonal entry are fixed inside the
/// pair; pairs with both odd are fixed two at a time, which is possible
/// because their number is even when the Arf invariant vanishes.
pub fn even_diagonal_symplectic(knot: &SeifertKnot) -> Result<CongruenceWitness, HyperbolicError> {
    if !knot.is_k_even() {
        return Err(HyperbolicError::WrongParity(knot.k()));
    }
    if !knot.arf()?.is_zero() {
        return Err(HyperbolicError::ArfNonzero);
    }
    let basis = integral_symplectic_basis(&knot.intersection_form())?;
    let a = basis.apply(knot.matrix())?;
    let mut b = CongruenceBuilder::new(&a);
    let pairs = a.dim() / 2;
    let odd = |b: &CongruenceBuilder, i: usize| b.at(i, i).is_odd();

    fix_single_odd_pairs(&mut b, pairs);
    let doubly_odd: Vec<usize> = (0..pairs)
        .filter(|&i| odd(&b, 2 * i) && odd(&b, 2 * i + 1))
        .collect();
    debug_assert!(doubly_odd.len() % 2 == 0);
    for chunk in doubly_odd.chunks_exact(2) {
        let (xi, yi) = (2 * chunk[0], 2 * chunk[0] + 1);
        let (xj, yj) = (2 * chunk[1], 2 * chunk[1] + 1);
        // (xi, yi, xj, yj) → (xi + xj, xi + xj + yi, xj, yj - yi)
        b.add_multiple(yj, yi, -BigInt::one());
        b.add_multiple(xi, xj, BigInt::one());
        b.add_multiple(yi, xi, BigInt::one());
    }
    fix_single_odd_pairs(&mut b, pairs);

    let fix = b.finish();
    let witness = basis.then(&fix)?;
    debug_assert!({
        let out = witness.apply(knot.matrix()).expect("same dim");
        out.sub(&out.transpose()).expect("same dim") == IntMatrix::standard_symplectic(pairs)
            && out.has_even_diagonal()
    });
    Ok(witness)
}

/// `(odd, even) → x ← x + y`, `(even, odd) → y ← y + x`; both keep `x·y = 1`.
fn fix_single_odd_pairs(b: &mut CongruenceBuilder, pairs: usize) {
    for i in 0..pairs {
        let (x, y) = (2 * i, 2 * i + 1);
        match (b.at(x, x).is_odd(), b.at(y, y).is_odd()) {
            (true, false) => b.add_multiple(x, y, BigInt::one()),
            (false, true) => b.add_multiple(y, x, BigInt::one()),
            _ => {}
        }
    }
}

/// Whether `g` is exactly `⊕ [[0,1],[1,0]]`.
pub fn is_hyperbolic_normal_form(g: &IntMatrix) -> bool {
    g.dim() % 2 == 0 && *g == IntMatrix::hyperbolic(g.dim() / 2)
}
