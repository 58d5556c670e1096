//! Deterministic generators of test inputs: random unimodular transforms and
//! random valid Seifert matrices, plus a few fixed lattices.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::exactalg::{congruence_apply, IntMatrix};
use crate::passmove::PassMoveOp;
use crate::seifert::SeifertKnot;

/// Positive definite `E8` lattice (Cartan matrix): a chain of seven nodes with
/// the eighth attached to the fifth.
pub fn e8_form() -> IntMatrix {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut g = IntMatrix::zeros(8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(2);
    }
    for &(a, b) in &edges {
        g[(a, b)] = BigInt::from(-1);
        g[(b, a)] = BigInt::from(-1);
    }
    g
}

/// A `(2k+1)`-knot, `k` odd, with `A + ᵗA = -E8` and signature `-8`.
///
/// `A` is the upper triangle of `-E8` with `-1` on the diagonal.
pub fn negative_e8_knot(k: u32) -> SeifertKnot {
    assert!(k % 2 == 1, "E8 knots need odd k");
    let g = e8_form().neg();
    let a = IntMatrix::from_fn(8, |i, j| {
        if i == j {
            &g[(i, i)] / 2
        } else if i < j {
            g[(i, j)].clone()
        } else {
            BigInt::from(0)
        }
    });
    SeifertKnot::new(k, a).expect("-E8 is unimodular")
}

/// Random unimodular matrix built from `steps` elementary operations, keeping
/// every entry within `[-max_entry, max_entry]`.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_entry: i64, steps: usize) -> IntMatrix {
    let mut s = IntMatrix::identity(dim);
    if dim < 2 {
        return s;
    }
    let limit = BigInt::from(max_entry);
    for _ in 0..steps {
        match rng.gen_range(0..8) {
            0 => {
                let (a, b) = distinct_pair(rng, dim);
                s.swap_rows(a, b);
            }
            1 => s.negate_row(rng.gen_range(0..dim)),
            _ => {
                let (t, src) = distinct_pair(rng, dim);
                let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
                let mut next = s.clone();
                next.add_row_multiple(t, src, &c);
                if next.row(t).iter().all(|x| x.abs() <= limit) {
                    s = next;
                }
            }
        }
    }
    s
}

fn distinct_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (usize, usize) {
    let a = rng.gen_range(0..dim);
    let mut b = rng.gen_range(0..dim - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// A random legal pass-move for a `dim`-dimensional Seifert matrix.
pub fn random_passmove<R: Rng + ?Sized>(rng: &mut R, k: u32, dim: usize) -> PassMoveOp {
    let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
    if k % 2 == 0 && rng.gen_range(0..4) == 0 {
        let i = rng.gen_range(0..dim);
        return PassMoveOp::new(i, i, delta);
    }
    let (i, j) = distinct_pair(rng, dim);
    PassMoveOp::new(i, j, delta)
}

/// Random valid Seifert matrix with `pairs` symplectic pairs: the trivial
/// matrix perturbed by `moves` random pass-moves, then put in a random basis.
pub fn random_knot<R: Rng + ?Sized>(rng: &mut R, k: u32, pairs: usize, moves: usize) -> SeifertKnot {
    let dim = 2 * pairs;
    let mut a = IntMatrix::trivial_seifert(pairs);
    if dim > 0 {
        for _ in 0..moves {
            random_passmove(rng, k, dim).rewrite(k, &mut a);
        }
    }
    let s = random_unimodular(rng, dim, 3, 4 * dim);
    let a = congruence_apply(&a, &s).expect("same dim");
    SeifertKnot::new(k, a).expect("pass-moves and congruences keep the form unimodular")
}

/// Random valid knot with odd `k` whose signature is `±8`, padded with trivial pairs.
pub fn random_e8_knot<R: Rng + ?Sized>(rng: &mut R, k: u32, extra_pairs: usize) -> SeifertKnot {
    let e8 = negative_e8_knot(k);
    let base = if rng.gen_bool(0.5) { e8 } else { e8.minus_star() };
    let padded = base
        .connected_sum(&SeifertKnot::trivial_blocks(k, extra_pairs))
        .expect("same k");
    let s = random_unimodular(rng, padded.dim(), 3, 4 * padded.dim());
    padded.change_basis(&s).expect("unimodular change of basis")
}

/// Largest absolute entry as `i64`, saturating.
pub fn max_entry(m: &IntMatrix) -> i64 {
    m.max_abs().to_i64().unwrap_or(i64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{determinant, signature_symmetric};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn e8_is_even_unimodular_definite() {
        let g = e8_form();
        assert_eq!(determinant(&g), BigInt::from(1));
        assert_eq!(signature_symmetric(&g).unwrap().signature(), 8);
        assert_eq!(negative_e8_knot(1).sigma().unwrap(), -8);
    }

    #[test]
    fn generators_produce_valid_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_unimodular(&mut rng, 6, 3, 40);
            assert!(determinant(&s).abs() == BigInt::from(1));
            assert!(max_entry(&s) <= 3);
            let k = rng.gen_range(0..4);
            let knot = random_knot(&mut rng, k, 3, 5);
            assert_eq!(knot.dim(), 6);
        }
        let e = random_e8_knot(&mut rng, 3, 0);
        assert_eq!(e.sigma().unwrap().abs(), 8);
    }
}
