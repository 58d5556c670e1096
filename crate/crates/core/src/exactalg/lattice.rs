use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors (Smith normal form diagonal, positive, each
/// dividing the next) of the integer matrix whose rows are `rows`.
pub fn invariant_factors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();

    for t in 0..nr.min(nc) {
        if !move_min_to(&mut a, t) {
            break;
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..nc {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                move_min_to(&mut a, t);
                continue;
            }
            // row and column t are clear; enforce divisibility of the remainder
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..nc {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

/// Moves an entry of least nonzero absolute value in the block `t.., t..` to `(t, t)`.
fn move_min_to(a: &mut [Vec<BigInt>], t: usize) -> bool {
    let nc = a.first().map_or(0, Vec::len);
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a_abs(a, bi, bj)) {
                best = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best else {
        return false;
    };
    a.swap(t, i);
    for row in a.iter_mut() {
        row.swap(t, j);
    }
    debug_assert!(j < nc);
    true
}

fn a_abs(a: &[Vec<BigInt>], i: usize, j: usize) -> BigInt {
    a[i][j].abs()
}

/// True iff the vectors are linearly independent and span a primitive
/// sublattice (equivalently, the gcd of their maximal minors is 1).
pub fn is_primitive_set(vectors: &[Vec<BigInt>]) -> bool {
    let f = invariant_factors(vectors);
    f.len() == vectors.len() && f.iter().all(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_diagonal() {
        let f = invariant_factors(&rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        let f: Vec<i64> = f.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive_set(&rows(&[&[1, 1, 0, 0], &[0, 0, 1, 1]])));
        assert!(!is_primitive_set(&rows(&[&[2, 0], &[0, 1]])));
        assert!(!is_primitive_set(&rows(&[&[1, 1, 0], &[1, 1, 0]])));
        assert!(is_primitive_set(&rows(&[&[2, 3]])));
        assert!(is_primitive_set(&[]));
    }
}
