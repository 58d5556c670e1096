use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{AlgError, IntMatrix};

/// Inertia of a symmetric form: counts of positive, negative and zero squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignatureTriple {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignatureTriple {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

/// Inertia of a symmetric integer matrix by exact symmetric pivoting over Q.
///
/// Pivot rule: the smallest-index nonzero diagonal entry; when the remaining
/// diagonal vanishes, the smallest-index nonzero off-diagonal entry `(i, j)`
/// gives a 2×2 pivot `[[0, b], [b, 0]]` contributing one positive and one
/// negative square. A vanishing remainder counts as zeros.
pub fn signature_symmetric(m: &IntMatrix) -> Result<SignatureTriple, AlgError> {
    if !m.is_symmetric() {
        return Err(AlgError::NotSymmetric);
    }
    let mut a: Vec<Vec<BigRational>> = m
        .rows()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut out = SignatureTriple::default();

    while !a.is_empty() {
        let n = a.len();
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            if a[p][p].is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            a = schur_1x1(&a, p);
            continue;
        }
        let off = (0..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        match off {
            Some((i, j)) => {
                out.positive += 1;
                out.negative += 1;
                a = schur_2x2(&a, i, j);
            }
            None => {
                out.zero += n;
                break;
            }
        }
    }
    Ok(out)
}

fn schur_1x1(a: &[Vec<BigRational>], p: usize) -> Vec<Vec<BigRational>> {
    let keep: Vec<usize> = (0..a.len()).filter(|&i| i != p).collect();
    let piv = &a[p][p];
    keep.iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / piv)
                .collect()
        })
        .collect()
}

/// Schur complement with respect to the block on `{i, j}` where `a[i][i] = a[j][j] = 0`.
fn schur_2x2(a: &[Vec<BigRational>], i: usize, j: usize) -> Vec<Vec<BigRational>> {
    let keep: Vec<usize> = (0..a.len()).filter(|&r| r != i && r != j).collect();
    // [[0,b],[b,0]]⁻¹ = [[0,1/b],[1/b,0]]
    let inv_b = BigRational::from_integer(BigInt::from(1)) / &a[i][j];
    keep.iter()
        .map(|&r| {
            keep.iter()
                .map(|&c| {
                    let corr = (&a[r][i] * &a[j][c] + &a[r][j] * &a[i][c]) * &inv_b;
                    &a[r][c] - corr
                })
                .collect()
        })
        .collect()
}
