use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::IntMatrix;

/// A copy of a form used for evaluating `ᵗu · M · v` on short integer vectors.
/// Uses `i128` when every entry fits and falls back to `BigInt` on overflow.
#[derive(Clone, Debug)]
pub(crate) struct SmallForm {
    dim: usize,
    small: Option<Vec<i128>>,
    big: IntMatrix,
}

impl SmallForm {
    pub(crate) fn new(m: &IntMatrix) -> Self {
        let small: Option<Vec<i128>> = m.entries().map(ToPrimitive::to_i128).collect();
        Self {
            dim: m.dim(),
            small,
            big: m.clone(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn eval(&self, u: &[i64], v: &[i64]) -> BigInt {
        if let Some(x) = self.eval_small(u, v) {
            return BigInt::from(x);
        }
        let ub: Vec<BigInt> = u.iter().map(|&x| BigInt::from(x)).collect();
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.big.bilinear(&ub, &vb)
    }

    pub(crate) fn vanishes(&self, u: &[i64], v: &[i64]) -> bool {
        match self.eval_small(u, v) {
            Some(x) => x == 0,
            None => self.eval(u, v).is_zero(),
        }
    }

    fn eval_small(&self, u: &[i64], v: &[i64]) -> Option<i128> {
        let m = self.small.as_ref()?;
        let n = self.dim;
        let mut acc: i128 = 0;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            let row = &m[i * n..(i + 1) * n];
            let mut r: i128 = 0;
            for (&mij, &vj) in row.iter().zip(v) {
                if vj != 0 && mij != 0 {
                    r = r.checked_add(mij.checked_mul(i128::from(vj))?)?;
                }
            }
            acc = acc.checked_add(r.checked_mul(i128::from(ui))?)?;
        }
        Some(acc)
    }

    /// Row functional `ᵗu · M` as exact integers.
    pub(crate) fn left_functional(&self, u: &[i64]) -> Vec<BigInt> {
        (0..self.dim)
            .map(|j| {
                u.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| &self.big[(i, j)] * x)
                    .sum()
            })
            .collect()
    }

    /// Column functional `M · v` as exact integers.
    pub(crate) fn right_functional(&self, v: &[i64]) -> Vec<BigInt> {
        (0..self.dim)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| &self.big[(i, j)] * x)
                    .sum()
            })
            .collect()
    }
}
