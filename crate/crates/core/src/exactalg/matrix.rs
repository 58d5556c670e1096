use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::AlgError;

/// Dense square matrix of arbitrary-precision integers, stored row-major.
///
/// A `0 × 0` matrix is allowed and is used as the Seifert matrix of the
/// trivial knot.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; fails unless every row has `rows.len()` entries.
    pub fn from_rows<T, R>(rows: &[R]) -> Result<Self, AlgError>
    where
        R: AsRef<[T]>,
        T: Clone + Into<BigInt>,
    {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(AlgError::NotSquare {
                    row: r,
                    len: row.len(),
                    expected: dim,
                });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self { dim, data })
    }

    /// Convenience constructor for literals in tests and docs. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows).expect("rows must form a square matrix")
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.dim).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.map(|x| x * c)
    }

    pub fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise reduction into `{0, 1}`.
    pub fn mod2(&self) -> Self {
        let two = BigInt::from(2);
        self.map(|x| x.mod_floor(&two))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let mut out = Self::zeros(a + b);
        for i in 0..a {
            for j in 0..a {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                out[(a + i, a + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Direct sum of `copies` copies of `block`.
    pub fn block_sum(block: &Self, copies: usize) -> Self {
        (0..copies).fold(Self::zeros(0), |acc, _| acc.direct_sum(block))
    }

    /// `⊕ [[0,1],[1,0]]` with `pairs` blocks.
    pub fn hyperbolic(pairs: usize) -> Self {
        Self::block_sum(&Self::from_i64(&[&[0, 1], &[1, 0]]), pairs)
    }

    /// `⊕ [[0,1],[-1,0]]` with `pairs` blocks.
    pub fn standard_symplectic(pairs: usize) -> Self {
        Self::block_sum(&Self::from_i64(&[&[0, 1], &[-1, 0]]), pairs)
    }

    /// `⊕ [[0,1],[0,0]]` with `pairs` blocks: the Seifert matrix of the trivial knot.
    pub fn trivial_seifert(pairs: usize) -> Self {
        Self::block_sum(&Self::from_i64(&[&[0, 1], &[0, 0]]), pairs)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    pub fn has_even_diagonal(&self) -> bool {
        (0..self.dim).all(|i| self[(i, i)].is_even())
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// `ᵗu · self · v` for integer vectors of length `dim`.
    pub fn bilinear(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    row += &self[(i, j)] * vj;
                }
            }
            acc += ui * row;
        }
        acc
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<(), AlgError> {
        if self.dim != other.dim {
            return Err(AlgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub(crate) fn row_mut_pair(&mut self, target: usize, source: usize) -> (&mut [BigInt], &[BigInt]) {
        debug_assert_ne!(target, source);
        let n = self.dim;
        if target < source {
            let (lo, hi) = self.data.split_at_mut(source * n);
            (&mut lo[target * n..(target + 1) * n], &hi[..n])
        } else {
            let (lo, hi) = self.data.split_at_mut(target * n);
            (&mut hi[..n], &lo[source * n..(source + 1) * n])
        }
    }

    /// `row_target += c · row_source`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        let (t, s) = self.row_mut_pair(target, source);
        for (x, y) in t.iter_mut().zip(s) {
            if !y.is_zero() {
                *x += c * y;
            }
        }
    }

    /// `col_target += c · col_source`.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        for r in 0..self.dim {
            let y = self[(r, source)].clone();
            if !y.is_zero() {
                self[(r, target)] += c * y;
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.dim {
            self.data.swap(a * self.dim + c, b * self.dim + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.dim {
            self.data.swap(r * self.dim + a, r * self.dim + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.dim {
            let idx = i * self.dim + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    pub(crate) fn negate_col(&mut self, i: usize) {
        for r in 0..self.dim {
            let idx = r * self.dim + i;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// Principal submatrix on `start..end`.
    pub fn principal_block(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, |i, j| self[(start + i, start + j)].clone())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.dim && j < self.dim, "index ({i},{j}) out of range for dim {}", self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.dim && j < self.dim, "index ({i},{j}) out of range for dim {}", self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
