//! Fraction-free `i128` versions of rank, inertia and kernel for small
//! matrices. Every routine returns `None` on overflow so callers can fall
//! back to the exact `BigInt` paths.

use num_integer::Integer;

use super::SignatureTriple;

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// `a·x - b·y`, checked.
fn combine(a: i128, x: i128, b: i128, y: i128) -> Option<i128> {
    a.checked_mul(x)?.checked_sub(b.checked_mul(y)?)
}

/// Row echelon form by integer row operations: each pivot row is kept, and
/// the pivot column is cleared from all other rows. Columns are visited in
/// `order`. Returns `(row, col)` pairs of the pivots.
fn echelon(rows: &mut Vec<Vec<i128>>, order: impl Iterator<Item = usize>) -> Option<Vec<(usize, usize)>> {
    rows.iter_mut().for_each(|r| normalize(r));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in order {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c], rows[i][c]);
            let g = a.gcd(&b);
            let (a, b) = (a / g, b / g);
            for j in 0..rows[i].len() {
                rows[i][j] = combine(a, rows[i][j], b, rows[r][j])?;
            }
            normalize(&mut rows[i]);
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Some(pivots)
}

pub(crate) fn rank(mut rows: Vec<Vec<i128>>) -> Option<usize> {
    let n = rows.first().map_or(0, Vec::len);
    Some(echelon(&mut rows, 0..n)?.len())
}

/// Kernel of the rows as `(free columns, [(pivot column, den, coeffs over free)])`
/// with each pivot coordinate equal to `Σ coeffs·free / den` and `den > 0`.
pub(crate) type Kernel = (Vec<usize>, Vec<(usize, i128, Vec<i128>)>);

/// Columns are eliminated right to left, so the free columns are the
/// leftmost ones possible.
pub(crate) fn kernel(mut rows: Vec<Vec<i128>>, n: usize) -> Option<Kernel> {
    let pivots = echelon(&mut rows, (0..n).rev())?;
    let is_pivot = |c: usize| pivots.iter().any(|&(_, pc)| pc == c);
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot(c)).collect();
    let solved = pivots
        .iter()
        .map(|&(r, c)| {
            let a = rows[r][c];
            let s = a.signum();
            let coeffs = free.iter().map(|&f| -s * rows[r][f]).collect();
            (c, a.abs(), coeffs)
        })
        .collect();
    Some((free, solved))
}

/// Inertia of a symmetric matrix by symmetric pivoting. Each Schur complement
/// is scaled by a positive factor to stay integral, which keeps the inertia.
pub(crate) fn inertia(mut a: Vec<Vec<i128>>) -> Option<SignatureTriple> {
    let mut out = SignatureTriple::default();
    loop {
        let n = a.len();
        if n == 0 {
            return Some(out);
        }
        if let Some(p) = (0..n).find(|&i| a[i][i] != 0) {
            let d = a[p][p];
            if d > 0 {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            // sign(d) · (d·A - u·ᵗu) on the remaining indices
            let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            let s = d.signum();
            let mut next = vec![vec![0i128; rest.len()]; rest.len()];
            for (x, &i) in rest.iter().enumerate() {
                for (y, &j) in rest.iter().enumerate() {
                    next[x][y] = s * combine(d, a[i][j], a[i][p], a[p][j])?;
                }
            }
            a = shrink(next);
            continue;
        }
        let Some((p, q)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] != 0)
        else {
            out.zero += n;
            return Some(out);
        };
        out.positive += 1;
        out.negative += 1;
        // b² · (A - (u·ᵗv + v·ᵗu) / b) with u, v the columns p, q
        let b = a[p][q];
        let rest: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
        let mut next = vec![vec![0i128; rest.len()]; rest.len()];
        for (x, &i) in rest.iter().enumerate() {
            for (y, &j) in rest.iter().enumerate() {
                let cross = a[i][p].checked_mul(a[q][j])?.checked_add(a[i][q].checked_mul(a[p][j])?)?;
                next[x][y] = combine(b.checked_mul(b)?, a[i][j], b, cross)?;
            }
        }
        a = shrink(next);
    }
}

fn shrink(mut m: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let g = m.iter().flatten().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        m.iter_mut().flatten().for_each(|x| *x /= g);
    }
    m
}
