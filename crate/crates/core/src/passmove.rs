//! Pass-moves as Seifert-matrix rewrites.
//!
//! A pass-move changes one linking value `θ(bᵢ, bⱼ)` by `±1` and its partner
//! `θ(bⱼ, bᵢ)` by `±(-1)^k`, so the intersection form `A + (-1)^{k+1} ᵗA`
//! never changes. For even `k` a move may also change a diagonal value
//! `θ(bᵢ, bᵢ)` by `±2`; for odd `k` the diagonal is rigid.
//!
//! [`plan_trivializing_schedule`] writes down, for a knot whose Arf invariant
//! (even `k`) or signature (odd `k`) vanishes, a sequence of moves taking the
//! trivial matrix `⊕ [[0,1],[0,0]]` to a normalized Seifert matrix of the knot.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{CongruenceWitness, IntMatrix};
use crate::hyperbolic::{even_diagonal_symplectic, hyperbolize, HyperbolicError};
use crate::seifert::{SeifertError, SeifertKnot, Z2};

/// Longest schedule [`plan_trivializing_schedule`] will write out.
pub const MAX_SCHEDULE_MOVES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PassMoveError {
    #[error("move ({i}, {j}) is out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },
    #[error("diagonal moves are impossible for odd k")]
    DiagonalMoveOddK,
    #[error("move increment must be +1 or -1, got {0}")]
    InvalidDelta(i64),
    #[error("obstruction does not vanish: {0}")]
    ObstructionNonzero(TrivialityObstruction),
    #[error("the schedule needs {moves} moves, more than the limit of {limit}")]
    ScheduleTooLong { moves: BigInt, limit: u64 },
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
}

/// The invariant that prevents pass-move triviality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialityObstruction {
    Arf(Z2),
    Sigma(i64),
}

impl fmt::Display for TrivialityObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Arf(a) => write!(f, "arf = {a}"),
            Self::Sigma(s) => write!(f, "sigma = {s}"),
        }
    }
}

/// One elementary pass-move on basis indices `(i, j)` (0-based), `delta = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PassMoveOp {
    pub i: usize,
    pub j: usize,
    pub delta: i64,
}

impl PassMoveOp {
    pub fn new(i: usize, j: usize, delta: i64) -> Self {
        Self { i, j, delta }
    }

    fn check(&self, k: u32, dim: usize) -> Result<(), PassMoveError> {
        if self.i >= dim || self.j >= dim {
            return Err(PassMoveError::IndexOutOfRange {
                i: self.i,
                j: self.j,
                dim,
            });
        }
        if self.delta.abs() != 1 {
            return Err(PassMoveError::InvalidDelta(self.delta));
        }
        if self.i == self.j && k % 2 == 1 {
            return Err(PassMoveError::DiagonalMoveOddK);
        }
        Ok(())
    }

    /// Applies the rewrite to a bare matrix without validation.
    pub(crate) fn rewrite(&self, k: u32, a: &mut IntMatrix) {
        let d = BigInt::from(self.delta);
        if self.i == self.j {
            a[(self.i, self.i)] += &d * 2;
        } else {
            a[(self.i, self.j)] += &d;
            if k % 2 == 0 {
                a[(self.j, self.i)] += d;
            } else {
                a[(self.j, self.i)] -= d;
            }
        }
    }
}

/// Applies one pass-move and re-validates the result.
pub fn apply_passmove(knot: &SeifertKnot, op: PassMoveOp) -> Result<SeifertKnot, PassMoveError> {
    op.check(knot.k(), knot.dim())?;
    let mut a = knot.matrix().clone();
    op.rewrite(knot.k(), &mut a);
    Ok(SeifertKnot::new(knot.k(), a)?)
}

/// Ordered pass-moves from `start`, with the matrix they are claimed to reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassMoveSchedule {
    pub ops: Vec<PassMoveOp>,
    pub start: SeifertKnot,
    pub claimed_end: IntMatrix,
}

/// Why a schedule failed to verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleFailure {
    /// Index of the first failing move, or `None` when every move applied but
    /// the final matrix differs from the claimed one.
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for ScheduleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "move {} failed: {}", s + 1, self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

impl PassMoveSchedule {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Replays every move, checking each one against the dimension and `k`.
    ///
    /// A well-formed move leaves the intersection form untouched, so every
    /// intermediate matrix is as valid as `start`; the result is re-validated
    /// once at the end.
    pub fn replay(&self) -> Result<SeifertKnot, ScheduleFailure> {
        let k = self.start.k();
        let dim = self.start.dim();
        let mut a = self.start.matrix().clone();
        for (step, op) in self.ops.iter().enumerate() {
            op.check(k, dim).map_err(|e| ScheduleFailure {
                step: Some(step),
                reason: e.to_string(),
            })?;
            op.rewrite(k, &mut a);
        }
        SeifertKnot::new(k, a).map_err(|e| ScheduleFailure {
            step: None,
            reason: e.to_string(),
        })
    }

    /// The same moves performed on `prefix # start`, indices shifted past `prefix`.
    pub fn behind_summand(&self, prefix: &SeifertKnot) -> Result<Self, SeifertError> {
        let offset = prefix.dim();
        Ok(Self {
            ops: self
                .ops
                .iter()
                .map(|op| PassMoveOp::new(op.i + offset, op.j + offset, op.delta))
                .collect(),
            start: prefix.connected_sum(&self.start)?,
            claimed_end: prefix.matrix().direct_sum(&self.claimed_end),
        })
    }

    /// Line-oriented `i j delta` triples, 1-indexed.
    pub fn to_text(&self) -> String {
        self.ops
            .iter()
            .map(|op| format!("{} {} {}\n", op.i + 1, op.j + 1, op.delta))
            .collect()
    }

    /// Parses the output of [`to_text`](Self::to_text).
    pub fn ops_from_text(text: &str) -> Result<Vec<PassMoveOp>, String> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(n, line)| {
                let f: Vec<&str> = line.split_whitespace().collect();
                let parse = |s: &str| s.parse::<i64>().map_err(|e| format!("line {}: {e}", n + 1));
                if f.len() != 3 {
                    return Err(format!("line {}: expected 3 fields", n + 1));
                }
                let (i, j, d) = (parse(f[0])?, parse(f[1])?, parse(f[2])?);
                if i < 1 || j < 1 {
                    return Err(format!("line {}: indices are 1-based", n + 1));
                }
                Ok(PassMoveOp::new(i as usize - 1, j as usize - 1, d))
            })
            .collect()
    }
}

/// Checks a schedule, reporting the first failure.
pub fn check_schedule(s: &PassMoveSchedule) -> Result<(), ScheduleFailure> {
    let end = s.replay()?;
    if end.matrix() != &s.claimed_end {
        return Err(ScheduleFailure {
            step: None,
            reason: "final matrix differs from the claimed end".into(),
        });
    }
    Ok(())
}

pub fn verify_schedule(s: &PassMoveSchedule) -> bool {
    check_schedule(s).is_ok()
}

/// Output of [`plan_trivializing_schedule`]: `X = S · A · ᵗS` is reached from
/// the trivial matrix by `schedule`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivializingPlan {
    pub witness: CongruenceWitness,
    pub schedule: PassMoveSchedule,
}

impl TrivializingPlan {
    /// The normalized Seifert matrix `X`.
    pub fn target(&self) -> &IntMatrix {
        &self.schedule.claimed_end
    }
}

/// Plans pass-moves taking the trivial knot to a knot congruent to `knot`.
///
/// The basis is normalized first (hyperbolic for odd `k`, even-diagonal
/// symplectic for even `k`), then entries are matched class by class:
/// `θ(xᵢ, xⱼ)` for `i > j`, `θ(yᵢ, yⱼ)` for `i > j`, `θ(xᵢ, yⱼ)` for all
/// `i, j`, then `θ(xᵢ, xᵢ)` and `θ(yᵢ, yᵢ)`. Each entry needing a change of
/// `ν` gets `|ν|` unit moves. Partners follow from the fixed intersection form.
pub fn plan_trivializing_schedule(
    knot: &SeifertKnot,
    search_bound: u32,
) -> Result<TrivializingPlan, PassMoveError> {
    let k = knot.k();
    let witness = if knot.is_k_even() {
        let arf = knot.arf()?;
        if !arf.is_zero() {
            return Err(PassMoveError::ObstructionNonzero(TrivialityObstruction::Arf(arf)));
        }
        even_diagonal_symplectic(knot)?
    } else {
        let sigma = knot.sigma()?;
        if sigma != 0 {
            return Err(PassMoveError::ObstructionNonzero(TrivialityObstruction::Sigma(sigma)));
        }
        hyperbolize(&knot.intersection_form(), search_bound)?
    };
    let target = witness.apply(knot.matrix()).map_err(SeifertError::from)?;
    let pairs = target.dim() / 2;
    let start = SeifertKnot::trivial_blocks(k, pairs);
    let ops = moves_between(k, start.matrix(), &target)?;
    Ok(TrivializingPlan {
        witness,
        schedule: PassMoveSchedule {
            ops,
            start,
            claimed_end: target,
        },
    })
}

/// Entry classes in the order they are matched, as `(row, col)` pairs.
pub fn entry_order(pairs: usize, k_even: bool) -> Vec<(usize, usize)> {
    let x = |i: usize| 2 * i;
    let y = |i: usize| 2 * i + 1;
    let mut order = Vec::new();
    for i in 0..pairs {
        for j in 0..i {
            order.push((x(i), x(j)));
        }
    }
    for i in 0..pairs {
        for j in 0..i {
            order.push((y(i), y(j)));
        }
    }
    for i in 0..pairs {
        for j in 0..pairs {
            order.push((x(i), y(j)));
        }
    }
    if k_even {
        order.extend((0..pairs).map(|i| (x(i), x(i))));
        order.extend((0..pairs).map(|i| (y(i), y(i))));
    }
    order
}

fn moves_between(k: u32, from: &IntMatrix, to: &IntMatrix) -> Result<Vec<PassMoveOp>, PassMoveError> {
    let order = entry_order(from.dim() / 2, k % 2 == 0);
    let change = |&(r, c): &(usize, usize)| {
        let nu = &to[(r, c)] - &from[(r, c)];
        if r == c {
            debug_assert!(nu.is_even());
            nu / 2
        } else {
            nu
        }
    };
    let total: BigInt = order.iter().map(|e| change(e).abs()).sum();
    if total > BigInt::from(MAX_SCHEDULE_MOVES) {
        return Err(PassMoveError::ScheduleTooLong {
            moves: total,
            limit: MAX_SCHEDULE_MOVES,
        });
    }
    let mut ops = Vec::new();
    for (r, c) in order {
        let nu = change(&(r, c));
        if nu.is_zero() {
            continue;
        }
        let delta = if nu.is_positive() { 1 } else { -1 };
        let count = nu.abs().to_usize().expect("bounded by the move limit");
        ops.extend(std::iter::repeat(PassMoveOp::new(r, c, delta)).take(count));
    }
    Ok(ops)
}
