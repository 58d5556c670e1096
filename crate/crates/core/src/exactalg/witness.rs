use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{determinant, AlgError, IntMatrix};

/// One elementary row operation on a change-of-basis matrix.
///
/// Rows of the transform are the new basis vectors written in the old basis,
/// so `AddMultiple { target, source, multiplier }` means
/// `b_target ← b_target + multiplier · b_source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryOp {
    AddMultiple {
        target: usize,
        source: usize,
        multiplier: BigInt,
    },
    Swap {
        a: usize,
        b: usize,
    },
    Negate {
        index: usize,
    },
}

/// Operation kind tag used by the flat `(kind, i, j, multiplier)` log encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    AddMultiple,
    Swap,
    Negate,
}

impl ElementaryOp {
    pub fn add_multiple(target: usize, source: usize, multiplier: impl Into<BigInt>) -> Self {
        Self::AddMultiple {
            target,
            source,
            multiplier: multiplier.into(),
        }
    }

    /// Flat record `(kind, i, j, multiplier)`; `j` repeats `i` and the
    /// multiplier is `-1` for a negation, and the multiplier is `1` for a swap.
    pub fn to_record(&self) -> (OpKind, usize, usize, BigInt) {
        match self {
            Self::AddMultiple {
                target,
                source,
                multiplier,
            } => (OpKind::AddMultiple, *target, *source, multiplier.clone()),
            Self::Swap { a, b } => (OpKind::Swap, *a, *b, BigInt::one()),
            Self::Negate { index } => (OpKind::Negate, *index, *index, -BigInt::one()),
        }
    }

    pub fn from_record(kind: OpKind, i: usize, j: usize, multiplier: BigInt) -> Self {
        match kind {
            OpKind::AddMultiple => Self::AddMultiple {
                target: i,
                source: j,
                multiplier,
            },
            OpKind::Swap => Self::Swap { a: i, b: j },
            OpKind::Negate => Self::Negate { index: i },
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::AddMultiple {
                target,
                source,
                multiplier,
            } => Self::AddMultiple {
                target: *target,
                source: *source,
                multiplier: -multiplier,
            },
            other => other.clone(),
        }
    }

    fn max_index(&self) -> usize {
        match self {
            Self::AddMultiple { target, source, .. } => (*target).max(*source),
            Self::Swap { a, b } => (*a).max(*b),
            Self::Negate { index } => *index,
        }
    }

    fn is_well_formed(&self, dim: usize) -> bool {
        match self {
            Self::AddMultiple { target, source, .. } => target != source && self.max_index() < dim,
            _ => self.max_index() < dim,
        }
    }

    /// Applies the operation to the rows of `m`.
    pub(crate) fn apply_rows(&self, m: &mut IntMatrix) {
        match self {
            Self::AddMultiple {
                target,
                source,
                multiplier,
            } => m.add_row_multiple(*target, *source, multiplier),
            Self::Swap { a, b } => m.swap_rows(*a, *b),
            Self::Negate { index } => m.negate_row(*index),
        }
    }

    /// Applies the operation as a congruence `E · m · ᵗE`.
    pub(crate) fn apply_congruence(&self, m: &mut IntMatrix) {
        self.apply_rows(m);
        match self {
            Self::AddMultiple {
                target,
                source,
                multiplier,
            } => m.add_col_multiple(*target, *source, multiplier),
            Self::Swap { a, b } => m.swap_cols(*a, *b),
            Self::Negate { index } => m.negate_col(*index),
        }
    }
}

/// A unimodular change of basis `S` together with the elementary operations
/// that build it from the identity. Certifies `S · M · ᵗS = M′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceWitness {
    transform: IntMatrix,
    source_dim: usize,
    log: Vec<ElementaryOp>,
}

impl CongruenceWitness {
    pub fn identity(dim: usize) -> Self {
        Self {
            transform: IntMatrix::identity(dim),
            source_dim: dim,
            log: Vec::new(),
        }
    }

    /// Rebuilds a witness by replaying `log` from the identity.
    pub fn from_log(dim: usize, log: Vec<ElementaryOp>) -> Result<Self, AlgError> {
        if let Some(pos) = log.iter().position(|op| !op.is_well_formed(dim)) {
            return Err(AlgError::MalformedOp { position: pos, dim });
        }
        let transform = replay(dim, &log);
        Ok(Self {
            transform,
            source_dim: dim,
            log,
        })
    }

    pub fn transform(&self) -> &IntMatrix {
        &self.transform
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn log(&self) -> &[ElementaryOp] {
        &self.log
    }

    pub fn is_identity(&self) -> bool {
        self.transform == IntMatrix::identity(self.source_dim)
    }

    /// `S · m · ᵗS`.
    pub fn apply(&self, m: &IntMatrix) -> Result<IntMatrix, AlgError> {
        congruence_apply(m, &self.transform)
    }

    /// True iff the log replays to the stored transform and `|det S| = 1`.
    pub fn verify_replay(&self) -> bool {
        self.log.iter().all(|op| op.is_well_formed(self.source_dim))
            && replay(self.source_dim, &self.log) == self.transform
            && determinant(&self.transform).abs().is_one()
    }

    pub fn inverse(&self) -> Self {
        let log: Vec<_> = self.log.iter().rev().map(ElementaryOp::inverse).collect();
        let transform = replay(self.source_dim, &log);
        Self {
            transform,
            source_dim: self.source_dim,
            log,
        }
    }

    /// The witness for `other ∘ self`, i.e. transform `other.S · self.S`.
    pub fn then(&self, other: &Self) -> Result<Self, AlgError> {
        if self.source_dim != other.source_dim {
            return Err(AlgError::DimensionMismatch {
                left: self.source_dim,
                right: other.source_dim,
            });
        }
        let mut log = self.log.clone();
        log.extend(other.log.iter().cloned());
        Ok(Self {
            transform: other.transform.mul(&self.transform)?,
            source_dim: self.source_dim,
            log,
        })
    }

    /// Embeds `self` into a larger basis, acting on indices `offset..offset+dim`.
    pub fn embed(&self, offset: usize, total: usize) -> Self {
        let shift = |op: &ElementaryOp| match op {
            ElementaryOp::AddMultiple {
                target,
                source,
                multiplier,
            } => ElementaryOp::AddMultiple {
                target: target + offset,
                source: source + offset,
                multiplier: multiplier.clone(),
            },
            ElementaryOp::Swap { a, b } => ElementaryOp::Swap {
                a: a + offset,
                b: b + offset,
            },
            ElementaryOp::Negate { index } => ElementaryOp::Negate {
                index: index + offset,
            },
        };
        let log: Vec<_> = self.log.iter().map(shift).collect();
        Self {
            transform: replay(total, &log),
            source_dim: total,
            log,
        }
    }
}

fn replay(dim: usize, log: &[ElementaryOp]) -> IntMatrix {
    let mut t = IntMatrix::identity(dim);
    for op in log {
        op.apply_rows(&mut t);
    }
    t
}

/// Returns `S · m · ᵗS`, computed exactly.
pub fn congruence_apply(m: &IntMatrix, s: &IntMatrix) -> Result<IntMatrix, AlgError> {
    m.check_dim(s)?;
    s.mul(m)?.mul(&s.transpose())
}

/// Incrementally builds a congruence witness while tracking the transformed form.
///
/// With `mod2` set, the tracked form is kept reduced into `{0, 1}`; the
/// transform itself stays integral and unimodular.
#[derive(Clone, Debug)]
pub(crate) struct CongruenceBuilder {
    transform: IntMatrix,
    form: IntMatrix,
    log: Vec<ElementaryOp>,
    mod2: bool,
}

impl CongruenceBuilder {
    pub(crate) fn new(form: &IntMatrix) -> Self {
        Self {
            transform: IntMatrix::identity(form.dim()),
            form: form.clone(),
            log: Vec::new(),
            mod2: false,
        }
    }

    pub(crate) fn new_mod2(form: &IntMatrix) -> Self {
        Self {
            form: form.mod2(),
            mod2: true,
            ..Self::new(form)
        }
    }

    pub(crate) fn form(&self) -> &IntMatrix {
        &self.form
    }

    /// Greedy reduction of a symmetric form on `range`: applies `b_i ← b_i ± b_j`
    /// while that strictly lowers the sum of absolute entries of the block.
    /// A helpful step is stretched to the multiple `c·b_j` (same sign) that
    /// rounds away one entry when that helps more, so large entries shrink
    /// in one step.
    pub(crate) fn form_reduce(&mut self, range: std::ops::Range<usize>) {
        loop {
            let mut changed = false;
            for i in range.clone() {
                for j in range.clone() {
                    if i == j {
                        continue;
                    }
                    for unit in [BigInt::one(), -BigInt::one()] {
                        let gain = self.form_gain(&range, i, j, &unit);
                        if !gain.is_positive() {
                            continue;
                        }
                        let (_, c) = self
                            .multipliers(&range, i, j)
                            .into_iter()
                            .filter(|c| c.signum() == unit.signum())
                            .map(|c| (self.form_gain(&range, i, j, &c), c))
                            .fold((gain, unit.clone()), |best, cand| if cand.0 > best.0 { cand } else { best });
                        self.add_multiple(i, j, c);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Integers of absolute value above 1 next to `-g_il / g_jl` and to the minimizer of the new `g_ii`.
    fn multipliers(&self, range: &std::ops::Range<usize>, i: usize, j: usize) -> Vec<BigInt> {
        let g = &self.form;
        let mut out = Vec::new();
        let mut near = |num: BigInt, den: &BigInt| {
            if den.is_zero() {
                return;
            }
            let q = num.div_floor(den);
            for c in [q.clone(), q + 1] {
                if c.abs() > BigInt::one() && !out.contains(&c) {
                    out.push(c);
                }
            }
        };
        for l in range.clone() {
            if l != i && l != j {
                near(-&g[(i, l)], &g[(j, l)]);
            }
        }
        near(-&g[(i, j)], &g[(j, j)]);
        if g[(j, j)].is_zero() {
            near(-&g[(i, i)], &(&g[(i, j)] * 2));
        }
        out
    }

    /// Decrease of `Σ|G_ab|` over `range` caused by `b_i ← b_i + c·b_j`.
    fn form_gain(&self, range: &std::ops::Range<usize>, i: usize, j: usize, c: &BigInt) -> BigInt {
        let g = &self.form;
        let mut gain = BigInt::zero();
        for l in range.clone() {
            if l == i {
                continue;
            }
            let new = &g[(i, l)] + &g[(j, l)] * c;
            // off-diagonal entries appear twice
            gain += (g[(i, l)].abs() - new.abs()) * 2;
        }
        let new_ii: BigInt = &g[(i, i)] + &g[(i, j)] * c * 2 + &g[(j, j)] * c * c;
        gain + g[(i, i)].abs() - new_ii.abs()
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.form[(i, j)]
    }

    pub(crate) fn apply(&mut self, op: ElementaryOp) {
        if let ElementaryOp::AddMultiple { multiplier, .. } = &op {
            if multiplier.is_zero() {
                return;
            }
        }
        op.apply_rows(&mut self.transform);
        op.apply_congruence(&mut self.form);
        if self.mod2 {
            let two = BigInt::from(2);
            let n = self.form.dim();
            let touched: Vec<usize> = match &op {
                ElementaryOp::AddMultiple { target, .. } => vec![*target],
                ElementaryOp::Swap { .. } => vec![],
                ElementaryOp::Negate { index } => vec![*index],
            };
            for &t in &touched {
                for c in 0..n {
                    self.form[(t, c)] = self.form[(t, c)].mod_floor(&two);
                    self.form[(c, t)] = self.form[(c, t)].mod_floor(&two);
                }
            }
        }
        self.log.push(op);
    }

    pub(crate) fn add_multiple(&mut self, target: usize, source: usize, multiplier: BigInt) {
        self.apply(ElementaryOp::AddMultiple {
            target,
            source,
            multiplier,
        });
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.apply(ElementaryOp::Swap { a, b });
        }
    }

    pub(crate) fn negate(&mut self, index: usize) {
        self.apply(ElementaryOp::Negate { index });
    }

    /// Moves basis vector `from` to position `to` (`to <= from`) preserving the
    /// relative order of the vectors in between.
    pub(crate) fn rotate_into(&mut self, from: usize, to: usize) {
        for p in (to..from).rev() {
            self.swap(p, p + 1);
        }
    }

    /// Rewrites the basis on `range` so that one basis vector equals
    /// `Σ coeffs[r] · b_{range.start + r}`, then moves it to `range.start`.
    /// Requires `gcd(coeffs) = 1`.
    pub(crate) fn install_primitive(&mut self, start: usize, coeffs: &[BigInt]) {
        let mut c: Vec<BigInt> = coeffs.to_vec();
        loop {
            let nonzero: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
            debug_assert!(!nonzero.is_empty(), "zero vector cannot be installed");
            let pivot = *nonzero
                .iter()
                .min_by(|&&a, &&b| c[a].abs().cmp(&c[b].abs()).then(a.cmp(&b)))
                .expect("nonzero coefficient");
            if nonzero.len() == 1 {
                debug_assert!(c[pivot].abs().is_one(), "coefficient vector must be primitive");
                if c[pivot].is_negative() {
                    self.negate(start + pivot);
                }
                self.rotate_into(start + pivot, start);
                return;
            }
            // b_pivot ← b_pivot + q·b_j rewrites the coordinate c_j ← c_j − q·c_pivot.
            for &j in &nonzero {
                if j == pivot {
                    continue;
                }
                let q = c[j].div_floor(&c[pivot]);
                if !q.is_zero() {
                    self.add_multiple(start + pivot, start + j, q.clone());
                    let d = &q * &c[pivot];
                    c[j] -= d;
                }
            }
        }
    }

    /// Euclid on the row `pairing(anchor, ·)` over `range`, excluding `anchor`,
    /// until a single basis vector pairs to `+1` with the anchor. Returns its index,
    /// or `None` when the gcd of the row is not 1.
    pub(crate) fn isolate_unit_partner(&mut self, anchor: usize, range: std::ops::Range<usize>) -> Option<usize> {
        let two = BigInt::from(2);
        loop {
            let entry = |b: &Self, j: usize| {
                let v = b.form[(anchor, j)].clone();
                if b.mod2 {
                    v.mod_floor(&two)
                } else {
                    v
                }
            };
            let nonzero: Vec<usize> = range
                .clone()
                .filter(|&j| j != anchor && !entry(self, j).is_zero())
                .collect();
            let pivot = *nonzero.iter().min_by(|&&a, &&b| {
                entry(self, a).abs().cmp(&entry(self, b).abs()).then(a.cmp(&b))
            })?;
            let pv = entry(self, pivot);
            if nonzero.len() == 1 {
                if !pv.abs().is_one() {
                    return None;
                }
                if pv.is_negative() {
                    self.negate(pivot);
                }
                return Some(pivot);
            }
            for &j in &nonzero {
                if j == pivot {
                    continue;
                }
                let q = entry(self, j).div_floor(&pv);
                if !q.is_zero() {
                    self.add_multiple(j, pivot, -q);
                }
            }
        }
    }

    pub(crate) fn finish(self) -> CongruenceWitness {
        CongruenceWitness {
            source_dim: self.transform.dim(),
            transform: self.transform,
            log: self.log,
        }
    }

    pub(crate) fn into_parts(self) -> (CongruenceWitness, IntMatrix) {
        let form = self.form.clone();
        (self.finish(), form)
    }
}
