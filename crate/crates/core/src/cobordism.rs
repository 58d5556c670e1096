//! Algebraic cobordism of Seifert matrices.
//!
//! Two knots with Seifert matrices `A₁`, `A₂` are cobordant when the block
//! form `A₁ ⊕ (-A₂)` of dimension `2m` carries a *metabolizer*: a primitive
//! rank-`m` sublattice on which `θ(u, v) = ᵗu·M·v` vanishes identically.
//! [`find_metabolizer`] searches for one with bounded coefficients;
//! [`necessary_obstructions`] compares the cheap invariants that any
//! metabolizer forces to agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::ControlFlow;

use thiserror::Error;

use crate::exactalg::smallform::SmallForm;
use crate::exactalg::{
    determinant, invariant_factors, is_primitive_set, signature_symmetric, smallalg,
    symplectic_basis_mod2, AlgError, IntMatrix, ShellVectors, SignatureTriple,
};
use crate::seifert::{same_k, SeifertError, SeifertKnot, Z2};

/// Default coefficient bound for metabolizer searches.
pub const DEFAULT_METABOLIZER_BOUND: u32 = 2;

/// Default number of search steps before a search gives up.
pub const DEFAULT_SEARCH_BUDGET: u64 = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobordismError {
    #[error("metabolizer search needs an even dimension, got {0}")]
    OddDimension(usize),
    #[error("coefficient bound must be positive")]
    ZeroBound,
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetabolizerError {
    #[error("expected {expected} vectors, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("vector {index} has the wrong length")]
    WrongLength { index: usize },
    #[error("θ(v{i}, v{j}) ≠ 0")]
    NotIsotropic { i: usize, j: usize },
    #[error("vectors do not span a primitive sublattice")]
    NotPrimitive,
}

/// A half-rank primitive sublattice on which the bilinear form vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metabolizer {
    vectors: Vec<Vec<BigInt>>,
    context: IntMatrix,
}

impl Metabolizer {
    /// Checks the vectors against `context` and wraps them.
    pub fn new(vectors: Vec<Vec<BigInt>>, context: IntMatrix) -> Result<Self, MetabolizerError> {
        let m = Self { vectors, context };
        m.validate()?;
        Ok(m)
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn context(&self) -> &IntMatrix {
        &self.context
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Exact re-check: half rank, all pairwise `θ` zero, primitive span.
    pub fn validate(&self) -> Result<(), MetabolizerError> {
        let n = self.context.dim();
        let expected = n / 2;
        if n % 2 != 0 || self.vectors.len() != expected {
            return Err(MetabolizerError::WrongCount {
                expected,
                found: self.vectors.len(),
            });
        }
        if let Some(index) = self.vectors.iter().position(|v| v.len() != n) {
            return Err(MetabolizerError::WrongLength { index });
        }
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                if !self.context.bilinear(u, v).is_zero() {
                    return Err(MetabolizerError::NotIsotropic { i, j });
                }
            }
        }
        if !self.vectors.is_empty() && !is_primitive_set(&self.vectors) {
            return Err(MetabolizerError::NotPrimitive);
        }
        Ok(())
    }
}

/// Whether a cobordant verdict carries geometric meaning or only the matrix statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    Algebraic,
    Geometric,
}

/// An invariant that takes different values on the two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obstruction {
    Arf { left: Z2, right: Z2 },
    Sigma { left: i64, right: i64 },
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Arf { left, right } => write!(f, "arf {left} vs {right}"),
            Self::Sigma { left, right } => write!(f, "sigma {left} vs {right}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InconclusiveReason {
    /// Every candidate within the bound was tried.
    Exhausted,
    /// The search budget ran out first.
    BudgetExceeded,
    /// Only necessary conditions were checked, and they hold.
    InvariantsAgree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CobordismVerdict {
    Cobordant { witness: Metabolizer, scope: Scope },
    Obstructed(Obstruction),
    Inconclusive { bound: u32, reason: InconclusiveReason },
}

impl CobordismVerdict {
    pub fn is_cobordant(&self) -> bool {
        matches!(self, Self::Cobordant { .. })
    }

    pub fn is_obstructed(&self) -> bool {
        matches!(self, Self::Obstructed(_))
    }

    pub fn witness(&self) -> Option<&Metabolizer> {
        match self {
            Self::Cobordant { witness, .. } => Some(witness),
            _ => None,
        }
    }

    fn with_scope(self, scope: Scope) -> Self {
        match self {
            Self::Cobordant { witness, .. } => Self::Cobordant { witness, scope },
            other => other,
        }
    }
}

/// `A₁ ⊕ (-A₂)`.
pub fn cobordism_block(k1: &SeifertKnot, k2: &SeifertKnot) -> Result<IntMatrix, CobordismError> {
    same_k(k1, k2)?;
    Ok(k1.matrix().direct_sum(&k2.matrix().neg()))
}

pub(crate) fn scope_for(k: u32) -> Scope {
    if k == 0 {
        Scope::Algebraic
    } else {
        Scope::Geometric
    }
}

/// Compares Arf (k even) or signature (k odd). Never reports cobordant.
pub fn necessary_obstructions(k1: &SeifertKnot, k2: &SeifertKnot) -> Result<CobordismVerdict, CobordismError> {
    same_k(k1, k2)?;
    let obstruction = if k1.is_k_even() {
        let (left, right) = (k1.arf()?, k2.arf()?);
        (left != right).then_some(Obstruction::Arf { left, right })
    } else {
        let (left, right) = (k1.sigma()?, k2.sigma()?);
        (left != right).then_some(Obstruction::Sigma { left, right })
    };
    Ok(match obstruction {
        Some(o) => CobordismVerdict::Obstructed(o),
        None => CobordismVerdict::Inconclusive {
            bound: 0,
            reason: InconclusiveReason::InvariantsAgree,
        },
    })
}

/// Necessary checks first, then a metabolizer search on `A₁ ⊕ (-A₂)`.
pub fn cobordant(k1: &SeifertKnot, k2: &SeifertKnot, coeff_bound: u32) -> Result<CobordismVerdict, CobordismError> {
    let pre = necessary_obstructions(k1, k2)?;
    if pre.is_obstructed() {
        return Ok(pre);
    }
    let block = cobordism_block(k1, k2)?;
    Ok(find_metabolizer(&block, coeff_bound)?.with_scope(scope_for(k1.k())))
}

/// Whether `K` is cobordant to the trivial knot, i.e. `A` itself is metabolic.
pub fn algebraically_slice(knot: &SeifertKnot, coeff_bound: u32) -> Result<CobordismVerdict, CobordismError> {
    let scope = scope_for(knot.k());
    if knot.dim() == 0 {
        let witness = Metabolizer {
            vectors: Vec::new(),
            context: IntMatrix::zeros(0),
        };
        return Ok(CobordismVerdict::Cobordant { witness, scope });
    }
    let pre = necessary_obstructions(knot, &SeifertKnot::trivial(knot.k()))?;
    if pre.is_obstructed() {
        return Ok(pre);
    }
    Ok(find_metabolizer(knot.matrix(), coeff_bound)?.with_scope(scope))
}

/// Searches a metabolizer of `m` with coefficients in `[-coeff_bound, coeff_bound]`.
pub fn find_metabolizer(m: &IntMatrix, coeff_bound: u32) -> Result<CobordismVerdict, CobordismError> {
    find_metabolizer_with_budget(m, coeff_bound, DEFAULT_SEARCH_BUDGET)
}

/// [`find_metabolizer`] with an explicit cap on search steps.
///
/// A few coordinate-shaped sublattices are checked first. The search then
/// adds one vector at a time, ordered by leading coordinate (pivot), first
/// with coefficient bound 1, then 2, up to `coeff_bound`; the budget is
/// shared across rounds. Candidates for the next vector are the bounded
/// integer points of the rational subspace orthogonal (on both sides) to the
/// vectors chosen so far and vanishing before the pivot. A pivot is
/// abandoned once that subspace cannot hold the missing isotropic rank even
/// over the rationals.
pub fn find_metabolizer_with_budget(
    m: &IntMatrix,
    coeff_bound: u32,
    budget: u64,
) -> Result<CobordismVerdict, CobordismError> {
    let n = m.dim();
    if n % 2 != 0 {
        return Err(CobordismError::OddDimension(n));
    }
    if coeff_bound == 0 {
        return Err(CobordismError::ZeroBound);
    }
    let inconclusive = |reason| CobordismVerdict::Inconclusive {
        bound: coeff_bound,
        reason,
    };
    if n == 0 {
        let witness = Metabolizer {
            vectors: Vec::new(),
            context: m.clone(),
        };
        return Ok(CobordismVerdict::Cobordant {
            witness,
            scope: Scope::Algebraic,
        });
    }
    if !arf_allows_metabolizer(m)? {
        return Ok(inconclusive(InconclusiveReason::Exhausted));
    }
    if let Some(witness) = coordinate_candidates(n)
        .into_iter()
        .map(|vectors| Metabolizer {
            vectors,
            context: m.clone(),
        })
        .find(|w| w.validate().is_ok())
    {
        return Ok(CobordismVerdict::Cobordant {
            witness,
            scope: Scope::Algebraic,
        });
    }
    let sym = m.add(&m.transpose())?;
    let alt = m.sub(&m.transpose())?;
    let mut search = Search {
        m,
        form: SmallForm::new(m),
        sym_small: to_small(&sym),
        alt_small: to_small(&alt),
        sym,
        alt,
        half: n / 2,
        bound: 1,
        chosen: Vec::new(),
    };
    let mut budget = budget;
    for b in 1..=coeff_bound {
        search.bound = b;
        match search.extend(0, &mut budget) {
            Outcome::Found => {
                let vectors = search
                    .chosen
                    .iter()
                    .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                    .collect();
                let witness = Metabolizer {
                    vectors,
                    context: m.clone(),
                };
                debug_assert_eq!(witness.validate(), Ok(()));
                return Ok(CobordismVerdict::Cobordant {
                    witness,
                    scope: Scope::Algebraic,
                });
            }
            Outcome::Exhausted => {}
            Outcome::OutOfBudget => return Ok(inconclusive(InconclusiveReason::BudgetExceeded)),
        }
    }
    Ok(inconclusive(InconclusiveReason::Exhausted))
}

/// Sublattices spanned by coordinate patterns, tried before the search:
/// `e_i ± e_{i+m}` (the metabolizer of any `B ⊕ (-B)`), then even, odd,
/// first-half and second-half coordinate vectors.
fn coordinate_candidates(n: usize) -> Vec<Vec<Vec<BigInt>>> {
    let m = n / 2;
    let vector = |entries: &[(usize, i64)]| {
        let mut v = vec![BigInt::zero(); n];
        for &(i, x) in entries {
            v[i] = BigInt::from(x);
        }
        v
    };
    vec![
        (0..m).map(|i| vector(&[(i, 1), (i + m, 1)])).collect(),
        (0..m).map(|i| vector(&[(i, 1), (i + m, -1)])).collect(),
        (0..m).map(|i| vector(&[(2 * i, 1)])).collect(),
        (0..m).map(|i| vector(&[(2 * i + 1, 1)])).collect(),
        (0..m).map(|i| vector(&[(i, 1)])).collect(),
        (0..m).map(|i| vector(&[(i + m, 1)])).collect(),
    ]
}

/// When `M + ᵗM` is unimodular mod 2, a metabolizer reduces to a Lagrangian
/// on which `q(x) = ᵗx·M·x` vanishes, so the Arf invariant of `q` must be 0.
fn arf_allows_metabolizer(m: &IntMatrix) -> Result<bool, AlgError> {
    let sym = m.add(&m.transpose())?;
    if determinant(&sym).is_even() {
        return Ok(true);
    }
    let basis = symplectic_basis_mod2(&sym)?;
    let q = basis.apply(m)?;
    let arf = (0..m.dim() / 2)
        .map(|i| Z2::from_int(&q[(2 * i, 2 * i)]) * Z2::from_int(&q[(2 * i + 1, 2 * i + 1)]))
        .sum::<Z2>();
    Ok(arf.is_zero())
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    m: &'a IntMatrix,
    form: SmallForm,
    sym: IntMatrix,
    alt: IntMatrix,
    sym_small: Option<Vec<Vec<i128>>>,
    alt_small: Option<Vec<Vec<i128>>>,
    half: usize,
    bound: u32,
    chosen: Vec<Vec<i64>>,
}

impl Search<'_> {
    /// Extends the chosen vectors by one whose leading coordinate (pivot) is
    /// at or after `start`, the pivot of the last chosen vector. Every set of
    /// vectors is reached in exactly one order: by pivot, and by
    /// [`shell_cmp`] among vectors sharing a pivot.
    fn extend(&mut self, start: usize, budget: &mut u64) -> Outcome {
        let n = self.m.dim();
        let need = self.half - self.chosen.len();
        if need == 0 {
            return Outcome::Found;
        }
        let mut rows = Vec::with_capacity(2 * self.chosen.len() + n);
        for v in &self.chosen {
            rows.push(self.form.left_functional(v));
            rows.push(self.form.right_functional(v));
        }
        for j in 0..start {
            rows.push(unit_row(n, j));
        }
        let bound = self.bound;
        for pivot in start..n {
            if pivot > start {
                rows.push(unit_row(n, pivot - 1));
            }
            let charge = (n * n) as u64;
            if *budget < charge {
                return Outcome::OutOfBudget;
            }
            *budget -= charge;
            // chosen vectors with this pivot stay inside the space, in its radical
            let inside = self.chosen.iter().filter(|v| leading(v) == Some(pivot)).count();
            let space = Subspace::kernel(&rows, n);
            if !self.may_contain_isotropic(&space, need + inside) {
                if pivot > start || inside == 0 {
                    // the space only shrinks from here on
                    break;
                }
                continue;
            }
            let flow = bounded_points(&space, pivot, bound, budget, &mut |w, budget| {
                self.consider(w, pivot, budget)
            });
            if let ControlFlow::Break(done) = flow {
                return done;
            }
        }
        Outcome::Exhausted
    }

    fn consider(&mut self, w: Vec<i64>, pivot: usize, budget: &mut u64) -> ControlFlow<Outcome> {
        let w = canonical_sign(w);
        if w[pivot] == 0 {
            return ControlFlow::Continue(());
        }
        if let Some(last) = self.chosen.last() {
            if leading(last) == Some(pivot) && shell_cmp(&w, last).is_le() {
                return ControlFlow::Continue(());
            }
        }
        if !self.form.vanishes(&w, &w) {
            return ControlFlow::Continue(());
        }
        self.chosen.push(w);
        if self.prefix_is_primitive() {
            match self.extend(pivot, budget) {
                Outcome::Exhausted => {}
                done => return ControlFlow::Break(done),
            }
        }
        self.chosen.pop();
        ControlFlow::Continue(())
    }

    fn prefix_is_primitive(&self) -> bool {
        let rows: Vec<Vec<BigInt>> = self
            .chosen
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        is_primitive_set(&rows)
    }

    /// Rational bounds on the largest totally isotropic subspace of `space`:
    /// the symmetric part allows `min(p, q) + z`, the alternating part allows
    /// `dim - rank / 2`.
    fn may_contain_isotropic(&self, space: &Subspace, need: usize) -> bool {
        let d = space.free.len();
        if d < need {
            return false;
        }
        let fits = |inertia: SignatureTriple, alt_rank: usize| {
            inertia.positive.min(inertia.negative) + inertia.zero >= need && d - alt_rank / 2 >= need
        };
        let small = || {
            let basis = space.small_basis()?;
            let sym = smallalg::inertia(restrict_small(self.sym_small.as_ref()?, &basis)?)?;
            let alt = smallalg::rank(restrict_small(self.alt_small.as_ref()?, &basis)?)?;
            Some(fits(sym, alt))
        };
        if let Some(answer) = small() {
            return answer;
        }
        let basis = space.basis();
        let restrict = |g: &IntMatrix| IntMatrix::from_fn(d, |i, j| g.bilinear(&basis[i], &basis[j]));
        let sym = signature_symmetric(&restrict(&self.sym)).expect("restriction of a symmetric form");
        let alt: Vec<Vec<BigInt>> = restrict(&self.alt).rows().map(<[BigInt]>::to_vec).collect();
        fits(sym, invariant_factors(&alt).len())
    }
}

fn to_small(m: &IntMatrix) -> Option<Vec<Vec<i128>>> {
    m.rows().map(|r| r.iter().map(ToPrimitive::to_i128).collect()).collect()
}

/// Gram matrix `ᵗb_x · g · b_y` of `g` on the given vectors.
fn restrict_small(g: &[Vec<i128>], basis: &[Vec<i128>]) -> Option<Vec<Vec<i128>>> {
    let dot = |u: &[i128], v: &[i128]| {
        u.iter()
            .zip(v)
            .filter(|(&a, &b)| a != 0 && b != 0)
            .try_fold(0i128, |acc, (&a, &b)| acc.checked_add(a.checked_mul(b)?))
    };
    let images: Vec<Vec<i128>> = basis
        .iter()
        .map(|b| g.iter().map(|row| dot(row, b)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    basis
        .iter()
        .map(|bx| images.iter().map(|gy| dot(bx, gy)).collect())
        .collect()
}

type Visit<'v> = dyn FnMut(Vec<i64>, &mut u64) -> ControlFlow<Outcome> + 'v;

/// Calls `visit` on the integer points of `space` inside `[-bound, bound]^n`,
/// one of each `±` pair. Each enumeration step costs one unit of `budget`.
fn bounded_points(
    space: &Subspace,
    pivot: usize,
    bound: u32,
    budget: &mut u64,
    visit: &mut Visit<'_>,
) -> ControlFlow<Outcome> {
    if let Some(mut dfs) = PointDfs::new(space, pivot, bound) {
        return dfs.run(budget, visit);
    }
    for free in ShellVectors::new(space.free.len(), bound) {
        if *budget == 0 {
            return ControlFlow::Break(Outcome::OutOfBudget);
        }
        *budget -= 1;
        if let Some(w) = space.expand(&free, i64::from(bound)) {
            visit(w, budget)?;
        }
    }
    ControlFlow::Continue(())
}

struct SolvedRow {
    col: usize,
    den: i128,
    coeffs: Vec<i128>,
    /// `tail[i] = Σ_{j ≥ i} |coeffs[j]|`
    tail: Vec<i128>,
}

/// Branch and bound over the free coordinates. Passes run by shell (largest
/// free coefficient), then by number of nonzero free coordinates; inside a
/// pass coordinates are assigned left to right with values `1, -1, 2, -2, …`
/// before `0`. A branch is cut as soon as some solved coordinate can no
/// longer land in the box.
struct PointDfs<'a> {
    free: &'a [usize],
    rows: Vec<SolvedRow>,
    dim: usize,
    bound: i128,
    /// The first free coordinate is the pivot and must be nonzero.
    pivot_free: bool,
    shell: i64,
    weight: usize,
    w: Vec<i64>,
    partial: Vec<i128>,
}

impl<'a> PointDfs<'a> {
    fn new(space: &'a Subspace, pivot: usize, bound: u32) -> Option<Self> {
        let rows = space
            .pivots
            .iter()
            .map(|p| {
                let (den, coeffs) = p.small.clone()?;
                let mut tail = vec![0i128; coeffs.len() + 1];
                for i in (0..coeffs.len()).rev() {
                    tail[i] = tail[i + 1].checked_add(coeffs[i].checked_abs()?)?;
                }
                tail[0].checked_mul(i128::from(bound))?;
                Some(SolvedRow {
                    col: p.col,
                    den,
                    coeffs,
                    tail,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        let partial = vec![0; rows.len()];
        Some(Self {
            free: &space.free,
            rows,
            dim: space.dim,
            bound: i128::from(bound),
            pivot_free: space.free.first() == Some(&pivot),
            shell: 0,
            weight: 0,
            w: vec![0; space.dim],
            partial,
        })
    }

    fn run(&mut self, budget: &mut u64, visit: &mut Visit<'_>) -> ControlFlow<Outcome> {
        for shell in 1..=self.bound as i64 {
            for weight in 1..=self.free.len() {
                self.shell = shell;
                self.weight = weight;
                self.descend(0, 0, false, budget, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn descend(
        &mut self,
        idx: usize,
        used: usize,
        hit: bool,
        budget: &mut u64,
        visit: &mut Visit<'_>,
    ) -> ControlFlow<Outcome> {
        if *budget == 0 {
            return ControlFlow::Break(Outcome::OutOfBudget);
        }
        *budget -= 1;
        let shell = i128::from(self.shell);
        for (row, &p) in self.rows.iter().zip(&self.partial) {
            let slack = shell * row.tail[idx];
            let limit = self.bound * row.den;
            if p - slack > limit || p + slack < -limit {
                return ControlFlow::Continue(());
            }
        }
        if idx == self.free.len() {
            if used != self.weight || !hit {
                return ControlFlow::Continue(());
            }
            let mut w = self.w.clone();
            for (row, &p) in self.rows.iter().zip(&self.partial) {
                if p % row.den != 0 {
                    return ControlFlow::Continue(());
                }
                w[row.col] = (p / row.den) as i64;
            }
            debug_assert_eq!(w.len(), self.dim);
            return visit(w, budget);
        }
        let remaining = self.free.len() - idx;
        if used < self.weight {
            for mag in 1..=self.shell {
                for x in [mag, -mag] {
                    if used == 0 && x < 0 {
                        continue;
                    }
                    self.assign(idx, x);
                    let flow = self.descend(idx + 1, used + 1, hit || mag == self.shell, budget, visit);
                    self.assign(idx, -x);
                    flow?;
                }
            }
        }
        let forced = idx == 0 && self.pivot_free;
        if !forced && self.weight - used < remaining {
            self.descend(idx + 1, used, hit, budget, visit)?;
        }
        ControlFlow::Continue(())
    }

    /// Adds `x` to free coordinate `idx`.
    fn assign(&mut self, idx: usize, x: i64) {
        self.w[self.free[idx]] += x;
        for (row, p) in self.rows.iter().zip(self.partial.iter_mut()) {
            *p += row.coeffs[idx] * i128::from(x);
        }
    }
}

fn unit_row(n: usize, j: usize) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); n];
    r[j] = BigInt::one();
    r
}

fn canonical_sign(mut w: Vec<i64>) -> Vec<i64> {
    if w.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    w
}

fn leading(v: &[i64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// The [`ShellVectors`] order on sign-normalized vectors.
fn shell_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let key = |v: &[i64]| {
        let shell = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        // 1, -1, 2, -2, ... → 0, 1, 2, 3, ...
        let values: Vec<u64> = support
            .iter()
            .map(|&i| 2 * (v[i].unsigned_abs() - 1) + u64::from(v[i] < 0))
            .collect();
        (shell, support.len(), support, values)
    };
    key(a).cmp(&key(b))
}

/// Solution space of a homogeneous linear system in reduced echelon form:
/// each pivot coordinate is `Σ coeffs · free / den`.
struct Subspace {
    dim: usize,
    free: Vec<usize>,
    pivots: Vec<Pivot>,
}

struct Pivot {
    col: usize,
    den: BigInt,
    coeffs: Vec<BigInt>,
    small: Option<(i128, Vec<i128>)>,
}

impl Subspace {
    fn kernel(rows: &[Vec<BigInt>], dim: usize) -> Self {
        let small: Option<Vec<Vec<i128>>> = rows
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i128).collect())
            .collect();
        if let Some((free, solved)) = small.and_then(|r| smallalg::kernel(r, dim)) {
            let pivots = solved
                .into_iter()
                .map(|(col, den, coeffs)| Pivot {
                    col,
                    den: BigInt::from(den),
                    coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
                    small: Some((den, coeffs)),
                })
                .collect();
            return Self { dim, free, pivots };
        }
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..a.len() {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..dim {
                        let d = &f * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
        let pivots = pivot_cols
            .iter()
            .enumerate()
            .map(|(row, &col)| {
                let vals: Vec<BigRational> = free.iter().map(|&f| -a[row][f].clone()).collect();
                let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                let coeffs: Vec<BigInt> = vals
                    .iter()
                    .map(|v| (v * BigRational::from_integer(den.clone())).to_integer())
                    .collect();
                let small = den
                    .to_i128()
                    .zip(coeffs.iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>());
                Pivot {
                    col,
                    den,
                    coeffs,
                    small,
                }
            })
            .collect();
        Self { dim, free, pivots }
    }

    /// Full vector from free coordinates, if integral and inside the box.
    fn expand(&self, free: &[i64], bound: i64) -> Option<Vec<i64>> {
        let mut w = vec![0i64; self.dim];
        for (&c, &x) in self.free.iter().zip(free) {
            w[c] = x;
        }
        for p in &self.pivots {
            w[p.col] = p.solve(free, bound)?;
        }
        Some(w)
    }

    /// [`Subspace::basis`] in `i128`, each vector scaled separately.
    fn small_basis(&self) -> Option<Vec<Vec<i128>>> {
        (0..self.free.len())
            .map(|f| {
                let mut scale = 1i128;
                for p in &self.pivots {
                    let (den, coeffs) = p.small.as_ref()?;
                    if coeffs[f] != 0 {
                        scale = scale.lcm(den);
                    }
                }
                let mut v = vec![0i128; self.dim];
                v[self.free[f]] = scale;
                for p in &self.pivots {
                    let (den, coeffs) = p.small.as_ref()?;
                    v[p.col] = coeffs[f].checked_mul(scale / den)?;
                }
                Some(v)
            })
            .collect()
    }

    /// Integer spanning set of the rational subspace, one vector per free coordinate.
    fn basis(&self) -> Vec<Vec<BigInt>> {
        let den = self.pivots.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.den));
        (0..self.free.len())
            .map(|f| {
                let mut v = vec![BigInt::zero(); self.dim];
                v[self.free[f]] = den.clone();
                for p in &self.pivots {
                    v[p.col] = &p.coeffs[f] * (&den / &p.den);
                }
                v
            })
            .collect()
    }
}

impl Pivot {
    fn solve(&self, free: &[i64], bound: i64) -> Option<i64> {
        if let Some((den, coeffs)) = &self.small {
            let mut acc: Option<i128> = Some(0);
            for (&c, &x) in coeffs.iter().zip(free) {
                if x != 0 && c != 0 {
                    acc = acc.and_then(|a| a.checked_add(c.checked_mul(i128::from(x))?));
                }
            }
            if let Some(acc) = acc {
                if acc % den != 0 {
                    return None;
                }
                let v = acc / den;
                return (v.abs() <= i128::from(bound)).then_some(v as i64);
            }
        }
        let acc: BigInt = self
            .coeffs
            .iter()
            .zip(free)
            .map(|(c, &x)| c * x)
            .sum();
        let (q, r) = acc.div_rem(&self.den);
        if !r.is_zero() || q.abs() > BigInt::from(bound) {
            return None;
        }
        q.to_i64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(k: u32, rows: &[&[i64]]) -> SeifertKnot {
        SeifertKnot::new(k, IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn block_layout() {
        let t = knot(1, &[&[0, 1], &[0, 0]]);
        let b = cobordism_block(&t, &t).unwrap();
        assert_eq!(
            b,
            IntMatrix::from_i64(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 0, 0]])
        );
        assert_eq!(cobordism_block(&SeifertKnot::trivial(1), &SeifertKnot::trivial(1)).unwrap().dim(), 0);
        assert!(matches!(
            cobordism_block(&t, &SeifertKnot::trivial(2)),
            Err(CobordismError::Seifert(SeifertError::ParityMismatch(1, 2)))
        ));
    }

    #[test]
    fn trivial_blocks_are_slice_at_bound_one() {
        for k in 0..4 {
            let t = SeifertKnot::trivial_blocks(k, 3);
            let v = algebraically_slice(&t, 1).unwrap();
            let w = v.witness().expect("cobordant");
            assert_eq!(w.validate(), Ok(()));
            assert_eq!(w.rank(), 3);
        }
    }

    #[test]
    fn diagonal_pair_is_found() {
        let trefoil = knot(0, &[&[-1, 1], &[0, -1]]);
        let b = cobordism_block(&trefoil, &trefoil).unwrap();
        let v = find_metabolizer(&b, 1).unwrap();
        assert!(v.witness().unwrap().validate().is_ok());
    }

    #[test]
    fn obstructed_pairs_never_search_positive() {
        let e8 = crate::sample::negative_e8_knot(1);
        let t = SeifertKnot::trivial_blocks(1, 4);
        let pre = necessary_obstructions(&t, &e8).unwrap();
        assert_eq!(pre, CobordismVerdict::Obstructed(Obstruction::Sigma { left: 0, right: -8 }));
        let block = cobordism_block(&t, &e8).unwrap();
        for bound in 1..4 {
            assert_eq!(
                find_metabolizer(&block, bound).unwrap(),
                CobordismVerdict::Inconclusive {
                    bound,
                    reason: InconclusiveReason::Exhausted
                }
            );
        }
        assert!(algebraically_slice(&e8, 2).unwrap().is_obstructed());
    }

    #[test]
    fn arf_pair_is_obstructed() {
        let arf_one = knot(2, &[&[1, 1], &[0, 1]]);
        let arf_zero = SeifertKnot::trivial_blocks(2, 1);
        assert_eq!(
            necessary_obstructions(&arf_one, &arf_zero).unwrap(),
            CobordismVerdict::Obstructed(Obstruction::Arf {
                left: Z2::ONE,
                right: Z2::ZERO
            })
        );
        // the mod-2 prune alone settles the block search
        let block = cobordism_block(&arf_one, &arf_zero).unwrap();
        assert!(!find_metabolizer(&block, 3).unwrap().is_cobordant());
        assert_eq!(
            necessary_obstructions(&arf_one, &arf_one).unwrap(),
            CobordismVerdict::Inconclusive {
                bound: 0,
                reason: InconclusiveReason::InvariantsAgree
            }
        );
    }

    #[test]
    fn odd_dimension_and_zero_bound_are_errors() {
        assert_eq!(
            find_metabolizer(&IntMatrix::zeros(3), 1),
            Err(CobordismError::OddDimension(3))
        );
        assert_eq!(find_metabolizer(&IntMatrix::zeros(2), 0), Err(CobordismError::ZeroBound));
        assert!(find_metabolizer(&IntMatrix::zeros(0), 1).unwrap().is_cobordant());
    }

    #[test]
    fn budget_is_honoured() {
        let trefoil = knot(0, &[&[-1, 1], &[0, -1]]);
        let block = cobordism_block(&trefoil, &trefoil).unwrap();
        // shear the basis so no coordinate pattern is a metabolizer
        let s = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 1, 1, 0], &[1, 0, 0, 1]]);
        let m = crate::exactalg::congruence_apply(&block, &s).unwrap();
        assert_eq!(
            find_metabolizer_with_budget(&m, 1, 0).unwrap(),
            CobordismVerdict::Inconclusive {
                bound: 1,
                reason: InconclusiveReason::BudgetExceeded
            }
        );
        let found = find_metabolizer(&m, 2).unwrap();
        assert_eq!(found.witness().unwrap().validate(), Ok(()));
    }

    #[test]
    fn validation_rejects_bad_witnesses() {
        let h = IntMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let v = |x: &[i64]| x.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        assert!(Metabolizer::new(vec![v(&[1, 0])], h.clone()).is_ok());
        assert_eq!(
            Metabolizer::new(vec![v(&[1, 1])], h.clone()),
            Err(MetabolizerError::NotIsotropic { i: 0, j: 0 })
        );
        assert_eq!(
            Metabolizer::new(vec![v(&[2, 0])], h.clone()),
            Err(MetabolizerError::NotPrimitive)
        );
        assert_eq!(
            Metabolizer::new(vec![], h),
            Err(MetabolizerError::WrongCount { expected: 1, found: 0 })
        );
    }

    mod props {
        use super::*;
        use crate::sample::{random_e8_knot, random_knot};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn diagonal_pairs_are_cobordant(seed in any::<u64>(), k in 0u32..4, pairs in 0usize..4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let knot = random_knot(&mut rng, k, pairs, 8);
                let v = cobordant(&knot, &knot, 1).unwrap();
                let w = v.witness().expect("the diagonal lies within bound 1");
                prop_assert!(w.validate().is_ok());
                prop_assert_eq!(w.context(), &cobordism_block(&knot, &knot).unwrap());
            }

            #[test]
            fn different_signatures_are_never_cobordant(seed in any::<u64>(), pairs in 0usize..3) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_e8_knot(&mut rng, 1, 0);
                let b = random_knot(&mut rng, 1, pairs, 6);
                let v = cobordant(&a, &b, 2).unwrap();
                prop_assert!(v.is_obstructed());
            }

            #[test]
            fn witnesses_always_validate(seed in any::<u64>(), k in 0u32..4) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let knot = random_knot(&mut rng, k, 2, 8);
                if let Some(w) = algebraically_slice(&knot, 1).unwrap().witness() {
                    prop_assert!(w.validate().is_ok());
                    prop_assert_eq!(w.rank() * 2, knot.dim());
                }
            }
        }
    }
}
