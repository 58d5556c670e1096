//! Acceptance suite: one line per criterion, each with a pinned time limit.
//!
//! Reference values come from oracles written here: brute-force counting
//! over `(Z/2)^dim` for the Arf invariant and floating-point eigenvalue signs
//! for the signature.

use std::time::{Duration, Instant};

use knotform::cobordism::{algebraically_slice, cobordism_block, find_metabolizer, DEFAULT_METABOLIZER_BOUND};
use knotform::exactalg::{congruence_apply, IntMatrix};
use knotform::hyperbolic::{hyperbolize, DEFAULT_ISOTROPIC_BOUND};
use knotform::passmove::{apply_passmove, plan_trivializing_schedule, verify_schedule};
use knotform::realize::decide_realizable;
use knotform::sample::{random_e8_knot, random_knot, random_passmove, random_unimodular};
use knotform::seifert::SeifertKnot;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

fn small(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.rows().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
}

/// Arf invariant by counting: `q(v) = vᵀAv mod 2` takes the value 1 on more
/// than half of `(Z/2)^dim` exactly when Arf = 1.
fn arf_oracle(a: &IntMatrix) -> u8 {
    let a = small(a);
    let n = a.len();
    let mut ones = 0u64;
    for mask in 0u64..(1 << n) {
        let mut q = 0i64;
        for i in 0..n {
            for j in 0..n {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                    q += a[i][j];
                }
            }
        }
        ones += q.rem_euclid(2) as u64;
    }
    u8::from(n > 0 && ones > 1 << (n - 1))
}

/// Signature of `A + ᵗA` from eigenvalue signs.
fn sigma_oracle(a: &IntMatrix) -> i64 {
    let a = small(a);
    let n = a.len();
    if n == 0 {
        return 0;
    }
    let g = DMatrix::from_fn(n, n, |i, j| (a[i][j] + a[j][i]) as f64);
    let eig = g.symmetric_eigen().eigenvalues;
    assert!(eig.iter().all(|x| x.abs() > 1e-6), "unimodular forms have no zero eigenvalue");
    eig.iter().map(|&x| if x > 0.0 { 1 } else { -1 }).sum()
}

fn arf_one(k: u32) -> SeifertKnot {
    SeifertKnot::new(k, IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap()
}

/// Random valid knot with `pairs` symplectic pairs, reaching both values of
/// the parity invariant.
fn knot_with(rng: &mut ChaCha8Rng, k: u32, pairs: usize) -> SeifertKnot {
    if k % 2 == 1 && pairs == 4 && rng.gen_bool(0.3) {
        return random_e8_knot(rng, k, 0);
    }
    if k % 2 == 0 && pairs > 0 && rng.gen_bool(0.5) {
        // one trivial pair swapped for the Arf-one pair
        let rest = random_knot(rng, k, pairs - 1, 4 * pairs);
        let s = random_unimodular(rng, 2 * pairs, 2, 6 * pairs);
        return arf_one(k).connected_sum(&rest).unwrap().change_basis(&s).unwrap();
    }
    random_knot(rng, k, pairs, 4 * pairs + 2)
}

/// [`knot_with`] for a random number of pairs up to `max_dim / 2`.
fn sample_knot(rng: &mut ChaCha8Rng, k: u32, max_dim: usize) -> SeifertKnot {
    let pairs = rng.gen_range(0..=max_dim / 2);
    knot_with(rng, k, pairs)
}

struct Line {
    id: u32,
    name: &'static str,
    limit: Duration,
    elapsed: Duration,
    result: Result<String, String>,
}

impl Line {
    fn passed(&self) -> bool {
        self.result.is_ok() && self.elapsed <= self.limit
    }
}

fn criterion(id: u32, name: &'static str, limit_secs: u64, f: impl FnOnce() -> Result<String, String>) -> Line {
    let start = Instant::now();
    let result = f();
    Line {
        id,
        name,
        limit: Duration::from_secs(limit_secs),
        elapsed: start.elapsed(),
        result,
    }
}

fn anchors() -> Result<String, String> {
    let a = arf_one(0).arf().map_err(|e| e.to_string())?;
    if a.value() != 1 {
        return Err(format!("arf([[1,1],[0,1]]) = {a}"));
    }
    for p in 0..=4 {
        let t = SeifertKnot::trivial_blocks(0, p).arf().map_err(|e| e.to_string())?;
        if t.value() != 0 {
            return Err(format!("arf of {p} trivial pairs = {t}"));
        }
    }
    Ok("arf = 1 and arf(trivial) = 0 for 0..=4 pairs".into())
}

fn invariants_along_schedules() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut moves = 0;
    for trial in 0..1000 {
        let k = (trial % 4) as u32;
        let mut knot = sample_knot(&mut rng, k, 8);
        if knot.dim() == 0 {
            knot = SeifertKnot::trivial_blocks(k, 1);
        }
        let form = knot.intersection_form();
        let inv = knot.invariants().map_err(|e| e.to_string())?;
        for step in 0..rng.gen_range(1..=12) {
            let op = random_passmove(&mut rng, k, knot.dim());
            knot = apply_passmove(&knot, op).map_err(|e| format!("trial {trial} step {step}: {e}"))?;
            moves += 1;
            if knot.intersection_form() != form {
                return Err(format!("trial {trial} step {step}: intersection form changed"));
            }
            if knot.invariants().map_err(|e| e.to_string())? != inv {
                return Err(format!("trial {trial} step {step}: invariant changed"));
            }
        }
    }
    Ok(format!("1000 trials, {moves} moves, 0 violations"))
}

fn trivializing_schedules() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut total = 0;
    for trial in 0..200 {
        let k = (trial % 4) as u32;
        let pairs = rng.gen_range(1..=4);
        let knot = random_knot(&mut rng, k, pairs, 6 * pairs);
        let plan = plan_trivializing_schedule(&knot, DEFAULT_ISOTROPIC_BOUND).map_err(|e| format!("trial {trial}: {e}"))?;
        if !verify_schedule(&plan.schedule) {
            return Err(format!("trial {trial}: schedule does not replay"));
        }
        if plan.witness.apply(knot.matrix()).map_err(|e| e.to_string())? != plan.schedule.claimed_end {
            return Err(format!("trial {trial}: schedule end is not congruent to the input"));
        }
        total += plan.schedule.len();
    }
    Ok(format!("200 plans, {total} moves, 0 failures"))
}

fn decision_table() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let (mut yes, mut no) = (0, 0);
    for n in [1u64, 2, 3, 4, 5, 7] {
        if n % 2 == 0 {
            let v = decide_realizable(n, None, None).map_err(|e| e.to_string())?;
            if !v.realizable {
                return Err(format!("n = {n} should be realizable"));
            }
            yes += 1;
            continue;
        }
        let k = ((n - 1) / 2) as u32;
        for trial in 0..30 {
            let a = sample_knot(&mut rng, k, 8);
            let b = sample_knot(&mut rng, k, 8);
            let expected = if n % 4 == 1 {
                arf_oracle(a.matrix()) == arf_oracle(b.matrix())
            } else {
                sigma_oracle(a.matrix()) == sigma_oracle(b.matrix())
            };
            let v = decide_realizable(n, Some(&a), Some(&b)).map_err(|e| format!("n = {n} trial {trial}: {e}"))?;
            if v.realizable != expected {
                return Err(format!("n = {n} trial {trial}: got {}, rule says {expected}", v.realizable));
            }
            if v.realizable {
                let c = v.certificate.ok_or(format!("n = {n} trial {trial}: no certificate"))?;
                c.verify(&a, &b).map_err(|e| format!("n = {n} trial {trial}: {e}"))?;
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    Ok(format!("{yes} realizable (certificates verified), {no} obstructed, all match the rule"))
}

fn metabolizer_sanity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for trial in 0..100 {
        let k = (trial % 4) as u32;
        let knot = sample_knot(&mut rng, k, 8);
        let block = cobordism_block(&knot, &knot).map_err(|e| e.to_string())?;
        let v = find_metabolizer(&block, 1).map_err(|e| e.to_string())?;
        if !v.is_cobordant() {
            return Err(format!("trial {trial}: (K, K) gave {v:?}"));
        }
    }
    for trial in 0..100 {
        let k = (trial % 4) as u32;
        let knot = sample_knot(&mut rng, k, 8);
        let sum = knot.connected_sum(&knot.minus_star()).map_err(|e| e.to_string())?;
        let v = algebraically_slice(&sum, DEFAULT_METABOLIZER_BOUND).map_err(|e| e.to_string())?;
        if !v.is_cobordant() {
            return Err(format!("trial {trial}: K # -K* gave {v:?}"));
        }
    }
    Ok("100 pairs (K, K) and 100 sums K # -K* certified".into())
}

fn hyperbolic_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for trial in 0..100 {
        let pairs = 1 + trial % 4;
        let h = IntMatrix::hyperbolic(pairs);
        let s0 = random_unimodular(&mut rng, 2 * pairs, 3, 8 * pairs);
        let g = congruence_apply(&h, &s0).map_err(|e| e.to_string())?;
        let w = hyperbolize(&g, DEFAULT_ISOTROPIC_BOUND).map_err(|e| format!("trial {trial}: {e}"))?;
        if w.apply(&g).map_err(|e| e.to_string())? != h || !w.verify_replay() {
            return Err(format!("trial {trial}: result is not the hyperbolic sum"));
        }
    }
    Ok("100 scrambled hyperbolic sums recovered exactly".into())
}

fn oracle_equivalence() -> Result<String, String> {
    let mut checked = (0, 0);
    // every 2×2 matrix with entries in [-2, 2]
    for code in 0..625 {
        let e: Vec<i64> = (0..4).map(|p| (code / 5i64.pow(p)) % 5 - 2).collect();
        let a = IntMatrix::from_i64(&[&[e[0], e[1]], &[e[2], e[3]]]);
        for k in [0u32, 1] {
            let Ok(knot) = SeifertKnot::new(k, a.clone()) else { continue };
            if k == 0 {
                if knot.arf().unwrap().value() != arf_oracle(&a) {
                    return Err(format!("arf differs on {a:?}"));
                }
                checked.0 += 1;
            } else {
                if knot.sigma().unwrap() != sigma_oracle(&a) {
                    return Err(format!("sigma differs on {a:?}"));
                }
                checked.1 += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for _ in 0..400 {
        let knot = sample_knot(&mut rng, 2, 6);
        if knot.arf().unwrap().value() != arf_oracle(knot.matrix()) {
            return Err(format!("arf differs on {:?}", knot.matrix()));
        }
        checked.0 += 1;
        let knot = sample_knot(&mut rng, 1, 8);
        if knot.sigma().unwrap() != sigma_oracle(knot.matrix()) {
            return Err(format!("sigma differs on {:?}", knot.matrix()));
        }
        checked.1 += 1;
    }
    Ok(format!("{} arf and {} sigma values agree", checked.0, checked.1))
}

fn refinement_law() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut pairs = 0u64;
    for trial in 0..60 {
        let knot = knot_with(&mut rng, 2 * (trial % 2) as u32, 1 + trial % 3);
        let n = knot.dim();
        let j = small(&knot.intersection_form());
        let vec_of = |mask: u32| -> Vec<BigInt> { (0..n).map(|i| BigInt::from(mask >> i & 1)).collect() };
        let q: Vec<u8> = (0..1u32 << n).map(|m| knot.quadratic_refinement(&vec_of(m)).value()).collect();
        for u in 0..1u32 << n {
            for v in 0..1u32 << n {
                let dot: i64 = (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| u >> a & 1 == 1 && v >> b & 1 == 1)
                    .map(|(a, b)| j[a][b])
                    .sum();
                let sum: Vec<BigInt> = (0..n).map(|i| BigInt::from((u >> i & 1) + (v >> i & 1))).collect();
                let lhs = knot.quadratic_refinement(&sum).value();
                let rhs = (q[u as usize] + q[v as usize] + dot.rem_euclid(2) as u8) % 2;
                if lhs != rhs {
                    return Err(format!("trial {trial}: law fails at u = {u:b}, v = {v:b}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs over 60 matrices"))
}

#[test]
fn acceptance() {
    let lines = [
        criterion(1, "anchor Arf values", 1, anchors),
        criterion(2, "invariants constant along pass-moves", 30, invariants_along_schedules),
        criterion(3, "trivializing schedules replay", 120, trivializing_schedules),
        criterion(4, "realizability decision table", 60, decision_table),
        criterion(5, "diagonal metabolizers found", 60, metabolizer_sanity),
        criterion(6, "hyperbolic round trip", 60, hyperbolic_round_trip),
        criterion(7, "Arf and signature oracles agree", 60, oracle_equivalence),
        criterion(8, "quadratic refinement law", 30, refinement_law),
    ];
    for l in &lines {
        let tag = if l.passed() { "PASS" } else { "FAIL" };
        let detail = match &l.result {
            Ok(s) => s.clone(),
            Err(e) => format!("error: {e}"),
        };
        println!(
            "[{tag}] {}. {} ({:.2}s, limit {}s): {detail}",
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.limit.as_secs()
        );
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed()).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
