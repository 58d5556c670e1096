//! JSON encodings of schedules, congruences, metabolizers and certificates,
//! and the decoders `--verify` uses to read them back.

use std::str::FromStr;

use knotform::cobordism::{CobordismVerdict, InconclusiveReason, Metabolizer, Obstruction, Scope};
use knotform::exactalg::{CongruenceWitness, ElementaryOp, IntMatrix, OpKind};
use knotform::passmove::{PassMoveOp, PassMoveSchedule};
use knotform::realize::{Compared, RealizationCertificate};
use knotform::seifert::SeifertKnot;
use num_bigint::BigInt;
use serde_json::{json, Number, Value};

use crate::input::{big, matrix_from_rows};

pub fn int(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

pub fn vector(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.rows().map(vector).collect())
}

pub fn knot(k: &SeifertKnot) -> Value {
    json!({ "k": k.k(), "matrix": matrix(k.matrix()) })
}

/// Moves are written 1-based, as in the text schedule format.
pub fn schedule(s: &PassMoveSchedule) -> Value {
    let ops: Vec<Value> = s.ops.iter().map(|op| json!([op.i + 1, op.j + 1, op.delta])).collect();
    json!({
        "k": s.start.k(),
        "start": matrix(s.start.matrix()),
        "moves": ops,
        "end": matrix(&s.claimed_end),
    })
}

fn kind_name(kind: OpKind) -> &'static str {
    match kind {
        OpKind::AddMultiple => "add",
        OpKind::Swap => "swap",
        OpKind::Negate => "negate",
    }
}

pub fn congruence(w: &CongruenceWitness) -> Value {
    let log: Vec<Value> = w
        .log()
        .iter()
        .map(|op| {
            let (kind, i, j, m) = op.to_record();
            json!([kind_name(kind), i, j, int(&m)])
        })
        .collect();
    json!({ "transform": matrix(w.transform()), "log": log })
}

pub fn obstruction(o: &Obstruction) -> Value {
    match *o {
        Obstruction::Arf { left, right } => json!({ "invariant": "arf", "left": left.value(), "right": right.value() }),
        Obstruction::Sigma { left, right } => json!({ "invariant": "sigma", "left": left, "right": right }),
    }
}

pub fn compared(c: &Compared) -> Value {
    match *c {
        Compared::Arf { left, right } => json!({ "invariant": "arf", "left": left.value(), "right": right.value() }),
        Compared::Sigma { left, right } => json!({ "invariant": "sigma", "left": left, "right": right }),
    }
}

fn reason_name(r: InconclusiveReason) -> &'static str {
    match r {
        InconclusiveReason::Exhausted => "exhausted",
        InconclusiveReason::BudgetExceeded => "budget-exceeded",
        InconclusiveReason::InvariantsAgree => "invariants-agree",
    }
}

pub fn verdict(v: &CobordismVerdict) -> Value {
    match v {
        CobordismVerdict::Cobordant { witness, scope } => json!({
            "status": "cobordant",
            "scope": match scope { Scope::Algebraic => "algebraic", Scope::Geometric => "geometric" },
            "vectors": witness.vectors().iter().map(|w| vector(w)).collect::<Vec<_>>(),
        }),
        CobordismVerdict::Obstructed(o) => json!({ "status": "obstructed", "obstruction": obstruction(o) }),
        CobordismVerdict::Inconclusive { bound, reason } => json!({
            "status": "inconclusive",
            "bound": bound,
            "reason": reason_name(*reason),
        }),
    }
}

pub fn certificate(c: &RealizationCertificate) -> Value {
    json!({
        "k3": knot(&c.k3),
        "schedule": schedule(&c.schedule),
        "metabolizer": verdict(&c.metabolizer),
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

pub fn read_matrix(v: &Value) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<Number>> = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    matrix_from_rows(&rows)
}

pub fn read_vectors(v: &Value) -> Result<Vec<Vec<BigInt>>, String> {
    let rows: Vec<Vec<Number>> = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
    rows.iter()
        .map(|r| r.iter().map(|x| big(x).ok_or_else(|| format!("{x} is not an integer"))).collect())
        .collect()
}

fn read_u(v: &Value, what: &str) -> Result<u64, String> {
    v.as_u64().ok_or_else(|| format!("{what} must be a non-negative integer"))
}

pub fn read_knot(v: &Value) -> Result<SeifertKnot, String> {
    let k = u32::try_from(read_u(field(v, "k")?, "k")?).map_err(|e| e.to_string())?;
    SeifertKnot::new(k, read_matrix(field(v, "matrix")?)?).map_err(|e| e.to_string())
}

pub fn read_schedule(v: &Value) -> Result<PassMoveSchedule, String> {
    let k = u32::try_from(read_u(field(v, "k")?, "k")?).map_err(|e| e.to_string())?;
    let start = SeifertKnot::new(k, read_matrix(field(v, "start")?)?).map_err(|e| e.to_string())?;
    let moves = field(v, "moves")?.as_array().ok_or("moves must be an array")?;
    let ops = moves
        .iter()
        .map(|m| {
            let t: (u64, u64, i64) = serde_json::from_value(m.clone()).map_err(|e| e.to_string())?;
            if t.0 == 0 || t.1 == 0 {
                return Err("move indices are 1-based".to_string());
            }
            Ok(PassMoveOp::new(t.0 as usize - 1, t.1 as usize - 1, t.2))
        })
        .collect::<Result<_, _>>()?;
    Ok(PassMoveSchedule {
        ops,
        start,
        claimed_end: read_matrix(field(v, "end")?)?,
    })
}

pub fn read_congruence(v: &Value, dim: usize) -> Result<CongruenceWitness, String> {
    let log = field(v, "log")?.as_array().ok_or("log must be an array")?;
    let ops = log
        .iter()
        .map(|rec| {
            let (name, i, j, m): (String, usize, usize, Number) =
                serde_json::from_value(rec.clone()).map_err(|e| e.to_string())?;
            let kind = match name.as_str() {
                "add" => OpKind::AddMultiple,
                "swap" => OpKind::Swap,
                "negate" => OpKind::Negate,
                other => return Err(format!("unknown operation `{other}`")),
            };
            let m = big(&m).ok_or("multiplier must be an integer")?;
            Ok(ElementaryOp::from_record(kind, i, j, m))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let w = CongruenceWitness::from_log(dim, ops).map_err(|e| e.to_string())?;
    if w.transform() != &read_matrix(field(v, "transform")?)? {
        return Err("transform does not match its log".into());
    }
    Ok(w)
}

pub fn read_metabolizer(v: &Value, context: &IntMatrix) -> Result<Metabolizer, String> {
    Metabolizer::new(read_vectors(field(v, "vectors")?)?, context.clone()).map_err(|e| e.to_string())
}

/// Reads a certificate. An inconclusive metabolizer is kept as such, with
/// its bound, since [`RealizationCertificate::verify`] re-checks the invariants.
pub fn read_certificate(v: &Value, k2: &SeifertKnot) -> Result<RealizationCertificate, String> {
    let k3 = read_knot(field(v, "k3")?)?;
    let schedule = read_schedule(field(v, "schedule")?)?;
    let m = field(v, "metabolizer")?;
    let metabolizer = match field(m, "status")?.as_str() {
        Some("cobordant") => {
            let block = knotform::cobordism::cobordism_block(&k3, k2).map_err(|e| e.to_string())?;
            CobordismVerdict::Cobordant {
                witness: read_metabolizer(m, &block)?,
                scope: Scope::Algebraic,
            }
        }
        Some("inconclusive") => CobordismVerdict::Inconclusive {
            bound: u32::try_from(read_u(field(m, "bound")?, "bound")?).map_err(|e| e.to_string())?,
            reason: InconclusiveReason::Exhausted,
        },
        _ => return Err("metabolizer status must be cobordant or inconclusive".into()),
    };
    Ok(RealizationCertificate {
        k3,
        schedule,
        metabolizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_integers_survive() {
        let x: BigInt = BigInt::from(7) << 200;
        let m = IntMatrix::from_rows(&[vec![x.clone(), BigInt::from(-1)], vec![BigInt::from(0), -x]]).unwrap();
        let text = serde_json::to_string(&matrix(&m)).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(read_matrix(&back).unwrap(), m);
    }

    #[test]
    fn schedules_round_trip() {
        let s = PassMoveSchedule {
            ops: vec![PassMoveOp::new(0, 1, 1), PassMoveOp::new(1, 1, -1)],
            start: SeifertKnot::trivial_blocks(2, 1),
            claimed_end: IntMatrix::from_i64(&[&[0, 2], &[1, -2]]),
        };
        assert_eq!(read_schedule(&schedule(&s)).unwrap(), s);
    }

    #[test]
    fn fractions_are_rejected() {
        assert!(read_matrix(&json!([[1.5]])).is_err());
        assert!(read_schedule(&json!({"k": 1, "start": [], "moves": [[0, 1, 1]], "end": []})).is_err());
    }
}
