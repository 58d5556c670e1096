use std::path::PathBuf;
use std::process::Command;

use knotform::sample::{negative_e8_knot, random_knot};
use knotform::seifert::SeifertKnot;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn dir(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(d: &PathBuf, name: &str, v: &Value) -> String {
    let p = d.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn knot_json(k: &SeifertKnot) -> Value {
    let rows: Vec<Vec<String>> = k
        .matrix()
        .rows()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    let text = format!(
        "{{\"k\": {}, \"matrix\": [{}]}}",
        k.k(),
        rows.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(",")
    );
    serde_json::from_str(&text).unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knotform")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    let (code, out) = run(&all);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

/// Saves a structured report and feeds it back through `--verify`.
fn round_trip(d: &PathBuf, name: &str, args: &[&str]) -> (i32, i32) {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    let (code, out) = run(&all);
    let p = d.join(name);
    std::fs::write(&p, out).unwrap();
    let mut again: Vec<&str> = args.to_vec();
    let p = p.to_string_lossy().into_owned();
    again.push("--verify");
    again.push(&p);
    (code, run(&again).0)
}

#[test]
fn invariants_examples() {
    let d = dir("invariants");
    let arf = write(&d, "arf.json", &json!({"k": 0, "matrix": [[1, 1], [0, 1]]}));
    let (code, v) = structured(&["invariants", &arf]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["arf"], json!(1));
    let triv = write(&d, "triv.json", &json!({"k": 1, "matrix": [[0, 1], [0, 0]]}));
    let (code, v) = structured(&["invariants", &triv]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["sigma"], json!(0));
    let bad = write(&d, "bad.json", &json!({"k": 1, "matrix": [[1, 0], [0, 1]]}));
    let (code, v) = structured(&["invariants", &bad]);
    assert_eq!(code, 3);
    assert!(v["outputs"]["error"].as_str().unwrap().contains("not unimodular"));
}

#[test]
fn input_errors_exit_two() {
    let d = dir("parse");
    let cases = [
        ("both.json", "{\"n\": 3, \"k\": 1, \"matrix\": []}"),
        ("even.json", "{\"n\": 4, \"matrix\": []}"),
        ("frac.json", "{\"k\": 1, \"matrix\": [[0.5, 1], [0, 0]]}"),
        ("ragged.json", "{\"k\": 1, \"matrix\": [[0, 1], [0]]}"),
        ("extra.json", "{\"k\": 1, \"matrix\": [], \"note\": 1}"),
        ("junk.json", "not json"),
    ];
    for (name, text) in cases {
        let p = d.join(name);
        std::fs::write(&p, text).unwrap();
        assert_eq!(run(&["invariants", p.to_str().unwrap()]).0, 2, "{name}");
    }
    assert_eq!(run(&["invariants", d.join("missing.json").to_str().unwrap()]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["slice", "x.json", "--bound", "0"]).0, 2);
    assert_eq!(run(&["realizable", "3"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn realizable_examples() {
    let d = dir("realizable");
    assert_eq!(run(&["realizable", "2"]).0, 0);
    let arf = write(&d, "arf.json", &json!({"n": 5, "matrix": [[1, 1], [0, 1]]}));
    let triv = write(&d, "triv.json", &json!({"n": 5, "matrix": []}));
    let (code, v) = structured(&["realizable", "5", &arf, &triv]);
    assert_eq!(code, 1);
    assert_eq!(v["outputs"]["compared"], json!({"invariant": "arf", "left": 1, "right": 0}));
    let e8 = write(&d, "e8.json", &knot_json(&negative_e8_knot(1)));
    let (code, v) = structured(&["realizable", "3", &e8, &e8]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["certificate"]["metabolizer"]["status"], json!("cobordant"));
    assert_eq!(round_trip(&d, "e8.report", &["realizable", "3", &e8, &e8]), (0, 0));
    let t3 = write(&d, "t3.json", &json!({"n": 3, "matrix": []}));
    assert_eq!(run(&["realizable", "3", &e8, &t3]).0, 1);
    assert_eq!(run(&["realizable", "5", &e8, &e8]).0, 3);
}

#[test]
fn four_tuple_examples() {
    let d = dir("four");
    assert_eq!(run(&["realizable", "4", "--four-tuple"]).0, 0);
    let t = write(&d, "t.json", &knot_json(&SeifertKnot::trivial_blocks(1, 2)));
    assert_eq!(round_trip(&d, "t.report", &["realizable", "3", &t, &t, "--four-tuple"]), (0, 0));
    let e8 = write(&d, "e8.json", &knot_json(&negative_e8_knot(1)));
    let (code, v) = structured(&["realizable", "3", &e8, &t, "--four-tuple"]);
    assert_eq!(code, 4);
    assert_eq!(v["outputs"]["verdict"], json!("not-certified"));
}

#[test]
fn thin_wrapper_examples() {
    let d = dir("wrappers");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = random_knot(&mut rng, 1, 2, 6);
    let kf = write(&d, "k.json", &knot_json(&k));
    assert_eq!(round_trip(&d, "pm.report", &["passmoves", &kf]), (0, 0));
    assert_eq!(round_trip(&d, "cob.report", &["cobordant", &kf, &kf, "--bound", "1"]), (0, 0));
    let t = write(&d, "t.json", &knot_json(&SeifertKnot::trivial_blocks(1, 2)));
    assert_eq!(round_trip(&d, "slice.report", &["slice", &t]), (0, 0));
    assert_eq!(round_trip(&d, "hyp.report", &["hyperbolize", &kf]), (0, 0));
    let form = write(&d, "form.json", &json!({"matrix": [[2, 1], [1, 2]]}));
    assert_eq!(run(&["hyperbolize", &form]).0, 1);
    let e8 = write(&d, "e8.json", &knot_json(&negative_e8_knot(1)));
    assert_eq!(run(&["passmoves", &e8]).0, 1);
    assert_eq!(run(&["slice", &e8]).0, 1);
    let even = write(&d, "even.json", &json!({"k": 2, "matrix": [[0, 1], [0, 0]]}));
    assert_eq!(run(&["hyperbolize", &even]).0, 3);
}

#[test]
fn tampered_reports_are_rejected() {
    let d = dir("tamper");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = random_knot(&mut rng, 1, 2, 6);
    let kf = write(&d, "k.json", &knot_json(&k));
    let (_, mut v) = structured(&["passmoves", &kf]);
    let end = &mut v["outputs"]["schedule"]["end"][0][1];
    *end = json!(end.as_i64().unwrap() + 1);
    let rep = write(&d, "pm.report", &v);
    assert_eq!(run(&["passmoves", &kf, "--verify", &rep]).0, 3);

    let (_, mut v) = structured(&["cobordant", &kf, &kf, "--bound", "1"]);
    v["outputs"]["verdict"]["vectors"][0][0] = json!(7);
    let rep = write(&d, "cob.report", &v);
    assert_eq!(run(&["cobordant", &kf, &kf, "--verify", &rep]).0, 3);

    let (_, v) = structured(&["slice", &kf]);
    let rep = write(&d, "other.report", &v);
    assert_eq!(run(&["hyperbolize", &kf, "--verify", &rep]).0, 3);
}

#[test]
fn reports_are_deterministic() {
    let d = dir("det");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let k = random_knot(&mut rng, 1, 2, 6);
    let kf = write(&d, "k.json", &knot_json(&k));
    for args in [
        vec!["realizable", "3", &kf, &kf],
        vec!["--format", "structured", "passmoves", &kf],
        vec!["cobordant", &kf, &kf],
    ] {
        assert_eq!(run(&args), run(&args));
    }
}

#[test]
fn huge_entries_are_exact() {
    let d = dir("huge");
    let big = "123456789012345678901234567890123456789";
    let text = format!("{{\"k\": 1, \"matrix\": [[{big}, 1], [0, 0]]}}");
    let p = d.join("huge.json");
    std::fs::write(&p, text).unwrap();
    let (code, out) = run(&["--format", "structured", "hyperbolize", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains(&format!("-{big}")));
    // already hyperbolic, but θ(x, y) needs one unit move per step from 1
    let next = "123456789012345678901234567890123456790";
    let far = d.join("far.json");
    std::fs::write(&far, format!("{{\"k\": 1, \"matrix\": [[0, {next}], [-{big}, 0]]}}")).unwrap();
    let (code, out) = run(&["passmoves", far.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(out.contains("more than the limit"));
}
