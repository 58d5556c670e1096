//! The `knotform` command line.
//!
//! Every command prints one [`Report`] and maps its outcome to an exit code:
//! 0 certified, 1 obstructed, 2 unreadable input, 3 invalid input or rejected
//! artifact, 4 inconclusive at the given bound.

mod artifact;
mod input;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use knotform::cobordism::{
    algebraically_slice, cobordant, cobordism_block, CobordismError, CobordismVerdict, DEFAULT_METABOLIZER_BOUND,
    DEFAULT_SEARCH_BUDGET,
};
use knotform::exactalg::{congruence_apply, determinant, is_unimodular, IntMatrix};
use knotform::hyperbolic::{hyperbolize, is_hyperbolic_normal_form, HyperbolicError, Precondition, DEFAULT_ISOTROPIC_BOUND};
use knotform::passmove::{check_schedule, plan_trivializing_schedule, PassMoveError, TrivialityObstruction};
use knotform::realize::{decide_4tuple, decide_realizable, FourTupleVerdict, RealizeError};
use knotform::seifert::SeifertKnot;
use serde::Serialize;
use serde_json::{json, Value};

pub use input::{InputDigest, InputError};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}

#[derive(Parser, Debug)]
#[command(name = "knotform", version, about = "Exact Seifert-matrix computations for odd-dimensional knots")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Arf invariant (k even) or signature (k odd) of a knot.
    Invariants { file: PathBuf },
    /// Whether a pair of n-knots arises as a cross-section pair.
    Realizable {
        n: u64,
        /// Two knot files; may be omitted for even n.
        #[arg(num_args = 0..=2)]
        files: Vec<PathBuf>,
        /// Check the sufficient slice condition for 4-tuples instead.
        #[arg(long)]
        four_tuple: bool,
        #[arg(long, default_value_t = DEFAULT_METABOLIZER_BOUND, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Re-check the certificate in a structured report.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Pass-moves from the trivial knot to a normal form of the knot.
    Passmoves {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ISOTROPIC_BOUND)]
        bound: u32,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Search a metabolizer of A1 ⊕ (-A2).
    Cobordant {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = DEFAULT_METABOLIZER_BOUND, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Split an even unimodular form (or a knot's intersection form) into hyperbolic planes.
    Hyperbolize {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ISOTROPIC_BOUND)]
        bound: u32,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Search a metabolizer of the Seifert matrix itself.
    Slice {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_METABOLIZER_BOUND, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    Obstructed,
    ParseError,
    ValidationError,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Certified => 0,
            Self::Obstructed => 1,
            Self::ParseError => 2,
            Self::ValidationError => 3,
            Self::Inconclusive => 4,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_budget: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub parameters: Parameters,
    pub status: Status,
    pub exit_code: u8,
    pub outputs: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command.join(" "));
        for i in &self.inputs {
            let _ = writeln!(s, "input: {} sha256:{}", i.path, i.sha256);
        }
        if let Some(b) = self.parameters.bound {
            let _ = writeln!(s, "bound: {b}");
        }
        if let Some(b) = self.parameters.search_budget {
            let _ = writeln!(s, "search budget: {b}");
        }
        let _ = writeln!(s, "status: {} (exit {})", status_word(self.status), self.exit_code);
        if let Value::Object(map) = &self.outputs {
            for (k, v) in map {
                let _ = writeln!(s, "{k}: {}", compact(v));
            }
        }
        s
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::Obstructed => "obstructed",
        Status::ParseError => "parse error",
        Status::ValidationError => "validation error",
        Status::Inconclusive => "inconclusive",
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A finished command before it is wrapped into a [`Report`].
struct Outcome {
    status: Status,
    outputs: Value,
}

impl Outcome {
    fn new(status: Status, outputs: Value) -> Self {
        Self { status, outputs }
    }

    fn error(status: Status, msg: impl ToString) -> Self {
        Self::new(status, json!({ "error": msg.to_string() }))
    }
}

struct Ctx {
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn knot(&mut self, path: &Path) -> Result<SeifertKnot, Outcome> {
        let (k, d) = input::read_knot(path).map_err(input_failure)?;
        self.inputs.push(d);
        Ok(k)
    }

    fn report(&mut self, path: &Path) -> Result<Value, Outcome> {
        let (bytes, d) = input::read_bytes(path).map_err(input_failure)?;
        self.inputs.push(d);
        let v: Value = serde_json::from_slice(&bytes).map_err(|e| Outcome::error(Status::ParseError, e))?;
        v.get("outputs")
            .cloned()
            .ok_or_else(|| Outcome::error(Status::ParseError, "report has no outputs"))
    }
}

fn input_failure(e: InputError) -> Outcome {
    let status = match e {
        InputError::Invalid { .. } => Status::ValidationError,
        _ => Status::ParseError,
    };
    Outcome::error(status, e)
}

fn verified(result: Result<(), String>) -> Outcome {
    match result {
        Ok(()) => Outcome::new(Status::Certified, json!({ "verified": true })),
        Err(e) => Outcome::new(Status::ValidationError, json!({ "verified": false, "error": e })),
    }
}

/// Parses `args` (including the program name) and runs the command.
///
/// Returns the rendered output and the exit code. Usage errors come back as
/// clap's message with exit code 2; `--help` and `--version` with 0.
pub fn run<I, T>(args: I) -> (String, u8)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (e.render().to_string(), code);
        }
    };
    let command = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let report = execute(&cli.command, command);
    (report.render(cli.format), report.exit_code)
}

/// Runs one parsed command.
pub fn execute(cmd: &Command, command: Vec<String>) -> Report {
    let mut ctx = Ctx { inputs: Vec::new() };
    let (parameters, result) = match cmd {
        Command::Invariants { file } => (Parameters { bound: None, search_budget: None }, invariants(&mut ctx, file)),
        Command::Realizable {
            n,
            files,
            four_tuple,
            bound,
            verify,
        } => (
            metabolizer_parameters(*bound),
            realizable(&mut ctx, *n, files, *four_tuple, *bound, verify.as_deref()),
        ),
        Command::Passmoves { file, bound, verify } => (
            Parameters {
                bound: Some(*bound),
                search_budget: None,
            },
            passmoves(&mut ctx, file, *bound, verify.as_deref()),
        ),
        Command::Cobordant {
            first,
            second,
            bound,
            verify,
        } => (
            metabolizer_parameters(*bound),
            cobordant_cmd(&mut ctx, first, second, *bound, verify.as_deref()),
        ),
        Command::Hyperbolize { file, bound, verify } => (
            Parameters {
                bound: Some(*bound),
                search_budget: None,
            },
            hyperbolize_cmd(&mut ctx, file, *bound, verify.as_deref()),
        ),
        Command::Slice { file, bound, verify } => (
            metabolizer_parameters(*bound),
            slice(&mut ctx, file, *bound, verify.as_deref()),
        ),
    };
    let outcome = result.unwrap_or_else(|o| o);
    Report {
        command,
        inputs: ctx.inputs,
        parameters,
        status: outcome.status,
        exit_code: outcome.status.exit_code(),
        outputs: outcome.outputs,
    }
}

fn metabolizer_parameters(bound: u32) -> Parameters {
    Parameters {
        bound: Some(bound),
        search_budget: Some(DEFAULT_SEARCH_BUDGET),
    }
}

fn invariants(ctx: &mut Ctx, file: &Path) -> Result<Outcome, Outcome> {
    let knot = ctx.knot(file)?;
    let form = knot.intersection_form();
    let mut out = json!({
        "n": knot.n(),
        "k": knot.k(),
        "dim": knot.dim(),
        "determinant": artifact::int(&determinant(&form)),
        "unimodular": is_unimodular(&form),
    });
    let inv = knot.invariants().map_err(|e| Outcome::error(Status::ValidationError, e))?;
    if let Some(a) = inv.arf {
        out["arf"] = json!(a.value());
    }
    if let Some(s) = inv.sigma {
        out["sigma"] = json!(s);
    }
    Ok(Outcome::new(Status::Certified, out))
}

fn realize_failure(e: RealizeError) -> Outcome {
    let status = match e {
        RealizeError::ZeroDimension | RealizeError::MissingKnot { .. } => Status::ParseError,
        RealizeError::PassMove(PassMoveError::ScheduleTooLong { .. }) => Status::Inconclusive,
        _ => Status::ValidationError,
    };
    Outcome::error(status, e)
}

fn realizable(
    ctx: &mut Ctx,
    n: u64,
    files: &[PathBuf],
    four_tuple: bool,
    bound: u32,
    verify: Option<&Path>,
) -> Result<Outcome, Outcome> {
    if files.len() == 1 {
        return Err(Outcome::error(Status::ParseError, "give two knot files or none"));
    }
    let knots = files.iter().map(|f| ctx.knot(f)).collect::<Result<Vec<_>, _>>()?;
    let (k1, k2) = (knots.first(), knots.get(1));
    if let Some(path) = verify {
        let report = ctx.report(path)?;
        return Ok(verify_realizable(&report, n, k1, k2, four_tuple));
    }
    if four_tuple {
        let v = decide_4tuple(n, k1, k2, bound).map_err(realize_failure)?;
        return Ok(four_tuple_outcome(n, &v));
    }
    let v = decide_realizable(n, k1, k2).map_err(realize_failure)?;
    let out = json!({
        "n": n,
        "realizable": v.realizable,
        "compared": v.compared.as_ref().map(artifact::compared),
        "certificate": v.certificate.as_ref().map(artifact::certificate),
    });
    let status = if v.realizable { Status::Certified } else { Status::Obstructed };
    Ok(Outcome::new(status, out))
}

/// A failed slice check leaves 4-tuple realizability open, so it is
/// reported as inconclusive rather than obstructed.
fn four_tuple_outcome(n: u64, v: &FourTupleVerdict) -> Outcome {
    let (status, out) = match v {
        FourTupleVerdict::EvenDimension => (Status::Certified, json!({ "n": n, "verdict": "even-dimension" })),
        FourTupleVerdict::BothSlice { first, second } => (
            Status::Certified,
            json!({
                "n": n,
                "verdict": "both-slice",
                "first": artifact::verdict(&CobordismVerdict::Cobordant { witness: first.clone(), scope: knotform::cobordism::Scope::Algebraic }),
                "second": artifact::verdict(&CobordismVerdict::Cobordant { witness: second.clone(), scope: knotform::cobordism::Scope::Algebraic }),
            }),
        ),
        FourTupleVerdict::NotCertified { first, second } => (
            Status::Inconclusive,
            json!({ "n": n, "verdict": "not-certified", "first": artifact::verdict(first), "second": artifact::verdict(second) }),
        ),
        FourTupleVerdict::Inconclusive { first, second } => (
            Status::Inconclusive,
            json!({ "n": n, "verdict": "inconclusive", "first": artifact::verdict(first), "second": artifact::verdict(second) }),
        ),
    };
    Outcome::new(status, out)
}

fn verify_realizable(
    report: &Value,
    n: u64,
    k1: Option<&SeifertKnot>,
    k2: Option<&SeifertKnot>,
    four_tuple: bool,
) -> Outcome {
    if four_tuple {
        return verified((|| {
            match report.get("verdict").and_then(Value::as_str) {
                Some("even-dimension") if n % 2 == 0 => Ok(()),
                Some("both-slice") => {
                    let (Some(k1), Some(k2)) = (k1, k2) else {
                        return Err("both knot files are needed".into());
                    };
                    artifact::read_metabolizer(report.get("first").ok_or("missing first")?, k1.matrix())?;
                    artifact::read_metabolizer(report.get("second").ok_or("missing second")?, k2.matrix())?;
                    Ok(())
                }
                _ => Err("report carries no 4-tuple certificate".into()),
            }
        })());
    }
    verified((|| {
        let claimed = report.get("realizable").and_then(Value::as_bool).ok_or("missing `realizable`")?;
        match report.get("certificate") {
            Some(c) if !c.is_null() => {
                let (Some(k1), Some(k2)) = (k1, k2) else {
                    return Err("both knot files are needed".into());
                };
                if !claimed {
                    return Err("certificate attached to a negative verdict".into());
                }
                let cert = artifact::read_certificate(c, k2)?;
                cert.verify(k1, k2).map_err(|e| e.to_string())
            }
            _ => {
                let fresh = decide_realizable(n, k1, k2).map_err(|e| e.to_string())?;
                if fresh.realizable != claimed {
                    return Err("verdict disagrees with the invariants".into());
                }
                if claimed && n % 2 == 1 {
                    return Err("positive odd verdict without certificate".into());
                }
                Ok(())
            }
        }
    })())
}

fn passmoves(ctx: &mut Ctx, file: &Path, bound: u32, verify: Option<&Path>) -> Result<Outcome, Outcome> {
    let knot = ctx.knot(file)?;
    if let Some(path) = verify {
        let report = ctx.report(path)?;
        return Ok(verified((|| {
            let schedule = artifact::read_schedule(report.get("schedule").ok_or("missing schedule")?)?;
            let w = artifact::read_congruence(report.get("congruence").ok_or("missing congruence")?, knot.dim())?;
            if schedule.start != SeifertKnot::trivial_blocks(knot.k(), knot.dim() / 2) {
                return Err("schedule does not start at the trivial knot".into());
            }
            if w.apply(knot.matrix()).map_err(|e| e.to_string())? != schedule.claimed_end {
                return Err("congruence does not carry the knot to the schedule end".into());
            }
            check_schedule(&schedule).map_err(|f| f.to_string())
        })()));
    }
    match plan_trivializing_schedule(&knot, bound) {
        Ok(plan) => Ok(Outcome::new(
            Status::Certified,
            json!({
                "moves": plan.schedule.len(),
                "schedule": artifact::schedule(&plan.schedule),
                "congruence": artifact::congruence(&plan.witness),
            }),
        )),
        Err(PassMoveError::ObstructionNonzero(o)) => {
            let o = match o {
                TrivialityObstruction::Arf(a) => json!({ "invariant": "arf", "value": a.value() }),
                TrivialityObstruction::Sigma(s) => json!({ "invariant": "sigma", "value": s }),
            };
            Ok(Outcome::new(Status::Obstructed, json!({ "obstruction": o })))
        }
        Err(e @ (PassMoveError::Hyperbolic(HyperbolicError::SearchExhausted { .. }) | PassMoveError::ScheduleTooLong { .. })) => {
            Ok(Outcome::error(Status::Inconclusive, e))
        }
        Err(e) => Err(Outcome::error(Status::ValidationError, e)),
    }
}

fn verdict_outcome(v: &CobordismVerdict) -> Outcome {
    let status = match v {
        CobordismVerdict::Cobordant { .. } => Status::Certified,
        CobordismVerdict::Obstructed(_) => Status::Obstructed,
        CobordismVerdict::Inconclusive { .. } => Status::Inconclusive,
    };
    Outcome::new(status, json!({ "verdict": artifact::verdict(v) }))
}

fn cobordism_failure(e: CobordismError) -> Outcome {
    Outcome::error(Status::ValidationError, e)
}

fn verify_metabolizer(report: &Value, context: &IntMatrix) -> Outcome {
    verified((|| {
        let v = report.get("verdict").ok_or("missing verdict")?;
        if v.get("status").and_then(Value::as_str) != Some("cobordant") {
            return Err("report carries no witness".into());
        }
        artifact::read_metabolizer(v, context).map(|_| ())
    })())
}

fn cobordant_cmd(ctx: &mut Ctx, first: &Path, second: &Path, bound: u32, verify: Option<&Path>) -> Result<Outcome, Outcome> {
    let k1 = ctx.knot(first)?;
    let k2 = ctx.knot(second)?;
    if let Some(path) = verify {
        let report = ctx.report(path)?;
        let block = cobordism_block(&k1, &k2).map_err(cobordism_failure)?;
        return Ok(verify_metabolizer(&report, &block));
    }
    let v = cobordant(&k1, &k2, bound).map_err(cobordism_failure)?;
    Ok(verdict_outcome(&v))
}

fn slice(ctx: &mut Ctx, file: &Path, bound: u32, verify: Option<&Path>) -> Result<Outcome, Outcome> {
    let knot = ctx.knot(file)?;
    if let Some(path) = verify {
        let report = ctx.report(path)?;
        return Ok(verify_metabolizer(&report, knot.matrix()));
    }
    let v = algebraically_slice(&knot, bound).map_err(cobordism_failure)?;
    Ok(verdict_outcome(&v))
}

fn hyperbolize_cmd(ctx: &mut Ctx, file: &Path, bound: u32, verify: Option<&Path>) -> Result<Outcome, Outcome> {
    let (parsed, digest) = input::read_form(file).map_err(input_failure)?;
    ctx.inputs.push(digest);
    let form = match parsed {
        input::FormInput::Form(m) => m,
        input::FormInput::Knot(k) if !k.is_k_even() => k.intersection_form(),
        input::FormInput::Knot(k) => {
            return Err(Outcome::error(
                Status::ValidationError,
                format!("k = {} is even, so the intersection form is skew-symmetric", k.k()),
            ))
        }
    };
    if let Some(path) = verify {
        let report = ctx.report(path)?;
        return Ok(verified((|| {
            let w = artifact::read_congruence(report.get("congruence").ok_or("missing congruence")?, form.dim())?;
            let h = congruence_apply(&form, w.transform()).map_err(|e| e.to_string())?;
            if !is_unimodular(w.transform()) {
                return Err("transform is not unimodular".into());
            }
            if !is_hyperbolic_normal_form(&h) {
                return Err("result is not a sum of hyperbolic planes".into());
            }
            Ok(())
        })()));
    }
    match hyperbolize(&form, bound) {
        Ok(w) => {
            let h = w.apply(&form).map_err(|e| Outcome::error(Status::ValidationError, e))?;
            Ok(Outcome::new(
                Status::Certified,
                json!({ "congruence": artifact::congruence(&w), "normal_form": artifact::matrix(&h) }),
            ))
        }
        Err(HyperbolicError::PreconditionFailed(Precondition::NonzeroSignature { signature })) => Ok(Outcome::new(
            Status::Obstructed,
            json!({ "obstruction": { "invariant": "signature", "value": signature } }),
        )),
        Err(HyperbolicError::SearchExhausted { bound }) => Ok(Outcome::new(
            Status::Inconclusive,
            json!({ "error": format!("no isotropic vector with coefficients bounded by {bound}") }),
        )),
        Err(e) => Err(Outcome::error(Status::ValidationError, e)),
    }
}
