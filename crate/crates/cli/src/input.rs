//! Knot files: one JSON object with `k` or `n`, and `matrix` as rows.
//!
//! ```json
//! {"k": 1, "matrix": [[0, 1], [0, 0]]}
//! ```

use std::path::Path;
use std::str::FromStr;

use knotform::exactalg::IntMatrix;
use knotform::seifert::{SeifertError, SeifertKnot};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: SeifertError },
}

/// Path and SHA-256 of one input file.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: Option<u64>,
    k: Option<u32>,
    matrix: Vec<Vec<Number>>,
}

/// Contents of a file given to `hyperbolize`: a knot, or a bare symmetric form.
pub enum FormInput {
    Knot(SeifertKnot),
    Form(IntMatrix),
}

pub fn read_bytes(path: &Path) -> Result<(Vec<u8>, InputDigest), InputError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| InputError::Io {
        path: shown.clone(),
        source,
    })?;
    let sha256 = format!("{:x}", Sha256::digest(&bytes));
    Ok((bytes, InputDigest { path: shown, sha256 }))
}

pub fn big(n: &Number) -> Option<BigInt> {
    BigInt::from_str(&n.to_string()).ok()
}

pub fn matrix_from_rows(rows: &[Vec<Number>]) -> Result<IntMatrix, String> {
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| big(x).ok_or_else(|| format!("{x} is not an integer"))).collect())
        .collect::<Result<_, _>>()?;
    IntMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

fn parse(path: &Path, allow_bare: bool) -> Result<(Option<u32>, IntMatrix, InputDigest), InputError> {
    let (bytes, digest) = read_bytes(path)?;
    let fail = |msg: String| InputError::Parse {
        path: digest.path.clone(),
        msg,
    };
    let raw: RawFile = serde_json::from_slice(&bytes).map_err(|e| fail(e.to_string()))?;
    let k = match (raw.n, raw.k) {
        (Some(_), Some(_)) => return Err(fail("give either n or k, not both".into())),
        (None, Some(k)) => Some(k),
        (Some(n), None) if n % 2 == 1 => Some(u32::try_from((n - 1) / 2).map_err(|e| fail(e.to_string()))?),
        (Some(n), None) => return Err(fail(format!("n = {n} must be odd"))),
        (None, None) if allow_bare => None,
        (None, None) => return Err(fail("missing n or k".into())),
    };
    let m = matrix_from_rows(&raw.matrix).map_err(fail)?;
    Ok((k, m, digest))
}

pub fn read_knot(path: &Path) -> Result<(SeifertKnot, InputDigest), InputError> {
    let (k, m, digest) = parse(path, false)?;
    let k = k.expect("parse demands n or k");
    let knot = SeifertKnot::new(k, m).map_err(|source| InputError::Invalid {
        path: digest.path.clone(),
        source,
    })?;
    Ok((knot, digest))
}

pub fn read_form(path: &Path) -> Result<(FormInput, InputDigest), InputError> {
    let (k, m, digest) = parse(path, true)?;
    let input = match k {
        None => FormInput::Form(m),
        Some(k) => FormInput::Knot(SeifertKnot::new(k, m).map_err(|source| InputError::Invalid {
            path: digest.path.clone(),
            source,
        })?),
    };
    Ok((input, digest))
}
