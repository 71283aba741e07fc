//! Input documents. Errors carry a JSON-pointer style path to the offending value.

use std::str::FromStr;

use neron_core::fibre::{GeomComponent, SpecialFibre};
use neron_core::{BigInt, Characters, Datum, Fibre, IntMatrix};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Jacobian,
    Torus,
    Semistable,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Jacobian => "jacobian",
            Kind::Torus => "torus",
            Kind::Semistable => "semistable",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub enum Payload {
    Jacobian(Fibre),
    Torus(Characters),
    Semistable(Datum),
}

/// Settings a document may carry itself; command-line flags take precedence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DocOptions {
    pub format: Option<Format>,
    pub strict: Option<bool>,
    pub oracle: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub kind: Kind,
    pub payload: Payload,
    pub options: DocOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{code} at {path}: {message}")]
pub struct InputError {
    pub code: &'static str,
    pub path: String,
    pub message: String,
}

impl InputError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { code: "SCHEMA", path: path.into(), message: message.into() }
    }
}

type Parsed<T> = Result<T, InputError>;

fn field<'a>(obj: &'a Map<String, Value>, key: &str, base: &str) -> Parsed<&'a Value> {
    obj.get(key).ok_or_else(|| InputError::schema(format!("{base}/{key}"), format!("missing field \"{key}\"")))
}

fn object<'a>(v: &'a Value, path: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| InputError::schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| InputError::schema(path, "expected an array"))
}

/// JSON integers, or decimal strings for values beyond 64 bits.
fn integer(v: &Value, path: &str) -> Parsed<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| InputError::schema(path, format!("expected an integer, got {n}"))),
        Value::String(s) => {
            BigInt::from_str(s.trim()).map_err(|_| InputError::schema(path, format!("\"{s}\" is not an integer")))
        }
        _ => Err(InputError::schema(path, "expected an integer")),
    }
}

fn index(v: &Value, path: &str) -> Parsed<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| InputError::schema(path, "expected a nonnegative integer"))
}

fn boolean(v: &Value, path: &str) -> Parsed<bool> {
    v.as_bool().ok_or_else(|| InputError::schema(path, "expected true or false"))
}

/// A `size x size` matrix given as a list of rows.
fn square_matrix(v: &Value, path: &str, size: usize) -> Parsed<IntMatrix> {
    let rows = array(v, path)?;
    if rows.len() != size {
        return Err(InputError::schema(path, format!("expected {size} rows, got {}", rows.len())));
    }
    let mut out = Vec::with_capacity(size);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}/{i}");
        let entries = array(row, &rpath)?;
        if entries.len() != size {
            return Err(InputError::schema(&rpath, format!("expected {size} entries, got {}", entries.len())));
        }
        let row: Parsed<Vec<BigInt>> =
            entries.iter().enumerate().map(|(j, x)| integer(x, &format!("{rpath}/{j}"))).collect();
        out.push(row?);
    }
    IntMatrix::from_rows(out, size).map_err(|e| InputError::schema(path, e.to_string()))
}

fn check_fields(obj: &Map<String, Value>, allowed: &[&str]) -> Parsed<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(InputError::schema(format!("/{k}"), format!("unknown field \"{k}\""))),
        None => Ok(()),
    }
}

fn options(obj: &Map<String, Value>) -> Parsed<DocOptions> {
    let Some(v) = obj.get("options") else { return Ok(DocOptions::default()) };
    let o = object(v, "/options")?;
    let mut out = DocOptions::default();
    for (k, v) in o {
        let path = format!("/options/{k}");
        match k.as_str() {
            "format" => {
                out.format = Some(match v.as_str() {
                    Some("text") => Format::Text,
                    Some("json") => Format::Json,
                    _ => return Err(InputError::schema(path, "expected \"text\" or \"json\"")),
                })
            }
            "strict" => out.strict = Some(boolean(v, &path)?),
            "oracle" => out.oracle = Some(boolean(v, &path)?),
            _ => return Err(InputError::schema(path, format!("unknown option \"{k}\""))),
        }
    }
    Ok(out)
}

fn parse_fibre(obj: &Map<String, Value>) -> Parsed<Fibre> {
    check_fields(obj, &["kind", "options", "components", "sigma", "intersections", "genus", "hypothesis_ok"])?;
    let comps = array(field(obj, "components", "")?, "/components")?;
    let mut components = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let base = format!("/components/{i}");
        let o = object(c, &base)?;
        if let Some(k) = o.keys().find(|k| *k != "d" && *k != "e") {
            return Err(InputError::schema(format!("{base}/{k}"), format!("unknown field \"{k}\"")));
        }
        let d = integer(field(o, "d", &base)?, &format!("{base}/d"))?;
        let e = integer(field(o, "e", &base)?, &format!("{base}/e"))?;
        components.push(GeomComponent::new(d, e));
    }
    let n = components.len();
    let sig = array(field(obj, "sigma", "")?, "/sigma")?;
    if sig.len() != n {
        return Err(InputError::schema(
            "/sigma",
            format!("expected {n} entries, one per component, got {}", sig.len()),
        ));
    }
    let sigma: Parsed<Vec<usize>> = sig.iter().enumerate().map(|(i, x)| index(x, &format!("/sigma/{i}"))).collect();
    let intersections = square_matrix(field(obj, "intersections", "")?, "/intersections", n)?;
    let genus = match obj.get("genus") {
        None | Some(Value::Null) => None,
        Some(g) => Some(integer(g, "/genus")?),
    };
    let hypothesis_ok = match obj.get("hypothesis_ok") {
        None => false,
        Some(v) => boolean(v, "/hypothesis_ok")?,
    };
    Ok(SpecialFibre::new(components, sigma?, intersections, genus, hypothesis_ok))
}

fn parse_torus(obj: &Map<String, Value>) -> Parsed<Characters> {
    check_fields(obj, &["kind", "options", "rank", "sigma"])?;
    let rank = index(field(obj, "rank", "")?, "/rank")?;
    let sigma = square_matrix(field(obj, "sigma", "")?, "/sigma", rank)?;
    Characters::new(rank, sigma).map_err(|e| InputError {
        code: e.code(),
        path: "/sigma".into(),
        message: e.to_string(),
    })
}

fn parse_semistable(obj: &Map<String, Value>) -> Parsed<Datum> {
    check_fields(obj, &["kind", "options", "rank", "sigma_X", "sigma_M", "pairing"])?;
    let rank = index(field(obj, "rank", "")?, "/rank")?;
    let sx = square_matrix(field(obj, "sigma_X", "")?, "/sigma_X", rank)?;
    let sm = square_matrix(field(obj, "sigma_M", "")?, "/sigma_M", rank)?;
    let p = square_matrix(field(obj, "pairing", "")?, "/pairing", rank)?;
    Ok(Datum::new(rank, sx, sm, p))
}

/// Parses a document. When `expected` is given, the document's `kind` must match it.
pub fn parse_input(text: &str, expected: Option<Kind>) -> Result<InputDocument, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError {
        code: "PARSE",
        path: String::new(),
        message: e.to_string(),
    })?;
    let obj = object(&value, "")?;
    let kind = match field(obj, "kind", "")?.as_str() {
        Some("jacobian") => Kind::Jacobian,
        Some("torus") => Kind::Torus,
        Some("semistable") => Kind::Semistable,
        _ => return Err(InputError::schema("/kind", "expected \"jacobian\", \"torus\" or \"semistable\"")),
    };
    if let Some(want) = expected {
        if want != kind {
            return Err(InputError::schema(
                "/kind",
                format!("document is of kind \"{}\", command expects \"{}\"", kind.as_str(), want.as_str()),
            ));
        }
    }
    let options = options(obj)?;
    let payload = match kind {
        Kind::Jacobian => Payload::Jacobian(parse_fibre(obj)?),
        Kind::Torus => Payload::Torus(parse_torus(obj)?),
        Kind::Semistable => Payload::Semistable(parse_semistable(obj)?),
    };
    Ok(InputDocument { kind, payload, options })
}
