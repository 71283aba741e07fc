//! Reports. The JSON form is the serde form of [`Report`]; the text form is
//! rendered from the same JSON value, so the two list the same fields.

use std::fmt::Write as _;
use std::str::FromStr;

use neron_core::zlattice::{FinAbGroup, Lattice, Matrix};
use neron_core::{BigInt, JacobianReport, SemistableSummary, TorusSummary};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::input::Kind;

/// An integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub BigInt);

impl Serialize for Num {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Num(BigInt::from(v))),
            Raw::Text(s) => BigInt::from_str(&s).map(Num).map_err(serde::de::Error::custom),
        }
    }
}

fn nums(v: &[BigInt]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

fn rows(m: &Matrix<BigInt>) -> Vec<Vec<Num>> {
    m.to_rows().iter().map(|r| nums(r)).collect()
}

fn basis(l: &Lattice<BigInt>) -> Vec<Vec<Num>> {
    l.basis_vectors().iter().map(|v| nums(v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupOut {
    pub notation: String,
    pub free_rank: usize,
    /// ascending, each dividing the next
    pub invariant_factors: Vec<Num>,
}

impl From<&FinAbGroup<BigInt>> for GroupOut {
    fn from(g: &FinAbGroup<BigInt>) -> Self {
        GroupOut { notation: g.to_string(), free_rank: g.free_rank(), invariant_factors: nums(g.invariant_factors()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobianOut {
    pub phi_geometric: GroupOut,
    /// `None` when run without the invariants oracle
    pub phi_rational: Option<GroupOut>,
    pub ker_beta_mod_im_alpha: GroupOut,
    pub d: Num,
    pub dprime: Num,
    pub v1: Vec<Num>,
    pub n: Num,
    pub q: Num,
    pub quotient_order: Num,
    pub predicted_order: Num,
    pub genus: Option<Num>,
    pub h1_kernel: GroupOut,
    pub h1_image: GroupOut,
    pub self_intersection_identity: bool,
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl From<&JacobianReport> for JacobianOut {
    fn from(r: &JacobianReport) -> Self {
        JacobianOut {
            phi_geometric: (&r.phi_geometric).into(),
            phi_rational: r.phi_rational_oracle.as_ref().map(Into::into),
            ker_beta_mod_im_alpha: (&r.sub_kernel_mod_image).into(),
            d: Num(r.d.clone()),
            dprime: Num(r.dprime.clone()),
            v1: nums(&r.v1),
            n: Num(r.n.clone()),
            q: Num(r.q.clone()),
            quotient_order: Num(r.quotient_order.clone()),
            predicted_order: Num(r.predicted_order()),
            genus: r.genus.clone().map(Num),
            h1_kernel: (&r.h1_kernel).into(),
            h1_image: (&r.h1_image).into(),
            self_intersection_identity: r.self_intersection_identity,
            consistent: r.consistent,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusOut {
    pub rank: usize,
    pub order: u64,
    pub phi_geometric: GroupOut,
    pub phi_rational: GroupOut,
    /// basis of the invariant covectors
    pub invariant_dual: Vec<Vec<Num>>,
    pub coinvariant_rank: usize,
    /// rows of the projection onto the torsion-free coinvariants
    pub projection: Vec<Vec<Num>>,
    pub split: bool,
    pub ranks_agree: bool,
    pub lemma_holds: bool,
    pub notes: Vec<String>,
}

impl From<&TorusSummary> for TorusOut {
    fn from(r: &TorusSummary) -> Self {
        TorusOut {
            rank: r.rank,
            order: r.order,
            phi_geometric: (&r.phi_geometric).into(),
            phi_rational: (&r.phi_rational).into(),
            invariant_dual: basis(&r.invariant_dual),
            coinvariant_rank: r.coinvariant_rank,
            projection: rows(&r.projection),
            split: r.split,
            ranks_agree: r.ranks_agree,
            lemma_holds: r.lemma_holds,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemistableOut {
    pub phi_a: GroupOut,
    pub phi_a_rational: GroupOut,
    pub sigma_subgroup: GroupOut,
    pub h1_m: GroupOut,
    pub connecting_image: GroupOut,
    pub phi_e_rank: usize,
    pub phi_m_rank: usize,
    pub split: bool,
    pub bounds_ok: bool,
}

impl From<&SemistableSummary> for SemistableOut {
    fn from(r: &SemistableSummary) -> Self {
        SemistableOut {
            phi_a: (&r.phi_a).into(),
            phi_a_rational: (&r.phi_a_rational).into(),
            sigma_subgroup: (&r.sigma_subgroup).into(),
            h1_m: (&r.h1_m).into(),
            connecting_image: (&r.connecting_image).into(),
            phi_e_rank: r.phi_e_rank,
            phi_m_rank: r.phi_m_rank,
            split: r.split,
            bounds_ok: r.bounds_ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Summary {
    Jacobian(JacobianOut),
    Torus(TorusOut),
    Semistable(SemistableOut),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostic {
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: &str, message: impl ToString) -> Self {
        Diagnostic { code: code.to_string(), path: None, message: message.to_string() }
    }
}

/// Codes that signal a disagreement between independent computations rather
/// than bad input.
const INTERNAL: [&str; 2] = ["INCONSISTENT", "EMBED_FAIL"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Summary>,
    pub warnings: Vec<Diagnostic>,
    pub errors: Vec<Diagnostic>,
}

impl Report {
    pub fn new(kind: Kind) -> Self {
        Report { kind, result: None, warnings: Vec::new(), errors: Vec::new() }
    }

    /// 0 on success, 2 when independent computations disagree, 1 for any other error.
    pub fn exit_code(&self) -> u8 {
        if self.errors.is_empty() {
            0
        } else if self.errors.iter().any(|e| INTERNAL.contains(&e.code.as_str())) {
            2
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports always serialize");
        let mut out = String::new();
        if let Value::Object(map) = value {
            for (k, v) in &map {
                render(&mut out, k, v, 0);
            }
        }
        out
    }
}

fn is_group(v: &Value) -> bool {
    v.get("notation").is_some_and(Value::is_string) && v.get("free_rank").is_some()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        _ if is_group(v) => v["notation"].as_str().unwrap_or_default().to_string(),
        _ => v.to_string(),
    }
}

fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) if !is_group(v) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                render(out, k, v, indent + 2);
            }
        }
        Value::Array(items) if items.is_empty() => {
            let _ = writeln!(out, "{pad}{key}: none");
        }
        Value::Array(items) if items.iter().all(|x| x.is_string() || x.get("code").is_some()) => {
            let _ = writeln!(out, "{pad}{key}:");
            for item in items {
                let line = match item.get("code") {
                    Some(code) => {
                        let at = item.get("path").map(|p| format!(" at {}", scalar(p))).unwrap_or_default();
                        format!("{}{at}: {}", scalar(code), scalar(&item["message"]))
                    }
                    None => scalar(item),
                };
                let _ = writeln!(out, "{pad}  - {line}");
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        }
    }
}
