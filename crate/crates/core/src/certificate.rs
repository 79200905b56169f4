//! The JSON certificate document emitted by every search, and its
//! verifier.
//!
//! Verification rebuilds the field from `(p, n)`, recomputes `Q` by squaring
//! and checks every listed pair directly: both sides have at least two
//! elements, `A + B = Q`, and the pair is closed (`B = B*(A)`,
//! `A = A*(B)`). Closure is what makes any single-element change to a
//! genuine certificate detectable.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::search::{Mode, SearchConfig, SearchReport};
use crate::set::ElementSet;
use crate::TOOL_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLiteral {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultField {
    NoneFound,
    Found(Vec<PairLiteral>),
}

const NONE_FOUND: &str = "none-found";

impl Serialize for ResultField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ResultField::NoneFound => s.serialize_str(NONE_FOUND),
            ResultField::Found(pairs) => pairs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ResultField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tag(String),
            Pairs(Vec<PairLiteral>),
        }
        match Raw::deserialize(d)? {
            Raw::Tag(t) if t == NONE_FOUND => Ok(ResultField::NoneFound),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!(
                "unknown result tag {t:?}"
            ))),
            Raw::Pairs(p) => Ok(ResultField::Found(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub k: usize,
    pub m: usize,
    pub count: u64,
}

/// Field order is fixed; `wall_ms` is the only run-dependent value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub q: u32,
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub mode: Mode,
    pub config: SearchConfig,
    pub result: ResultField,
    pub n_q: Option<u64>,
    pub nodes_explored: u64,
    pub pruned_by: BTreeMap<String, u64>,
    pub wall_ms: u64,
    pub tool_version: String,
    #[serde(default)]
    pub counts_by_size: Vec<SizeCount>,
    #[serde(default)]
    pub partial: bool,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CertificateDocument {
    pub fn from_report(report: &SearchReport) -> Self {
        let result = if report.none_found() {
            ResultField::NoneFound
        } else {
            ResultField::Found(
                report
                    .certificates
                    .iter()
                    .map(|c| PairLiteral {
                        a: c.a.to_string(),
                        b: c.b.to_string(),
                    })
                    .collect(),
            )
        };
        CertificateDocument {
            q: report.q,
            p: report.p,
            n: report.n,
            modulus: report.modulus.clone(),
            mode: report.config.mode,
            config: report.config,
            result,
            n_q: report.n_q,
            nodes_explored: report.nodes_explored,
            pruned_by: report.pruned_by.clone(),
            wall_ms: report.wall_ms,
            tool_version: TOOL_VERSION.to_string(),
            counts_by_size: report
                .counts_by_size
                .iter()
                .map(|(&(k, m), &count)| SizeCount { k, m, count })
                .collect(),
            partial: report.partial,
            notes: report.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub verified: bool,
    pub checked: usize,
    pub failures: Vec<String>,
}

struct Checker<'f> {
    field: &'f Field,
    residues: ElementSet,
}

impl Checker<'_> {
    fn sum(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.field.q());
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.field.add(x, y));
            }
        }
        out
    }

    /// `{y : x + y ∈ Q for every x ∈ set}`.
    fn partners(&self, set: &ElementSet) -> ElementSet {
        let q = self.field.q();
        ElementSet::from_elements(
            q,
            (0..q).filter(|&y| {
                set.iter()
                    .all(|x| self.residues.contains(self.field.add(x, y)))
            }),
        )
        .expect("in range")
    }

    fn check_pair(&self, mode: Mode, pair: &PairLiteral) -> std::result::Result<(), String> {
        let q = self.field.q();
        let a = ElementSet::parse(q, &pair.a).map_err(|e| e.to_string())?;
        let b = ElementSet::parse(q, &pair.b).map_err(|e| e.to_string())?;
        if a.len() < 2 || b.len() < 2 {
            return Err(format!(
                "({}; {}): both sides need at least two elements",
                pair.a, pair.b
            ));
        }
        if self.sum(&a, &b) != self.residues {
            return Err(format!("({}; {}): A + B is not Q", pair.a, pair.b));
        }
        match mode {
            Mode::Shkredov => {
                if a != b {
                    return Err(format!("({}; {}): A and B differ", pair.a, pair.b));
                }
            }
            _ => {
                if self.partners(&a) != b {
                    return Err(format!(
                        "({}; {}): B is not the maximal partner of A",
                        pair.a, pair.b
                    ));
                }
                if self.partners(&b) != a {
                    return Err(format!(
                        "({}; {}): A is not the maximal partner of B",
                        pair.a, pair.b
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Checks a certificate document from scratch.
pub fn verify_document(doc: &CertificateDocument) -> Result<Verification> {
    let field = Field::new(doc.p as u64, doc.n)?;
    let mut failures = Vec::new();
    if field.q() != doc.q {
        failures.push(format!("q = {} but p^n = {}", doc.q, field.q()));
    }
    if field.modulus() != doc.modulus.as_slice() {
        failures.push(format!(
            "modulus {:?} differs from {:?}",
            doc.modulus,
            field.modulus()
        ));
    }
    if doc.config.mode != doc.mode {
        failures.push("config.mode disagrees with mode".into());
    }
    if !failures.is_empty() {
        return Ok(Verification {
            verified: false,
            checked: 0,
            failures,
        });
    }
    let residues = ElementSet::from_elements(
        field.q(),
        (1..field.q()).map(|x| field.mul_by_polynomials(x, x)),
    )?;
    let checker = Checker {
        field: &field,
        residues,
    };
    let mut checked = 0;
    match &doc.result {
        ResultField::NoneFound => {
            if doc.n_q.is_some_and(|n| n != 0) {
                failures.push("none-found with nonzero n_q".into());
            }
        }
        ResultField::Found(pairs) => {
            if doc.n_q == Some(0) {
                failures.push("certificates listed with n_q = 0".into());
            }
            for pair in pairs {
                checked += 1;
                if let Err(e) = checker.check_pair(doc.mode, pair) {
                    failures.push(e);
                }
            }
        }
    }
    Ok(Verification {
        verified: failures.is_empty(),
        checked,
        failures,
    })
}
