//! Verdicts of property checks.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::num::{format_rational, Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    FailsWithWitness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// A point of the ambient space.
    Point(Vec<Rational>),
    /// First coefficient where `κ·(p∘A)` and `p` differ.
    Coefficient {
        exp: Vec<u32>,
        expected: Rational,
        got: Rational,
    },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::Point(v) => crate::num::serialize_vector(v, s),
            Witness::Coefficient { exp, expected, got } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("exp", exp)?;
                m.serialize_entry("expected", &format_rational(expected))?;
                m.serialize_entry("got", &format_rational(got))?;
                m.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_kappa")]
    pub kappa: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub samples: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub regime_warnings: Vec<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub theorem_violation: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, Value>,
}

fn serialize_kappa<S: Serializer>(k: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match k {
        Some(k) => RationalJson::from(k).serialize(s),
        None => s.serialize_none(),
    }
}

impl CheckReport {
    fn new(verdict: Verdict) -> Self {
        CheckReport {
            verdict,
            kappa: None,
            witness: None,
            samples: 0,
            tolerances: BTreeMap::new(),
            regime_warnings: Vec::new(),
            theorem_violation: false,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn holds() -> Self {
        Self::new(Verdict::Holds)
    }

    pub fn fails(witness: Witness) -> Self {
        let mut r = Self::new(Verdict::FailsWithWitness);
        r.witness = Some(witness);
        r
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Self::new(Verdict::Inconclusive).diag("reason", reason.into())
    }

    pub fn with_kappa(mut self, kappa: Rational) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    pub fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn warn(mut self, msg: impl Into<String>) -> Self {
        self.regime_warnings.push(msg.into());
        self
    }

    pub fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn violation(mut self, msg: impl Into<String>) -> Self {
        self.theorem_violation = true;
        self.diag("theorem_violation", msg.into())
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.verdict == Verdict::FailsWithWitness
    }

    pub fn witness_point(&self) -> Option<&[Rational]> {
        match &self.witness {
            Some(Witness::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// JSON array of rational strings.
pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(format_rational(q))).collect())
}
