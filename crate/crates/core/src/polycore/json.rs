use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};
use crate::num::{Rational, RationalJson};

use super::HomoPoly;

/// `{"exp": [...], "num": "...", "den": "..."}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Wire form of a [`HomoPoly`]; terms are written in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl From<&HomoPoly> for PolyJson {
    fn from(p: &HomoPoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(exp, c)| {
                    let r = RationalJson::from(c);
                    TermJson {
                        exp: exp.to_vec(),
                        num: r.num,
                        den: r.den,
                    }
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for HomoPoly {
    type Error = HyperError;

    fn try_from(j: &PolyJson) -> Result<HomoPoly> {
        let terms = j
            .terms
            .iter()
            .map(|t| {
                let c = Rational::try_from(&RationalJson {
                    num: t.num.clone(),
                    den: t.den.clone(),
                })?;
                Ok((t.exp.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        HomoPoly::from_terms(j.nvars, j.degree, terms)
    }
}

impl HomoPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| HyperError::parse(e.to_string()))?;
        HomoPoly::try_from(&j)
    }
}
