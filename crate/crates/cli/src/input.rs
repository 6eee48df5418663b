//! The system description document.
//!
//! ```json
//! {
//!   "name": "gauss",
//!   "r": 3,
//!   "N": 4,
//!   "A": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]],
//!   "alpha": ["-1/6", "-5/6", "-1/2"],
//!   "labels": ["v1", "v2", "v3", "v4"]
//! }
//! ```
//!
//! `A` lists the `N` generators as rows of `r` integers (JSON numbers, or
//! decimal strings for entries beyond 64 bits). `alpha` holds `r` rationals
//! as `"p/q"` strings. `name`, `description` and `labels` (one per
//! generator) are optional.

use std::fmt;

use gkz_core::scalar::parse_rational;
use gkz_core::{AConfiguration, IntVector, ParameterVector};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLiteral {
    Number(i64),
    Text(String),
}

impl IntLiteral {
    fn to_bigint(&self) -> Option<BigInt> {
        match self {
            IntLiteral::Number(n) => Some(BigInt::from(*n)),
            IntLiteral::Text(s) => s.trim().parse().ok(),
        }
    }
}

impl fmt::Display for IntLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntLiteral::Number(n) => write!(f, "{n}"),
            IntLiteral::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<IntLiteral>>,
    pub alpha: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SystemDescription {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("malformed document: {e}")))
    }

    /// Validates shapes and entries, then builds the configuration.
    pub fn build(&self) -> Result<(AConfiguration, ParameterVector), CliError> {
        if self.a.len() != self.n {
            return Err(CliError::Parse(format!(
                "A has {} rows but N = {}",
                self.a.len(),
                self.n
            )));
        }
        let mut vectors: Vec<IntVector> = Vec::with_capacity(self.n);
        for (i, row) in self.a.iter().enumerate() {
            if row.len() != self.r {
                return Err(CliError::Parse(format!(
                    "A[{i}] has {} entries but r = {}",
                    row.len(),
                    self.r
                )));
            }
            let v = row
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    x.to_bigint().ok_or_else(|| {
                        CliError::Parse(format!("A[{i}][{j}]: malformed integer {x}"))
                    })
                })
                .collect::<Result<IntVector, _>>()?;
            vectors.push(v);
        }
        if self.alpha.len() != self.r {
            return Err(CliError::Parse(format!(
                "alpha has {} entries but r = {}",
                self.alpha.len(),
                self.r
            )));
        }
        let alpha = self
            .alpha
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s)
                    .ok_or_else(|| CliError::Parse(format!("alpha[{i}]: malformed rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(CliError::Parse(format!(
                    "labels has {} entries but N = {}",
                    labels.len(),
                    self.n
                )));
            }
        }
        let cfg = AConfiguration::new(vectors)?;
        Ok((cfg, ParameterVector::new(alpha)))
    }

    /// Display name of generator `i` (0-based).
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("a{}", i + 1),
        }
    }
}
