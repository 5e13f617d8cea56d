use std::fmt::Write as _;

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::FitError;
use crate::linalg::Matrix;

/// A float that serializes with 17 significant digits in exponent form, so the
/// JSON text round-trips every bit of the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn text(self) -> String {
        // fold −0 into 0 so sign noise on exact zeros never reaches the report
        let x = if self.0 == 0.0 { 0.0 } else { self.0 };
        format!("{x:.16e}")
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite number in report"));
        }
        RawValue::from_string(self.text())
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

pub(crate) fn nums(x: &[f64]) -> Vec<Num> {
    x.iter().copied().map(Num).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Coefficients {
    Vector(Vec<Num>),
    /// Row-major, one inner list per row of `X`.
    Matrix(Vec<Vec<Num>>),
}

impl Coefficients {
    pub fn from_matrix(x: &Matrix) -> Self {
        Coefficients::Matrix(x.to_rows().iter().map(|r| nums(r)).collect())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportError {
    pub kind: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_vector: Option<Vec<Num>>,
}

impl From<&FitError> for ReportError {
    fn from(e: &FitError) -> Self {
        let null_vector = match e {
            FitError::NoTlsSolution { null_vector, .. } => Some(nums(null_vector.as_slice())),
            _ => None,
        };
        ReportError {
            kind: e.kind().to_string(),
            detail: e.to_string(),
            null_vector,
        }
    }
}

/// Output of one `fit` invocation. Either the solution fields or `error` are
/// populated; `singular_values` accompanies both as a diagnostic.
#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct FitReport {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Coefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<Vec<Num>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centroid: Option<Vec<Num>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Num>,
    pub singular_values: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expressible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_deficient: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ReportError>,
}

impl FitReport {
    pub fn failure(mode: &str, err: &FitError) -> Self {
        let singular_values = match err {
            FitError::NoTlsSolution { sigma, .. } => nums(sigma.as_slice()),
            _ => Vec::new(),
        };
        FitReport {
            mode: mode.to_string(),
            singular_values,
            error: Some(err.into()),
            ..Default::default()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite");
        s.push('\n');
        s
    }

    /// `key: value` lines carrying the same fields as the JSON form.
    pub fn to_text(&self) -> String {
        fn list(v: &[Num]) -> String {
            v.iter().map(|n| n.text()).collect::<Vec<_>>().join(" ")
        }
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        match &self.coefficients {
            Some(Coefficients::Vector(v)) => {
                let _ = writeln!(out, "coefficients: {}", list(v));
            }
            Some(Coefficients::Matrix(rows)) => {
                let _ = writeln!(out, "coefficients:");
                for r in rows {
                    let _ = writeln!(out, "  {}", list(r));
                }
            }
            None => {}
        }
        if let Some(n) = &self.normal {
            let _ = writeln!(out, "normal: {}", list(n));
        }
        if let Some(c) = &self.centroid {
            let _ = writeln!(out, "centroid: {}", list(c));
        }
        if let Some(o) = self.objective {
            let _ = writeln!(out, "objective: {}", o.text());
        }
        let _ = writeln!(out, "singular_values: {}", list(&self.singular_values));
        for (key, flag) in [
            ("unique", self.unique),
            ("expressible", self.expressible),
            ("rank_deficient", self.rank_deficient),
        ] {
            if let Some(b) = flag {
                let _ = writeln!(out, "{key}: {b}");
            }
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error.kind: {}", e.kind);
            let _ = writeln!(out, "error.detail: {}", e.detail);
            if let Some(v) = &e.null_vector {
                let _ = writeln!(out, "error.null_vector: {}", list(v));
            }
        }
        out
    }
}
