//! JSON instance files. Complex entries are `[re, im]` pairs, matrices are
//! lists of rows.

use std::collections::BTreeMap;
use std::fmt;

use semihilbert::matrix::c;
use semihilbert::{CMatrix, SemiInnerSpace, Tolerances};
use serde::{Deserialize, Serialize};

/// A complex matrix in row-major `[re, im]` form.
pub type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psd_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    /// Relative tolerance of the class predicates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dim: usize,
    #[serde(rename = "A")]
    pub a: RawMatrix,
    pub operators: BTreeMap<String, RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

fn check_matrix(what: &str, m: &RawMatrix, dim: usize) -> Result<(), ParseError> {
    if m.len() != dim {
        return Err(bad(format!("{what}: expected {dim} rows, found {}", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != dim {
            return Err(bad(format!("{what}: row {i} has {} entries, expected {dim}", row.len())));
        }
        if let Some(j) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
            return Err(bad(format!("{what}: entry ({i}, {j}) is not finite")));
        }
    }
    Ok(())
}

pub fn to_cmatrix(m: &RawMatrix) -> CMatrix {
    CMatrix::from_fn(m.len(), m.len(), |i, j| c(m[i][j][0], m[i][j][1]))
}

pub fn from_cmatrix(m: &CMatrix) -> RawMatrix {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect()).collect()
}

fn check_tol(name: &str, v: Option<f64>) -> Result<(), ParseError> {
    match v {
        Some(x) if !(x.is_finite() && x >= 0.0) => Err(bad(format!("tolerances.{name} must be finite and non-negative"))),
        _ => Ok(()),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| bad(format!("invalid instance JSON: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        if self.dim == 0 {
            return Err(bad("dim must be at least 1"));
        }
        check_matrix("A", &self.a, self.dim)?;
        for (name, m) in &self.operators {
            check_matrix(&format!("operators.{name}"), m, self.dim)?;
        }
        if let Some(t) = &self.tolerances {
            check_tol("psd_tol", t.psd_tol)?;
            check_tol("rank_tol", t.rank_tol)?;
            check_tol("class_tol", t.class_tol)?;
        }
        Ok(())
    }

    /// Canonical form: pretty JSON, operators sorted by name, trailing newline.
    pub fn write(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn space(&self) -> semihilbert::Result<SemiInnerSpace> {
        let mut tol = Tolerances::default();
        if let Some(t) = &self.tolerances {
            tol.psd_tol = t.psd_tol.unwrap_or(tol.psd_tol);
            tol.rank_tol = t.rank_tol.unwrap_or(tol.rank_tol);
        }
        SemiInnerSpace::validate(&to_cmatrix(&self.a), tol)
    }

    pub fn operator(&self, name: &str) -> Result<CMatrix, ParseError> {
        self.operators.get(name).map(to_cmatrix).ok_or_else(|| {
            let known: Vec<_> = self.operators.keys().map(String::as_str).collect();
            bad(format!("no operator `{name}` (available: {})", known.join(", ")))
        })
    }

    pub fn class_tol(&self) -> Option<f64> {
        self.tolerances.as_ref().and_then(|t| t.class_tol)
    }
}
