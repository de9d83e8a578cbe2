//! Curve file format.
//!
//! ```json
//! { "dim": 2, "closed": true, "mode": "rational",
//!   "params": ["0/1", "1/3", "2/3"],
//!   "points": [["1/1","0/1","1/1","0/1"], ...] }
//! ```
//!
//! Real-space maps add `"space": "real"` and use `dim` for the real dimension.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{PolyCurve, Space};
use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Scalar, Q};

#[derive(Serialize, Deserialize)]
struct CurveFile {
    dim: usize,
    closed: bool,
    #[serde(default)]
    mode: NumericMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    space: Option<String>,
    params: Vec<Value>,
    points: Vec<Vec<Value>>,
}

impl<S: Scalar> PolyCurve<S> {
    pub fn to_json(&self) -> Value {
        let (dim, space) = match self.space {
            Space::Complex(n) => (n, None),
            Space::Real(k) => (k, Some("real".to_string())),
        };
        let file = CurveFile {
            dim,
            closed: self.closed,
            mode: S::MODE,
            space,
            params: self.params.iter().map(Scalar::to_json).collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(Scalar::to_json).collect())
                .collect(),
        };
        serde_json::to_value(file).expect("curve serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let file: CurveFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(format!("curve: {e}")))?;
        curve_from_file(file)
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn digest(&self) -> String {
        digest_json(&self.to_json())
    }
}

fn curve_from_file<S: Scalar>(file: CurveFile) -> Result<PolyCurve<S>> {
    let space = match file.space.as_deref() {
        None | Some("complex") => Space::Complex(file.dim),
        Some("real") => Space::Real(file.dim),
        Some(other) => return Err(Error::Malformed(format!("unknown space `{other}`"))),
    };
    let params = file
        .params
        .iter()
        .enumerate()
        .map(|(j, v)| S::from_json(v).map_err(|e| Error::Malformed(format!("params[{j}]: {e}"))))
        .collect::<Result<Vec<S>>>()?;
    let points = file
        .points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            p.iter()
                .enumerate()
                .map(|(k, v)| {
                    S::from_json(v).map_err(|e| Error::Malformed(format!("points[{j}][{k}]: {e}")))
                })
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PolyCurve::new(space, file.closed, params, points)
}

pub fn digest_json(v: &Value) -> String {
    let text = serde_json::to_string(v).expect("json serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// A curve whose numeric mode is only known at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyCurve {
    Rational(PolyCurve<Q>),
    Float(PolyCurve<f64>),
}

impl AnyCurve {
    /// Parses in the mode recorded in the file.
    pub fn from_json(v: &Value) -> Result<Self> {
        let file: CurveFile =
            serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(format!("curve: {e}")))?;
        Ok(match file.mode {
            NumericMode::Rational => AnyCurve::Rational(curve_from_file(file)?),
            NumericMode::F64 => AnyCurve::Float(curve_from_file(file)?),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::Malformed(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_json(&v)
    }

    /// Rational view (exact conversion from floats).
    pub fn into_rational(self) -> PolyCurve<Q> {
        match self {
            AnyCurve::Rational(c) => c,
            AnyCurve::Float(c) => c.to_rational(),
        }
    }

    pub fn into_f64(self) -> PolyCurve<f64> {
        match self {
            AnyCurve::Rational(c) => c.to_f64(),
            AnyCurve::Float(c) => c,
        }
    }

    pub fn digest(&self) -> String {
        match self {
            AnyCurve::Rational(c) => c.digest(),
            AnyCurve::Float(c) => c.digest(),
        }
    }
}
