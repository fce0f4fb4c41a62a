//! JSON forms of functions, predicates and matrices.
//!
//! A function is `{"pieces": [...], "points": [...]}` mirroring its canonical
//! clause list; rationals are strings `"p"` or `"p/q"`.

use serde::{Deserialize, Serialize};

use crate::function::{Body, EnergyFunction, FunctionError, Piece};
use crate::matrix::FunctionMatrix;
use crate::predicate::ThresholdPredicate;
use crate::value::{format_rational, parse_rational, ExtValue, RationalParseError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Affine,
    Inf,
    Bot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PieceJson {
    pub lower: String,
    pub lower_included: bool,
    pub kind: PieceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub pieces: Vec<PieceJson>,
    pub points: Vec<PointJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PredicateJson {
    Never,
    From { t: String, strict: bool },
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error(transparent)]
    Rational(#[from] RationalParseError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error("affine piece without `{0}`")]
    MissingCoefficient(&'static str),
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
}

impl From<&EnergyFunction> for FunctionJson {
    fn from(f: &EnergyFunction) -> Self {
        let (pieces, points) = f.pieces();
        FunctionJson {
            pieces: pieces
                .into_iter()
                .map(|p| {
                    let (kind, a, b) = match &p.body {
                        Body::Affine { a, b } => (PieceKind::Affine, Some(format_rational(a)), Some(format_rational(b))),
                        Body::Inf => (PieceKind::Inf, None, None),
                        Body::Bot => (PieceKind::Bot, None, None),
                    };
                    PieceJson { lower: format_rational(&p.lower), lower_included: p.lower_included, kind, a, b }
                })
                .collect(),
            points: points
                .into_iter()
                .map(|(x, v)| PointJson { x: format_rational(&x), value: v.to_string() })
                .collect(),
        }
    }
}

impl TryFrom<&FunctionJson> for EnergyFunction {
    type Error = JsonError;

    fn try_from(j: &FunctionJson) -> Result<Self, JsonError> {
        let mut pieces = Vec::with_capacity(j.pieces.len());
        for p in &j.pieces {
            let body = match p.kind {
                PieceKind::Inf => Body::Inf,
                PieceKind::Bot => Body::Bot,
                PieceKind::Affine => {
                    let a = p.a.as_deref().ok_or(JsonError::MissingCoefficient("a"))?;
                    let b = p.b.as_deref().ok_or(JsonError::MissingCoefficient("b"))?;
                    Body::Affine { a: parse_rational(a)?, b: parse_rational(b)? }
                }
            };
            pieces.push(Piece { lower: parse_rational(&p.lower)?, lower_included: p.lower_included, body });
        }
        let mut points = Vec::with_capacity(j.points.len());
        for p in &j.points {
            points.push((parse_rational(&p.x)?, ExtValue::parse(&p.value)?));
        }
        Ok(EnergyFunction::from_pieces(&pieces, &points)?)
    }
}

impl From<&ThresholdPredicate> for PredicateJson {
    fn from(u: &ThresholdPredicate) -> Self {
        match u {
            ThresholdPredicate::Never => PredicateJson::Never,
            ThresholdPredicate::From { t, strict } => PredicateJson::From { t: format_rational(t), strict: *strict },
        }
    }
}

impl TryFrom<&PredicateJson> for ThresholdPredicate {
    type Error = JsonError;

    fn try_from(j: &PredicateJson) -> Result<Self, JsonError> {
        Ok(match j {
            PredicateJson::Never => ThresholdPredicate::Never,
            PredicateJson::From { t, strict } => ThresholdPredicate::from_ext(&ExtValue::parse(t)?, *strict),
        })
    }
}

pub fn function_to_json(f: &EnergyFunction) -> serde_json::Value {
    serde_json::to_value(FunctionJson::from(f)).expect("plain data")
}

pub fn function_from_json(text: &str) -> Result<EnergyFunction, JsonError> {
    let j: FunctionJson = serde_json::from_str(text)?;
    EnergyFunction::try_from(&j)
}

pub fn predicate_to_json(u: &ThresholdPredicate) -> serde_json::Value {
    serde_json::to_value(PredicateJson::from(u)).expect("plain data")
}

pub fn predicate_from_json(text: &str) -> Result<ThresholdPredicate, JsonError> {
    let j: PredicateJson = serde_json::from_str(text)?;
    ThresholdPredicate::try_from(&j)
}

/// Row-major array of rows of functions.
pub fn matrix_to_json(m: &FunctionMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.row_vecs()
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(function_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(text: &str) -> Result<Vec<Vec<EnergyFunction>>, JsonError> {
    let rows: Vec<Vec<FunctionJson>> = serde_json::from_str(text)?;
    rows.iter().map(|r| r.iter().map(EnergyFunction::try_from).collect()).collect()
}
