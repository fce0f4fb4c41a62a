//! Exact rationals and the extended energy domain `[0, ∞]` with a bottom element.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal `{0}` is not allowed; write it as p/q")]
    Decimal(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses an optionally signed `p` or `p/q`. Decimals are rejected rather than
/// silently converted.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(RationalParseError::Decimal(s.to_string()));
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'-' => (-1, &s[1..]),
        b'+' => (1, &s[1..]),
        _ => (1, s),
    };
    let digits = |t: &str| -> Result<BigInt, RationalParseError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed(s.to_string()));
        }
        BigInt::from_str(t).map_err(|_| RationalParseError::Malformed(s.to_string()))
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (digits(p)?, digits(q)?);
            if q.is_zero() {
                return Err(RationalParseError::ZeroDenominator(s.to_string()));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Ok(if sign < 0 { -value } else { value })
}

/// `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn ceil_natural(r: &Rational) -> Option<u64> {
    let c = r.ceil().to_integer();
    if c.is_negative() {
        Some(0)
    } else {
        u64::try_from(c).ok()
    }
}

pub fn floor_integer(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// An element of `[0, ∞]_⊥`. Variant order gives `Bot < Fin(_) < Inf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Bot,
    Fin(Rational),
    Inf,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Fin(Rational::zero())
    }

    pub fn fin(n: i64) -> Self {
        ExtValue::Fin(rat(n))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, ExtValue::Bot)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// `⊥ ± x = ⊥`, `∞ ± finite = ∞`.
    pub fn add(&self, delta: &Rational) -> ExtValue {
        match self {
            ExtValue::Fin(v) => ExtValue::Fin(v + delta),
            other => other.clone(),
        }
    }

    /// Subtraction that leaves the domain drops to `⊥`.
    pub fn sub_clamped(&self, delta: &Rational) -> ExtValue {
        match self {
            ExtValue::Fin(v) => {
                let r = v - delta;
                if r.is_negative() {
                    ExtValue::Bot
                } else {
                    ExtValue::Fin(r)
                }
            }
            other => other.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<ExtValue, RationalParseError> {
        match text.trim() {
            "inf" => Ok(ExtValue::Inf),
            "bot" => Ok(ExtValue::Bot),
            other => parse_rational(other).map(ExtValue::Fin),
        }
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtValue::*;
        match (self, other) {
            (Bot, Bot) | (Inf, Inf) => Ordering::Equal,
            (Bot, _) | (_, Inf) => Ordering::Less,
            (_, Bot) | (Inf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Bot => f.write_str("bot"),
            ExtValue::Inf => f.write_str("inf"),
            ExtValue::Fin(v) => write!(f, "{}", v),
        }
    }
}

impl From<Rational> for ExtValue {
    fn from(v: Rational) -> Self {
        ExtValue::Fin(v)
    }
}
