//! Monotone boolean functions on `[0, ∞]_⊥` (the semimodule acted on by
//! energy functions), the omega operation, and the action `u ↦ u ∘ f`.
//!
//! Every upward-closed subset of a totally ordered domain is a ray, so a
//! predicate is a threshold. Predicates speak about finite energies: `u(∞)`
//! holds iff `u` holds for some finite energy. The ray `{∞}` is therefore
//! identified with `Never`; this keeps `u ∘ f* = sup_n u ∘ fⁿ` true, which
//! fails for a predicate that is true at `∞` only.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::function::{Body, Element, EnergyFunction};
use crate::ops::{self, Op};
use crate::value::{ExtValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ThresholdPredicate {
    Never,
    /// True on `x > t` (strict) or `x ≥ t`, and at `∞`.
    From { t: Rational, strict: bool },
}

impl ThresholdPredicate {
    /// True for every energy except `⊥`.
    pub fn always() -> Self {
        ThresholdPredicate::From { t: Rational::zero(), strict: false }
    }

    pub fn from_value(t: Rational, strict: bool) -> Self {
        if t.is_negative() {
            ThresholdPredicate::always()
        } else {
            ThresholdPredicate::From { t, strict }
        }
    }

    /// Accepts an extended threshold; `∞` thresholds collapse to `Never`.
    pub fn from_ext(t: &ExtValue, strict: bool) -> Self {
        match t {
            ExtValue::Bot => ThresholdPredicate::always(),
            ExtValue::Fin(t) => ThresholdPredicate::from_value(t.clone(), strict),
            ExtValue::Inf => ThresholdPredicate::Never,
        }
    }

    pub fn eval(&self, x: &ExtValue) -> bool {
        match (self, x) {
            (_, ExtValue::Bot) | (ThresholdPredicate::Never, _) => false,
            (_, ExtValue::Inf) => true,
            (ThresholdPredicate::From { t, strict }, ExtValue::Fin(x)) => {
                if *strict {
                    x > t
                } else {
                    x >= t
                }
            }
        }
    }

    /// Pointwise disjunction: the smaller threshold.
    pub fn join(&self, other: &ThresholdPredicate) -> ThresholdPredicate {
        ops::record(Op::JoinPred);
        self.join_impl(other)
    }

    fn join_impl(&self, other: &ThresholdPredicate) -> ThresholdPredicate {
        use ThresholdPredicate::*;
        match (self, other) {
            (Never, u) | (u, Never) => u.clone(),
            (From { t: t1, strict: s1 }, From { t: t2, strict: s2 }) => match t1.cmp(t2) {
                std::cmp::Ordering::Less => self.clone(),
                std::cmp::Ordering::Greater => other.clone(),
                std::cmp::Ordering::Equal => From { t: t1.clone(), strict: *s1 && *s2 },
            },
        }
    }

    /// `u ∘ f`: holds at `x` iff `u` holds at `f(x)`.
    pub fn act(&self, f: &EnergyFunction) -> ThresholdPredicate {
        ops::record(Op::Act);
        let ThresholdPredicate::From { t, strict } = self else {
            return ThresholdPredicate::Never;
        };
        if f.is_bottom() {
            return ThresholdPredicate::Never;
        }
        for e in f.elements() {
            match e {
                Element::Point { x, value } => {
                    if self.eval(value) {
                        return ThresholdPredicate::from_value(x.clone(), false);
                    }
                }
                Element::Span { lower, upper, body } => match body {
                    Body::Bot => {}
                    Body::Inf => return ThresholdPredicate::from_value(lower.clone(), true),
                    Body::Affine { a, b } => {
                        // a·x + b ≥ t  ⟺  x ≥ (t - b)/a
                        let c = (t - b) / a;
                        if c <= *lower {
                            return ThresholdPredicate::from_value(lower.clone(), true);
                        }
                        if upper.is_none_or(|r| c < *r) {
                            return ThresholdPredicate::from_value(c, *strict);
                        }
                    }
                },
            }
        }
        unreachable!("a function that is not ⊥̄ is unbounded")
    }

    pub fn threshold(&self) -> Option<(&Rational, bool)> {
        match self {
            ThresholdPredicate::Never => None,
            ThresholdPredicate::From { t, strict } => Some((t, *strict)),
        }
    }
}

/// `f^ω`: true at finite `x` iff `f(x) ≥ x`, i.e. `f` can be iterated from `x` forever.
pub fn omega(f: &EnergyFunction) -> ThresholdPredicate {
    ops::record(Op::Omega);
    for e in f.elements() {
        match e {
            Element::Point { x, value } => {
                if *value >= ExtValue::Fin(x.clone()) {
                    return ThresholdPredicate::from_value(x.clone(), false);
                }
            }
            Element::Span { lower, upper, body } => match body {
                Body::Bot => {}
                Body::Inf => return ThresholdPredicate::from_value(lower.clone(), true),
                Body::Affine { a, b } => {
                    if a.is_one() {
                        if !b.is_negative() {
                            return ThresholdPredicate::from_value(lower.clone(), true);
                        }
                        continue;
                    }
                    // (a - 1)x + b ≥ 0  ⟺  x ≥ -b/(a - 1)
                    let c = -b / (a - Rational::one());
                    if c <= *lower {
                        return ThresholdPredicate::from_value(lower.clone(), true);
                    }
                    if upper.is_none_or(|r| c < *r) {
                        return ThresholdPredicate::from_value(c, false);
                    }
                }
            },
        }
    }
    ThresholdPredicate::Never
}

impl fmt::Display for ThresholdPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdPredicate::Never => f.write_str("never"),
            ThresholdPredicate::From { t, strict } => write!(f, "x{}{}", if *strict { ">" } else { ">=" }, t),
        }
    }
}
