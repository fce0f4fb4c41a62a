//! Piecewise-affine extended energy functions and their algebra.
//!
//! A function is stored as an alternating sequence of breakpoints and open
//! spans covering `[0, ∞)`:
//!
//! ```text
//! value(b0) | span(b0, b1) | value(b1) | span(b1, b2) | ... | value(bk) | span(bk, ∞)
//! ```
//!
//! with `b0 = 0`. Each span carries one body (`⊥`, an affine map `a·x + b` with
//! `a ≥ 1`, or `∞`), each breakpoint an explicit value. A breakpoint is kept only
//! if the function is not described by a single body across it, which makes the
//! representation canonical: two functions agree pointwise iff their
//! representations are structurally equal.
//!
//! The value at `⊥` is always `⊥`. The value at `∞` is `∞` unless the function
//! is `⊥` on all of `[0, ∞)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::ops::{self, Op};
use crate::value::{rat, ExtValue, Rational};

/// The behaviour of a function on an open span.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Bot,
    Affine { a: Rational, b: Rational },
    Inf,
}

impl Body {
    pub fn affine(a: Rational, b: Rational) -> Body {
        Body::Affine { a, b }
    }

    pub fn identity() -> Body {
        Body::Affine { a: Rational::one(), b: Rational::zero() }
    }

    /// Value of the body at `x` (the one-sided limit when `x` is a span end).
    /// May be a negative finite value for an affine body; callers validate.
    pub fn at(&self, x: &Rational) -> ExtValue {
        match self {
            Body::Bot => ExtValue::Bot,
            Body::Inf => ExtValue::Inf,
            Body::Affine { a, b } => ExtValue::Fin(a * x + b),
        }
    }

    /// `self ∘ (x ↦ a·x + b)`.
    fn after_affine(&self, a: &Rational, b: &Rational) -> Body {
        match self {
            Body::Affine { a: c, b: d } => Body::Affine { a: c * a, b: c * b + d },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Bot => f.write_str("bot"),
            Body::Inf => f.write_str("inf"),
            Body::Affine { a, b } => {
                if a.is_one() {
                    f.write_str("x")?;
                } else {
                    write!(f, "{}x", a)?;
                }
                match b.cmp(&Rational::zero()) {
                    Ordering::Greater => write!(f, "+{}", b),
                    Ordering::Less => write!(f, "-{}", -b),
                    Ordering::Equal => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("slope {0} is below 1")]
    Slope(Rational),
    #[error("breakpoints must start at 0 and strictly increase")]
    Breakpoints,
    #[error("pieces must have strictly increasing lower bounds")]
    PieceOrder,
    #[error("duplicate point value at x = {0}")]
    DuplicatePoint(Rational),
    #[error("negative bound x = {0}")]
    NegativeBound(Rational),
    #[error("negative energy {value} at x = {at}")]
    Negative { at: Rational, value: Box<Rational> },
    #[error("f(y) >= f(x) + y - x is violated around x = {0}")]
    Monotonicity(Rational),
}

/// One item of a piece list: a body starting at `lower`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub lower: Rational,
    pub lower_included: bool,
    pub body: Body,
}

/// A clause of the canonical textual form: either an isolated point value
/// (`v | x==p`) or a body starting at a bound (`e | x>=p` / `e | x>p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    Point { x: Rational, value: ExtValue },
    Piece(Piece),
}

/// An element of the alternating representation, in increasing order of `x`.
#[derive(Debug, Clone, Copy)]
pub enum Element<'a> {
    Point { x: &'a Rational, value: &'a ExtValue },
    Span { lower: &'a Rational, upper: Option<&'a Rational>, body: &'a Body },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnergyFunction {
    breaks: Vec<Rational>,
    values: Vec<ExtValue>,
    spans: Vec<Body>,
}

/// Accumulates points and spans in alternating order, starting with the point at 0.
#[derive(Default)]
struct Builder {
    breaks: Vec<Rational>,
    values: Vec<ExtValue>,
    spans: Vec<Body>,
}

impl Builder {
    fn point(&mut self, x: Rational, value: ExtValue) {
        debug_assert_eq!(self.breaks.len(), self.spans.len());
        self.breaks.push(x);
        self.values.push(value);
    }

    fn span(&mut self, body: Body) {
        debug_assert_eq!(self.breaks.len(), self.spans.len() + 1);
        self.spans.push(body);
    }

    fn finish(self) -> EnergyFunction {
        let f = EnergyFunction::canonical(self.breaks, self.values, self.spans);
        debug_assert!(f.check().is_ok(), "invalid result {:?}: {:?}", f, f.check());
        f
    }
}

impl EnergyFunction {
    fn canonical(breaks: Vec<Rational>, values: Vec<ExtValue>, spans: Vec<Body>) -> Self {
        let mut out = EnergyFunction {
            breaks: Vec::with_capacity(breaks.len()),
            values: Vec::with_capacity(values.len()),
            spans: Vec::with_capacity(spans.len()),
        };
        for ((x, v), body) in breaks.into_iter().zip(values).zip(spans) {
            if let Some(prev) = out.spans.last() {
                if *prev == body && body.at(&x) == v {
                    continue;
                }
            }
            out.breaks.push(x);
            out.values.push(v);
            out.spans.push(body);
        }
        out
    }

    /// Builds a function from explicit breakpoints (starting at 0), their values,
    /// and the bodies of the spans following each breakpoint. Validates and
    /// canonicalizes.
    pub fn from_parts(
        breaks: Vec<Rational>,
        values: Vec<ExtValue>,
        spans: Vec<Body>,
    ) -> Result<Self, FunctionError> {
        if breaks.is_empty()
            || breaks.len() != values.len()
            || breaks.len() != spans.len()
            || !breaks[0].is_zero()
            || breaks.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(FunctionError::Breakpoints);
        }
        let raw = EnergyFunction { breaks, values, spans };
        raw.check()?;
        Ok(EnergyFunction::canonical(raw.breaks, raw.values, raw.spans))
    }

    /// Builds a function from a piece list and explicit point values. The region
    /// before the first piece is `⊥`. A breakpoint whose piece starts open
    /// belongs to the piece on its left unless a point value overrides it.
    pub fn from_pieces(
        pieces: &[Piece],
        points: &[(Rational, ExtValue)],
    ) -> Result<Self, FunctionError> {
        if pieces.windows(2).any(|w| w[0].lower >= w[1].lower) {
            return Err(FunctionError::PieceOrder);
        }
        let mut sorted_points: Vec<&(Rational, ExtValue)> = points.iter().collect();
        sorted_points.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = sorted_points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(FunctionError::DuplicatePoint(w[0].0.clone()));
        }
        if let Some(p) = pieces.iter().find(|p| p.lower.is_negative()) {
            return Err(FunctionError::NegativeBound(p.lower.clone()));
        }
        if let Some((x, _)) = sorted_points.iter().find(|(x, _)| x.is_negative()) {
            return Err(FunctionError::NegativeBound(x.clone()));
        }
        for p in pieces {
            if let Body::Affine { a, .. } = &p.body {
                if *a < Rational::one() {
                    return Err(FunctionError::Slope(a.clone()));
                }
            }
        }

        let mut xs: Vec<Rational> = std::iter::once(Rational::zero())
            .chain(pieces.iter().map(|p| p.lower.clone()))
            .chain(sorted_points.iter().map(|(x, _)| x.clone()))
            .collect();
        xs.sort();
        xs.dedup();

        let mut values = Vec::with_capacity(xs.len());
        let mut spans = Vec::with_capacity(xs.len());
        for x in &xs {
            let explicit = sorted_points
                .binary_search_by(|(px, _)| px.cmp(x))
                .ok()
                .map(|i| sorted_points[i].1.clone());
            let covering = pieces
                .iter()
                .rev()
                .find(|p| p.lower < *x || (p.lower == *x && p.lower_included));
            let value = explicit
                .unwrap_or_else(|| covering.map_or(ExtValue::Bot, |p| p.body.at(x)));
            let after = pieces
                .iter()
                .rev()
                .find(|p| p.lower <= *x)
                .map_or(Body::Bot, |p| p.body.clone());
            values.push(value);
            spans.push(after);
        }
        EnergyFunction::from_parts(xs, values, spans)
    }

    /// `⊥̄`: undefined everywhere.
    pub fn bottom() -> Self {
        EnergyFunction { breaks: vec![Rational::zero()], values: vec![ExtValue::Bot], spans: vec![Body::Bot] }
    }

    pub fn identity() -> Self {
        EnergyFunction {
            breaks: vec![Rational::zero()],
            values: vec![ExtValue::zero()],
            spans: vec![Body::identity()],
        }
    }

    /// `⊤̄`: `∞` on every defined input.
    pub fn top() -> Self {
        EnergyFunction { breaks: vec![Rational::zero()], values: vec![ExtValue::Inf], spans: vec![Body::Inf] }
    }

    /// `x ↦ a·x + b` on `x ≥ lower` (or `x > lower`), `⊥` below.
    pub fn affine(
        a: Rational,
        b: Rational,
        lower: Rational,
        lower_included: bool,
    ) -> Result<Self, FunctionError> {
        EnergyFunction::from_pieces(&[Piece { lower, lower_included, body: Body::Affine { a, b } }], &[])
    }

    /// The integer update `x ↦ x + k` on `x ≥ max(0, -k)`.
    pub fn integer_update(k: i64) -> Self {
        let lower = rat((-k).max(0));
        EnergyFunction::affine(Rational::one(), rat(k), lower, true)
            .expect("integer updates are energy functions")
    }

    /// The function `x` below `k`, `∞` above `k`, with value `k` (when
    /// `attained`) or `∞` at `k` itself. These are exactly the stars.
    pub fn star_shape(k: &ExtValue, attained: bool) -> Self {
        let mut bld = Builder::default();
        match k {
            ExtValue::Bot => return EnergyFunction::top(),
            ExtValue::Inf => return EnergyFunction::identity(),
            ExtValue::Fin(k) if k.is_negative() => return EnergyFunction::top(),
            ExtValue::Fin(k) if k.is_zero() => {
                bld.point(Rational::zero(), if attained { ExtValue::zero() } else { ExtValue::Inf });
            }
            ExtValue::Fin(k) => {
                bld.point(Rational::zero(), ExtValue::zero());
                bld.span(Body::identity());
                bld.point(k.clone(), if attained { ExtValue::Fin(k.clone()) } else { ExtValue::Inf });
            }
        }
        bld.span(Body::Inf);
        bld.finish()
    }

    /// `g_k⁻`: identity for `x < k`, `∞` for `x ≥ k`.
    pub fn below_threshold(k: &Rational) -> Self {
        EnergyFunction::star_shape(&ExtValue::Fin(k.clone()), false)
    }

    /// `g_k⁺`: identity for `x ≤ k`, `∞` for `x > k`.
    pub fn upto_threshold(k: &Rational) -> Self {
        EnergyFunction::star_shape(&ExtValue::Fin(k.clone()), true)
    }

    pub fn is_bottom(&self) -> bool {
        self.breaks.len() == 1 && self.values[0].is_bot() && self.spans[0] == Body::Bot
    }

    pub fn is_identity(&self) -> bool {
        *self == EnergyFunction::identity()
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    /// Number of clauses in the canonical textual form.
    pub fn piece_count(&self) -> usize {
        self.clauses().len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element<'_>> + '_ {
        (0..self.breaks.len()).flat_map(move |i| {
            [
                Element::Point { x: &self.breaks[i], value: &self.values[i] },
                Element::Span { lower: &self.breaks[i], upper: self.breaks.get(i + 1), body: &self.spans[i] },
            ]
        })
    }

    /// The least `x` with `f(x) ≠ ⊥`, and whether it is attained; `None` for `⊥̄`.
    pub fn domain_start(&self) -> Option<(Rational, bool)> {
        self.elements().find_map(|e| match e {
            Element::Point { x, value } if !value.is_bot() => Some((x.clone(), true)),
            Element::Span { lower, body, .. } if *body != Body::Bot => Some((lower.clone(), false)),
            _ => None,
        })
    }

    /// Index of the last breakpoint `≤ x`.
    fn index_le(&self, x: &Rational) -> usize {
        match self.breaks.binary_search(x) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    fn eval_fin(&self, x: &Rational) -> ExtValue {
        debug_assert!(!x.is_negative());
        match self.breaks.binary_search(x) {
            Ok(i) => self.values[i].clone(),
            Err(i) => self.spans[i - 1].at(x),
        }
    }

    /// Body of the span containing points just above `x`.
    fn body_after(&self, x: &Rational) -> &Body {
        &self.spans[self.index_le(x)]
    }

    pub fn eval(&self, x: &ExtValue) -> ExtValue {
        match x {
            ExtValue::Bot => ExtValue::Bot,
            ExtValue::Inf if self.is_bottom() => ExtValue::Bot,
            ExtValue::Inf => ExtValue::Inf,
            ExtValue::Fin(x) => self.eval_fin(x),
        }
    }

    /// Checks slopes, non-negativity and `f(y) ≥ f(x) + y - x`.
    ///
    /// The inequality says `f(x) - x` is non-decreasing. Inside an affine span
    /// that is `a ≥ 1`; across a breakpoint `p` it is
    /// `left limit ≤ f(p) ≤ right limit`.
    pub fn check(&self) -> Result<(), FunctionError> {
        if self.breaks.is_empty()
            || self.breaks.len() != self.values.len()
            || self.breaks.len() != self.spans.len()
            || !self.breaks[0].is_zero()
            || self.breaks.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(FunctionError::Breakpoints);
        }
        for (i, x) in self.breaks.iter().enumerate() {
            let v = &self.values[i];
            if let ExtValue::Fin(v) = v {
                if v.is_negative() {
                    return Err(FunctionError::Negative { at: x.clone(), value: Box::new(v.clone()) });
                }
            }
            let right = self.spans[i].at(x);
            if let Body::Affine { a, .. } = &self.spans[i] {
                if *a < Rational::one() {
                    return Err(FunctionError::Slope(a.clone()));
                }
                if let ExtValue::Fin(r) = &right {
                    if r.is_negative() {
                        return Err(FunctionError::Negative { at: x.clone(), value: Box::new(r.clone()) });
                    }
                }
            }
            if i > 0 && self.spans[i - 1].at(x) > *v {
                return Err(FunctionError::Monotonicity(x.clone()));
            }
            if *v > right {
                return Err(FunctionError::Monotonicity(x.clone()));
            }
        }
        Ok(())
    }

    /// Canonical clause list: leading `⊥` is implicit; a breakpoint whose value
    /// continues the following body opens it with `x>=p`, otherwise the value
    /// is an explicit point followed by the body from `x>p`.
    pub fn clauses(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        for i in 0..self.breaks.len() {
            let (x, v, body) = (&self.breaks[i], &self.values[i], &self.spans[i]);
            if v.is_bot() {
                if *body != Body::Bot {
                    out.push(Clause::Piece(Piece { lower: x.clone(), lower_included: false, body: body.clone() }));
                }
            } else if body.at(x) == *v {
                out.push(Clause::Piece(Piece { lower: x.clone(), lower_included: true, body: body.clone() }));
            } else if i > 0 && self.spans[i - 1] != Body::Bot && self.spans[i - 1].at(x) == *v {
                // left-continuous: the previous clause already covers x
                out.push(Clause::Piece(Piece { lower: x.clone(), lower_included: false, body: body.clone() }));
            } else {
                out.push(Clause::Point { x: x.clone(), value: v.clone() });
                out.push(Clause::Piece(Piece { lower: x.clone(), lower_included: false, body: body.clone() }));
            }
        }
        out
    }

    /// Piece list and explicit point values.
    pub fn pieces(&self) -> (Vec<Piece>, Vec<(Rational, ExtValue)>) {
        let mut pieces = Vec::new();
        let mut points = Vec::new();
        for c in self.clauses() {
            match c {
                Clause::Piece(p) => pieces.push(p),
                Clause::Point { x, value } => points.push((x, value)),
            }
        }
        (pieces, points)
    }

    /// Pointwise maximum `f ∨ g`.
    pub fn join(&self, other: &EnergyFunction) -> EnergyFunction {
        ops::record(Op::Join);
        self.join_impl(other)
    }

    fn join_impl(&self, other: &EnergyFunction) -> EnergyFunction {
        let mut xs: Vec<Rational> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        xs.sort();
        xs.dedup();
        let mut bld = Builder::default();
        for (i, x) in xs.iter().enumerate() {
            let v = self.eval_fin(x).max(other.eval_fin(x));
            bld.point(x.clone(), v);
            push_max_span(&mut bld, x, xs.get(i + 1), self.body_after(x), other.body_after(x));
        }
        bld.finish()
    }

    /// `self ∘ f`, i.e. `x ↦ self(f(x))`: apply `f` first.
    pub fn compose(&self, f: &EnergyFunction) -> EnergyFunction {
        ops::record(Op::Compose);
        self.compose_impl(f)
    }

    /// `self ∘ f` written the other way around: apply `self`, then `g`.
    pub fn then(&self, g: &EnergyFunction) -> EnergyFunction {
        g.compose(self)
    }

    fn compose_impl(&self, f: &EnergyFunction) -> EnergyFunction {
        let g = self;
        if g.is_bottom() || f.is_bottom() {
            return EnergyFunction::bottom();
        }
        if g.is_identity() {
            return f.clone();
        }
        if f.is_identity() {
            return g.clone();
        }
        let mut bld = Builder::default();
        for i in 0..f.breaks.len() {
            let l = &f.breaks[i];
            bld.point(l.clone(), g.eval(&f.values[i]));
            match &f.spans[i] {
                Body::Bot => bld.span(Body::Bot),
                Body::Inf => bld.span(Body::Inf),
                Body::Affine { a, b } => {
                    let lo = a * l + b;
                    let hi = f.breaks.get(i + 1).map(|r| a * r + b);
                    let mut j = g.index_le(&lo);
                    for k in j + 1..g.breaks.len() {
                        let q = &g.breaks[k];
                        if hi.as_ref().is_some_and(|hi| q >= hi) {
                            break;
                        }
                        bld.span(g.spans[j].after_affine(a, b));
                        bld.point((q - b) / a, g.values[k].clone());
                        j = k;
                    }
                    bld.span(g.spans[j].after_affine(a, b));
                }
            }
        }
        bld.finish()
    }

    /// `sup{x ∈ [0,∞) : f(x) ≤ x}` and whether `f(k) ≤ k` holds at the supremum.
    ///
    /// Returns `(∞, true)` when `f ≤ id` on all of `[0, ∞)`, and `(0, false)`
    /// when `f(x) > x` everywhere, so that the pair is always a star shape.
    pub fn identity_crossing(&self) -> (ExtValue, bool) {
        let n = self.breaks.len();
        for i in (0..n).rev() {
            let (l, r) = (&self.breaks[i], self.breaks.get(i + 1));
            match below_identity(&self.spans[i], l, r) {
                SpanPart::All => {
                    return match r {
                        None => (ExtValue::Inf, true),
                        Some(r) => (ExtValue::Fin(r.clone()), false),
                    }
                }
                SpanPart::UpTo(c) => return (ExtValue::Fin(c), true),
                SpanPart::Nothing => {}
            }
            if self.values[i] <= ExtValue::Fin(l.clone()) {
                return (ExtValue::Fin(l.clone()), true);
            }
        }
        (ExtValue::zero(), false)
    }

    /// `f*`: `x` where `f(x) ≤ x`, `∞` where `f(x) > x`.
    pub fn star(&self) -> EnergyFunction {
        ops::record(Op::Star);
        let (k, attained) = self.identity_crossing();
        EnergyFunction::star_shape(&k, attained)
    }

    /// `f ≤ g` in the natural order (`f ∨ g = g`).
    pub fn leq(&self, other: &EnergyFunction) -> bool {
        self.join_impl(other) == *other
    }

    /// `fⁿ`, with `f⁰ = id`.
    pub fn power(&self, n: usize) -> EnergyFunction {
        let mut acc = EnergyFunction::identity();
        for _ in 0..n {
            acc = self.compose_impl(&acc);
        }
        acc
    }
}

enum SpanPart {
    All,
    UpTo(Rational),
    Nothing,
}

/// Which part of the open span `(l, r)` satisfies `body(x) ≤ x`.
fn below_identity(body: &Body, l: &Rational, r: Option<&Rational>) -> SpanPart {
    match body {
        Body::Bot => SpanPart::All,
        Body::Inf => SpanPart::Nothing,
        Body::Affine { a, b } => {
            if a.is_one() {
                return if b.is_positive() { SpanPart::Nothing } else { SpanPart::All };
            }
            // (a - 1)x + b ≤ 0  ⟺  x ≤ -b / (a - 1)
            let c = -b / (a - Rational::one());
            if c <= *l {
                SpanPart::Nothing
            } else if r.is_some_and(|r| c >= *r) {
                SpanPart::All
            } else {
                SpanPart::UpTo(c)
            }
        }
    }
}

fn push_max_span(bld: &mut Builder, l: &Rational, r: Option<&Rational>, f: &Body, g: &Body) {
    match (f, g) {
        (Body::Inf, _) | (_, Body::Inf) => bld.span(Body::Inf),
        (Body::Bot, other) | (other, Body::Bot) => bld.span(other.clone()),
        (Body::Affine { a: a1, b: b1 }, Body::Affine { a: a2, b: b2 }) => {
            if a1 == a2 {
                bld.span(if b1 >= b2 { f.clone() } else { g.clone() });
                return;
            }
            let c = (b2 - b1) / (a1 - a2);
            if c > *l && r.is_none_or(|r| c < *r) {
                // smaller slope wins left of the crossing
                let (left, right) = if a1 < a2 { (f, g) } else { (g, f) };
                let v = left.at(&c);
                bld.span(left.clone());
                bld.point(c, v);
                bld.span(right.clone());
            } else {
                let probe = match r {
                    Some(r) => (l + r) / rat(2),
                    None => l + Rational::one(),
                };
                bld.span(if f.at(&probe) >= g.at(&probe) { f.clone() } else { g.clone() });
            }
        }
    }
}

impl fmt::Display for EnergyFunction {
    /// Canonical `expr | guard` clause list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses = self.clauses();
        if clauses.is_empty() {
            return f.write_str("bot | x>=0");
        }
        for (i, c) in clauses.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match c {
                Clause::Point { x, value } => write!(f, "{} | x=={}", value, x)?,
                Clause::Piece(p) => {
                    write!(f, "{} | x{}{}", p.body, if p.lower_included { ">=" } else { ">" }, p.lower)?
                }
            }
        }
        Ok(())
    }
}
