//! Multi-dimensional automata with integer piecewise-affine labels, one per
//! dimension, and control-state reachability by backward coverability.
//!
//! Configurations `(s, x⃗)` are ordered by `(s, x⃗) ⪯ (s, y⃗)` iff `x⃗ ≤ y⃗`
//! componentwise; labels are monotone, so the set of configurations that can
//! reach an accepting state is upward closed and is represented by its finite
//! set of minimal elements. Each component is transformed by its own scalar
//! function, so a basis element has exactly one minimal predecessor per
//! transition: componentwise the least `x` with `f_i(x) ≥ u_i`.

use num_traits::Signed;

use crate::function::{Body, Element, EnergyFunction};
use crate::predicate::ThresholdPredicate;
use crate::value::{ceil_natural, floor_integer, rat, ExtValue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTransition {
    pub source: usize,
    pub labels: Vec<EnergyFunction>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDimAutomaton {
    pub dim: usize,
    pub names: Vec<String>,
    pub transitions: Vec<MultiTransition>,
    pub initial: usize,
    pub accepting: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiDimError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("transition {transition} has {found} components, expected {dim}")]
    Arity { transition: usize, found: usize, dim: usize },
    #[error("transition {transition}, component {component}: {what} is not an integer")]
    NonInteger { transition: usize, component: usize, what: String },
    #[error("transition {transition}, component {component}: infinite values are not allowed")]
    Infinite { transition: usize, component: usize },
    #[error("state index {index} out of range for {n} states")]
    StateIndex { index: usize, n: usize },
    #[error("initial energy has {found} components, expected {dim}")]
    EnergyArity { found: usize, dim: usize },
}

/// A minimal element `(state, energy vector)`.
pub type BasisElement = (usize, Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub covered: bool,
    pub basis: Vec<BasisElement>,
    pub steps: usize,
}

fn check_label(f: &EnergyFunction, transition: usize, component: usize) -> Result<(), MultiDimError> {
    let bad = |what: String| Err(MultiDimError::NonInteger { transition, component, what });
    for e in f.elements() {
        match e {
            Element::Point { x, value } => {
                if !x.is_integer() {
                    return bad(format!("breakpoint {x}"));
                }
                match value {
                    ExtValue::Inf => return Err(MultiDimError::Infinite { transition, component }),
                    ExtValue::Fin(v) if !v.is_integer() => return bad(format!("value {v} at x = {x}")),
                    _ => {}
                }
            }
            Element::Span { body, .. } => match body {
                Body::Inf => return Err(MultiDimError::Infinite { transition, component }),
                Body::Affine { a, b } if !a.is_integer() || !b.is_integer() => {
                    return bad(format!("coefficient of {body}"));
                }
                _ => {}
            },
        }
    }
    Ok(())
}

impl MultiDimAutomaton {
    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn validate(&self) -> Result<(), MultiDimError> {
        if self.dim == 0 {
            return Err(MultiDimError::ZeroDimension);
        }
        let n = self.state_count();
        for (i, t) in self.transitions.iter().enumerate() {
            for index in [t.source, t.target] {
                if index >= n {
                    return Err(MultiDimError::StateIndex { index, n });
                }
            }
            if t.labels.len() != self.dim {
                return Err(MultiDimError::Arity { transition: i, found: t.labels.len(), dim: self.dim });
            }
            for (c, f) in t.labels.iter().enumerate() {
                check_label(f, i, c)?;
            }
        }
        for &index in self.accepting.iter().chain(std::iter::once(&self.initial)) {
            if index >= n {
                return Err(MultiDimError::StateIndex { index, n });
            }
        }
        Ok(())
    }
}

/// Least natural `x` with `f(x) ≥ u`, if any.
pub fn least_preimage(f: &EnergyFunction, u: u64) -> Option<u64> {
    match ThresholdPredicate::from_value(rat(u as i64), false).act(f) {
        ThresholdPredicate::Never => None,
        ThresholdPredicate::From { t, strict } => {
            if strict {
                let fl = floor_integer(&t);
                u64::try_from(fl + 1).ok()
            } else if t.is_negative() {
                Some(0)
            } else {
                ceil_natural(&t)
            }
        }
    }
}

fn dominates(small: &BasisElement, big: &BasisElement) -> bool {
    small.0 == big.0 && small.1.iter().zip(&big.1).all(|(a, b)| a <= b)
}

/// Adds `e` to a minimal basis; returns whether it was new.
fn insert_minimal(basis: &mut Vec<BasisElement>, e: BasisElement) -> bool {
    if basis.iter().any(|b| dominates(b, &e)) {
        return false;
    }
    basis.retain(|b| !dominates(&e, b));
    basis.push(e);
    true
}

fn predecessors<'a>(a: &'a MultiDimAutomaton, e: &'a BasisElement) -> impl Iterator<Item = BasisElement> + 'a {
    a.transitions.iter().filter(move |t| t.target == e.0).filter_map(move |t| {
        let m: Option<Vec<u64>> = t.labels.iter().zip(&e.1).map(|(f, &u)| least_preimage(f, u)).collect();
        m.map(|m| (t.source, m))
    })
}

/// One backward step: `U` together with the minimal predecessors of its
/// elements, minimized.
pub fn pred_basis(basis: &[BasisElement], a: &MultiDimAutomaton) -> Vec<BasisElement> {
    let mut out = basis.to_vec();
    for e in basis {
        for p in predecessors(a, e) {
            insert_minimal(&mut out, p);
        }
    }
    out.sort();
    out
}

/// Can an accepting state be reached from `(s0, x0)`? Saturates the basis of
/// configurations that can reach an accepting state with any energy.
pub fn coverable(a: &MultiDimAutomaton, s0: usize, x0: &[u64]) -> Result<CoverResult, MultiDimError> {
    a.validate()?;
    if s0 >= a.state_count() {
        return Err(MultiDimError::StateIndex { index: s0, n: a.state_count() });
    }
    if x0.len() != a.dim {
        return Err(MultiDimError::EnergyArity { found: x0.len(), dim: a.dim });
    }
    let mut basis: Vec<BasisElement> = Vec::new();
    let mut work: Vec<BasisElement> = Vec::new();
    for &f in &a.accepting {
        let e = (f, vec![0; a.dim]);
        if insert_minimal(&mut basis, e.clone()) {
            work.push(e);
        }
    }
    let mut steps = 0;
    while let Some(e) = work.pop() {
        if !basis.contains(&e) {
            continue;
        }
        steps += 1;
        let preds: Vec<BasisElement> = predecessors(a, &e).collect();
        for p in preds {
            if insert_minimal(&mut basis, p.clone()) {
                work.push(p);
            }
        }
    }
    basis.sort();
    let target = (s0, x0.to_vec());
    let covered = basis.iter().any(|b| dominates(b, &target));
    Ok(CoverResult { covered, basis, steps })
}
