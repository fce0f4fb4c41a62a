//! Brute-force decision of reachability and Büchi acceptance by value
//! iteration over global states `(state, energy)`.
//!
//! Because every label satisfies `f(y) ≥ f(x) + y - x`, more energy is always
//! at least as good, so it suffices to keep the best energy per state. After
//! round `r` the map holds the best energy over all paths of length `≤ r`.
//!
//! A strict improvement in a round `r > n` means the best path has more than
//! `n` steps and so repeats a state; removing the repeated segment would give a
//! shorter path that is at least as good unless the segment gains energy. A
//! gaining segment gains at least as much on every repetition, so the state's
//! supremum is unbounded and it is promoted to `∞` ("pumped").

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::automaton::EnergyAutomaton;
use crate::function::{Body, Element, EnergyFunction};
use crate::value::{ExtValue, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

/// A path of global states. An `∞` energy marks a state reached by pumping a
/// gaining cycle arbitrarily often.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub steps: Vec<(usize, ExtValue)>,
}

impl Witness {
    pub fn pumped(&self) -> bool {
        self.steps.iter().any(|(_, e)| *e == ExtValue::Inf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Accepting state whose cycle was confirmed (Büchi only).
    pub accepting_state: Option<usize>,
    pub rounds: usize,
}

/// `16 · n · (total breakpoints + 1)`.
pub fn default_cap(a: &EnergyAutomaton) -> usize {
    let bps: usize = a.transitions.iter().map(|t| t.label.breakpoints().len()).sum();
    16 * a.state_count().max(1) * (bps + 1)
}

struct Iteration {
    values: Vec<ExtValue>,
    paths: Vec<Vec<(usize, ExtValue)>>,
    rounds: usize,
    converged: bool,
}

/// A start state, its energy, and the path that led there.
type Seed = (usize, ExtValue, Vec<(usize, ExtValue)>);

/// Jacobi iteration from the given seeds until a fixpoint, `stop` holds, or
/// `cap` rounds have elapsed.
fn iterate(
    a: &EnergyAutomaton,
    seeds: Vec<Seed>,
    cap: usize,
    stop: impl Fn(&[ExtValue]) -> bool,
) -> Iteration {
    let n = a.state_count();
    let mut values = vec![ExtValue::Bot; n];
    let mut paths: Vec<Vec<(usize, ExtValue)>> = vec![Vec::new(); n];
    for (s, v, p) in seeds {
        if v > values[s] {
            values[s] = v;
            paths[s] = p;
        }
    }
    let mut rounds = 0;
    loop {
        if stop(&values) {
            return Iteration { values, paths, rounds, converged: false };
        }
        if rounds >= cap {
            return Iteration { values, paths, rounds, converged: false };
        }
        rounds += 1;
        let mut next = values.clone();
        let mut next_paths = paths.clone();
        for tr in &a.transitions {
            let v = tr.label.eval(&values[tr.source]);
            if v > next[tr.target] {
                next[tr.target] = v;
                let mut p = paths[tr.source].clone();
                p.push((tr.target, next[tr.target].clone()));
                next_paths[tr.target] = p;
            }
        }
        let mut changed = false;
        for t in 0..n {
            if next[t] > values[t] {
                changed = true;
                if rounds > n {
                    next[t] = ExtValue::Inf;
                    if let Some(last) = next_paths[t].last_mut() {
                        last.1 = ExtValue::Inf;
                    }
                }
            }
        }
        if !changed {
            return Iteration { values, paths, rounds, converged: true };
        }
        values = next;
        paths = next_paths;
    }
}

/// Is an accepting state reachable from `(s0, x0)`?
pub fn iterate_reach(a: &EnergyAutomaton, s0: usize, accepting: &[usize], x0: &Rational, cap: usize) -> OracleResult {
    let seed = ExtValue::Fin(x0.clone());
    let it = iterate(a, vec![(s0, seed.clone(), vec![(s0, seed)])], cap, |v| {
        accepting.iter().any(|&j| !v[j].is_bot())
    });
    if let Some(&j) = accepting.iter().find(|&&j| !it.values[j].is_bot()) {
        return OracleResult {
            verdict: Verdict::True,
            witness: Some(Witness { steps: it.paths[j].clone() }),
            accepting_state: Some(j),
            rounds: it.rounds,
        };
    }
    OracleResult {
        verdict: if it.converged { Verdict::False } else { Verdict::Inconclusive },
        witness: None,
        accepting_state: None,
        rounds: it.rounds,
    }
}

/// Is there an infinite run from `(s0, x0)` visiting `accepting` infinitely often?
///
/// With `v_j` the best energy reachable at an accepting `j`, the answer is yes
/// iff for some `j` the best energy on returning to `j` from `(j, v_j)` is at
/// least `v_j`. When `v_j` is unbounded, the question becomes whether some
/// closed walk through `j` eventually gains energy, which only depends on the
/// last piece of each label.
pub fn iterate_buchi(a: &EnergyAutomaton, s0: usize, accepting: &[usize], x0: &Rational, cap: usize) -> OracleResult {
    let seed = ExtValue::Fin(x0.clone());
    let fwd = iterate(a, vec![(s0, seed.clone(), vec![(s0, seed)])], cap, |_| false);
    let mut rounds = fwd.rounds;
    if !fwd.converged {
        return OracleResult { verdict: Verdict::Inconclusive, witness: None, accepting_state: None, rounds };
    }
    let mut inconclusive = false;
    for &j in accepting {
        let vj = &fwd.values[j];
        let accepted = match vj {
            ExtValue::Bot => continue,
            ExtValue::Inf => eventually_gaining_cycle(a, j),
            ExtValue::Fin(_) => {
                let seeds = a
                    .transitions
                    .iter()
                    .filter(|t| t.source == j)
                    .map(|t| {
                        let v = t.label.eval(vj);
                        (t.target, v.clone(), vec![(j, vj.clone()), (t.target, v)])
                    })
                    .collect();
                let back = iterate(a, seeds, cap, |v| v[j] >= *vj);
                rounds += back.rounds;
                if back.values[j] >= *vj {
                    true
                } else {
                    inconclusive |= !back.converged;
                    false
                }
            }
        };
        if accepted {
            return OracleResult {
                verdict: Verdict::True,
                witness: Some(Witness { steps: fwd.paths[j].clone() }),
                accepting_state: Some(j),
                rounds,
            };
        }
    }
    OracleResult {
        verdict: if inconclusive { Verdict::Inconclusive } else { Verdict::False },
        witness: None,
        accepting_state: None,
        rounds,
    }
}

/// Asymptotic shape of a label: `∞` eventually, or `x ↦ a·x + b` on its last span.
enum Tail {
    Inf,
    Affine { a: Rational, b: Rational },
}

fn tail(f: &EnergyFunction) -> Option<Tail> {
    let last = f.elements().last()?;
    match last {
        Element::Span { body: Body::Bot, .. } => None,
        Element::Span { body: Body::Inf, .. } => Some(Tail::Inf),
        Element::Span { body: Body::Affine { a, b }, .. } => Some(Tail::Affine { a: a.clone(), b: b.clone() }),
        Element::Point { .. } => None,
    }
}

fn reachable(n: usize, edges: &[(usize, usize)], from: usize, forward: bool) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(s, t) in edges {
            let (x, y) = if forward { (s, t) } else { (t, s) };
            if x == u && !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Does some closed walk through `j` satisfy `w(y) ≥ y` for all large `y`?
fn eventually_gaining_cycle(a: &EnergyAutomaton, j: usize) -> bool {
    let n = a.state_count();
    let live: Vec<(usize, usize, Tail)> = a
        .transitions
        .iter()
        .filter_map(|t| tail(&t.label).map(|tl| (t.source, t.target, tl)))
        .collect();
    let pairs: Vec<(usize, usize)> = live.iter().map(|(s, t, _)| (*s, *t)).collect();
    let fwd = reachable(n, &pairs, j, true);
    let bwd = reachable(n, &pairs, j, false);
    let in_scc = |s: usize| fwd[s] && bwd[s];
    let scc_edges: Vec<&(usize, usize, Tail)> = live.iter().filter(|(s, t, _)| in_scc(*s) && in_scc(*t)).collect();
    if scc_edges.is_empty() {
        return false;
    }
    let mut weights = Vec::new();
    for (s, t, tl) in &scc_edges {
        match tl {
            Tail::Inf => return true,
            Tail::Affine { a, b } => {
                if !a.is_one() {
                    return true;
                }
                weights.push((*s, *t, b.clone()));
            }
        }
    }
    // longest walks from j inside the component; a further improvement after
    // n rounds exposes a positive cycle
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    dist[j] = Some(Rational::zero());
    for round in 0..=n {
        let mut changed = false;
        for (s, t, w) in &weights {
            if let Some(ds) = dist[*s].clone() {
                let cand = ds + w;
                if *t == j {
                    if !cand.is_negative() {
                        return true;
                    }
                } else if dist[*t].as_ref().is_none_or(|dt| cand > *dt) {
                    dist[*t] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            return false;
        }
        if round == n {
            return true;
        }
    }
    false
}
