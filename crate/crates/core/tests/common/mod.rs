//! Random instances shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use energy_core::function::Body;
use energy_core::value::{rat, ratio};
use energy_core::{EnergyAutomaton, EnergyFunction, ExtValue, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub mod laws;

pub use rand_chacha::ChaCha8Rng as TestRng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

#[derive(Clone, Copy)]
pub struct Shape {
    pub max_pieces: usize,
    /// Largest denominator of breakpoints, offsets and point values.
    pub max_den: i64,
    pub fractional_slopes: bool,
}

impl Shape {
    pub const SMALL: Shape = Shape { max_pieces: 3, max_den: 8, fractional_slopes: false };
    pub const ALGEBRA: Shape = Shape { max_pieces: 3, max_den: 4, fractional_slopes: true };
}

pub fn small_rational(r: &mut TestRng, max: i64, max_den: i64) -> Rational {
    let dens: Vec<i64> = [1, 2, 4, 8, 3].into_iter().filter(|d| *d <= max_den).collect();
    let d = *dens.choose(r).unwrap();
    ratio(r.gen_range(0..=max * d), d)
}

/// A valid function with up to `shape.max_pieces` non-⊥ pieces; the pieces
/// are chained so that `f(x) - x` never decreases.
pub fn function(r: &mut TestRng, shape: Shape) -> EnergyFunction {
    match r.gen_range(0..20) {
        0 => return EnergyFunction::bottom(),
        1 => return EnergyFunction::identity(),
        2 => return EnergyFunction::top(),
        _ => {}
    }
    let k = r.gen_range(1..=shape.max_pieces);
    let mut lowers = vec![if r.gen_bool(0.3) { rat(0) } else { small_rational(r, 4, shape.max_den) }];
    for _ in 1..k {
        let step = small_rational(r, 3, shape.max_den) + ratio(1, shape.max_den);
        let next = lowers.last().unwrap() + step;
        lowers.push(next);
    }
    let mut breaks = Vec::new();
    let mut values = Vec::new();
    let mut spans = Vec::new();
    if lowers[0] > rat(0) {
        breaks.push(rat(0));
        values.push(ExtValue::Bot);
        spans.push(Body::Bot);
    }
    let slopes: Vec<Rational> = if shape.fractional_slopes {
        vec![rat(1), rat(1), rat(1), ratio(3, 2), rat(2), rat(3)]
    } else {
        vec![rat(1), rat(1), rat(1), rat(2), rat(3)]
    };
    // left limit at the current breakpoint; ⊥ before the first piece
    let mut left: Option<Rational> = None;
    let mut infinite = false;
    for (i, p) in lowers.iter().enumerate() {
        let go_inf = infinite || (i + 1 == k && i > 0 && r.gen_bool(0.2)) || (k == 1 && r.gen_bool(0.05));
        if go_inf {
            infinite = true;
            let v = match (&left, r.gen_range(0..3)) {
                (Some(l), 0) => ExtValue::Fin(l.clone()),
                (None, 0) if r.gen_bool(0.5) => ExtValue::Bot,
                _ => ExtValue::Inf,
            };
            breaks.push(p.clone());
            values.push(v);
            spans.push(Body::Inf);
            continue;
        }
        let base = left.clone().unwrap_or_else(|| rat(0));
        let jump = if r.gen_bool(0.5) { rat(0) } else { small_rational(r, 3, shape.max_den) };
        let right = &base + &jump;
        let a = slopes.choose(r).unwrap().clone();
        let b = &right - &a * p;
        let v = match r.gen_range(0..4) {
            0 if left.is_none() => ExtValue::Bot,
            0 | 1 => ExtValue::Fin(right.clone()),
            2 => ExtValue::Fin(base.clone()),
            _ => ExtValue::Fin((&base + &right) / rat(2)),
        };
        breaks.push(p.clone());
        values.push(v);
        if let Some(next) = lowers.get(i + 1) {
            left = Some(&a * next + &b);
        }
        spans.push(Body::Affine { a, b });
    }
    EnergyFunction::from_parts(breaks, values, spans).expect("generator produces valid functions")
}

/// Function whose breakpoints, coefficients and values are integers, never `∞`.
pub fn integer_function(r: &mut TestRng) -> EnergyFunction {
    loop {
        let f = function(r, Shape { max_pieces: 2, max_den: 1, fractional_slopes: false });
        let finite = f.elements().all(|e| match e {
            energy_core::function::Element::Point { value, .. } => match value {
                ExtValue::Inf => false,
                ExtValue::Fin(v) => v.is_integer(),
                ExtValue::Bot => true,
            },
            energy_core::function::Element::Span { body, .. } => *body != Body::Inf,
        });
        if finite {
            return f;
        }
    }
}

pub struct Instance {
    pub automaton: EnergyAutomaton,
    pub accepting: Vec<usize>,
    pub s0: usize,
}

pub fn automaton(r: &mut TestRng, max_states: usize, shape: Shape) -> Instance {
    let n = r.gen_range(1..=max_states);
    let mut a = EnergyAutomaton::with_states(n);
    let m = r.gen_range(0..=2 * n + 1);
    for _ in 0..m {
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        a.add_transition(s, function(r, shape), t);
    }
    let accepting: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.35)).collect();
    let s0 = r.gen_range(0..n);
    a.initial = s0;
    a.accepting = accepting.clone();
    Instance { automaton: a, accepting, s0 }
}

/// Sample points: all breakpoints, their neighbours and midpoints, and a few larger values.
pub fn grid(fs: &[&EnergyFunction]) -> Vec<Rational> {
    let mut xs: Vec<Rational> = vec![rat(0), rat(50), rat(1000)];
    for f in fs {
        for b in f.breakpoints() {
            xs.push(b.clone());
            xs.push(b + ratio(1, 16));
            xs.push(b + rat(1));
            if *b >= ratio(1, 16) {
                xs.push(b - ratio(1, 16));
            }
        }
    }
    xs.sort();
    xs.dedup();
    let mids: Vec<Rational> = xs.windows(2).map(|w| (&w[0] + &w[1]) / rat(2)).collect();
    xs.extend(mids);
    xs.sort();
    xs
}

/// Square matrix whose entries are `⊥̄` with probability one half.
pub fn matrix(r: &mut TestRng, n: usize, shape: Shape) -> energy_core::FunctionMatrix {
    energy_core::FunctionMatrix::from_fn(n, n, |_, _| {
        if r.gen_bool(0.5) {
            EnergyFunction::bottom()
        } else {
            function(r, shape)
        }
    })
}

/// `sup_n (Mⁿ)[·][j](x)` for every row, by value iteration over paths from `j`.
/// A strict improvement after `n` rounds can only come from a path that repeats
/// a state around a gaining cycle, so it is promoted to `∞`.
pub fn path_suprema(m: &energy_core::FunctionMatrix, j: usize, x: &Rational) -> Vec<ExtValue> {
    let n = m.rows();
    let mut v = vec![ExtValue::Bot; n];
    v[j] = ExtValue::Fin(x.clone());
    for round in 1.. {
        let mut next = v.clone();
        for i in 0..n {
            for k in 0..n {
                let y = m.get(i, k).eval(&v[k]);
                if y > next[i] {
                    next[i] = y;
                }
            }
        }
        if next == v {
            return v;
        }
        if round > n {
            for i in 0..n {
                if next[i] > v[i] {
                    next[i] = ExtValue::Inf;
                }
            }
        }
        v = next;
    }
    unreachable!()
}

pub fn multi_automaton(r: &mut TestRng, max_states: usize, dim: usize) -> energy_core::MultiDimAutomaton {
    let n = r.gen_range(1..=max_states);
    let m = r.gen_range(1..=2 * n + 1);
    let transitions = (0..m)
        .map(|_| energy_core::MultiTransition {
            source: r.gen_range(0..n),
            labels: (0..dim)
                .map(|_| {
                    if r.gen_bool(0.6) {
                        EnergyFunction::integer_update(r.gen_range(-3..=2))
                    } else {
                        integer_function(r)
                    }
                })
                .collect(),
            target: r.gen_range(0..n),
        })
        .collect();
    let mut accepting: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.3)).collect();
    if accepting.is_empty() {
        accepting.push(r.gen_range(0..n));
    }
    energy_core::MultiDimAutomaton {
        dim,
        names: (1..=n).map(|i| i.to_string()).collect(),
        transitions,
        initial: 0,
        accepting,
    }
}

/// Explicit search over configurations reachable in at most `depth` steps,
/// keeping only maximal energy vectors per state.
pub fn forward_reaches(a: &energy_core::MultiDimAutomaton, s0: usize, x0: &[u64], depth: usize) -> bool {
    let start: Vec<ExtValue> = x0.iter().map(|&v| ExtValue::fin(v as i64)).collect();
    let mut seen: Vec<(usize, Vec<ExtValue>)> = vec![(s0, start)];
    let mut frontier = seen.clone();
    for _ in 0..=depth {
        if frontier.iter().any(|(s, _)| a.accepting.contains(s)) {
            return true;
        }
        let mut next = Vec::new();
        for (s, x) in &frontier {
            for t in a.transitions.iter().filter(|t| t.source == *s) {
                let y: Vec<ExtValue> = t.labels.iter().zip(x).map(|(f, v)| f.eval(v)).collect();
                if y.iter().any(ExtValue::is_bot) {
                    continue;
                }
                let covered = seen.iter().any(|(u, z)| *u == t.target && z.iter().zip(&y).all(|(p, q)| p >= q));
                if !covered {
                    seen.retain(|(u, z)| !(*u == t.target && z.iter().zip(&y).all(|(p, q)| p <= q)));
                    seen.push((t.target, y.clone()));
                    next.push((t.target, y));
                }
            }
        }
        frontier = next;
    }
    false
}

pub fn data_file(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn load(name: &str) -> EnergyAutomaton {
    energy_core::parse_automaton(&data_file(name)).unwrap().into_single().unwrap()
}

/// The closure of the three-state example, as `(row, column, function)` with
/// 1-based states; every other entry is `⊥̄`.
pub const FIG3: [(usize, usize, &str); 7] = [
    (1, 1, "x | x>=0"),
    (2, 1, "inf | x>1"),
    (3, 1, "inf | x>1"),
    (2, 2, "x | x>=0, inf | x>2"),
    (3, 2, "x-1 | x>1, inf | x>2"),
    (2, 3, "x+1 | x>=0, inf | x>1"),
    (3, 3, "x | x>=0, inf | x>1"),
];
