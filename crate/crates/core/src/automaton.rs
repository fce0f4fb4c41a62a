//! Energy automata and the symbolic decision procedures for reachability and
//! Büchi acceptance.

use std::sync::OnceLock;

use num_traits::Signed;

use crate::function::EnergyFunction;
use crate::matrix::{contract, FunctionMatrix, UnitVector};
use crate::predicate::{omega, ThresholdPredicate};
use crate::value::{ExtValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub label: EnergyFunction,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyAutomaton {
    pub names: Vec<String>,
    pub transitions: Vec<Transition>,
    pub initial: usize,
    pub accepting: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {index} out of range for {n} states")]
    StateIndex { index: usize, n: usize },
    #[error("initial energy {0} is negative")]
    NegativeEnergy(Rational),
}

impl EnergyAutomaton {
    /// States named `1..=n`.
    pub fn with_states(n: usize) -> Self {
        EnergyAutomaton {
            names: (1..=n).map(|i| i.to_string()).collect(),
            transitions: Vec::new(),
            initial: 0,
            accepting: Vec::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_transition(&mut self, source: usize, label: EnergyFunction, target: usize) {
        self.transitions.push(Transition { source, label, target });
    }

    pub fn state_index(&self, name: &str) -> Result<usize, AutomatonError> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
    }

    pub fn validate(&self) -> Result<(), AutomatonError> {
        let n = self.state_count();
        let ids = self
            .transitions
            .iter()
            .flat_map(|t| [t.source, t.target])
            .chain(self.accepting.iter().copied())
            .chain(std::iter::once(self.initial).filter(|_| n > 0));
        for index in ids {
            if index >= n {
                return Err(AutomatonError::StateIndex { index, n });
            }
        }
        Ok(())
    }

    /// One transition per ordered pair: parallel labels are joined and missing
    /// ones are `⊥̄`. Entry `(i, j)` is the label of `j → i`.
    pub fn matrix(&self) -> FunctionMatrix {
        let n = self.state_count();
        let mut t = FunctionMatrix::bottom(n, n);
        for tr in &self.transitions {
            let f = t.get(tr.target, tr.source).join(&tr.label);
            t.set(tr.target, tr.source, f);
        }
        t
    }

    /// The normalized matrix with `accepting` moved to the leading indices, and
    /// the permutation `perm[new] = old`.
    pub fn normalize(&self, accepting: &[usize]) -> (FunctionMatrix, Vec<usize>) {
        let n = self.state_count();
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut is_acc = vec![false; n];
        for &j in accepting {
            if !is_acc[j] {
                is_acc[j] = true;
                perm.push(j);
            }
        }
        perm.extend((0..n).filter(|&i| !is_acc[i]));
        let t = self.matrix();
        let permuted = FunctionMatrix::from_fn(n, n, |i, j| t.get(perm[i], perm[j]).clone());
        (permuted, perm)
    }
}

/// Which Büchi procedure to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuchiMethod {
    /// Loops through an accepting state reachable with enough energy.
    Cycle,
    /// The `ω_k` vector with the accepting states as the leading block.
    Omega,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAnswer {
    pub accepted: bool,
    /// An accepting state that is visited infinitely often, when found by the cycle method.
    pub witness: Option<usize>,
}

/// The static part of the analysis of an automaton with a fixed accepting set.
/// Matrices are built on first use and then shared by all queries.
pub struct Analysis {
    n: usize,
    accepting: Vec<usize>,
    t: FunctionMatrix,
    t_star: OnceLock<FunctionMatrix>,
    loops: OnceLock<Vec<(usize, EnergyFunction, ThresholdPredicate)>>,
    omega_k: OnceLock<Vec<ThresholdPredicate>>,
}

impl Analysis {
    pub fn new(automaton: &EnergyAutomaton, accepting: &[usize]) -> Result<Self, AutomatonError> {
        automaton.validate()?;
        let n = automaton.state_count();
        let mut acc: Vec<usize> = accepting.to_vec();
        if let Some(&index) = acc.iter().find(|&&j| j >= n) {
            return Err(AutomatonError::StateIndex { index, n });
        }
        acc.sort_unstable();
        acc.dedup();
        Ok(Analysis {
            n,
            accepting: acc,
            t: automaton.matrix(),
            t_star: OnceLock::new(),
            loops: OnceLock::new(),
            omega_k: OnceLock::new(),
        })
    }

    /// Uses the automaton's own accepting set.
    pub fn of(automaton: &EnergyAutomaton) -> Result<Self, AutomatonError> {
        Analysis::new(automaton, &automaton.accepting)
    }

    pub fn transition_matrix(&self) -> &FunctionMatrix {
        &self.t
    }

    pub fn closure(&self) -> &FunctionMatrix {
        self.t_star.get_or_init(|| self.t.star())
    }

    /// For each accepting `j`: the join of all cycles through `j`,
    /// `⋁_l T[j][l] ∘ T*[l][j]`, and its omega.
    pub fn accepting_loops(&self) -> &[(usize, EnergyFunction, ThresholdPredicate)] {
        self.loops.get_or_init(|| {
            let s = self.closure();
            self.accepting
                .iter()
                .map(|&j| {
                    let lp = (0..self.n).fold(EnergyFunction::bottom(), |acc, l| {
                        let out = self.t.get(j, l);
                        if out.is_bottom() {
                            acc
                        } else {
                            acc.join(&out.compose(s.get(l, j)))
                        }
                    });
                    let w = omega(&lp);
                    (j, lp, w)
                })
                .collect()
        })
    }

    /// `T^{ω_k}` in the original state order.
    pub fn omega_vector(&self) -> &[ThresholdPredicate] {
        self.omega_k.get_or_init(|| {
            let n = self.n;
            let mut perm: Vec<usize> = self.accepting.clone();
            perm.extend((0..n).filter(|i| self.accepting.binary_search(i).is_err()));
            let permuted = FunctionMatrix::from_fn(n, n, |i, j| self.t.get(perm[i], perm[j]).clone());
            let w = permuted.omega_k(self.accepting.len()).expect("k ≤ n");
            let mut out = vec![ThresholdPredicate::Never; n];
            for (new, &old) in perm.iter().enumerate() {
                out[old] = w.get(new).clone();
            }
            out
        })
    }

    fn check_query(&self, s0: usize, x0: &Rational) -> Result<(), AutomatonError> {
        if s0 >= self.n {
            return Err(AutomatonError::StateIndex { index: s0, n: self.n });
        }
        if x0.is_negative() {
            return Err(AutomatonError::NegativeEnergy(x0.clone()));
        }
        Ok(())
    }

    /// `Fᵀ T* I^{s₀}`: the best energy with which an accepting state is reachable from `s₀`.
    pub fn reach_function(&self, s0: usize) -> EnergyFunction {
        let column: Vec<EnergyFunction> = (0..self.n).map(|i| self.closure().get(i, s0).clone()).collect();
        let mut mask = vec![false; self.n];
        for &j in &self.accepting {
            mask[j] = true;
        }
        contract(&UnitVector::from_mask(mask), &column).expect("mask has length n")
    }

    pub fn reach(&self, s0: usize, x0: &Rational) -> Result<bool, AutomatonError> {
        self.check_query(s0, x0)?;
        Ok(!self.reach_function(s0).eval(&ExtValue::Fin(x0.clone())).is_bot())
    }

    /// Büchi acceptance through a cycle at an accepting `j`: the energy `x`
    /// reachable at `j` must let the cycles through `j` be iterated forever,
    /// i.e. satisfy the omega of the loop function. An infinite `x` stands for
    /// arbitrarily large finite energies.
    pub fn buchi_cycle(&self, s0: usize, x0: &Rational) -> Result<BuchiAnswer, AutomatonError> {
        self.check_query(s0, x0)?;
        let start = ExtValue::Fin(x0.clone());
        for (j, _, w) in self.accepting_loops() {
            let x = self.closure().get(*j, s0).eval(&start);
            if w.eval(&x) {
                return Ok(BuchiAnswer { accepted: true, witness: Some(*j) });
            }
        }
        Ok(BuchiAnswer { accepted: false, witness: None })
    }

    /// The initial energies at `s0` accepted by the cycle method, as one
    /// predicate: `⋁_j ω(loop_j) T*[j][s0]`.
    pub fn buchi_region(&self, s0: usize) -> ThresholdPredicate {
        self.accepting_loops()
            .iter()
            .fold(ThresholdPredicate::Never, |acc, (j, _, w)| acc.join(&w.act(self.closure().get(*j, s0))))
    }

    pub fn buchi_omega(&self, s0: usize, x0: &Rational) -> Result<bool, AutomatonError> {
        self.check_query(s0, x0)?;
        Ok(self.omega_vector()[s0].eval(&ExtValue::Fin(x0.clone())))
    }

    pub fn buchi(&self, method: BuchiMethod, s0: usize, x0: &Rational) -> Result<BuchiAnswer, AutomatonError> {
        match method {
            BuchiMethod::Cycle => self.buchi_cycle(s0, x0),
            BuchiMethod::Omega => {
                Ok(BuchiAnswer { accepted: self.buchi_omega(s0, x0)?, witness: None })
            }
        }
    }
}

/// One-shot reachability from the automaton's initial state to its accepting set.
pub fn reach(automaton: &EnergyAutomaton, x0: &Rational) -> Result<bool, AutomatonError> {
    Analysis::of(automaton)?.reach(automaton.initial, x0)
}

/// One-shot Büchi acceptance from the automaton's initial state.
pub fn buchi(automaton: &EnergyAutomaton, method: BuchiMethod, x0: &Rational) -> Result<BuchiAnswer, AutomatonError> {
    Analysis::of(automaton)?.buchi(method, automaton.initial, x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{Body, Piece};
    use crate::value::{rat, ratio};

    fn aff(a: i64, b: i64, lower: i64, incl: bool) -> EnergyFunction {
        EnergyFunction::affine(rat(a), rat(b), rat(lower), incl).unwrap()
    }

    fn fig2() -> EnergyAutomaton {
        let mut a = EnergyAutomaton::with_states(3);
        a.add_transition(0, aff(1, 2, 2, true), 1);
        a.add_transition(0, aff(1, 3, 1, false), 1);
        a.add_transition(1, aff(2, -2, 1, true), 1);
        a.add_transition(1, aff(1, -1, 1, false), 2);
        a.add_transition(2, aff(1, 1, 0, true), 1);
        a
    }

    fn car(with_refuel_loop: bool) -> EnergyAutomaton {
        let mut a = EnergyAutomaton { names: vec!["W".into(), "R".into()], ..EnergyAutomaton::with_states(0) };
        let rw = EnergyFunction::from_pieces(
            &[
                Piece { lower: rat(0), lower_included: true, body: Body::affine(rat(2), rat(12)) },
                Piece { lower: rat(2), lower_included: true, body: Body::affine(rat(1), rat(14)) },
            ],
            &[],
        )
        .unwrap();
        a.add_transition(0, aff(1, -12, 12, true), 1);
        a.add_transition(1, rw, 0);
        if with_refuel_loop {
            a.add_transition(1, EnergyFunction::top(), 1);
        }
        a.accepting = vec![0];
        a
    }

    #[test]
    fn normalization_merges_parallel_edges() {
        let t = fig2().matrix();
        assert_eq!(t.get(1, 0), &aff(1, 3, 1, false));
        assert!(EnergyAutomaton::with_states(2).matrix() == FunctionMatrix::bottom(2, 2));
        let (p, perm) = fig2().normalize(&[2]);
        assert_eq!(perm, vec![2, 0, 1]);
        assert_eq!(p.get(0, 2), t.get(2, 1));
    }

    #[test]
    fn fig2_reachability() {
        let an = Analysis::new(&fig2(), &[2]).unwrap();
        assert!(an.reach(0, &rat(2)).unwrap());
        assert!(!an.reach(0, &rat(1)).unwrap());
        let own = Analysis::new(&fig2(), &[0]).unwrap();
        assert!(own.reach(0, &rat(0)).unwrap());
        assert!(matches!(an.reach(5, &rat(0)), Err(AutomatonError::StateIndex { .. })));
        assert!(matches!(an.reach(0, &rat(-1)), Err(AutomatonError::NegativeEnergy(_))));
    }

    #[test]
    fn fig2_buchi() {
        let an = Analysis::new(&fig2(), &[1]).unwrap();
        let yes = an.buchi_cycle(0, &rat(2)).unwrap();
        assert_eq!(yes, BuchiAnswer { accepted: true, witness: Some(1) });
        assert!(an.buchi_omega(0, &rat(2)).unwrap());
        assert!(!an.buchi_cycle(0, &rat(1)).unwrap().accepted);
        assert!(!an.buchi_omega(0, &rat(1)).unwrap());
    }

    #[test]
    fn car_threshold() {
        for with_loop in [false, true] {
            let a = car(with_loop);
            let an = Analysis::of(&a).unwrap();
            for (x, expect) in [
                (rat(12), true),
                (rat(12) + ratio(1, 100), true),
                (rat(100), true),
                (rat(0), false),
                (rat(11), false),
                (ratio(119, 10), false),
            ] {
                assert_eq!(an.buchi_cycle(0, &x).unwrap().accepted, expect, "cycle at {x}");
                assert_eq!(an.buchi_omega(0, &x).unwrap(), expect, "omega at {x}");
            }
        }
    }

    #[test]
    fn empty_accepting_set_rejects() {
        let an = Analysis::new(&fig2(), &[]).unwrap();
        assert!(!an.buchi_cycle(0, &rat(50)).unwrap().accepted);
        assert!(!an.buchi_omega(0, &rat(50)).unwrap());
        assert!(!an.reach(0, &rat(50)).unwrap());
    }

    #[test]
    fn gaining_prefix_does_not_rescue_a_losing_cycle() {
        // unbounded energy is reachable at the accepting state, but its only cycle loses energy
        let mut a = EnergyAutomaton::with_states(2);
        a.add_transition(0, EnergyFunction::integer_update(1), 0);
        a.add_transition(0, EnergyFunction::identity(), 1);
        a.add_transition(1, EnergyFunction::integer_update(-1), 1);
        let an = Analysis::new(&a, &[1]).unwrap();
        assert!(!an.buchi_cycle(0, &rat(3)).unwrap().accepted);
        assert!(!an.buchi_omega(0, &rat(3)).unwrap());
        assert!(an.reach(0, &rat(0)).unwrap());
    }
}
