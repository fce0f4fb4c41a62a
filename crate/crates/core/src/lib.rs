//! Energy functions, their star-continuous Kleene algebra, threshold
//! predicates, and reachability and Büchi acceptance for energy automata.

pub mod automaton;
pub mod function;
pub mod json;
pub mod matrix;
pub mod multidim;
pub mod ops;
pub mod oracle;
pub mod predicate;
pub mod syntax;
pub mod value;

pub use function::{Body, EnergyFunction, FunctionError, Piece};
pub use matrix::{FunctionMatrix, MatrixError, PredicateVector, UnitVector};
pub use predicate::{omega, ThresholdPredicate};
pub use value::{ExtValue, Rational};
pub use automaton::{Analysis, AutomatonError, BuchiAnswer, BuchiMethod, EnergyAutomaton, Transition};
pub use multidim::{coverable, pred_basis, CoverResult, MultiDimAutomaton, MultiDimError, MultiTransition};
pub use oracle::{iterate_buchi, iterate_reach, OracleResult, Verdict, Witness};
pub use syntax::{parse_automaton, parse_function, print_automaton, print_function, AutomatonFile, ParseError};
