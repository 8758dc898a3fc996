//! Given-clause resolution with hyper- and UR-resolution, plus an encoding of
//! negation-limited inverter synthesis as a refutation problem.

pub mod circuits;
pub mod clause;
pub mod index;
pub mod inference;
pub mod saturation;
pub mod term;
pub mod unify;

pub use clause::{
    make_clause, parse_clause, subsumes, Clause, ClauseId, ListRole, Literal, Origin, Rule,
};
pub use inference::{infer, InferenceRule, Resolvent, RuleConfig, UrPolarity, Usable};
pub use saturation::{
    saturate, LimitKind, Limits, Outcome, PickGiven, ProofDag, Prover, ProverConfig, Stats,
    TracePoint,
};
pub use term::{parse_term, Substitution, Symbol, SymbolTable, Term, TermError, Var};
