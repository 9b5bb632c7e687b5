//! Finite-model semantics with extensional choice functions and
//! intensional choice operators.
//!
//! Domains are `0..k`. Quantification over all choice functions is decided
//! lazily: evaluation branches on each choice that is actually consulted,
//! so only the relevant part of the (large) function space is explored.

mod choice;
mod consequence;
mod eval;
mod model;

pub use choice::{
    candidates, choice_function_count, enumerate_choice_functions, enumerate_intensional_operators, exists_choice,
    for_all_choices, ChoiceKey, ChoiceWitness, Chooser, ExtChoiceFunction, IntChoiceOperator, PartialChoice,
};
pub use consequence::{
    check_consequence, check_consequence_in, classify_truth, CheckOptions, ConsequenceKind, Countermodel,
    TruthFlags, Verdict,
};
pub use eval::{evaluate_term, satisfies, Assignment, Choice, Program};
pub use model::{Structure, StructureSpace, SymbolTable, MAX_DOMAIN};

use thiserror::Error;

/// Which choice semantics ε-terms receive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One choice function for all ε-terms.
    Extensional,
    /// Choice functions indexed by ε-type and parameter values.
    Intensional,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("symbol `{0}` is not interpreted by the structure")]
    UnknownSymbol(String),
    #[error("symbol `{0}` used with the wrong arity")]
    Arity(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("{0}")]
    Syntax(String),
}
