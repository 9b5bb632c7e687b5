//! Syntax of the ε-calculus: terms, formulas, parsing and printing, and the
//! binding-aware operations on them.

mod ast;
mod ops;
mod parse;
mod print;
mod types;

pub use ast::{Binder, Expr, Formula, Name, Term};
pub use ops::{
    alpha_eq, eps_subterms, is_free_for, map_formula_terms_deep, map_term_deep, replace_term,
    replace_term_in_term, substitute, substitute_in_term, substitute_many, substitute_many_in_term,
    visit_formula_terms, visit_term,
};
pub use parse::{parse_expr, parse_formula, parse_term, Parser, Signature};
pub(crate) use parse::is_constant_name;
pub use print::{fresh_var, ExprDisplay};
pub use types::{degree, epsilon_type, rank, subordinates, EpsilonType};

pub(crate) use ast::{formula_mentions_index, replace_loose_in_term, term_mentions_index};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("symbol `{symbol}` used with arity {found}, expected {expected}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("bound variable `{0}` does not occur free in the body")]
    VacuousBinder(String),
    #[error("variable `{0}` is bound again inside its own scope")]
    Rebound(String),
}
