//! The ε-calculus: syntax with choice binders, finite-model semantics,
//! Hilbert-style proof checking, elimination of critical formulas, and
//! one-sided sequent calculi.

pub mod syntax;
pub mod translation;
pub mod semantics;
pub mod calculus;
pub mod elimination;
pub mod sequents;
