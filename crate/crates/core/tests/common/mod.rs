//! Shared generators for the integration tests.

#![allow(dead_code)]

pub mod random;

use epskit::semantics::{ExtChoiceFunction, Structure};
use epskit::syntax::{Formula, Signature, Term};
use proptest::prelude::*;
use rand::Rng;

/// Terms over the given free variables, `a`, unary `f`, and ε-terms.
pub fn arb_term(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        3 => proptest::sample::select(vars).prop_map(Term::var),
        1 => Just(Term::constant("a")),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    prop_oneof![
        4 => leaf,
        2 => arb_term(vars, depth - 1).prop_map(|t| Term::app("f", vec![t])),
        2 => (proptest::sample::select(BINDERS), arb_formula_over(with_binder(vars), depth - 1, false))
            .prop_map(move |(z, body)| bind_eps(z, body, vars)),
    ]
    .boxed()
}

const BINDERS: &[&str] = &["u", "w"];

fn bind_eps(z: &str, body: Formula, vars: &[&str]) -> Term {
    Term::eps(z, &body).unwrap_or_else(|_| Term::var(vars[0]))
}

fn with_binder(vars: &'static [&'static str]) -> &'static [&'static str] {
    let mut v: Vec<&'static str> = vars.to_vec();
    for b in BINDERS {
        if !v.contains(b) {
            v.push(b);
        }
    }
    Box::leak(v.into_boxed_slice())
}

/// Formulas over `P/1`, `Q/1`, `=`, with optional quantifiers.
pub fn arb_formula_over(vars: &'static [&'static str], depth: u32, quantifiers: bool) -> BoxedStrategy<Formula> {
    let inner_vars = with_binder(vars);
    let atom_vars = if depth == 0 { vars } else { inner_vars };
    let leaf = prop_oneof![
        3 => (proptest::sample::select(&["P", "Q"][..]), arb_term(atom_vars, depth.min(1)))
            .prop_map(|(p, t)| Formula::atom(p, vec![t])),
        1 => (arb_term(atom_vars, 0), arb_term(atom_vars, 0)).prop_map(|(a, b)| Formula::eq(a, b)),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = || arb_formula_over(vars, depth - 1, quantifiers);
    let mut options: Vec<(u32, BoxedStrategy<Formula>)> = vec![
        (3, leaf.boxed()),
        (1, sub().prop_map(Formula::not).boxed()),
        (1, (sub(), sub()).prop_map(|(a, b)| Formula::and(a, b)).boxed()),
        (1, (sub(), sub()).prop_map(|(a, b)| Formula::or(a, b)).boxed()),
        (1, (sub(), sub()).prop_map(|(a, b)| Formula::implies(a, b)).boxed()),
        (1, (sub(), sub()).prop_map(|(a, b)| Formula::iff(a, b)).boxed()),
    ];
    if quantifiers {
        let body = arb_formula_over(inner_vars, depth - 1, quantifiers);
        options.push((
            2,
            (proptest::sample::select(BINDERS), any::<bool>(), body)
                .prop_map(|(z, ex, body)| {
                    let q = if ex { Formula::exists(z, &body) } else { Formula::forall(z, &body) };
                    q.unwrap_or(body)
                })
                .boxed(),
        ));
    }
    proptest::strategy::Union::new_weighted(options).boxed()
}

pub fn arb_formula(depth: u32, quantifiers: bool) -> BoxedStrategy<Formula> {
    arb_formula_over(&["x", "y"], depth, quantifiers)
}

/// Signature containing every symbol the generators can produce.
pub fn full_signature() -> Signature {
    let mut sig = Signature::new();
    sig.declare_predicate("P", 1).unwrap();
    sig.declare_predicate("Q", 1).unwrap();
    sig.declare_function("f", 1).unwrap();
    sig.declare_function("a", 0).unwrap();
    sig
}

pub fn random_structure<R: Rng>(rng: &mut R, sig: &Signature, k: usize) -> Structure {
    let mut m = Structure::new(sig, k).unwrap();
    for table in m.functions.iter_mut() {
        for cell in table.iter_mut() {
            *cell = rng.gen_range(0..k);
        }
    }
    for table in m.predicates.iter_mut() {
        for cell in table.iter_mut() {
            *cell = rng.gen_bool(0.5);
        }
    }
    m
}

pub fn random_choice<R: Rng>(rng: &mut R, k: usize) -> ExtChoiceFunction {
    let table = (0..1u32 << k)
        .map(|x| {
            let c = epskit::semantics::candidates(x, k);
            c[rng.gen_range(0..c.len())]
        })
        .collect();
    ExtChoiceFunction::new(k, table).unwrap()
}
