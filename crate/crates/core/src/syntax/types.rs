//! ε-types, degree, rank and subordination.

use std::collections::BTreeSet;

use super::ast::{Binder, Formula, Name, Term};
use super::term_mentions_index;

/// Canonical skeleton of an ε-term: every maximal subterm of the body that
/// does not depend on any variable bound inside the term is replaced by a
/// parameter `x1, ..., xn`, numbered left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsilonType {
    pub skeleton: Term,
    pub arity: usize,
}

impl EpsilonType {
    pub fn param_name(i: usize) -> Name {
        Name::from(format!("x{}", i + 1).as_str())
    }

    /// `p[x1/t1]...[xn/tn]`.
    pub fn instantiate(&self, params: &[Term]) -> Term {
        assert_eq!(params.len(), self.arity, "parameter count mismatch");
        let pairs: Vec<(Name, Term)> = params
            .iter()
            .enumerate()
            .map(|(i, t)| (Self::param_name(i), t.clone()))
            .collect();
        super::substitute_many_in_term(&self.skeleton, &pairs)
    }
}

/// The type of an ε-term together with the instance terms `t1..tn`.
///
/// Panics if `e` is not an ε-term.
pub fn epsilon_type(e: &Term) -> (EpsilonType, Vec<Term>) {
    let b = e.as_eps().expect("epsilon_type needs an ε-term");
    let mut params = Vec::new();
    let body = abstract_formula(&b.body, &mut params);
    let skeleton = Term::Eps(Binder {
        hint: b.hint.clone(),
        body: Box::new(body),
    });
    (
        EpsilonType {
            skeleton,
            arity: params.len(),
        },
        params,
    )
}

fn abstract_term(t: &Term, params: &mut Vec<Term>) -> Term {
    if t.is_closed_wrt_binders() {
        let x = EpsilonType::param_name(params.len());
        params.push(t.clone());
        return Term::Var(x);
    }
    match t {
        Term::Var(_) | Term::Bound(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| abstract_term(a, params)).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(abstract_formula(&b.body, params)),
        }),
    }
}

fn abstract_formula(f: &Formula, params: &mut Vec<Term>) -> Formula {
    let mut rec = |g: &Formula| Box::new(abstract_formula(g, params));
    match f {
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| abstract_term(a, params)).collect()),
        Formula::Eq(a, b) => {
            let a = abstract_term(a, params);
            Formula::Eq(a, abstract_term(b, params))
        }
        Formula::Not(a) => Formula::Not(rec(a)),
        Formula::And(a, b) => {
            let a = rec(a);
            Formula::And(a, rec(b))
        }
        Formula::Or(a, b) => {
            let a = rec(a);
            Formula::Or(a, rec(b))
        }
        Formula::Implies(a, b) => {
            let a = rec(a);
            Formula::Implies(a, rec(b))
        }
        Formula::Iff(a, b) => {
            let a = rec(a);
            Formula::Iff(a, rec(b))
        }
        Formula::Exists(b) => Formula::Exists(Binder {
            hint: b.hint.clone(),
            body: rec(&b.body),
        }),
        Formula::Forall(b) => Formula::Forall(Binder {
            hint: b.hint.clone(),
            body: rec(&b.body),
        }),
    }
}

/// ε-nesting depth: 0 for non-ε terms, otherwise one more than the largest
/// degree of an ε-term occurring in the body.
pub fn degree(t: &Term) -> usize {
    match t {
        Term::Eps(b) => 1 + max_eps_degree(&b.body),
        _ => 0,
    }
}

fn max_eps_degree(f: &Formula) -> usize {
    let mut best = 0;
    for_each_eps_at_depth(f, 0, &mut |s, _| best = best.max(degree(s)), false);
    best
}

/// Rank of an ε-term: 1 plus the largest rank of a subordinate ε-term.
/// Non-ε terms have rank 0.
pub fn rank(t: &Term) -> usize {
    match t {
        Term::Eps(b) => binder_rank(b),
        _ => 0,
    }
}

fn binder_rank(b: &Binder) -> usize {
    let mut best = 0;
    for_each_eps_at_depth(
        &b.body,
        0,
        &mut |s, d| {
            if term_mentions_index(s, d) {
                best = best.max(rank(s));
            }
        },
        true,
    );
    1 + best
}

/// ε-terms occurring in `e` that contain the variable bound by `e` free,
/// distinct up to ≡, in order of first occurrence. Variables bound by `e`
/// or by binders between `e` and the occurrence are shown free under their
/// binder names.
pub fn subordinates(e: &Term) -> Vec<Term> {
    let Some(b) = e.as_eps() else {
        return Vec::new();
    };
    let mut out: Vec<Term> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut names = vec![b.hint.clone()];
    collect_subordinates(&b.body, &mut names, &mut out, &mut seen);
    out
}

fn collect_subordinates(f: &Formula, names: &mut Vec<Name>, out: &mut Vec<Term>, seen: &mut BTreeSet<Term>) {
    visit_formula_shallow(f, &mut |item| match item {
        Shallow::Term(t) => collect_subordinates_term(t, names, out, seen),
        Shallow::Binder(b) => {
            names.push(b.hint.clone());
            collect_subordinates(&b.body, names, out, seen);
            names.pop();
        }
    });
}

fn collect_subordinates_term(t: &Term, names: &mut Vec<Name>, out: &mut Vec<Term>, seen: &mut BTreeSet<Term>) {
    match t {
        Term::Var(_) | Term::Bound(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_subordinates_term(a, names, out, seen)),
        Term::Eps(b) => {
            let depth = names.len() - 1;
            if term_mentions_index(t, depth) {
                let opened = open_loose(t, names);
                if seen.insert(opened.clone()) {
                    out.push(opened);
                }
            }
            names.push(b.hint.clone());
            collect_subordinates(&b.body, names, out, seen);
            names.pop();
        }
    }
}

/// Replaces escaping indices by free variables named after the enclosing
/// binders (`names` is outermost first).
fn open_loose(t: &Term, names: &[Name]) -> Term {
    fn go_t(t: &Term, names: &[Name], k: usize) -> Term {
        match t {
            Term::Bound(i) if *i >= k => Term::Var(names[names.len() - 1 - (i - k)].clone()),
            Term::Var(_) | Term::Bound(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| go_t(a, names, k)).collect()),
            Term::Eps(b) => Term::Eps(Binder {
                hint: b.hint.clone(),
                body: Box::new(go_f(&b.body, names, k + 1)),
            }),
        }
    }
    fn go_f(f: &Formula, names: &[Name], k: usize) -> Formula {
        super::ast::map_formula_terms(f, k, &mut |t, d| go_t(t, names, d))
    }
    go_t(t, names, 0)
}

enum Shallow<'a> {
    Term(&'a Term),
    Binder(&'a Binder),
}

/// Visits the top-level term arguments and quantifier binders of `f`.
fn visit_formula_shallow<'a>(f: &'a Formula, v: &mut dyn FnMut(Shallow<'a>)) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::Atom(_, args) => args.iter().for_each(|a| v(Shallow::Term(a))),
        Formula::Eq(a, b) => {
            v(Shallow::Term(a));
            v(Shallow::Term(b));
        }
        Formula::Not(a) => visit_formula_shallow(a, v),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            visit_formula_shallow(a, v);
            visit_formula_shallow(b, v);
        }
        Formula::Exists(b) | Formula::Forall(b) => v(Shallow::Binder(b)),
    }
}

/// Calls `v(eps_term, depth)` for ε-terms in `f`, where `depth` counts the
/// binders between the root of `f` and the occurrence. With `deep`, also
/// visits ε-terms nested inside other ε-terms.
fn for_each_eps_at_depth(f: &Formula, depth: usize, v: &mut dyn FnMut(&Term, usize), deep: bool) {
    visit_formula_shallow(f, &mut |item| match item {
        Shallow::Term(t) => eps_in_term(t, depth, v, deep),
        Shallow::Binder(b) => for_each_eps_at_depth(&b.body, depth + 1, v, deep),
    });
}

fn eps_in_term(t: &Term, depth: usize, v: &mut dyn FnMut(&Term, usize), deep: bool) {
    match t {
        Term::Var(_) | Term::Bound(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| eps_in_term(a, depth, v, deep)),
        Term::Eps(b) => {
            v(t, depth);
            if deep {
                for_each_eps_at_depth(&b.body, depth + 1, v, deep);
            }
        }
    }
}
