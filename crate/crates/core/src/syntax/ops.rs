//! Substitution, replacement and the other binding-aware operations.
//!
//! Because bound variables are de Bruijn indices, a term without escaping
//! indices means the same thing at every position. Substituting such a term
//! for a free variable can therefore never capture anything, and a subterm
//! occurrence is structurally equal to a closed term `t` exactly when it is a
//! genuine subterm occurrence of some `t' ≡ t`.

use std::collections::BTreeSet;

use super::ast::{Binder, Expr, Formula, Name, Term};

/// `E ≡ E'`: identical up to renaming of bound variables.
pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    a == b
}

/// Rebuilds a term top-down. When `g` returns `Some`, that replacement is used
/// and the original subterm is not descended into.
pub fn map_term_deep(t: &Term, g: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
    if let Some(r) = g(t) {
        return r;
    }
    match t {
        Term::Var(_) | Term::Bound(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| map_term_deep(a, g)).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(map_formula_terms_deep(&b.body, g)),
        }),
    }
}

/// [`map_term_deep`] over every term position of a formula, including
/// positions inside quantifier and ε bodies.
pub fn map_formula_terms_deep(f: &Formula, g: &mut dyn FnMut(&Term) -> Option<Term>) -> Formula {
    let rec = |h: &Formula, g: &mut dyn FnMut(&Term) -> Option<Term>| Box::new(map_formula_terms_deep(h, g));
    match f {
        Formula::Top => Formula::Top,
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| map_term_deep(a, g)).collect()),
        Formula::Eq(a, b) => Formula::Eq(map_term_deep(a, g), map_term_deep(b, g)),
        Formula::Not(a) => Formula::Not(rec(a, g)),
        Formula::And(a, b) => {
            let a = rec(a, g);
            Formula::And(a, rec(b, g))
        }
        Formula::Or(a, b) => {
            let a = rec(a, g);
            Formula::Or(a, rec(b, g))
        }
        Formula::Implies(a, b) => {
            let a = rec(a, g);
            Formula::Implies(a, rec(b, g))
        }
        Formula::Iff(a, b) => {
            let a = rec(a, g);
            Formula::Iff(a, rec(b, g))
        }
        Formula::Exists(b) => Formula::Exists(Binder {
            hint: b.hint.clone(),
            body: rec(&b.body, g),
        }),
        Formula::Forall(b) => Formula::Forall(Binder {
            hint: b.hint.clone(),
            body: rec(&b.body, g),
        }),
    }
}

/// Pre-order visit of every term occurrence in a term (itself included).
pub fn visit_term(t: &Term, v: &mut dyn FnMut(&Term)) {
    v(t);
    match t {
        Term::Var(_) | Term::Bound(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| visit_term(a, v)),
        Term::Eps(b) => visit_formula_terms(&b.body, v),
    }
}

/// Pre-order visit of every term occurrence in a formula.
pub fn visit_formula_terms(f: &Formula, v: &mut dyn FnMut(&Term)) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::Atom(_, args) => args.iter().for_each(|a| visit_term(a, v)),
        Formula::Eq(a, b) => {
            visit_term(a, v);
            visit_term(b, v);
        }
        Formula::Not(a) => visit_formula_terms(a, v),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            visit_formula_terms(a, v);
            visit_formula_terms(b, v);
        }
        Formula::Exists(b) | Formula::Forall(b) => visit_formula_terms(&b.body, v),
    }
}

/// Distinct (up to ≡) ε-terms that occur as genuine subterms of `f`, in
/// order of first occurrence.
pub fn eps_subterms(f: &Formula) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    visit_formula_terms(f, &mut |t| {
        if t.is_eps() && t.is_closed_wrt_binders() && seen.insert(t.clone()) {
            out.push(t.clone());
        }
    });
    out
}

/// `E[x/t]`: every free occurrence of `x` replaced by `t`.
pub fn substitute(f: &Formula, x: &str, t: &Term) -> Formula {
    debug_assert!(t.is_closed_wrt_binders());
    map_formula_terms_deep(f, &mut |s| match s {
        Term::Var(y) if &**y == x => Some(t.clone()),
        _ => None,
    })
}

pub fn substitute_in_term(s: &Term, x: &str, t: &Term) -> Term {
    map_term_deep(s, &mut |u| match u {
        Term::Var(y) if &**y == x => Some(t.clone()),
        _ => None,
    })
}

/// Simultaneous substitution of several variables.
pub fn substitute_many(f: &Formula, pairs: &[(Name, Term)]) -> Formula {
    map_formula_terms_deep(f, &mut |s| match s {
        Term::Var(y) => pairs.iter().find(|(x, _)| x == y).map(|(_, t)| t.clone()),
        _ => None,
    })
}

pub fn substitute_many_in_term(s: &Term, pairs: &[(Name, Term)]) -> Term {
    map_term_deep(s, &mut |u| match u {
        Term::Var(y) => pairs.iter().find(|(x, _)| x == y).map(|(_, t)| t.clone()),
        _ => None,
    })
}

/// `E[t/u]`: every genuine subterm occurrence of a term `≡ t` replaced by
/// `u`. Occurrences in which a variable of the occurrence is bound outside
/// it do not match, since they carry escaping indices.
pub fn replace_term(f: &Formula, t: &Term, u: &Term) -> Formula {
    map_formula_terms_deep(f, &mut |s| (s == t).then(|| u.clone()))
}

pub fn replace_term_in_term(s: &Term, t: &Term, u: &Term) -> Term {
    map_term_deep(s, &mut |v| (v == t).then(|| u.clone()))
}

/// Whether `t` is free for `x` in `e`, judged by the written names of the
/// binders: no free occurrence of `x` lies in the scope of a binder whose
/// variable is free in `t`.
pub fn is_free_for(t: &Term, x: &str, e: &Expr) -> bool {
    let fv = t.free_vars();
    let mut scope: Vec<Name> = Vec::new();
    match e {
        Expr::Term(s) => free_for_term(s, x, &fv, &mut scope),
        Expr::Formula(f) => free_for_formula(f, x, &fv, &mut scope),
    }
}

fn free_for_term(s: &Term, x: &str, fv: &BTreeSet<Name>, scope: &mut Vec<Name>) -> bool {
    match s {
        Term::Var(y) => &**y != x || !scope.iter().any(|b| fv.contains(b)),
        Term::Bound(_) => true,
        Term::App(_, args) => args.iter().all(|a| free_for_term(a, x, fv, scope)),
        Term::Eps(b) => free_for_binder(b, x, fv, scope),
    }
}

fn free_for_binder(b: &Binder, x: &str, fv: &BTreeSet<Name>, scope: &mut Vec<Name>) -> bool {
    scope.push(b.hint.clone());
    let ok = free_for_formula(&b.body, x, fv, scope);
    scope.pop();
    ok
}

fn free_for_formula(f: &Formula, x: &str, fv: &BTreeSet<Name>, scope: &mut Vec<Name>) -> bool {
    match f {
        Formula::Top | Formula::Bottom => true,
        Formula::Atom(_, args) => args.iter().all(|a| free_for_term(a, x, fv, scope)),
        Formula::Eq(a, b) => free_for_term(a, x, fv, scope) && free_for_term(b, x, fv, scope),
        Formula::Not(a) => free_for_formula(a, x, fv, scope),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            free_for_formula(a, x, fv, scope) && free_for_formula(b, x, fv, scope)
        }
        Formula::Exists(b) | Formula::Forall(b) => free_for_binder(b, x, fv, scope),
    }
}
