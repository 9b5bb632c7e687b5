//! Terms and formulas with ε-binders.
//!
//! Bound variables are stored as de Bruijn indices (`Term::Bound(0)` refers
//! to the innermost enclosing binder). Every binder keeps the name it was
//! written with as a *hint* that is used only for printing. Equality,
//! hashing and ordering ignore hints, so `==` on these types is equality up
//! to renaming of bound variables.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::SyntaxError;

/// Interned-ish symbol name. Cheap to clone and safe to share across threads.
pub type Name = Arc<str>;

/// A variable binder: `eps x (A)`, `ex x (A)` or `all x (A)`.
#[derive(Clone, Debug)]
pub struct Binder {
    /// Surface name of the bound variable, kept for printing only.
    pub hint: Name,
    /// Body with the bound variable as `Bound(0)` (at binder depth zero).
    pub body: Box<Formula>,
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.body.hash(state);
    }
}

impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Binder {
    fn cmp(&self, other: &Self) -> Ordering {
        self.body.cmp(&other.body)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Free variable.
    Var(Name),
    /// Bound variable as a de Bruijn index.
    Bound(usize),
    /// Function application; constants are nullary applications.
    App(Name, Vec<Term>),
    /// `eps x (A)`.
    Eps(Binder),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Name, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Binder),
    Forall(Binder),
}

/// Either kind of expression, for operations defined on both.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Term(Term),
    Formula(Formula),
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<Formula> for Expr {
    fn from(f: Formula) -> Self {
        Expr::Formula(f)
    }
}

impl Binder {
    /// Builds a binder for `x` over `body`, where `x` occurs free in `body`.
    pub fn bind(x: &str, body: &Formula) -> Result<Binder, SyntaxError> {
        if !body.free_vars().contains(x) {
            return Err(SyntaxError::VacuousBinder(x.to_string()));
        }
        Ok(Binder::bind_unchecked(x, body))
    }

    /// Like [`Binder::bind`] but without the vacuity check.
    pub fn bind_unchecked(x: &str, body: &Formula) -> Binder {
        Binder {
            hint: Name::from(x),
            body: Box::new(close_formula(body, x, 0)),
        }
    }

    /// The body with the bound variable replaced by `t`.
    pub fn instantiate(&self, t: &Term) -> Formula {
        open_formula(&self.body, t, 0)
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::from(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Name::from(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Name::from(name), args)
    }

    /// `eps x (body)`; fails if `x` is not free in `body`.
    pub fn eps(x: &str, body: &Formula) -> Result<Term, SyntaxError> {
        Ok(Term::Eps(Binder::bind(x, body)?))
    }

    pub fn is_eps(&self) -> bool {
        matches!(self, Term::Eps(_))
    }

    pub fn as_eps(&self) -> Option<&Binder> {
        match self {
            Term::Eps(b) => Some(b),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_term_vars(self, &mut out);
        out
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_closed_wrt_binders(&self) -> bool {
        term_loose_from(self, 0).is_none()
    }

    pub fn contains_eps(&self) -> bool {
        match self {
            Term::Var(_) | Term::Bound(_) => false,
            Term::App(_, args) => args.iter().any(Term::contains_eps),
            Term::Eps(_) => true,
        }
    }

    /// Number of ε-binders anywhere in the term.
    pub fn eps_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) => 0,
            Term::App(_, args) => args.iter().map(Term::eps_count).sum(),
            Term::Eps(b) => 1 + b.body.eps_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Eps(b) => 1 + b.body.size(),
        }
    }
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Name::from(pred), args)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, body: &Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::Exists(Binder::bind(x, body)?))
    }

    pub fn forall(x: &str, body: &Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::Forall(Binder::bind(x, body)?))
    }

    /// Right-nested disjunction; `false` for an empty list.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Bottom;
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Right-nested conjunction; `true` for an empty list.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Top;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// `a1 -> (a2 -> ... -> c)`.
    pub fn implies_chain<I: IntoIterator<Item = Formula>>(antecedents: I, consequent: Formula) -> Formula {
        let items: Vec<Formula> = antecedents.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(consequent, |acc, a| Formula::implies(a, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_formula_vars(self, &mut out);
        out
    }

    pub fn is_closed_wrt_binders(&self) -> bool {
        formula_loose_from(self, 0).is_none()
    }

    pub fn contains_eps(&self) -> bool {
        self.eps_count() > 0
    }

    pub fn contains_quantifier(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom => false,
            Formula::Atom(_, args) => args.iter().any(term_contains_quantifier),
            Formula::Eq(a, b) => term_contains_quantifier(a) || term_contains_quantifier(b),
            Formula::Not(a) => a.contains_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.contains_quantifier() || b.contains_quantifier()
            }
            Formula::Exists(_) | Formula::Forall(_) => true,
        }
    }

    pub fn eps_count(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom => 0,
            Formula::Atom(_, args) => args.iter().map(Term::eps_count).sum(),
            Formula::Eq(a, b) => a.eps_count() + b.eps_count(),
            Formula::Not(a) => a.eps_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.eps_count() + b.eps_count()
            }
            Formula::Exists(b) | Formula::Forall(b) => b.body.eps_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom => 1,
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Exists(b) | Formula::Forall(b) => 1 + b.body.size(),
        }
    }
}

impl Expr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            Expr::Term(t) => t.free_vars(),
            Expr::Formula(f) => f.free_vars(),
        }
    }
}

fn term_contains_quantifier(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Bound(_) => false,
        Term::App(_, args) => args.iter().any(term_contains_quantifier),
        Term::Eps(b) => b.body.contains_quantifier(),
    }
}

fn collect_term_vars(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Bound(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_term_vars(a, out)),
        Term::Eps(b) => collect_formula_vars(&b.body, out),
    }
}

fn collect_formula_vars(f: &Formula, out: &mut BTreeSet<Name>) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::Atom(_, args) => args.iter().for_each(|a| collect_term_vars(a, out)),
        Formula::Eq(a, b) => {
            collect_term_vars(a, out);
            collect_term_vars(b, out);
        }
        Formula::Not(a) => collect_formula_vars(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect_formula_vars(a, out);
            collect_formula_vars(b, out);
        }
        Formula::Exists(b) | Formula::Forall(b) => collect_formula_vars(&b.body, out),
    }
}

/// Largest escaping index (relative to the term's own position) if any
/// index refers past `depth` enclosing binders.
pub(crate) fn term_loose_from(t: &Term, depth: usize) -> Option<usize> {
    match t {
        Term::Var(_) => None,
        Term::Bound(i) => (*i >= depth).then(|| i - depth),
        Term::App(_, args) => args.iter().filter_map(|a| term_loose_from(a, depth)).max(),
        Term::Eps(b) => formula_loose_from(&b.body, depth + 1),
    }
}

pub(crate) fn formula_loose_from(f: &Formula, depth: usize) -> Option<usize> {
    match f {
        Formula::Top | Formula::Bottom => None,
        Formula::Atom(_, args) => args.iter().filter_map(|a| term_loose_from(a, depth)).max(),
        Formula::Eq(a, b) => term_loose_from(a, depth).max(term_loose_from(b, depth)),
        Formula::Not(a) => formula_loose_from(a, depth),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_loose_from(a, depth).max(formula_loose_from(b, depth))
        }
        Formula::Exists(b) | Formula::Forall(b) => formula_loose_from(&b.body, depth + 1),
    }
}

/// Does the term mention the binder that sits `index` levels above it?
pub(crate) fn term_mentions_index(t: &Term, index: usize) -> bool {
    match t {
        Term::Var(_) => false,
        Term::Bound(i) => *i == index,
        Term::App(_, args) => args.iter().any(|a| term_mentions_index(a, index)),
        Term::Eps(b) => formula_mentions_index(&b.body, index + 1),
    }
}

pub(crate) fn formula_mentions_index(f: &Formula, index: usize) -> bool {
    match f {
        Formula::Top | Formula::Bottom => false,
        Formula::Atom(_, args) => args.iter().any(|a| term_mentions_index(a, index)),
        Formula::Eq(a, b) => term_mentions_index(a, index) || term_mentions_index(b, index),
        Formula::Not(a) => formula_mentions_index(a, index),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            formula_mentions_index(a, index) || formula_mentions_index(b, index)
        }
        Formula::Exists(b) | Formula::Forall(b) => formula_mentions_index(&b.body, index + 1),
    }
}

fn close_term(t: &Term, x: &str, depth: usize) -> Term {
    match t {
        Term::Var(y) if &**y == x => Term::Bound(depth),
        Term::Var(_) | Term::Bound(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| close_term(a, x, depth)).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(close_formula(&b.body, x, depth + 1)),
        }),
    }
}

pub(crate) fn close_formula(f: &Formula, x: &str, depth: usize) -> Formula {
    map_formula_terms(f, depth, &mut |t, d| close_term(t, x, d))
}

/// Replaces every index escaping `t` by `f(i)`, where `i` counts binders
/// outward from the position of `t`. `f` must return terms without
/// escaping indices.
pub(crate) fn replace_loose_in_term(t: &Term, f: &dyn Fn(usize) -> Term) -> Term {
    fn go(t: &Term, f: &dyn Fn(usize) -> Term, k: usize) -> Term {
        match t {
            Term::Bound(i) if *i >= k => f(i - k),
            Term::Var(_) | Term::Bound(_) => t.clone(),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| go(a, f, k)).collect()),
            Term::Eps(b) => Term::Eps(Binder {
                hint: b.hint.clone(),
                body: Box::new(map_formula_terms(&b.body, k + 1, &mut |s, d| go(s, f, d))),
            }),
        }
    }
    go(t, f, 0)
}

/// Adds `by` to every index of `t` that escapes `cutoff` binders.
pub(crate) fn shift_term(t: &Term, by: usize, cutoff: usize) -> Term {
    match t {
        Term::Bound(i) if *i >= cutoff => Term::Bound(i + by),
        Term::Var(_) | Term::Bound(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| shift_term(a, by, cutoff)).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(map_formula_terms(&b.body, cutoff + 1, &mut |s, d| shift_term(s, by, d))),
        }),
    }
}

/// Replaces index `depth` by `t` and shifts outer indices down by one.
/// Escaping indices of `t` are adjusted for the binders crossed.
fn open_term(s: &Term, t: &Term, depth: usize) -> Term {
    match s {
        Term::Bound(i) if *i == depth => {
            if depth == 0 || t.is_closed_wrt_binders() {
                t.clone()
            } else {
                shift_term(t, depth, 0)
            }
        }
        Term::Bound(i) if *i > depth => Term::Bound(i - 1),
        Term::Var(_) | Term::Bound(_) => s.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| open_term(a, t, depth)).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(open_formula(&b.body, t, depth + 1)),
        }),
    }
}

pub(crate) fn open_formula(f: &Formula, t: &Term, depth: usize) -> Formula {
    map_formula_terms(f, depth, &mut |s, d| open_term(s, t, d))
}

/// Rebuilds `f`, mapping every top-level term argument with `g(term,
/// binder depth)`. Quantifier bodies are visited with depth + 1; ε-bodies
/// are the responsibility of `g`.
pub(crate) fn map_formula_terms(
    f: &Formula,
    depth: usize,
    g: &mut dyn FnMut(&Term, usize) -> Term,
) -> Formula {
    match f {
        Formula::Top => Formula::Top,
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| g(a, depth)).collect()),
        Formula::Eq(a, b) => Formula::Eq(g(a, depth), g(b, depth)),
        Formula::Not(a) => Formula::not(map_formula_terms(a, depth, g)),
        Formula::And(a, b) => Formula::and(map_formula_terms(a, depth, g), map_formula_terms(b, depth, g)),
        Formula::Or(a, b) => Formula::or(map_formula_terms(a, depth, g), map_formula_terms(b, depth, g)),
        Formula::Implies(a, b) => {
            Formula::implies(map_formula_terms(a, depth, g), map_formula_terms(b, depth, g))
        }
        Formula::Iff(a, b) => Formula::iff(map_formula_terms(a, depth, g), map_formula_terms(b, depth, g)),
        Formula::Exists(b) => Formula::Exists(Binder {
            hint: b.hint.clone(),
            body: Box::new(map_formula_terms(&b.body, depth + 1, g)),
        }),
        Formula::Forall(b) => Formula::Forall(Binder {
            hint: b.hint.clone(),
            body: Box::new(map_formula_terms(&b.body, depth + 1, g)),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: Term) -> Formula {
        Formula::atom("P", vec![x])
    }

    #[test]
    fn binder_equality_ignores_hint() {
        let a = Term::eps("x", &p(Term::var("x"))).unwrap();
        let b = Term::eps("y", &p(Term::var("y"))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn vacuous_binder_rejected() {
        assert!(matches!(
            Term::eps("x", &p(Term::var("y"))),
            Err(SyntaxError::VacuousBinder(_))
        ));
    }

    #[test]
    fn instantiate_inverts_bind() {
        let body = Formula::and(p(Term::var("x")), Formula::atom("Q", vec![Term::var("y")]));
        let b = Binder::bind("x", &body).unwrap();
        assert_eq!(b.instantiate(&Term::var("x")), body);
        assert_eq!(
            b.instantiate(&Term::constant("c")),
            Formula::and(p(Term::constant("c")), Formula::atom("Q", vec![Term::var("y")]))
        );
    }

    #[test]
    fn disjunction_shapes() {
        assert_eq!(Formula::disjunction(vec![]), Formula::Bottom);
        let a = p(Term::constant("a"));
        assert_eq!(Formula::disjunction(vec![a.clone()]), a);
    }
}
