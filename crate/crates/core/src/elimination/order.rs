//! Special ε-terms and the order used to select them.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::calculus::{Justification, Proof};
use crate::syntax::{degree, epsilon_type, rank, visit_term, EpsilonType, Formula, Term};

/// An (=_ε) line `t = u → left = right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct EqEpsLine {
    pub line: usize,
    pub t: Term,
    pub u: Term,
    pub left: Term,
    pub right: Term,
}

pub(crate) fn eq_eps_lines(p: &Proof) -> Vec<EqEpsLine> {
    p.lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.just == Justification::EqEps)
        .filter_map(|(line, l)| match &l.formula {
            Formula::Implies(h, c) => match (&**h, &**c) {
                (Formula::Eq(t, u), Formula::Eq(left, right)) => Some(EqEpsLine {
                    line,
                    t: t.clone(),
                    u: u.clone(),
                    left: left.clone(),
                    right: right.clone(),
                }),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

/// ε-terms on either side of a non-trivial (=_ε) line.
pub fn special_terms(p: &Proof) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for l in eq_eps_lines(p) {
        if l.left == l.right {
            continue;
        }
        for s in [l.right, l.left] {
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    out
}

/// Largest rank of a special ε-term, 0 if there is none.
pub fn special_rank(p: &Proof) -> usize {
    special_terms(p).iter().map(rank).max().unwrap_or(0)
}

/// Sort key realising `≺` on instances of one ε-type: first the largest
/// degree of a parameter, then the parameters lexicographically, each
/// compared by degree and then structurally.
pub(crate) fn prec_key(e: &Term) -> (usize, Vec<(usize, Term)>) {
    let (_, params) = epsilon_type(e);
    let max = params.iter().map(degree).max().unwrap_or(0);
    (max, params.into_iter().map(|p| (degree(&p), p)).collect())
}

/// `a ≺ b` for two instances of the same ε-type.
pub fn precedes(a: &Term, b: &Term) -> bool {
    prec_key(a).cmp(&prec_key(b)) == Ordering::Less
}

pub(crate) fn type_of(e: &Term) -> EpsilonType {
    epsilon_type(e).0
}

/// Whether `inner` occurs in `outer` as a proper subterm.
pub(crate) fn proper_subterm(inner: &Term, outer: &Term) -> bool {
    let mut found = false;
    if inner != outer {
        visit_term(outer, &mut |s| found |= s == inner);
    }
    found
}

/// Selects the special ε-term to eliminate next among those of rank `r`:
/// per ε-type the `≺`-largest instance, restricted to those that are no
/// proper subterm of another special term of rank `r`, then the one of
/// largest degree. Falls back to the special term of largest degree.
pub(crate) fn select_special(specials: &[Term], r: usize) -> Option<Term> {
    let top: Vec<&Term> = specials.iter().filter(|s| rank(s) == r).collect();
    let types: BTreeSet<EpsilonType> = top.iter().map(|s| type_of(s)).collect();
    let mut candidates: Vec<&Term> = types
        .iter()
        .filter_map(|ty| {
            top.iter()
                .copied()
                .filter(|s| type_of(s) == *ty)
                .max_by(|a, b| prec_key(a).cmp(&prec_key(b)))
        })
        .filter(|c| !top.iter().any(|s| proper_subterm(c, s)))
        .collect();
    if candidates.is_empty() {
        candidates = top.clone();
    }
    candidates
        .into_iter()
        .max_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| type_of(a).cmp(&type_of(b))))
        .cloned()
}

/// Selects the critical ε-term to eliminate among `terms` (in order of first
/// occurrence): largest rank, then largest degree, then `≺`-largest, then
/// first occurrence.
pub(crate) fn select_critical(terms: &[Term]) -> Option<Term> {
    let r = terms.iter().map(rank).max()?;
    let mut best: Option<&Term> = None;
    for t in terms.iter().filter(|t| rank(t) == r) {
        best = match best {
            None => Some(t),
            Some(b) => {
                let ord = degree(t)
                    .cmp(&degree(b))
                    .then_with(|| type_of(t).cmp(&type_of(b)))
                    .then_with(|| prec_key(t).cmp(&prec_key(b)));
                if ord == Ordering::Greater {
                    Some(t)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn order_respects_parameter_degree() {
        let low = t("eps x (Q(x, a))");
        let high = t("eps x (Q(x, eps y (P(y))))");
        assert!(precedes(&low, &high));
        assert!(!precedes(&high, &low));
        let b = t("eps x (Q(x, b))");
        assert!(precedes(&low, &b) != precedes(&b, &low));
    }

    #[test]
    fn critical_selection_prefers_degree() {
        let e1 = t("eps x (P(x))");
        let e2 = t("eps x (Q(x, eps y (P(y))))");
        assert_eq!(select_critical(&[e1.clone(), e2.clone()]), Some(e2));
        assert_eq!(select_critical(std::slice::from_ref(&e1)), Some(e1));
        assert_eq!(select_critical(&[]), None);
    }

    #[test]
    fn subterm_test() {
        let e1 = t("eps x (P(x))");
        let e2 = t("eps x (Q(x, eps y (P(y))))");
        assert!(proper_subterm(&e1, &e2));
        assert!(!proper_subterm(&e2, &e1));
        assert!(!proper_subterm(&e1, &e1));
    }
}
