//! First-order matching of formulas against patterns with holes.

use crate::syntax::{Binder, Formula, Name, Term};

/// Finds `t` with `b.instantiate(t) == target`. `Some(None)` means the
/// bound variable does not occur, so every `t` works.
pub fn match_instance(b: &Binder, target: &Formula) -> Option<Option<Term>> {
    let mut slots = vec![None];
    let hole = |t: &Term, depth: usize| match t {
        Term::Bound(i) if *i == depth => Some(0),
        _ => None,
    };
    let lower = |i: usize, depth: usize| if i > depth { i - 1 } else { i };
    match_formula(&b.body, target, 0, &hole, &lower, &mut slots).then(|| slots.pop().flatten())
}

/// Finds terms for the pattern variables `vars` such that substituting them
/// into `pattern` gives `target`. Unused variables are left as themselves.
pub fn match_pattern(pattern: &Formula, vars: &[Name], target: &Formula) -> Option<Vec<Term>> {
    let mut slots = vec![None; vars.len()];
    let hole = |t: &Term, _depth: usize| match t {
        Term::Var(x) => vars.iter().position(|v| v == x),
        _ => None,
    };
    let lower = |i: usize, _depth: usize| i;
    if !match_formula(pattern, target, 0, &hole, &lower, &mut slots) {
        return None;
    }
    Some(
        slots
            .into_iter()
            .zip(vars)
            .map(|(s, v)| s.unwrap_or_else(|| Term::Var(v.clone())))
            .collect(),
    )
}

type HoleFn<'a> = dyn Fn(&Term, usize) -> Option<usize> + 'a;
type LowerFn<'a> = dyn Fn(usize, usize) -> usize + 'a;

fn match_formula(
    p: &Formula,
    t: &Formula,
    depth: usize,
    hole: &HoleFn<'_>,
    lower: &LowerFn<'_>,
    slots: &mut Vec<Option<Term>>,
) -> bool {
    match (p, t) {
        (Formula::Top, Formula::Top) | (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom(a, xs), Formula::Atom(b, ys)) => {
            a == b
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, depth, hole, lower, slots))
        }
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            match_term(a1, a2, depth, hole, lower, slots) && match_term(b1, b2, depth, hole, lower, slots)
        }
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, depth, hole, lower, slots),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
        | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
            match_formula(a1, a2, depth, hole, lower, slots) && match_formula(b1, b2, depth, hole, lower, slots)
        }
        (Formula::Exists(x), Formula::Exists(y)) | (Formula::Forall(x), Formula::Forall(y)) => {
            match_formula(&x.body, &y.body, depth + 1, hole, lower, slots)
        }
        _ => false,
    }
}

fn match_term(
    p: &Term,
    t: &Term,
    depth: usize,
    hole: &HoleFn<'_>,
    lower: &LowerFn<'_>,
    slots: &mut Vec<Option<Term>>,
) -> bool {
    if let Some(k) = hole(p, depth) {
        if !t.is_closed_wrt_binders() {
            return false;
        }
        return match &slots[k] {
            Some(prev) => prev == t,
            None => {
                slots[k] = Some(t.clone());
                true
            }
        };
    }
    match (p, t) {
        (Term::Var(a), Term::Var(b)) => a == b,
        (Term::Bound(i), Term::Bound(j)) => lower(*i, depth) == *j,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, depth, hole, lower, slots))
        }
        (Term::Eps(x), Term::Eps(y)) => match_formula(&x.body, &y.body, depth + 1, hole, lower, slots),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term};

    #[test]
    fn recovers_witness() {
        let e = parse_term("eps x (P(x) & Q(x, b))").unwrap();
        let b = e.as_eps().unwrap();
        let target = parse_formula("P(f(a)) & Q(f(a), b)").unwrap();
        assert_eq!(match_instance(b, &target), Some(Some(parse_term("f(a)").unwrap())));
        let bad = parse_formula("P(f(a)) & Q(a, b)").unwrap();
        assert_eq!(match_instance(b, &bad), None);
    }

    #[test]
    fn witness_inside_nested_binder() {
        let e = parse_term("eps x (P(eps y (Q(x, y))))").unwrap();
        let b = e.as_eps().unwrap();
        let target = parse_formula("P(eps y (Q(a, y)))").unwrap();
        assert_eq!(match_instance(b, &target), Some(Some(Term::constant("a"))));
        // A term mentioning the inner binder is not a witness.
        let target = parse_formula("P(eps y (Q(y, y)))").unwrap();
        assert_eq!(match_instance(b, &target), None);
    }

    #[test]
    fn pattern_variables() {
        let p = parse_formula("P(z) -> Q(z, w)").unwrap();
        let t = parse_formula("P(a) -> Q(a, f(b))").unwrap();
        let vars = vec![Name::from("z"), Name::from("w")];
        assert_eq!(
            match_pattern(&p, &vars, &t),
            Some(vec![Term::constant("a"), parse_term("f(b)").unwrap()])
        );
        let t = parse_formula("P(a) -> Q(b, f(b))").unwrap();
        assert_eq!(match_pattern(&p, &vars, &t), None);
    }
}
