//! The ε-translation: `ex x A` becomes `A(eps x A)` and `all x A` becomes
//! `A(eps x ~A)`, applied innermost first.

use crate::syntax::{Binder, Expr, Formula, Term};

pub fn epsilon_translate(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(epsilon_translate_term).collect()),
        Formula::Eq(a, b) => Formula::Eq(epsilon_translate_term(a), epsilon_translate_term(b)),
        Formula::Not(a) => Formula::not(epsilon_translate(a)),
        Formula::And(a, b) => Formula::and(epsilon_translate(a), epsilon_translate(b)),
        Formula::Or(a, b) => Formula::or(epsilon_translate(a), epsilon_translate(b)),
        Formula::Implies(a, b) => Formula::implies(epsilon_translate(a), epsilon_translate(b)),
        Formula::Iff(a, b) => Formula::iff(epsilon_translate(a), epsilon_translate(b)),
        Formula::Exists(b) => {
            let body = epsilon_translate(&b.body);
            let witness = Term::Eps(Binder {
                hint: b.hint.clone(),
                body: Box::new(body.clone()),
            });
            open(b, body, &witness)
        }
        Formula::Forall(b) => {
            let body = epsilon_translate(&b.body);
            let witness = Term::Eps(Binder {
                hint: b.hint.clone(),
                body: Box::new(Formula::not(body.clone())),
            });
            open(b, body, &witness)
        }
    }
}

fn open(b: &Binder, body: Formula, witness: &Term) -> Formula {
    Binder {
        hint: b.hint.clone(),
        body: Box::new(body),
    }
    .instantiate(witness)
}

pub fn epsilon_translate_term(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Bound(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(epsilon_translate_term).collect()),
        Term::Eps(b) => Term::Eps(Binder {
            hint: b.hint.clone(),
            body: Box::new(epsilon_translate(&b.body)),
        }),
    }
}

pub fn epsilon_translate_expr(e: &Expr) -> Expr {
    match e {
        Expr::Term(t) => Expr::Term(epsilon_translate_term(t)),
        Expr::Formula(f) => Expr::Formula(epsilon_translate(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn existential() {
        assert_eq!(epsilon_translate(&f("ex x (P(x))")), f("P(eps x (P(x)))"));
        assert_eq!(epsilon_translate(&f("ex x (P(x))")).to_string(), "P(eps x (P(x)))");
    }

    #[test]
    fn universal() {
        assert_eq!(epsilon_translate(&f("all x (P(x))")), f("P(eps x (~P(x)))"));
    }

    #[test]
    fn quantifier_free_unchanged() {
        let g = f("P(a) & (Q(eps x (R(x))) -> a = b)");
        assert_eq!(epsilon_translate(&g), g);
    }

    #[test]
    fn nested_quantifiers_inner_first() {
        let g = epsilon_translate(&f("all x (ex y (R(x, y)))"));
        let ex = "eps x (~R(x, eps u (R(x, u))))";
        let expected = format!("R({ex}, eps y (R({ex}, y)))");
        assert_eq!(g, f(&expected));
        assert!(!g.contains_quantifier());
    }

    #[test]
    fn idempotent() {
        let g = epsilon_translate(&f("ex x (P(x) -> all y (Q(x, y) | ex z (R(z, y))))"));
        assert_eq!(epsilon_translate(&g), g);
        assert!(!g.contains_quantifier());
    }
}
