//! Printing in the ASCII input grammar.
//!
//! Binder names are their hints unless a hint would clash with a free
//! variable, a constant, or an enclosing binder name. In that case the
//! lowest unused `v0, v1, ...` is used. Output always reparses to an equal
//! (≡) expression.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::{Binder, Expr, Formula, Name, Term};
use super::ops::{visit_formula_terms, visit_term};

/// Lowest `v<i>` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Name>) -> Name {
    (0..)
        .map(|i| format!("v{i}"))
        .find(|n| !avoid.contains(n.as_str()))
        .map(|n| Name::from(n.as_str()))
        .expect("infinitely many names")
}

/// Display adapter for any expression.
pub struct ExprDisplay<'a>(pub &'a Expr);

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Term(t) => t.fmt(f),
            Expr::Formula(g) => g.fmt(f),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ExprDisplay(self).fmt(f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = BTreeSet::new();
        visit_term(self, &mut |t| collect_reserved(t, &mut avoid));
        let mut p = Printer {
            avoid,
            scope: Vec::new(),
            out: String::new(),
        };
        p.term(self);
        f.write_str(&p.out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = BTreeSet::new();
        visit_formula_terms(self, &mut |t| collect_reserved(t, &mut avoid));
        let mut p = Printer {
            avoid,
            scope: Vec::new(),
            out: String::new(),
        };
        p.formula(self, 0);
        f.write_str(&p.out)
    }
}

fn collect_reserved(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::App(c, args) if args.is_empty() => {
            out.insert(c.clone());
        }
        _ => {}
    }
}

struct Printer {
    avoid: BTreeSet<Name>,
    scope: Vec<Name>,
    out: String,
}

const KEYWORDS: &[&str] = &["eps", "all", "ex", "true", "false"];

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

impl Printer {
    fn binder_name(&self, b: &Binder) -> Name {
        let h = &b.hint;
        let usable = h.starts_with(|c: char| c.is_ascii_lowercase())
            && h.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            && !KEYWORDS.contains(&&**h)
            && !self.avoid.contains(h)
            && !self.scope.contains(h);
        if usable {
            return h.clone();
        }
        let mut avoid = self.avoid.clone();
        avoid.extend(self.scope.iter().cloned());
        fresh_var(&avoid)
    }

    fn binder(&mut self, kw: &str, b: &Binder) {
        let name = self.binder_name(b);
        self.out.push_str(kw);
        self.out.push(' ');
        self.out.push_str(&name);
        self.out.push_str(" (");
        self.scope.push(name);
        self.formula(&b.body, 0);
        self.scope.pop();
        self.out.push(')');
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(x) => self.out.push_str(x),
            Term::Bound(i) => {
                let n = self.scope.len();
                if *i < n {
                    let name = self.scope[n - 1 - i].clone();
                    self.out.push_str(&name);
                } else {
                    self.out.push_str(&format!("#{}", i - n));
                }
            }
            Term::App(fun, args) => {
                self.out.push_str(fun);
                self.args(args);
            }
            Term::Eps(b) => self.binder("eps", b),
        }
    }

    fn args(&mut self, args: &[Term]) {
        if args.is_empty() {
            return;
        }
        self.out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.term(a);
        }
        self.out.push(')');
    }

    /// Prints `f`, parenthesized if its precedence is below `min`.
    fn formula(&mut self, f: &Formula, min: u8) {
        let p = prec(f);
        if p < min {
            self.out.push('(');
            self.formula(f, 0);
            self.out.push(')');
            return;
        }
        match f {
            Formula::Top => self.out.push_str("true"),
            Formula::Bottom => self.out.push_str("false"),
            Formula::Atom(pred, args) => {
                self.out.push_str(pred);
                self.args(args);
            }
            Formula::Eq(a, b) => {
                self.term(a);
                self.out.push_str(" = ");
                self.term(b);
            }
            Formula::Not(a) => {
                self.out.push('~');
                if matches!(**a, Formula::Eq(..)) {
                    self.out.push('(');
                    self.formula(a, 0);
                    self.out.push(')');
                } else {
                    self.formula(a, 5);
                }
            }
            Formula::And(a, b) => self.binary(a, " & ", b, p),
            Formula::Or(a, b) => self.binary(a, " | ", b, p),
            Formula::Implies(a, b) => self.binary(a, " -> ", b, p),
            Formula::Iff(a, b) => self.binary(a, " <-> ", b, p),
            Formula::Exists(b) => self.binder("ex", b),
            Formula::Forall(b) => self.binder("all", b),
        }
    }

    /// Right-associative binary connective.
    fn binary(&mut self, a: &Formula, op: &str, b: &Formula, p: u8) {
        self.formula(a, p + 1);
        self.out.push_str(op);
        self.formula(b, p);
    }
}
