//! Seeded random generators for terms, formulas and proofs.

use epskit::calculus::{Justification, Proof, ProofBuilder, SystemId};
use epskit::syntax::{substitute, Formula, Term};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Vocabulary and size bounds of a generator.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub preds: Vec<(&'static str, usize)>,
    pub funs: Vec<(&'static str, usize)>,
    pub consts: Vec<&'static str>,
    pub vars: Vec<&'static str>,
    pub binders: Vec<&'static str>,
    pub eps: bool,
    pub quantifiers: bool,
    pub equality: bool,
}

impl Vocab {
    /// Two unary predicates, one unary function, no constants.
    pub fn small() -> Self {
        Vocab {
            preds: vec![("P", 1), ("Q", 1)],
            funs: vec![("f", 1)],
            consts: vec![],
            vars: vec!["x", "y"],
            binders: vec!["u", "v"],
            eps: true,
            quantifiers: false,
            equality: true,
        }
    }

    /// A richer vocabulary for syntax round trips.
    pub fn rich() -> Self {
        Vocab {
            preds: vec![("P", 1), ("Q", 2), ("R", 0)],
            funs: vec![("f", 1), ("g", 2)],
            consts: vec!["a", "b"],
            vars: vec!["x", "y", "z"],
            binders: vec!["u", "v", "w", "x"],
            eps: true,
            quantifiers: true,
            equality: true,
        }
    }
}

pub struct Gen {
    pub rng: StdRng,
    pub vocab: Vocab,
}

impl Gen {
    pub fn new(seed: u64, vocab: Vocab) -> Self {
        Gen {
            rng: StdRng::seed_from_u64(seed),
            vocab,
        }
    }

    fn leaf(&mut self, extra: &[&'static str]) -> Term {
        let nconst = self.vocab.consts.len();
        let nvars = self.vocab.vars.len() + extra.len();
        let k = self.rng.gen_range(0..nconst + nvars);
        if k < nconst {
            Term::constant(self.vocab.consts[k])
        } else if k - nconst < self.vocab.vars.len() {
            Term::var(self.vocab.vars[k - nconst])
        } else {
            Term::var(extra[k - nconst - self.vocab.vars.len()])
        }
    }

    /// A term; `extra` lists variables that may occur in addition to the
    /// vocabulary's free variables.
    pub fn term(&mut self, depth: u32, extra: &[&'static str]) -> Term {
        if depth == 0 || self.rng.gen_bool(0.45) {
            return self.leaf(extra);
        }
        if self.vocab.eps && self.rng.gen_bool(0.4) {
            let z = *self.vocab.binders.choose(&mut self.rng).unwrap();
            let mut inner = extra.to_vec();
            inner.push(z);
            let body = self.formula(depth - 1, &inner);
            return self.bind_eps(z, body);
        }
        let (f, n) = *self.vocab.funs.choose(&mut self.rng).unwrap();
        let args = (0..n).map(|_| self.term(depth - 1, extra)).collect();
        Term::app(f, args)
    }

    /// `εz body`, forcing `z` to occur.
    pub fn bind_eps(&mut self, z: &str, body: Formula) -> Term {
        let body = if body.free_vars().contains(z) {
            body
        } else {
            let (p, _) = self.unary_pred();
            Formula::or(Formula::atom(p, vec![Term::var(z)]), body)
        };
        Term::eps(z, &body).expect("binder occurs")
    }

    fn unary_pred(&mut self) -> (&'static str, usize) {
        let unary: Vec<_> = self.vocab.preds.iter().copied().filter(|(_, n)| *n == 1).collect();
        *unary.choose(&mut self.rng).expect("a unary predicate")
    }

    pub fn atom(&mut self, depth: u32, extra: &[&'static str]) -> Formula {
        if self.vocab.equality && self.rng.gen_bool(0.2) {
            return Formula::eq(self.term(depth, extra), self.term(depth, extra));
        }
        let (p, n) = *self.vocab.preds.choose(&mut self.rng).unwrap();
        Formula::atom(p, (0..n).map(|_| self.term(depth, extra)).collect())
    }

    pub fn formula(&mut self, depth: u32, extra: &[&'static str]) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom(depth.min(1), extra);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..7) {
            0 => Formula::not(self.formula(d, extra)),
            1 => Formula::and(self.formula(d, extra), self.formula(d, extra)),
            2 => Formula::or(self.formula(d, extra), self.formula(d, extra)),
            3 => Formula::implies(self.formula(d, extra), self.formula(d, extra)),
            4 => Formula::iff(self.formula(d, extra), self.formula(d, extra)),
            _ if self.vocab.quantifiers => {
                let z = *self.vocab.binders.choose(&mut self.rng).unwrap();
                let mut inner = extra.to_vec();
                inner.push(z);
                let body = self.formula(d, &inner);
                let body = if body.free_vars().contains(z) {
                    body
                } else {
                    let (p, _) = self.unary_pred();
                    Formula::and(Formula::atom(p, vec![Term::var(z)]), body)
                };
                if self.rng.gen_bool(0.5) {
                    Formula::exists(z, &body).unwrap()
                } else {
                    Formula::forall(z, &body).unwrap()
                }
            }
            _ => self.atom(d.min(1), extra),
        }
    }

    /// A formula in which the variable `x` occurs free.
    pub fn formula_with(&mut self, x: &'static str, depth: u32) -> Formula {
        let f = self.formula(depth, &[x]);
        if f.free_vars().contains(x) {
            f
        } else {
            let (p, _) = self.unary_pred();
            Formula::implies(Formula::atom(p, vec![Term::var(x)]), f)
        }
    }

    /// A random proof of at most `max_lines` lines in `system`, built
    /// only from axiom instances, hypotheses and modus ponens.
    pub fn proof(&mut self, system: SystemId, max_lines: usize) -> Proof {
        let nhyps = self.rng.gen_range(0..=2);
        let hyps: Vec<Formula> = (0..nhyps).map(|_| self.formula(1, &[])).collect();
        let mut b = ProofBuilder::new(system, hyps.clone());
        let target = self.rng.gen_range(2..=max_lines);
        let mut attempts = 0;
        while b.len() < target && attempts < 200 {
            attempts += 1;
            let mps = modus_ponens_pairs(&b);
            match self.rng.gen_range(0..10) {
                0..=2 if !mps.is_empty() => {
                    let (i, j) = *mps.choose(&mut self.rng).unwrap();
                    b.mp(i, j);
                }
                3 if !hyps.is_empty() => {
                    let h = hyps.choose(&mut self.rng).unwrap().clone();
                    b.hyp(h);
                }
                4 | 5 => {
                    let f = self.tautology(&b);
                    b.taut(f);
                }
                6 if system.epsilon => {
                    let (f, t) = self.critical();
                    b.line(f, Justification::Crit(Some(t)));
                }
                7 if system.identity => {
                    let t = self.term(1, &[]);
                    b.line(Formula::eq(t.clone(), t), Justification::Eq1);
                }
                8 if system.identity => {
                    let a = self.formula_with("w", 1);
                    let (t, u) = (self.term(1, &[]), self.term(1, &[]));
                    let f = Formula::implies(
                        Formula::eq(t.clone(), u.clone()),
                        Formula::implies(substitute(&a, "w", &t), substitute(&a, "w", &u)),
                    );
                    b.line(f, Justification::Eq2);
                }
                9 if system.identity && system.epsilon => {
                    let body = self.formula_with("w", 1);
                    let z = "v";
                    let body = if body.free_vars().contains(z) {
                        body
                    } else {
                        Formula::and(Formula::atom("P", vec![Term::var(z)]), body)
                    };
                    let (t, u) = (self.term(1, &[]), self.term(1, &[]));
                    let et = Term::eps(z, &substitute(&body, "w", &t)).unwrap();
                    let eu = Term::eps(z, &substitute(&body, "w", &u)).unwrap();
                    let f = Formula::implies(Formula::eq(t, u), Formula::eq(et, eu));
                    b.line(f, Justification::EqEps);
                }
                _ => {}
            }
        }
        if b.is_empty() {
            let f = self.tautology(&b);
            b.taut(f);
        }
        b.finish()
    }

    /// An instance of a propositional tautology schema, often with an
    /// existing line as its antecedent so that modus ponens applies.
    fn tautology(&mut self, b: &ProofBuilder) -> Formula {
        let pick = |g: &mut Gen| {
            if !b.is_empty() && g.rng.gen_bool(0.6) {
                b.formula(g.rng.gen_range(0..b.len())).clone()
            } else {
                g.formula(1, &[])
            }
        };
        let a = pick(self);
        let c = pick(self);
        let d = self.formula(1, &[]);
        use Formula as F;
        match self.rng.gen_range(0..6) {
            0 => F::implies(a.clone(), F::implies(c, a)),
            1 => F::implies(a.clone(), F::or(a, d)),
            2 => F::implies(F::and(a.clone(), c), a),
            3 => F::implies(a.clone(), F::implies(c.clone(), F::and(a, c))),
            4 => F::implies(F::not(F::not(a.clone())), a),
            _ => F::implies(F::implies(a.clone(), c.clone()), F::implies(F::not(c), F::not(a))),
        }
    }

    /// A critical formula `A(t) → A(εx A(x))` and its witness.
    pub fn critical(&mut self) -> (Formula, Term) {
        let a = self.formula_with("w", 1);
        let e = Term::eps("w", &a).unwrap();
        let t = self.term(1, &[]);
        (Formula::implies(substitute(&a, "w", &t), substitute(&a, "w", &e)), t)
    }
}

/// Pairs `(i, j)` where line `j` is `line i → C`.
pub fn modus_ponens_pairs(b: &ProofBuilder) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..b.len() {
        if let Formula::Implies(x, _) = b.formula(j) {
            for i in 0..b.len() {
                if b.formula(i) == &**x {
                    out.push((i, j));
                }
            }
        }
    }
    out
}
