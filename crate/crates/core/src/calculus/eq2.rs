//! Instances of (=₂) and their derivation from the restricted identity
//! axioms (=₂′), (=₂″) and (=_ε).

use crate::syntax::{epsilon_type, Formula, Term};

use super::build::ProofBuilder;
use super::check::check_proof;
use super::{Justification, Proof, SystemId, TransformError};

/// Whether `r` arises from `l` by replacing some occurrences of `t` by `u`,
/// i.e. `l = A[x/t]` and `r = A[x/u]` for some `A`.
pub fn differs_only_by(l: &Formula, r: &Formula, t: &Term, u: &Term) -> bool {
    match (l, r) {
        (Formula::Top, Formula::Top) | (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => p == q && terms_differ_only_by(xs, ys, t, u),
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            term_differs_only_by(a1, a2, t, u) && term_differs_only_by(b1, b2, t, u)
        }
        (Formula::Not(a), Formula::Not(b)) => differs_only_by(a, b, t, u),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
        | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
            differs_only_by(a1, a2, t, u) && differs_only_by(b1, b2, t, u)
        }
        (Formula::Exists(x), Formula::Exists(y)) | (Formula::Forall(x), Formula::Forall(y)) => {
            differs_only_by(&x.body, &y.body, t, u)
        }
        _ => false,
    }
}

fn terms_differ_only_by(xs: &[Term], ys: &[Term], t: &Term, u: &Term) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_differs_only_by(x, y, t, u))
}

fn term_differs_only_by(a: &Term, b: &Term, t: &Term, u: &Term) -> bool {
    if a == b || (a == t && b == u) {
        return true;
    }
    match (a, b) {
        (Term::App(f, xs), Term::App(g, ys)) => f == g && terms_differ_only_by(xs, ys, t, u),
        (Term::Eps(x), Term::Eps(y)) => differs_only_by(&x.body, &y.body, t, u),
        _ => false,
    }
}

/// Whether `ys` arises from `xs` by replacing the entry at one position,
/// where `xs` has `t` and `ys` has `u`.
pub(crate) fn single_position(xs: &[Term], ys: &[Term], t: &Term, u: &Term) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let diffs: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != ys[i]).collect();
    match diffs.as_slice() {
        [] => (0..xs.len()).any(|i| xs[i] == *t && ys[i] == *u),
        [i] => xs[*i] == *t && ys[*i] == *u,
        _ => false,
    }
}

/// Derives an (=₂) instance `t = u → (A(t) ↔ A(u))` (or its `→` form)
/// from (=₁), (=₂′), (=₂″) and (=_ε).
pub fn derive_eq2_restricted(instance: &Formula) -> Result<Proof, TransformError> {
    let mut system = SystemId::EC.with_epsilon().restricted();
    if instance.contains_quantifier() {
        system = system.with_quantifiers();
    }
    let mut b = ProofBuilder::new(system, Vec::new());
    derive_eq2_into(&mut b, instance)?;
    b.conclude(instance);
    let proof = b.finish();
    check_proof(&proof).map_err(TransformError::Output)?;
    Ok(proof)
}

/// Adds a derivation of the (=₂) instance to `b`; returns its line.
pub(crate) fn derive_eq2_into(b: &mut ProofBuilder, instance: &Formula) -> Result<usize, TransformError> {
    let not_instance = || TransformError::Precondition("not an instance of (=2)".into());
    let Formula::Implies(h, c) = instance else {
        return Err(not_instance());
    };
    let Formula::Eq(t, u) = &**h else {
        return Err(not_instance());
    };
    let (l, r, iff) = match &**c {
        Formula::Iff(l, r) => (l, r, true),
        Formula::Implies(l, r) => (l, r, false),
        _ => return Err(not_instance()),
    };
    if !differs_only_by(l, r, t, u) {
        return Err(not_instance());
    }
    let ctx = Ctx {
        t: t.clone(),
        u: u.clone(),
    };
    let fwd = ctx.formula(b, l, r, true)?;
    let mut prems = vec![fwd];
    if iff {
        prems.push(ctx.formula(b, l, r, false)?);
    }
    Ok(b.combine(&prems, instance.clone()))
}

struct Ctx {
    t: Term,
    u: Term,
}

impl Ctx {
    fn hyp(&self) -> Formula {
        Formula::eq(self.t.clone(), self.u.clone())
    }

    fn under(&self, f: Formula) -> Formula {
        Formula::implies(self.hyp(), f)
    }

    /// A line proving `t = u → a = c`, or `None` when that is `t = u → t = u`
    /// itself.
    fn term(&self, b: &mut ProofBuilder, a: &Term, c: &Term) -> Result<Option<usize>, TransformError> {
        if *a == self.t && *c == self.u {
            return Ok(None);
        }
        if a == c {
            let refl = b.line(Formula::eq(a.clone(), a.clone()), Justification::Eq1);
            return Ok(Some(b.combine(&[refl], self.under(Formula::eq(a.clone(), a.clone())))));
        }
        match (a, c) {
            (Term::App(f, xs), Term::App(g, ys)) if f == g => {
                let rebuild = |args: &[Term]| Term::App(f.clone(), args.to_vec());
                self.chain(b, xs, ys, &rebuild, Justification::Eq2PP).map(Some)
            }
            (Term::Eps(_), Term::Eps(_)) => {
                let (ty1, p1) = epsilon_type(a);
                let (ty2, p2) = epsilon_type(c);
                if ty1 != ty2 {
                    return Err(TransformError::Precondition(
                        "replacement changes the type of an ε-term".into(),
                    ));
                }
                let rebuild = |args: &[Term]| ty1.instantiate(args);
                self.chain(b, &p1, &p2, &rebuild, Justification::EqEps).map(Some)
            }
            _ => Err(TransformError::Precondition("terms differ outside the replaced positions".into())),
        }
    }

    /// `t = u → s(xs) = s(ys)` by changing one argument at a time.
    fn chain(
        &self,
        b: &mut ProofBuilder,
        xs: &[Term],
        ys: &[Term],
        rebuild: &dyn Fn(&[Term]) -> Term,
        axiom: Justification,
    ) -> Result<usize, TransformError> {
        let start = rebuild(xs);
        let mut cur = xs.to_vec();
        let mut acc: Option<usize> = None;
        for i in 0..xs.len() {
            if xs[i] == ys[i] {
                continue;
            }
            let li = self.term(b, &xs[i], &ys[i])?;
            let mut next = cur.clone();
            next[i] = ys[i].clone();
            let (from, to) = (rebuild(&cur), rebuild(&next));
            let ax = b.line(
                Formula::implies(
                    Formula::eq(xs[i].clone(), ys[i].clone()),
                    Formula::eq(from.clone(), to.clone()),
                ),
                axiom.clone(),
            );
            let target = self.under(Formula::eq(start.clone(), to.clone()));
            let mut prems: Vec<usize> = li.into_iter().collect();
            prems.push(ax);
            if let Some(prev) = acc {
                let trans = b.line(
                    Formula::implies(
                        Formula::eq(from.clone(), to.clone()),
                        Formula::implies(
                            Formula::eq(start.clone(), from.clone()),
                            Formula::eq(start.clone(), to.clone()),
                        ),
                    ),
                    Justification::Eq2P,
                );
                prems.push(prev);
                prems.push(trans);
            }
            acc = Some(b.combine(&prems, target));
            cur = next;
        }
        Ok(acc.expect("terms differ somewhere"))
    }

    /// A line proving `t = u → c = a` from one proving `t = u → a = c`.
    fn symmetric(&self, b: &mut ProofBuilder, li: Option<usize>, a: &Term, c: &Term) -> usize {
        let refl = b.line(Formula::eq(a.clone(), a.clone()), Justification::Eq1);
        let ax = b.line(
            Formula::implies(
                Formula::eq(a.clone(), c.clone()),
                Formula::implies(Formula::eq(a.clone(), a.clone()), Formula::eq(c.clone(), a.clone())),
            ),
            Justification::Eq2P,
        );
        let mut prems: Vec<usize> = li.into_iter().collect();
        prems.push(refl);
        prems.push(ax);
        b.combine(&prems, self.under(Formula::eq(c.clone(), a.clone())))
    }

    /// A line proving `t = u → (l → r)` when `forward`, else
    /// `t = u → (r → l)`.
    fn formula(&self, b: &mut ProofBuilder, l: &Formula, r: &Formula, forward: bool) -> Result<usize, TransformError> {
        let target = if forward {
            self.under(Formula::implies(l.clone(), r.clone()))
        } else {
            self.under(Formula::implies(r.clone(), l.clone()))
        };
        if l == r {
            return Ok(b.combine(&[], target));
        }
        let prems = match (l, r) {
            (Formula::Atom(p, xs), Formula::Atom(_, ys)) => {
                let rebuild = |args: &[Term]| Formula::Atom(p.clone(), args.to_vec());
                self.atom_chain(b, xs, ys, &rebuild, forward)?
            }
            (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
                let rebuild = |args: &[Term]| Formula::eq(args[0].clone(), args[1].clone());
                self.atom_chain(b, &[a1.clone(), b1.clone()], &[a2.clone(), b2.clone()], &rebuild, forward)?
            }
            (Formula::Not(x), Formula::Not(y)) => vec![self.formula(b, x, y, !forward)?],
            (Formula::And(a1, b1), Formula::And(a2, b2)) | (Formula::Or(a1, b1), Formula::Or(a2, b2)) => {
                vec![self.formula(b, a1, a2, forward)?, self.formula(b, b1, b2, forward)?]
            }
            (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                vec![self.formula(b, a1, a2, !forward)?, self.formula(b, b1, b2, forward)?]
            }
            (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => vec![
                self.formula(b, a1, a2, true)?,
                self.formula(b, a1, a2, false)?,
                self.formula(b, b1, b2, true)?,
                self.formula(b, b1, b2, false)?,
            ],
            _ => {
                return Err(TransformError::Precondition(
                    "replacement under a quantifier is not supported".into(),
                ))
            }
        };
        Ok(b.combine(&prems, target))
    }

    /// Premises for `t = u → (P(xs) → P(ys))` (or the converse), changing
    /// one argument at a time with (=₂′).
    fn atom_chain(
        &self,
        b: &mut ProofBuilder,
        xs: &[Term],
        ys: &[Term],
        rebuild: &dyn Fn(&[Term]) -> Formula,
        forward: bool,
    ) -> Result<Vec<usize>, TransformError> {
        let (from, to) = if forward { (xs, ys) } else { (ys, xs) };
        let mut cur = from.to_vec();
        let mut prems = Vec::new();
        for i in 0..xs.len() {
            if xs[i] == ys[i] {
                continue;
            }
            let li = self.term(b, &xs[i], &ys[i])?;
            let li = if forward {
                li
            } else {
                Some(self.symmetric(b, li, &xs[i], &ys[i]))
            };
            prems.extend(li);
            let mut next = cur.clone();
            next[i] = to[i].clone();
            let ax = b.line(
                Formula::implies(
                    Formula::eq(from[i].clone(), to[i].clone()),
                    Formula::implies(rebuild(&cur), rebuild(&next)),
                ),
                Justification::Eq2P,
            );
            prems.push(ax);
            cur = next;
        }
        Ok(prems)
    }
}
