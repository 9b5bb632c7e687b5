//! Proof transformations: the deduction theorem, substitution into proofs
//! and the embedding of quantifier proofs into the ε-calculus.

use crate::syntax::{substitute, substitute_in_term, Binder, Formula, Name, Term};
use crate::translation::{epsilon_translate, epsilon_translate_term};

use super::build::ProofBuilder;
use super::check::{check_proof, LineInfo};
use super::matching::match_instance;
use super::{Justification, Proof, ProofLine, TransformError};

/// From a proof of `B` from `Γ ∪ {A}`, a proof of `A → B` from `Γ`.
pub fn deduction(p: &Proof, a: &Formula) -> Result<Proof, TransformError> {
    let report = check_proof(p).map_err(TransformError::Input)?;
    let eigen = report.eigenvariables();
    if let Some(x) = a.free_vars().iter().find(|x| eigen.contains(*x)) {
        return Err(TransformError::Precondition(format!(
            "`{x}` is an eigenvariable of the proof and occurs free in the discharged formula"
        )));
    }
    let out = deduction_unchecked(p, a);
    check_proof(&out).map_err(TransformError::Output)?;
    Ok(out)
}

/// The deduction construction without checking input or output.
pub(crate) fn deduction_unchecked(p: &Proof, a: &Formula) -> Proof {
    let hyps: Vec<Formula> = p.hyps.iter().filter(|h| *h != a).cloned().collect();
    let mut b = ProofBuilder::new(p.system, hyps);
    let under = |c: &Formula| Formula::implies(a.clone(), c.clone());
    let mut map: Vec<usize> = Vec::with_capacity(p.lines.len());
    for line in &p.lines {
        let c = &line.formula;
        let idx = if c == a {
            b.taut(under(a))
        } else {
            match &line.just {
                Justification::MP(i, j) => {
                    let (imp, ante) = match &p.lines[*i].formula {
                        Formula::Implies(x, y) if **x == p.lines[*j].formula && **y == *c => (*i, *j),
                        _ => (*j, *i),
                    };
                    b.combine(&[map[ante], map[imp]], under(c))
                }
                Justification::RExists(i) => {
                    let Formula::Implies(q, body) = c else { unreachable!("checked ∃ rule") };
                    let Formula::Implies(x, _) = &p.lines[*i].formula else {
                        unreachable!("checked ∃ rule")
                    };
                    let swapped = b.combine(&[map[*i]], Formula::implies((**x).clone(), under(body)));
                    let ruled = b.force(
                        Formula::implies((**q).clone(), under(body)),
                        Justification::RExists(swapped),
                    );
                    b.combine(&[ruled], under(c))
                }
                Justification::RForall(i) => {
                    let Formula::Implies(lhs, q) = c else { unreachable!("checked ∀ rule") };
                    let Formula::Implies(_, x) = &p.lines[*i].formula else {
                        unreachable!("checked ∀ rule")
                    };
                    let both = Formula::and(a.clone(), (**lhs).clone());
                    let merged = b.combine(&[map[*i]], Formula::implies(both.clone(), (**x).clone()));
                    let ruled = b.force(Formula::implies(both, (**q).clone()), Justification::RForall(merged));
                    b.combine(&[ruled], under(c))
                }
                just => {
                    let l = b.line(c.clone(), just.clone());
                    b.combine(&[l], under(c))
                }
            }
        };
        map.push(idx);
    }
    if let Some(last) = p.conclusion() {
        b.conclude(&under(last));
    }
    b.finish()
}

/// `π[x/t]`: every line with `x` replaced by `t`.
pub fn substitute_proof(p: &Proof, x: &str, t: &Term) -> Result<Proof, TransformError> {
    let report = check_proof(p).map_err(TransformError::Input)?;
    if !t.is_closed_wrt_binders() {
        return Err(TransformError::Precondition("the substituted term has escaping indices".into()));
    }
    if p.hyps.iter().any(|h| h.free_vars().contains(x)) {
        return Err(TransformError::Precondition(format!("`{x}` occurs free in a hypothesis")));
    }
    let eigen = report.eigenvariables();
    if eigen.contains(x) {
        return Err(TransformError::Precondition(format!("`{x}` is an eigenvariable of the proof")));
    }
    if let Some(y) = t.free_vars().iter().find(|y| eigen.contains(*y)) {
        return Err(TransformError::Precondition(format!(
            "the substituted term contains the eigenvariable `{y}`"
        )));
    }
    let lines = p
        .lines
        .iter()
        .zip(&report.lines)
        .map(|(l, info)| ProofLine {
            formula: substitute(&l.formula, x, t),
            just: match info {
                LineInfo::Critical(c) => Justification::Crit(Some(substitute_in_term(&c.witness, x, t))),
                _ => l.just.clone(),
            },
        })
        .collect();
    let out = Proof {
        system: p.system,
        hyps: p.hyps.clone(),
        lines,
    };
    check_proof(&out).map_err(TransformError::Output)?;
    Ok(out)
}

/// Translates a proof in a calculus with quantifiers into one without:
/// every line is ε-translated, quantifier axioms become critical formulas
/// and the eigenvariable of each quantifier rule is replaced by the ε-term
/// that witnesses it.
pub fn embed_proof(p: &Proof) -> Result<Proof, TransformError> {
    let report = check_proof(p).map_err(TransformError::Input)?;
    let system = p.system.without_quantifiers().with_epsilon();
    let hyps: Vec<Formula> = p.hyps.iter().map(epsilon_translate).collect();
    let mut out: Vec<ProofLine> = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(p.lines.len());
    let push = |out: &mut Vec<ProofLine>, formula: Formula, just: Justification| {
        out.push(ProofLine { formula, just });
        out.len() - 1
    };
    for (line, info) in p.lines.iter().zip(&report.lines) {
        let c = &line.formula;
        let idx = match &line.just {
            Justification::MP(i, j) => push(&mut out, epsilon_translate(c), Justification::MP(map[*i], map[*j])),
            Justification::Crit(_) => {
                let LineInfo::Critical(cf) = info else { unreachable!("checked critical formula") };
                let w = epsilon_translate_term(&cf.witness);
                push(&mut out, epsilon_translate(c), Justification::Crit(Some(w)))
            }
            Justification::AxExists => {
                let Formula::Implies(l, r) = c else { unreachable!("checked ∃ axiom") };
                let Formula::Exists(b) = &**r else { unreachable!("checked ∃ axiom") };
                let body = translated_body(b);
                let e = Term::Eps(body.clone());
                let t = match_instance(b, l).flatten().map_or_else(|| e.clone(), |t| epsilon_translate_term(&t));
                let f = Formula::implies(body.instantiate(&t), body.instantiate(&e));
                push(&mut out, f, Justification::Crit(Some(t)))
            }
            Justification::AxForall => {
                let Formula::Implies(l, r) = c else { unreachable!("checked ∀ axiom") };
                let Formula::Forall(b) = &**l else { unreachable!("checked ∀ axiom") };
                let body = translated_body(b);
                let e = negated_eps(&body);
                let t = match_instance(b, r).flatten().map_or_else(|| e.clone(), |t| epsilon_translate_term(&t));
                let (at, ae) = (body.instantiate(&t), body.instantiate(&e));
                let crit = Formula::implies(Formula::not(at.clone()), Formula::not(ae.clone()));
                let ci = push(&mut out, crit.clone(), Justification::Crit(Some(t)));
                let target = Formula::implies(ae, at);
                let ti = push(&mut out, Formula::implies(crit, target.clone()), Justification::Taut);
                push(&mut out, target, Justification::MP(ti, ci))
            }
            Justification::RExists(i) | Justification::RForall(i) => {
                let LineInfo::Eigen(x) = info else { unreachable!("checked quantifier rule") };
                let e = match c {
                    Formula::Implies(q, _) if matches!(&**q, Formula::Exists(_)) => {
                        let Formula::Exists(b) = &**q else { unreachable!() };
                        Term::Eps(translated_body(b))
                    }
                    Formula::Implies(_, q) => {
                        let Formula::Forall(b) = &**q else { unreachable!("checked ∀ rule") };
                        negated_eps(&translated_body(b))
                    }
                    _ => unreachable!("checked quantifier rule"),
                };
                replace_eigenvariable(&mut out, x, &e);
                map[*i]
            }
            just => push(&mut out, epsilon_translate(c), just.clone()),
        };
        map.push(idx);
    }
    let last = *map.last().ok_or(TransformError::Input(super::CheckError {
        line: 0,
        kind: super::CheckErrorKind::Empty,
    }))?;
    if last + 1 != out.len() {
        let f = out[last].formula.clone();
        let ti = push(&mut out, Formula::implies(f.clone(), f.clone()), Justification::Taut);
        push(&mut out, f, Justification::MP(ti, last));
    }
    let proof = Proof {
        system,
        hyps,
        lines: out,
    };
    check_proof(&proof).map_err(TransformError::Output)?;
    Ok(proof)
}

fn translated_body(b: &Binder) -> Binder {
    Binder {
        hint: b.hint.clone(),
        body: Box::new(epsilon_translate(&b.body)),
    }
}

fn negated_eps(body: &Binder) -> Term {
    Term::Eps(Binder {
        hint: body.hint.clone(),
        body: Box::new(Formula::not((*body.body).clone())),
    })
}

fn replace_eigenvariable(out: &mut [ProofLine], x: &Name, e: &Term) {
    for l in out.iter_mut() {
        l.formula = substitute(&l.formula, x, e);
        if let Justification::Crit(Some(w)) = &l.just {
            l.just = Justification::Crit(Some(substitute_in_term(w, x, e)));
        }
    }
}
