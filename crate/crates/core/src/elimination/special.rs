//! Elimination of (=_ε) instances for special ε-terms.

use std::collections::BTreeMap;

use crate::calculus::{check_proof, derive_eq2_into, deduction_unchecked, Justification, LineInfo, Proof, ProofBuilder, ProofStats};
use crate::syntax::{epsilon_type, rank, replace_term, replace_term_in_term, Formula, Term};

use super::order::{eq_eps_lines, precedes, select_special, special_terms, type_of, EqEpsLine};
use super::step::occurs_in_formula;
use super::{dedup_disjuncts, EliminationError, StepKind, StepRecord};

fn eq(a: &Term, b: &Term) -> Formula {
    Formula::eq(a.clone(), b.clone())
}

/// Adds `u = t` given the line index of `t = u`.
fn symmetric(b: &mut ProofBuilder, tu: usize) -> usize {
    let Formula::Eq(t, u) = b.formula(tu).clone() else { unreachable!("equation line") };
    let refl = b.line(eq(&t, &t), Justification::Eq1);
    let ax = b.line(
        Formula::implies(eq(&t, &u), Formula::implies(eq(&t, &t), eq(&u, &t))),
        Justification::Eq2P,
    );
    b.combine(&[tu, refl, ax], eq(&u, &t))
}

/// Replaces every non-trivial (=_ε) line with `e` on the left by a
/// derivation from the flipped instance, so that `e` only occurs on the
/// right. Trivial instances `t = u → s = s` are derived from (=₁).
fn normalize_sides(p: &Proof, e: &Term) -> Proof {
    let lines = eq_eps_lines(p);
    let by_line: BTreeMap<usize, EqEpsLine> = lines.into_iter().map(|l| (l.line, l)).collect();
    let mut b = ProofBuilder::new(p.system, p.hyps.clone());
    let mut map = Vec::with_capacity(p.lines.len());
    for (i, line) in p.lines.iter().enumerate() {
        let f = line.formula.clone();
        let idx = match by_line.get(&i) {
            Some(l) if l.left == l.right => {
                let refl = b.line(eq(&l.left, &l.left), Justification::Eq1);
                b.combine(&[refl], f)
            }
            Some(l) if l.left == *e => {
                let flipped = b.line(
                    Formula::implies(eq(&l.u, &l.t), eq(&l.right, &l.left)),
                    Justification::EqEps,
                );
                let s1 = b.line(eq(&l.t, &l.t), Justification::Eq1);
                let s2 = b.line(
                    Formula::implies(eq(&l.t, &l.u), Formula::implies(eq(&l.t, &l.t), eq(&l.u, &l.t))),
                    Justification::Eq2P,
                );
                let s3 = b.line(eq(&l.right, &l.right), Justification::Eq1);
                let s4 = b.line(
                    Formula::implies(
                        eq(&l.right, &l.left),
                        Formula::implies(eq(&l.right, &l.right), eq(&l.left, &l.right)),
                    ),
                    Justification::Eq2P,
                );
                b.combine(&[s1, s2, flipped, s3, s4], f)
            }
            _ => b.line(f, line.just.remap(|j| map[j])),
        };
        map.push(idx);
    }
    if let Some(c) = p.conclusion() {
        b.conclude(c);
    }
    b.finish()
}

/// Number of (=_ε) lines in which `e` is special.
fn special_lines(p: &Proof, e: &Term) -> usize {
    eq_eps_lines(p)
        .iter()
        .filter(|l| l.left != l.right && (l.left == *e || l.right == *e))
        .count()
}

fn special_counts(p: &Proof) -> BTreeMap<Term, usize> {
    let mut m = BTreeMap::new();
    for l in eq_eps_lines(p) {
        if l.left == l.right {
            continue;
        }
        *m.entry(l.left).or_insert(0) += 1;
        *m.entry(l.right).or_insert(0) += 1;
    }
    m
}

/// The index at which the parameters of two instances of one type differ.
fn differing_position(a: &[Term], b: &[Term]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}

/// Eliminates one (=_ε) instance `t = u → e′ = e` for a special ε-term `e`
/// of maximal rank.
pub(crate) fn special_step(
    p: &Proof,
    disjuncts: &[Formula],
) -> Result<(Proof, Vec<Formula>, StepRecord), EliminationError> {
    let report = check_proof(p).map_err(EliminationError::Input)?;
    let before = ProofStats::of_critical(&report.critical());
    let specials = special_terms(p);
    let r = specials.iter().map(rank).max().ok_or(EliminationError::NoSpecialTerms)?;
    let e = select_special(&specials, r).ok_or(EliminationError::NoSpecialTerms)?;
    if p.hyps.iter().any(|h| occurs_in_formula(&e, h)) {
        return Err(EliminationError::Unsupported(format!("{e} occurs in a hypothesis")));
    }
    if p.lines.iter().any(|l| {
        matches!(
            l.just,
            Justification::Eq2 | Justification::Ext | Justification::RExists(_) | Justification::RForall(_)
        )
    }) {
        return Err(EliminationError::Unsupported(
            "proof uses (=2), (ext) or quantifier rules; normalize or embed it first".into(),
        ));
    }
    let counts_before = special_counts(p);
    let pf = normalize_sides(p, &e);
    let report = check_proof(&pf).map_err(|error| EliminationError::Recheck {
        error,
        proof: Box::new(pf.clone()),
        trace: Vec::new(),
    })?;
    let chosen = eq_eps_lines(&pf)
        .into_iter()
        .find(|l| l.right == e && l.left != e)
        .expect("special term has a line with it on the right");
    let (ty, pe) = epsilon_type(&e);
    let e1 = chosen.left.clone();
    let (_, p1) = epsilon_type(&e1);
    let i = differing_position(&p1, &pe).expect("distinct instances differ");
    let (t, u) = (chosen.t.clone(), chosen.u.clone());
    let axiom = pf.lines[chosen.line].formula.clone();
    let tu = eq(&t, &u);
    let body_e = e.as_eps().expect("ε-term").clone();
    let body_e1 = e1.as_eps().expect("ε-term").clone();

    let mut by_line: BTreeMap<usize, EqEpsLine> = eq_eps_lines(&pf).into_iter().map(|l| (l.line, l)).collect();
    let mut hyps = pf.hyps.clone();
    hyps.push(tu.clone());
    let mut b = ProofBuilder::new(pf.system, hyps);
    let mut map = Vec::with_capacity(pf.lines.len());
    let mut failure = None;
    for (k, (line, info)) in pf.lines.iter().zip(&report.lines).enumerate() {
        let f = replace_term(&line.formula, &e, &e1);
        let idx = match (by_line.remove(&k), info) {
            (Some(l), _) if l.right == e => {
                let h = b.hyp(tu.clone());
                let (_, pa) = epsilon_type(&l.left);
                if l.left == e1 {
                    let refl = b.line(eq(&e1, &e1), Justification::Eq1);
                    b.combine(&[refl], f)
                } else {
                    let j = differing_position(&pa, &pe).expect("distinct instances differ");
                    let (t2, u2) = (l.t.clone(), l.u.clone());
                    let ut = symmetric(&mut b, h);
                    if j == i {
                        let n1 = b.line(
                            Formula::implies(eq(&t2, &t), eq(&l.left, &e1)),
                            Justification::EqEps,
                        );
                        let tr = b.line(
                            Formula::implies(eq(&u, &t), Formula::implies(eq(&t2, &u), eq(&t2, &t))),
                            Justification::Eq2P,
                        );
                        b.combine(&[ut, tr, n1], f)
                    } else {
                        let mut p4 = pe.clone();
                        p4[i] = t.clone();
                        p4[j] = t2.clone();
                        let e4 = ty.instantiate(&p4);
                        let n1 = b.line(Formula::implies(eq(&u, &t), eq(&l.left, &e4)), Justification::EqEps);
                        let n2 = b.line(Formula::implies(eq(&t2, &u2), eq(&e4, &e1)), Justification::EqEps);
                        let tr = b.line(
                            Formula::implies(eq(&e4, &e1), Formula::implies(eq(&l.left, &e4), eq(&l.left, &e1))),
                            Justification::Eq2P,
                        );
                        b.combine(&[ut, n1, n2, tr], f)
                    }
                }
            }
            (_, LineInfo::Critical(c)) if c.term == e => {
                let h = b.hyp(tu.clone());
                let ut = symmetric(&mut b, h);
                let w = replace_term_in_term(&c.witness, &e, &e1);
                let c1 = b.line(
                    Formula::implies(body_e1.instantiate(&w), body_e1.instantiate(&e1)),
                    Justification::Crit(Some(w.clone())),
                );
                let q1 = Formula::implies(
                    tu.clone(),
                    Formula::implies(body_e1.instantiate(&e1), body_e.instantiate(&e1)),
                );
                let q2 = Formula::implies(
                    eq(&u, &t),
                    Formula::implies(body_e.instantiate(&w), body_e1.instantiate(&w)),
                );
                let lemmas = derive_eq2_into(&mut b, &q1).and_then(|a| Ok((a, derive_eq2_into(&mut b, &q2)?)));
                match lemmas {
                    Ok((l1, l2)) => b.combine(&[h, ut, c1, l1, l2], f),
                    Err(err) => {
                        failure.get_or_insert(err);
                        b.line(f, Justification::Taut)
                    }
                }
            }
            (_, LineInfo::Critical(c)) => {
                b.line(f, Justification::Crit(Some(replace_term_in_term(&c.witness, &e, &e1))))
            }
            _ => b.line(f, line.just.remap(|j| map[j])),
        };
        map.push(idx);
    }
    if let Some(err) = failure {
        return Err(EliminationError::Invariant(format!("repair of a critical formula failed: {err}")));
    }
    let Some(concl) = pf.conclusion() else {
        return Err(EliminationError::Input(crate::calculus::CheckError {
            line: 0,
            kind: crate::calculus::CheckErrorKind::Empty,
        }));
    };
    b.conclude(&replace_term(concl, &e, &e1));
    let eq_branch = deduction_unchecked(&b.finish(), &tu);

    let ntu = Formula::not(tu.clone());
    let mut hyps = pf.hyps.clone();
    hyps.push(ntu.clone());
    let mut b = ProofBuilder::new(pf.system, hyps);
    let mut map = Vec::with_capacity(pf.lines.len());
    for (k, line) in pf.lines.iter().enumerate() {
        let idx = if k == chosen.line {
            let h = b.hyp(ntu.clone());
            b.combine(&[h], line.formula.clone())
        } else {
            b.line(line.formula.clone(), line.just.remap(|j| map[j]))
        };
        map.push(idx);
    }
    b.conclude(concl);
    let neq_branch = deduction_unchecked(&b.finish(), &ntu);

    let mut all = disjuncts.to_vec();
    all.extend(disjuncts.iter().map(|d| replace_term(d, &e, &e1)));
    let new_disjuncts = dedup_disjuncts(all);
    let target = Formula::disjunction(new_disjuncts.clone());
    let mut out = ProofBuilder::new(p.system, p.hyps.clone());
    let m1 = out.append(&eq_branch);
    let m2 = out.append(&neq_branch);
    let ends = [*m1.last().expect("nonempty"), *m2.last().expect("nonempty")];
    out.combine(&ends, target.clone());
    out.conclude(&target);
    let proof = out.finish();
    let after = match check_proof(&proof) {
        Ok(r) => ProofStats::of_critical(&r.critical()),
        Err(error) => {
            return Err(EliminationError::Recheck {
                error,
                proof: Box::new(proof),
                trace: Vec::new(),
            })
        }
    };
    check_descent(&e, &counts_before, &special_counts(&proof), special_lines(p, &e), special_lines(&proof, &e))?;
    let record = StepRecord {
        kind: StepKind::Special,
        term: e,
        axioms: vec![axiom],
        witnesses: vec![e1],
        branches: vec![eq_branch, neq_branch],
        lines_before: p.len(),
        lines_after: proof.len(),
        before,
        after,
        result: proof.clone(),
    };
    Ok((proof, new_disjuncts, record))
}

/// Per-type descent: among specials of the type of `e`, the lines of `e`
/// decrease, and every term that is not `≺ e` occurs in no more lines than
/// before.
fn check_descent(
    e: &Term,
    before: &BTreeMap<Term, usize>,
    after: &BTreeMap<Term, usize>,
    e_before: usize,
    e_after: usize,
) -> Result<(), EliminationError> {
    if e_after >= e_before {
        return Err(EliminationError::Invariant(format!(
            "special term {e} still has {e_after} (=_ε) lines (before: {e_before})"
        )));
    }
    let ty = type_of(e);
    for (s, &n) in after {
        if s == e || type_of(s) != ty || precedes(s, e) {
            continue;
        }
        let old = before.get(s).copied().unwrap_or(0);
        if n > old {
            return Err(EliminationError::Invariant(format!(
                "special term {s} of the eliminated type is not below {e} and gained lines"
            )));
        }
    }
    Ok(())
}
