//! One elimination step for the critical formulas of a single ε-term.

use crate::calculus::{check_proof, CheckReport, Justification, LineInfo, Proof, ProofBuilder, ProofStats};
use crate::calculus::deduction_unchecked;
use crate::syntax::{replace_term, replace_term_in_term, visit_formula_terms, visit_term, Formula, Term};

use super::order::{select_critical, special_terms};
use super::{dedup_disjuncts, EliminationError, StepKind, StepRecord};

pub(crate) fn occurs_in_formula(e: &Term, f: &Formula) -> bool {
    let mut found = false;
    visit_formula_terms(f, &mut |s| found |= s == e);
    found
}

pub(crate) fn occurs_in_term(e: &Term, t: &Term) -> bool {
    let mut found = false;
    visit_term(t, &mut |s| found |= s == e);
    found
}

/// Rebuilds `p` with `e` replaced by `repl` (if given) on every line, and
/// with the critical formulas of `e` derived from the extra hypothesis `h`
/// by a tautology.
fn rebuild(p: &Proof, report: &CheckReport, e: &Term, repl: Option<&Term>, h: &Formula) -> Proof {
    let rf = |f: &Formula| repl.map_or_else(|| f.clone(), |s| replace_term(f, e, s));
    let rt = |t: &Term| repl.map_or_else(|| t.clone(), |s| replace_term_in_term(t, e, s));
    let mut hyps = p.hyps.clone();
    hyps.push(h.clone());
    let mut b = ProofBuilder::new(p.system, hyps);
    let mut map: Vec<usize> = Vec::with_capacity(p.lines.len());
    for (line, info) in p.lines.iter().zip(&report.lines) {
        let f = rf(&line.formula);
        let idx = match info {
            LineInfo::Critical(c) if c.term == *e => {
                let hi = b.hyp(h.clone());
                b.combine(&[hi], f)
            }
            LineInfo::Critical(c) => b.line(f, Justification::Crit(Some(rt(&c.witness)))),
            _ => b.line(f, line.just.remap(|i| map[i])),
        };
        map.push(idx);
    }
    if let Some(c) = p.conclusion() {
        b.conclude(&rf(c));
    }
    b.finish()
}

/// Checks that every occurrence of `e` in another critical formula
/// `B(u) → B(e_c)` lies inside `B(y)` or inside `u`.
fn subterm_guard(p: &Proof, report: &CheckReport, e: &Term) -> Result<(), EliminationError> {
    let y = Term::var("#y");
    for c in report.critical() {
        if c.term == *e || !occurs_in_formula(e, &p.lines[c.line].formula) {
            continue;
        }
        let b = c.term.as_eps().expect("critical ε-term");
        if !occurs_in_formula(e, &b.instantiate(&y)) && !occurs_in_term(e, &c.witness) {
            return Err(EliminationError::Invariant(format!(
                "{e} occurs in the critical formula on line {} outside its matrix and witness",
                c.line + 1
            )));
        }
    }
    Ok(())
}

/// Removes all critical formulas belonging to one ε-term of maximal rank.
/// `disjuncts` lists the disjuncts whose disjunction is the conclusion of
/// `p`; the new list is returned with the new proof.
pub(crate) fn critical_step(
    p: &Proof,
    disjuncts: &[Formula],
) -> Result<(Proof, Vec<Formula>, StepRecord), EliminationError> {
    let report = check_proof(p).map_err(EliminationError::Input)?;
    let crit = report.critical();
    let before = ProofStats::of_critical(&crit);
    let e = select_critical(&before.critical_terms).ok_or(EliminationError::NothingToEliminate)?;
    if special_terms(p).contains(&e) {
        return Err(EliminationError::Unsupported(format!(
            "{e} is a special ε-term; eliminate special terms first"
        )));
    }
    if p.hyps.iter().any(|h| occurs_in_formula(&e, h)) {
        return Err(EliminationError::Unsupported(format!("{e} occurs in a hypothesis")));
    }
    if p.lines
        .iter()
        .any(|l| matches!(l.just, Justification::Eq2 | Justification::Ext | Justification::RExists(_) | Justification::RForall(_) | Justification::AxExists | Justification::AxForall))
    {
        return Err(EliminationError::Unsupported(
            "proof uses (=2), (ext) or quantifier rules; normalize or embed it first".into(),
        ));
    }
    subterm_guard(p, &report, &e)?;

    let b = e.as_eps().expect("critical ε-term").clone();
    let mut witnesses: Vec<Term> = Vec::new();
    let mut critical = Vec::new();
    for c in crit.iter().filter(|c| c.term == e) {
        critical.push(p.lines[c.line].formula.clone());
        if !witnesses.contains(&c.witness) {
            witnesses.push(c.witness.clone());
        }
    }
    let instances: Vec<Formula> = witnesses.iter().map(|t| b.instantiate(t)).collect();

    let mut branches = Vec::new();
    let mut new_disjuncts = Vec::new();
    for (t, a) in witnesses.iter().zip(&instances) {
        let hat = rebuild(p, &report, &e, Some(t), a);
        branches.push(deduction_unchecked(&hat, a));
        new_disjuncts.extend(disjuncts.iter().map(|d| replace_term(d, &e, t)));
    }
    let none = Formula::not(Formula::disjunction(instances.clone()));
    let keep_e = witnesses.iter().any(|t| occurs_in_term(&e, t));
    let repl = if keep_e { None } else { Some(&witnesses[0]) };
    let hat = rebuild(p, &report, &e, repl, &none);
    branches.push(deduction_unchecked(&hat, &none));
    new_disjuncts.extend(disjuncts.iter().map(|d| repl.map_or_else(|| d.clone(), |s| replace_term(d, &e, s))));
    let new_disjuncts = dedup_disjuncts(new_disjuncts);
    let target = Formula::disjunction(new_disjuncts.clone());

    let mut out = ProofBuilder::new(p.system, p.hyps.clone());
    let mut ends = Vec::new();
    for br in &branches {
        let map = out.append(br);
        ends.push(*map.last().expect("nonempty branch"));
    }
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
    let r = before.rank;
    if !(after.rank < r || (after.rank == r && after.order(r) < before.order(r))) {
        return Err(EliminationError::Invariant(format!(
            "measure did not decrease: (rk, o) went from ({r}, {}) to ({}, {})",
            before.order(r),
            after.rank,
            after.order(after.rank)
        )));
    }
    let record = StepRecord {
        kind: StepKind::Critical,
        term: e,
        axioms: critical,
        witnesses,
        branches,
        lines_before: p.len(),
        lines_after: proof.len(),
        before,
        after,
        result: proof.clone(),
    };
    Ok((proof, new_disjuncts, record))
}
