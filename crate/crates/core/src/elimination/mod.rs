//! The first ε-theorem: elimination of critical formulas and of (=_ε)
//! instances, yielding ε-free proofs and Herbrand disjunctions.

mod order;
mod special;
mod step;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::calculus::{
    check_proof, derive_eq2_into, match_pattern, CheckError, Justification, Proof, ProofBuilder, ProofStats,
};
use crate::syntax::{fresh_var, map_formula_terms_deep, Formula, Name, Term};

pub use order::{precedes, special_rank, special_terms};

/// Upper bound on the number of steps of one elimination run.
pub const MAX_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EliminationError {
    #[error("input proof does not check: {0}")]
    Input(CheckError),
    #[error("nothing to eliminate: the proof has no critical formulas")]
    NothingToEliminate,
    #[error("no special ε-terms")]
    NoSpecialTerms,
    #[error("conclusion mismatch: {0}")]
    ConclusionMismatch(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal re-check failure after {} step(s): {error}", trace.len())]
    Recheck {
        error: CheckError,
        proof: Box<Proof>,
        trace: Vec<StepRecord>,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("no termination within {0} steps")]
    StepLimit(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// Removal of the critical formulas of one ε-term.
    Critical,
    /// Removal of one (=_ε) instance of a special ε-term.
    Special,
}

/// One step of an elimination run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// The critical or special ε-term `e`.
    pub term: Term,
    /// The critical formulas of `e`, or the removed (=_ε) instance.
    pub axioms: Vec<Formula>,
    /// The witnesses `t1..tn`, or the term `e′` that replaces `e`.
    pub witnesses: Vec<Term>,
    /// The branch proofs `π1..πn, π″`, or the `t = u` and `¬ t = u`
    /// branches.
    pub branches: Vec<Proof>,
    pub result: Proof,
    pub before: ProofStats,
    pub after: ProofStats,
    pub lines_before: usize,
    pub lines_after: usize,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            StepKind::Critical => "critical",
            StepKind::Special => "special",
        };
        writeln!(f, "{kind} {}", self.term)?;
        for a in &self.axioms {
            writeln!(f, "  axiom {a}")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  term {w}")?;
        }
        let r = self.before.rank;
        writeln!(
            f,
            "  rk {} -> {}, o {} -> {}, lines {} -> {}",
            r,
            self.after.rank,
            self.before.order(r),
            self.after.order(r),
            self.lines_before,
            self.lines_after
        )
    }
}

/// The result of a complete elimination run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    /// The ε-free proof.
    pub proof: Proof,
    /// Disjuncts of its conclusion before ε-terms were abstracted.
    pub epsilon_disjuncts: Vec<Formula>,
    /// Disjuncts of its conclusion.
    pub disjuncts: Vec<Formula>,
    pub steps: Vec<StepRecord>,
}

impl Elimination {
    /// Human-readable step log.
    pub fn trace(&self) -> String {
        self.steps.iter().map(|s| s.to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandResult {
    /// The disjuncts `E(t1^j, ..., tn^j)`.
    pub disjuncts: Vec<Formula>,
    /// The ε-abstracted skeleton of the conclusion, with pattern variables
    /// for its maximal ε-subterms.
    pub skeleton: Formula,
    pub pattern_vars: Vec<Name>,
    /// Per disjunct the terms substituted for the pattern variables.
    pub witnesses: Vec<Vec<Term>>,
    /// ε-free proof of the disjunction.
    pub proof: Proof,
    pub steps: Vec<StepRecord>,
}

impl HerbrandResult {
    pub fn count(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn disjunction(&self) -> Formula {
        Formula::disjunction(self.disjuncts.clone())
    }
}

pub(crate) fn dedup_disjuncts(ds: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    ds.into_iter().filter(|d| seen.insert(d.clone())).collect()
}

fn conclusion(p: &Proof) -> Result<Formula, EliminationError> {
    p.conclusion().cloned().ok_or({
        EliminationError::Input(CheckError {
            line: 0,
            kind: crate::calculus::CheckErrorKind::Empty,
        })
    })
}

fn single_step(
    p: &Proof,
    f: impl FnOnce(&Proof, &[Formula]) -> Result<(Proof, Vec<Formula>, StepRecord), EliminationError>,
) -> Result<Proof, EliminationError> {
    let c = conclusion(p)?;
    let (proof, ds, _) = f(p, std::slice::from_ref(&c))?;
    if Formula::disjunction(ds) != c {
        return Err(EliminationError::ConclusionMismatch(format!(
            "the conclusion {c} contains the eliminated ε-term"
        )));
    }
    Ok(proof)
}

/// Removes the critical formulas of one ε-term of maximal rank. The
/// conclusion of `p` must not contain that ε-term.
pub fn eliminate_step(p: &Proof) -> Result<Proof, EliminationError> {
    single_step(p, step::critical_step)
}

/// Removes one (=_ε) instance of a special ε-term of maximal rank.
pub fn eliminate_special(p: &Proof) -> Result<Proof, EliminationError> {
    single_step(p, special::special_step)
}

/// Replaces every (=₂) line by a derivation from (=₁), (=₂′), (=₂″) and
/// (=_ε), and switches the proof to restricted identity axioms.
pub fn normalize_identity_axioms(p: &Proof) -> Result<Proof, EliminationError> {
    check_proof(p).map_err(EliminationError::Input)?;
    if !p.lines.iter().any(|l| l.just == Justification::Eq2) {
        return Ok(p.clone());
    }
    let mut b = ProofBuilder::new(p.system.restricted(), p.hyps.clone());
    let mut map = Vec::with_capacity(p.lines.len());
    for l in &p.lines {
        let idx = match l.just {
            Justification::Eq2 => derive_eq2_into(&mut b, &l.formula)
                .map_err(|e| EliminationError::Unsupported(format!("cannot derive (=2) line {}: {e}", l.formula)))?,
            Justification::RExists(_) | Justification::RForall(_) => b.force(l.formula.clone(), l.just.remap(|j| map[j])),
            _ => b.line(l.formula.clone(), l.just.remap(|j| map[j])),
        };
        map.push(idx);
    }
    b.conclude(&conclusion(p)?);
    let out = b.finish();
    check_proof(&out).map_err(|error| EliminationError::Recheck {
        error,
        proof: Box::new(out.clone()),
        trace: Vec::new(),
    })?;
    Ok(out)
}

/// Runs special and critical steps until no ε-term needs eliminating.
fn run(p: &Proof, identity: bool) -> Result<(Proof, Vec<Formula>, Vec<StepRecord>), EliminationError> {
    check_proof(p).map_err(EliminationError::Input)?;
    if p.system.quantifiers || p.lines.iter().any(|l| l.formula.contains_quantifier()) {
        return Err(EliminationError::Unsupported(
            "proof uses quantifiers; embed it into the ε-calculus first".into(),
        ));
    }
    if p.system.extensionality || p.lines.iter().any(|l| l.just == Justification::Ext) {
        return Err(EliminationError::Unsupported("proof uses (ext)".into()));
    }
    if p.system.identity && !identity {
        return Err(EliminationError::Unsupported(
            "proof uses identity axioms; enable the identity case".into(),
        ));
    }
    let mut proof = normalize_identity_axioms(p)?;
    let mut disjuncts = vec![conclusion(&proof)?];
    let mut steps: Vec<StepRecord> = Vec::new();
    loop {
        if steps.len() >= MAX_STEPS {
            return Err(EliminationError::StepLimit(MAX_STEPS));
        }
        let stats = check_proof(&proof)
            .map(|r| ProofStats::of_critical(&r.critical()))
            .map_err(EliminationError::Input)?;
        let rs = special_rank(&proof);
        let next = if rs > 0 && rs >= stats.rank {
            special::special_step(&proof, &disjuncts)
        } else if stats.rank > 0 {
            step::critical_step(&proof, &disjuncts)
        } else {
            break;
        };
        let (np, nd, rec) = next.map_err(|e| match e {
            EliminationError::Recheck { error, proof, .. } => EliminationError::Recheck {
                error,
                proof,
                trace: steps.clone(),
            },
            other => other,
        })?;
        proof = np;
        disjuncts = nd;
        steps.push(rec);
    }
    Ok((proof, disjuncts, steps))
}

/// Replaces every maximal ε-term by a fresh variable, the same variable for
/// the same term.
fn abstract_epsilon(p: &Proof, disjuncts: &[Formula]) -> Result<(Proof, Vec<Formula>), EliminationError> {
    if let Some(l) = p.lines.iter().find(|l| {
        matches!(l.just, Justification::Crit(_) | Justification::EqEps | Justification::Ext)
    }) {
        return Err(EliminationError::Invariant(format!("ε-axiom left after elimination: {}", l.formula)));
    }
    if p.hyps.iter().any(|h| h.contains_eps()) {
        return Err(EliminationError::Unsupported("a hypothesis contains ε-terms".into()));
    }
    let mut avoid: BTreeSet<Name> = BTreeSet::new();
    for l in &p.lines {
        avoid.extend(l.formula.free_vars());
    }
    for h in &p.hyps {
        avoid.extend(h.free_vars());
    }
    let mut names: BTreeMap<Term, Term> = BTreeMap::new();
    let mut g = |t: &Term| -> Option<Term> {
        if !t.is_eps() || !t.is_closed_wrt_binders() {
            return None;
        }
        Some(
            names
                .entry(t.clone())
                .or_insert_with(|| {
                    let v = fresh_var(&avoid);
                    avoid.insert(v.clone());
                    Term::Var(v)
                })
                .clone(),
        )
    };
    let mut lines = p.lines.clone();
    for l in &mut lines {
        l.formula = map_formula_terms_deep(&l.formula, &mut g);
    }
    let disjuncts = disjuncts.iter().map(|d| map_formula_terms_deep(d, &mut g)).collect();
    let mut system = p.system.without_epsilon();
    system.restricted_identity = false;
    let out = Proof {
        system,
        hyps: p.hyps.clone(),
        lines,
    };
    check_proof(&out).map_err(|error| EliminationError::Recheck {
        error,
        proof: Box::new(out.clone()),
        trace: Vec::new(),
    })?;
    Ok((out, disjuncts))
}

fn complete(p: &Proof, identity: bool) -> Result<Elimination, EliminationError> {
    let (proof, epsilon_disjuncts, steps) = run(p, identity)?;
    let (proof, disjuncts) = abstract_epsilon(&proof, &epsilon_disjuncts).map_err(|e| match e {
        EliminationError::Recheck { error, proof, .. } => EliminationError::Recheck {
            error,
            proof,
            trace: steps.clone(),
        },
        other => other,
    })?;
    Ok(Elimination {
        proof,
        epsilon_disjuncts,
        disjuncts,
        steps,
    })
}

/// From a proof of an ε-free, quantifier-free formula `E` in the
/// ε-calculus (with identity if `identity` is set or the proof's system
/// has it), an ε-free proof of `E`.
pub fn first_epsilon_theorem(p: &Proof, identity: bool) -> Result<Elimination, EliminationError> {
    let e = conclusion(p)?;
    if e.contains_eps() || e.contains_quantifier() {
        return Err(EliminationError::ConclusionMismatch(format!(
            "the conclusion {e} must be ε-free and quantifier-free"
        )));
    }
    let out = complete(p, identity)?;
    if out.proof.conclusion() != Some(&e) {
        return Err(EliminationError::ConclusionMismatch(format!(
            "elimination produced {} instead of {e}",
            Formula::disjunction(out.disjuncts.clone())
        )));
    }
    Ok(out)
}

/// The ε-abstracted skeleton of `f`: each distinct maximal ε-subterm
/// replaced by a pattern variable `%1, %2, ...`.
pub fn epsilon_skeleton(f: &Formula) -> (Formula, Vec<Name>, Vec<Term>) {
    let mut terms: Vec<Term> = Vec::new();
    let skeleton = map_formula_terms_deep(f, &mut |t| {
        if !t.is_eps() || !t.is_closed_wrt_binders() {
            return None;
        }
        let i = terms.iter().position(|s| s == t).unwrap_or_else(|| {
            terms.push(t.clone());
            terms.len() - 1
        });
        Some(Term::var(&format!("%{}", i + 1)))
    });
    let vars = (1..=terms.len()).map(|i| Name::from(format!("%{i}").as_str())).collect();
    (skeleton, vars, terms)
}

/// From a proof of `E(e1, ..., en)` in the ε-calculus, an ε-free proof of
/// a disjunction of instances `E(t1^j, ..., tn^j)`.
pub fn extended_herbrand(p: &Proof) -> Result<HerbrandResult, EliminationError> {
    let e = conclusion(p)?;
    if e.contains_quantifier() {
        return Err(EliminationError::ConclusionMismatch(format!("the conclusion {e} contains quantifiers")));
    }
    let out = complete(p, p.system.identity)?;
    let (skeleton, vars, _) = epsilon_skeleton(&e);
    let mut witnesses = Vec::new();
    for d in &out.disjuncts {
        let w = match_pattern(&skeleton, &vars, d).ok_or_else(|| {
            EliminationError::Invariant(format!("disjunct {d} is not an instance of {skeleton}"))
        })?;
        witnesses.push(w);
    }
    Ok(HerbrandResult {
        disjuncts: out.disjuncts,
        skeleton,
        pattern_vars: vars,
        witnesses,
        proof: out.proof,
        steps: out.steps,
    })
}
