//! The proof checker and proof statistics.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{degree, eps_subterms, epsilon_type, rank, Binder, Formula, Name, Term};

use super::eq2::{differs_only_by, single_position};
use super::matching::match_instance;
use super::taut::{is_tautology, max_atoms};
use super::{CheckError, CheckErrorKind, Justification, Proof, SystemId};

/// A critical formula `A(t) → A(e)` found in a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalFormula {
    /// Zero-based line index.
    pub line: usize,
    /// The critical ε-term `e = εx A(x)`.
    pub term: Term,
    /// The witness `t`.
    pub witness: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineInfo {
    Plain,
    Critical(CriticalFormula),
    /// A quantifier rule with its eigenvariable.
    Eigen(Name),
}

/// What the checker learned about an accepted proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<LineInfo>,
}

impl CheckReport {
    pub fn critical(&self) -> Vec<CriticalFormula> {
        self.lines
            .iter()
            .filter_map(|l| match l {
                LineInfo::Critical(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn eigenvariables(&self) -> BTreeSet<Name> {
        self.lines
            .iter()
            .filter_map(|l| match l {
                LineInfo::Eigen(x) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }
}

fn err(line: usize, kind: CheckErrorKind) -> CheckError {
    CheckError { line: line + 1, kind }
}

fn bad(line: usize, schema: &str) -> CheckError {
    err(line, CheckErrorKind::BadInstance(schema.to_string()))
}

/// Checks every line of `p` and the eigenvariable conditions.
pub fn check_proof(p: &Proof) -> Result<CheckReport, CheckError> {
    if p.lines.is_empty() {
        return Err(CheckError {
            line: 0,
            kind: CheckErrorKind::Empty,
        });
    }
    for h in &p.hyps {
        language(p.system, h).map_err(|m| CheckError {
            line: 0,
            kind: CheckErrorKind::Language(m),
        })?;
    }
    let mut infos = Vec::with_capacity(p.lines.len());
    for k in 0..p.lines.len() {
        infos.push(check_line(p, k)?);
    }
    for (k, info) in infos.iter().enumerate() {
        if let LineInfo::Eigen(x) = info {
            if p.hyps.iter().any(|h| h.free_vars().contains(x)) {
                return Err(err(
                    k,
                    CheckErrorKind::Eigenvariable(format!("`{x}` occurs free in a hypothesis")),
                ));
            }
            if let Some(m) = (k..p.lines.len()).find(|&m| p.lines[m].formula.free_vars().contains(x)) {
                let place = if m == k {
                    "the conclusion of the rule".to_string()
                } else {
                    format!("line {}", m + 1)
                };
                return Err(err(k, CheckErrorKind::Eigenvariable(format!("`{x}` occurs in {place}"))));
            }
        }
    }
    Ok(CheckReport { lines: infos })
}

/// Rejects symbols the system's language does not have.
fn language(sys: SystemId, f: &Formula) -> Result<(), String> {
    if !sys.epsilon && f.contains_eps() {
        return Err("ε-terms require an ε-calculus".into());
    }
    if !sys.quantifiers && f.contains_quantifier() {
        return Err("quantifiers require a system with quantifier axioms".into());
    }
    if !sys.identity && uses_identity(f) {
        return Err("`=` requires a system with identity".into());
    }
    Ok(())
}

fn uses_identity(f: &Formula) -> bool {
    fn term(t: &Term) -> bool {
        match t {
            Term::Var(_) | Term::Bound(_) => false,
            Term::App(_, args) => args.iter().any(term),
            Term::Eps(b) => uses_identity(&b.body),
        }
    }
    match f {
        Formula::Top | Formula::Bottom => false,
        Formula::Eq(..) => true,
        Formula::Atom(_, args) => args.iter().any(term),
        Formula::Not(a) => uses_identity(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            uses_identity(a) || uses_identity(b)
        }
        Formula::Exists(b) | Formula::Forall(b) => uses_identity(&b.body),
    }
}

fn require(k: usize, on: bool, what: &'static str, sys: SystemId) -> Result<(), CheckError> {
    if on {
        Ok(())
    } else {
        Err(err(k, CheckErrorKind::Disabled(what, sys)))
    }
}

fn premise(p: &Proof, k: usize, i: usize) -> Result<&Formula, CheckError> {
    if i >= k {
        return Err(err(k, CheckErrorKind::DanglingReference(i + 1)));
    }
    Ok(&p.lines[i].formula)
}

fn check_line(p: &Proof, k: usize) -> Result<LineInfo, CheckError> {
    let sys = p.system;
    let f = &p.lines[k].formula;
    language(sys, f).map_err(|m| err(k, CheckErrorKind::Language(m)))?;
    match &p.lines[k].just {
        Justification::Hyp => {
            if !p.hyps.contains(f) {
                return Err(bad(k, "a hypothesis"));
            }
        }
        Justification::Taut => match is_tautology(f) {
            Ok(true) => {}
            Ok(false) => return Err(bad(k, "a tautology")),
            Err(n) => return Err(err(k, CheckErrorKind::TooManyAtoms(n, max_atoms()))),
        },
        Justification::MP(i, j) => {
            let a = premise(p, k, *i)?;
            let b = premise(p, k, *j)?;
            let fits = |imp: &Formula, ante: &Formula| matches!(imp, Formula::Implies(x, y) if **x == *ante && **y == *f);
            if !fits(a, b) && !fits(b, a) {
                return Err(bad(k, "modus ponens"));
            }
        }
        Justification::Eq1 => {
            require(k, sys.identity, "(=1)", sys)?;
            if !matches!(f, Formula::Eq(a, b) if a == b) {
                return Err(bad(k, "(=1)"));
            }
        }
        Justification::Eq2 => {
            require(k, sys.identity && !sys.restricted_identity, "(=2)", sys)?;
            let ok = match f {
                Formula::Implies(h, c) => match (&**h, &**c) {
                    (Formula::Eq(t, u), Formula::Iff(l, r) | Formula::Implies(l, r)) => differs_only_by(l, r, t, u),
                    _ => false,
                },
                _ => false,
            };
            if !ok {
                return Err(bad(k, "(=2)"));
            }
        }
        Justification::Eq2P => {
            require(k, sys.identity, "(=2')", sys)?;
            if !is_eq2p(f) {
                return Err(bad(k, "(=2')"));
            }
        }
        Justification::Eq2PP => {
            require(k, sys.identity, "(=2'')", sys)?;
            let ok = match f {
                Formula::Implies(h, c) => match (&**h, &**c) {
                    (Formula::Eq(t, u), Formula::Eq(Term::App(g, xs), Term::App(g2, ys))) => {
                        g == g2 && single_position(xs, ys, t, u)
                    }
                    _ => false,
                },
                _ => false,
            };
            if !ok {
                return Err(bad(k, "(=2'')"));
            }
        }
        Justification::EqEps => {
            require(k, sys.identity && sys.epsilon, "(=eps)", sys)?;
            if !is_eq_eps(f) {
                return Err(bad(k, "(=eps)"));
            }
        }
        Justification::Crit(w) => {
            require(k, sys.epsilon, "critical formulas", sys)?;
            return match recover_critical(f, w.as_ref()) {
                Some((term, witness)) => Ok(LineInfo::Critical(CriticalFormula { line: k, term, witness })),
                None => Err(bad(k, "a critical formula")),
            };
        }
        Justification::Ext => {
            require(k, sys.extensionality, "(ext)", sys)?;
            if !is_ext(f) {
                return Err(bad(k, "(ext)"));
            }
        }
        Justification::AxExists => {
            require(k, sys.quantifiers, "the ∃ axiom", sys)?;
            let ok = matches!(f, Formula::Implies(l, r)
                if matches!(&**r, Formula::Exists(b) if match_instance(b, l).is_some()));
            if !ok {
                return Err(bad(k, "the ∃ axiom"));
            }
        }
        Justification::AxForall => {
            require(k, sys.quantifiers, "the ∀ axiom", sys)?;
            let ok = matches!(f, Formula::Implies(l, r)
                if matches!(&**l, Formula::Forall(b) if match_instance(b, r).is_some()));
            if !ok {
                return Err(bad(k, "the ∀ axiom"));
            }
        }
        Justification::RExists(i) => {
            require(k, sys.quantifiers, "the ∃ rule", sys)?;
            let prem = premise(p, k, *i)?;
            let x = match (f, prem) {
                (Formula::Implies(q, b), Formula::Implies(a, b2)) if b == b2 => match &**q {
                    Formula::Exists(binder) => eigen_of(binder, a),
                    _ => None,
                },
                _ => None,
            };
            return x.map(LineInfo::Eigen).ok_or_else(|| bad(k, "the ∃ rule"));
        }
        Justification::RForall(i) => {
            require(k, sys.quantifiers, "the ∀ rule", sys)?;
            let prem = premise(p, k, *i)?;
            let x = match (f, prem) {
                (Formula::Implies(b, q), Formula::Implies(b2, a)) if b == b2 => match &**q {
                    Formula::Forall(binder) => eigen_of(binder, a),
                    _ => None,
                },
                _ => None,
            };
            return x.map(LineInfo::Eigen).ok_or_else(|| bad(k, "the ∀ rule"));
        }
    }
    Ok(LineInfo::Plain)
}

fn eigen_of(b: &Binder, premise: &Formula) -> Option<Name> {
    match match_instance(b, premise)? {
        Some(Term::Var(x)) => Some(x),
        _ => None,
    }
}

pub(crate) fn is_eq2p(f: &Formula) -> bool {
    match f {
        Formula::Implies(h, c) => match (&**h, &**c) {
            (Formula::Eq(t, u), Formula::Implies(l, r)) => match (&**l, &**r) {
                (Formula::Atom(p, xs), Formula::Atom(q, ys)) => p == q && single_position(xs, ys, t, u),
                (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
                    single_position(&[a1.clone(), b1.clone()], &[a2.clone(), b2.clone()], t, u)
                }
                _ => false,
            },
            _ => false,
        },
        _ => false,
    }
}

pub(crate) fn is_eq_eps(f: &Formula) -> bool {
    match f {
        Formula::Implies(h, c) => match (&**h, &**c) {
            (Formula::Eq(t, u), Formula::Eq(e1, e2)) if e1.is_eps() && e2.is_eps() => {
                let (ty1, p1) = epsilon_type(e1);
                let (ty2, p2) = epsilon_type(e2);
                ty1 == ty2 && single_position(&p1, &p2, t, u)
            }
            _ => false,
        },
        _ => false,
    }
}

fn is_ext(f: &Formula) -> bool {
    let Formula::Implies(h, c) = f else { return false };
    let (Formula::Iff(l, r), Formula::Eq(e1, e2)) = (&**h, &**c) else {
        return false;
    };
    let (Some(a), Some(b)) = (e1.as_eps(), e2.as_eps()) else {
        return false;
    };
    let d = Term::Eps(Binder {
        hint: a.hint.clone(),
        body: Box::new(Formula::not(Formula::Iff(a.body.clone(), b.body.clone()))),
    });
    **l == a.instantiate(&d) && **r == b.instantiate(&d)
}

/// Recovers `(e, t)` such that `f` is `A(t) → A(e)` with `e = εx A(x)`.
pub(crate) fn recover_critical(f: &Formula, witness: Option<&Term>) -> Option<(Term, Term)> {
    let Formula::Implies(l, r) = f else { return None };
    for e in eps_subterms(r) {
        let b = e.as_eps().expect("ε-subterm");
        if b.instantiate(&e) != **r {
            continue;
        }
        match witness {
            Some(t) => {
                if t.is_closed_wrt_binders() && b.instantiate(t) == **l {
                    return Some((e.clone(), t.clone()));
                }
            }
            None => {
                if let Some(t) = match_instance(b, l) {
                    let t = t.unwrap_or_else(|| e.clone());
                    return Some((e.clone(), t));
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RankStats {
    /// `deg(π, r)`: largest degree of a critical ε-term of rank r.
    pub degree: usize,
    /// `o(π, r)`: number of critical ε-terms of rank r, up to ≡.
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProofStats {
    /// Distinct critical ε-terms in order of first occurrence.
    pub critical_terms: Vec<Term>,
    /// `rk(π)`: largest rank of a critical ε-term, 0 if there is none.
    pub rank: usize,
    pub by_rank: BTreeMap<usize, RankStats>,
}

impl ProofStats {
    pub fn order(&self, r: usize) -> usize {
        self.by_rank.get(&r).map_or(0, |s| s.order)
    }

    pub fn degree(&self, r: usize) -> usize {
        self.by_rank.get(&r).map_or(0, |s| s.degree)
    }

    pub(crate) fn of_critical(crit: &[CriticalFormula]) -> ProofStats {
        let mut stats = ProofStats::default();
        let mut seen = BTreeSet::new();
        for c in crit {
            if seen.insert(c.term.clone()) {
                stats.critical_terms.push(c.term.clone());
                let r = rank(&c.term);
                stats.rank = stats.rank.max(r);
                let entry = stats.by_rank.entry(r).or_default();
                entry.order += 1;
                entry.degree = entry.degree.max(degree(&c.term));
            }
        }
        stats
    }
}

pub fn critical_formulas(p: &Proof) -> Result<Vec<CriticalFormula>, CheckError> {
    Ok(check_proof(p)?.critical())
}

/// Rank, degree and order statistics of a proof that checks.
pub fn proof_stats(p: &Proof) -> Result<ProofStats, CheckError> {
    Ok(ProofStats::of_critical(&critical_formulas(p)?))
}
