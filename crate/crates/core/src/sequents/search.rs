//! Bounded backward search for cut-free derivations.
//!
//! Every rule is applied with `Γ` equal to the whole conclusion, so
//! premises are supersets of the goal. Witness terms come from a fixed
//! finite universe. The result is advisory: exhaustion at some depth does
//! not show that no derivation exists.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{eps_subterms, fresh_var, replace_term, visit_formula_terms, Formula, Term};

use super::check::{forall_witness, is_axiom, is_crit_axiom};
use super::{Derivation, RuleData, RuleName, Sequent, SequentSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of goal sequents visited.
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_nodes: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Derivation),
    /// Every cut-free candidate up to `depth` failed; `nodes` goals visited.
    Exhausted { depth: usize, nodes: usize },
    /// The node budget ran out before the space was explored.
    ResourceExceeded { nodes: usize },
}

/// Closed subterms of the sequent, ε-terms included.
pub fn default_universe(s: &Sequent) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in s.iter() {
        visit_formula_terms(f, &mut |t| {
            if t.is_closed_wrt_binders() && seen.insert(t.clone()) {
                out.push(t.clone());
            }
        });
    }
    out
}

struct Budget;

struct Search<'a> {
    system: SequentSystem,
    universe: &'a [Term],
    limits: SearchLimits,
    nodes: usize,
    /// Largest depth at which a goal is known to fail.
    failed: HashMap<Sequent, usize>,
}

/// Depth-first search for a cut-free derivation of `s` with at most
/// `depth` rule applications on every branch.
pub fn bounded_cutfree_search(
    s: &Sequent,
    system: SequentSystem,
    depth: usize,
    universe: &[Term],
    limits: SearchLimits,
) -> SearchOutcome {
    let mut search = Search {
        system,
        universe,
        limits,
        nodes: 0,
        failed: HashMap::new(),
    };
    match search.prove(s, depth) {
        Ok(Some(d)) => SearchOutcome::Found(d),
        Ok(None) => SearchOutcome::Exhausted {
            depth,
            nodes: search.nodes,
        },
        Err(Budget) => SearchOutcome::ResourceExceeded { nodes: search.nodes },
    }
}

/// One backward rule application: premises and node data.
struct Step {
    rule: RuleName,
    data: RuleData,
    premises: Vec<Sequent>,
}

impl Search<'_> {
    fn prove(&mut self, s: &Sequent, depth: usize) -> Result<Option<Derivation>, Budget> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Budget);
        }
        if is_axiom(s) {
            return Ok(Some(Derivation::leaf(RuleName::Axiom, s.clone())));
        }
        if self.system == SequentSystem::Maehara && is_crit_axiom(s, None) {
            return Ok(Some(Derivation::leaf(RuleName::CritAxiom, s.clone())));
        }
        if depth == 0 || self.failed.get(s).is_some_and(|&d| d >= depth) {
            return Ok(None);
        }
        'steps: for step in self.steps(s) {
            if step.premises.iter().any(|p| p == s) {
                continue;
            }
            let mut subs = Vec::with_capacity(step.premises.len());
            for p in &step.premises {
                match self.prove(p, depth - 1)? {
                    Some(d) => subs.push(d),
                    None => continue 'steps,
                }
            }
            return Ok(Some(Derivation::node(step.rule, s.clone(), step.data, subs)));
        }
        self.failed.insert(s.clone(), depth);
        Ok(None)
    }

    fn steps(&self, s: &Sequent) -> Vec<Step> {
        let mut out = Vec::new();
        let plain = |rule, premises: Vec<Vec<Formula>>| Step {
            rule,
            data: RuleData::default(),
            premises: premises.into_iter().map(|fs| s.with(fs)).collect(),
        };
        let leisenring = self.system == SequentSystem::Leisenring;
        for f in s.iter() {
            match f {
                Formula::And(a, b) => out.push(plain(RuleName::AndR, vec![vec![(**a).clone()], vec![(**b).clone()]])),
                Formula::Or(a, b) => out.push(plain(RuleName::OrR, vec![vec![(**a).clone(), (**b).clone()]])),
                Formula::Exists(b) if leisenring => {
                    for t in self.universe {
                        out.push(Step {
                            rule: RuleName::ExR,
                            data: RuleData {
                                witness: Some(t.clone()),
                                ..RuleData::default()
                            },
                            premises: vec![s.with([b.instantiate(t)])],
                        });
                    }
                }
                Formula::Forall(b) if leisenring => {
                    out.push(plain(RuleName::AllR, vec![vec![b.instantiate(&forall_witness(b))]]));
                }
                Formula::Not(g) => match &**g {
                    Formula::And(a, b) => out.push(plain(
                        RuleName::AndL,
                        vec![vec![Formula::not((**a).clone()), Formula::not((**b).clone())]],
                    )),
                    Formula::Not(a) => out.push(plain(RuleName::NotNot, vec![vec![(**a).clone()]])),
                    Formula::Or(a, b) => out.push(plain(
                        RuleName::OrL,
                        vec![vec![Formula::not((**a).clone())], vec![Formula::not((**b).clone())]],
                    )),
                    Formula::Exists(b) if leisenring => out.push(plain(
                        RuleName::ExL,
                        vec![vec![Formula::not(b.instantiate(&Term::Eps(b.clone())))]],
                    )),
                    Formula::Forall(b) if leisenring => {
                        for t in self.universe {
                            out.push(Step {
                                rule: RuleName::AllL,
                                data: RuleData {
                                    witness: Some(t.clone()),
                                    ..RuleData::default()
                                },
                                premises: vec![s.with([Formula::not(b.instantiate(t))])],
                            });
                        }
                    }
                    _ => {}
                },
                _ => {}
            }
        }
        match self.system {
            SequentSystem::Wessels => self.eps0_steps(s, &mut out),
            SequentSystem::MintsYasuhara => self.eps1_steps(s, &mut out),
            _ => {}
        }
        out
    }

    fn eps_terms(s: &Sequent) -> Vec<Term> {
        let mut seen = BTreeSet::new();
        s.iter()
            .flat_map(eps_subterms)
            .filter(|e| seen.insert(e.clone()))
            .collect()
    }

    /// ε0 with `Δ` all formulas mentioning `e`, abstracted to a fresh `z`.
    fn eps0_steps(&self, s: &Sequent, out: &mut Vec<Step>) {
        let mut avoid = s.free_vars();
        for t in self.universe {
            avoid.extend(t.free_vars());
        }
        let z = fresh_var(&avoid);
        let zt = Term::Var(z.clone());
        for e in Self::eps_terms(s) {
            let b = e.as_eps().expect("ε-term");
            let delta: Vec<Formula> = s
                .iter()
                .filter(|f| mentions(f, &e))
                .map(|f| replace_term(f, &e, &zt))
                .collect();
            if delta.is_empty() {
                continue;
            }
            for t in self.universe {
                out.push(Step {
                    rule: RuleName::Eps0,
                    data: RuleData {
                        witness: Some(t.clone()),
                        eps: Some(e.clone()),
                        z: Some(z.clone()),
                        delta: delta.clone(),
                        ..RuleData::default()
                    },
                    premises: vec![
                        s.with(delta.iter().cloned()).with([Formula::not(b.instantiate(&zt))]),
                        s.with([b.instantiate(t)]),
                    ],
                });
            }
        }
    }

    /// ε1 with `Δ` all formulas mentioning `e`.
    fn eps1_steps(&self, s: &Sequent, out: &mut Vec<Step>) {
        for e in Self::eps_terms(s) {
            let b = e.as_eps().expect("ε-term");
            let delta: Vec<Formula> = s.iter().filter(|f| mentions(f, &e)).cloned().collect();
            if delta.is_empty() {
                continue;
            }
            for t in self.universe {
                out.push(Step {
                    rule: RuleName::Eps1,
                    data: RuleData {
                        witness: Some(t.clone()),
                        eps: Some(e.clone()),
                        delta: delta.clone(),
                        ..RuleData::default()
                    },
                    premises: vec![s.with([Formula::not(b.instantiate(&e))]), s.with([b.instantiate(t)])],
                });
            }
        }
    }
}

fn mentions(f: &Formula, e: &Term) -> bool {
    let mut hit = false;
    visit_formula_terms(f, &mut |t| hit |= t == e);
    hit
}
