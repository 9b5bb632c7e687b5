//! Local checking of derivation nodes.

use crate::calculus::recover_critical;
use crate::syntax::{substitute, Binder, Formula, Term};

use super::{Derivation, DerivationError, RuleName, Sequent, SequentSystem};

/// Checks every node of `d` against the rules of `system`.
pub fn check_derivation(d: &Derivation, system: SequentSystem) -> Result<(), DerivationError> {
    let mut path = Vec::new();
    check_node(d, system, &mut path)
}

/// Whether no node of `d` is a cut.
pub fn is_cut_free(d: &Derivation) -> bool {
    d.rule != RuleName::Cut && d.premises.iter().all(is_cut_free)
}

fn check_node(d: &Derivation, system: SequentSystem, path: &mut Vec<usize>) -> Result<(), DerivationError> {
    let fail = |reason: String| DerivationError {
        path: path.clone(),
        reason,
    };
    if !system.allows(d.rule) {
        return Err(fail(format!("rule {} is not a rule of the {system} system", d.rule)));
    }
    local(d).map_err(fail)?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(p, system, path)?;
        path.pop();
    }
    Ok(())
}

fn premise_count(rule: RuleName) -> usize {
    match rule {
        RuleName::Axiom | RuleName::CritAxiom => 0,
        RuleName::AndR | RuleName::OrL | RuleName::Cut | RuleName::Eps0 | RuleName::Eps1 => 2,
        _ => 1,
    }
}

pub(crate) fn is_axiom(s: &Sequent) -> bool {
    s.iter().any(|f| matches!(f, Formula::Not(a) if s.contains(a)))
}

pub(crate) fn is_crit_axiom(s: &Sequent, witness: Option<&Term>) -> bool {
    s.iter().any(|f| {
        let Formula::Not(g) = f else { return false };
        s.iter()
            .any(|h| recover_critical(&Formula::implies((**g).clone(), h.clone()), witness).is_some())
    })
}

/// `A(εx ¬A(x))` for the binder of `∀x A(x)`.
pub(crate) fn forall_witness(b: &Binder) -> Term {
    Term::Eps(Binder {
        hint: b.hint.clone(),
        body: Box::new(Formula::not((*b.body).clone())),
    })
}

/// Tries every formula of `s` as the principal formula: `actives` gives,
/// for a principal formula of the right shape, the formulas each premise
/// adds to the side formulas `Γ`.
fn by_principal(
    s: &Sequent,
    ps: &[&Sequent],
    what: &str,
    actives: impl Fn(&Formula) -> Option<Vec<Vec<Formula>>>,
) -> Result<(), String> {
    for p in s.iter() {
        let Some(acts) = actives(p) else { continue };
        if acts.len() != ps.len() {
            continue;
        }
        for gamma in [s.without(p), s.clone()] {
            if ps.iter().zip(&acts).all(|(q, a)| **q == gamma.with(a.iter().cloned())) {
                return Ok(());
            }
        }
    }
    Err(format!("no {what} formula of the conclusion fits the premises"))
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("missing {what}"))
}

fn local(d: &Derivation) -> Result<(), String> {
    let want = premise_count(d.rule);
    if d.premises.len() != want {
        return Err(format!("{} takes {want} premise(s), found {}", d.rule, d.premises.len()));
    }
    let s = &d.sequent;
    let ps: Vec<&Sequent> = d.premises.iter().map(|p| &p.sequent).collect();
    let data = &d.data;
    match d.rule {
        RuleName::Axiom => {
            if is_axiom(s) {
                Ok(())
            } else {
                Err("not an axiom: no formula occurs together with its negation".into())
            }
        }
        RuleName::CritAxiom => {
            if is_crit_axiom(s, data.witness.as_ref()) {
                Ok(())
            } else {
                Err("not a critical axiom ¬A(t), A(εx A(x))".into())
            }
        }
        RuleName::AndR => by_principal(s, &ps, "conjunction", |f| match f {
            Formula::And(a, b) => Some(vec![vec![(**a).clone()], vec![(**b).clone()]]),
            _ => None,
        }),
        RuleName::AndL => by_principal(s, &ps, "negated conjunction", |f| match f {
            Formula::Not(g) => match &**g {
                Formula::And(a, b) => Some(vec![vec![Formula::not((**a).clone()), Formula::not((**b).clone())]]),
                _ => None,
            },
            _ => None,
        }),
        RuleName::NotNot => by_principal(s, &ps, "double negation", |f| match f {
            Formula::Not(g) => match &**g {
                Formula::Not(a) => Some(vec![vec![(**a).clone()]]),
                _ => None,
            },
            _ => None,
        }),
        RuleName::OrR => by_principal(s, &ps, "disjunction", |f| match f {
            Formula::Or(a, b) => Some(vec![vec![(**a).clone(), (**b).clone()]]),
            _ => None,
        }),
        RuleName::OrL => by_principal(s, &ps, "negated disjunction", |f| match f {
            Formula::Not(g) => match &**g {
                Formula::Or(a, b) => Some(vec![vec![Formula::not((**a).clone())], vec![Formula::not((**b).clone())]]),
                _ => None,
            },
            _ => None,
        }),
        RuleName::ExR => {
            let t = need(&data.witness, "witness")?;
            by_principal(s, &ps, "existential", |f| match f {
                Formula::Exists(b) => Some(vec![vec![b.instantiate(t)]]),
                _ => None,
            })
        }
        RuleName::ExL => by_principal(s, &ps, "negated existential", |f| match f {
            Formula::Not(g) => match &**g {
                Formula::Exists(b) => Some(vec![vec![Formula::not(b.instantiate(&Term::Eps(b.clone())))]]),
                _ => None,
            },
            _ => None,
        }),
        RuleName::AllR => by_principal(s, &ps, "universal", |f| match f {
            Formula::Forall(b) => Some(vec![vec![b.instantiate(&forall_witness(b))]]),
            _ => None,
        }),
        RuleName::AllL => {
            let t = need(&data.witness, "witness")?;
            by_principal(s, &ps, "negated universal", |f| match f {
                Formula::Not(g) => match &**g {
                    Formula::Forall(b) => Some(vec![vec![Formula::not(b.instantiate(t))]]),
                    _ => None,
                },
                _ => None,
            })
        }
        RuleName::Weak => {
            let p = ps[0];
            if p.0.is_subset(&s.0) && s.len() == p.len() + 1 {
                Ok(())
            } else {
                Err("weakening must add exactly one formula".into())
            }
        }
        RuleName::Cut => {
            let a = need(&data.cut, "cut formula")?;
            let na = Formula::not(a.clone());
            let sides = |q: &Sequent, f: &Formula| -> Vec<Sequent> {
                if !q.contains(f) {
                    return Vec::new();
                }
                let mut v = vec![q.without(f)];
                if s.contains(f) {
                    v.push(q.clone());
                }
                v
            };
            for (l, r) in [(ps[0], ps[1]), (ps[1], ps[0])] {
                for pi in sides(l, a) {
                    for lambda in sides(r, &na) {
                        if pi.with(lambda.0.iter().cloned()) == *s {
                            return Ok(());
                        }
                    }
                }
            }
            Err(format!("premises do not form a cut on {a}"))
        }
        RuleName::Eps0 => {
            let e = need(&data.eps, "ε-term")?;
            let b = e.as_eps().ok_or("the ε0 term is not an ε-term")?;
            let t = need(&data.witness, "witness")?;
            let z = need(&data.z, "variable z")?;
            if data.delta.is_empty() {
                return Err("Δ(z) must not be empty".into());
            }
            if s.free_vars().contains(z) {
                return Err(format!("`{z}` occurs in the lower sequent"));
            }
            let zt = Term::Var(z.clone());
            let delta_e: Vec<Formula> = data.delta.iter().map(|f| substitute(f, z, e)).collect();
            if !delta_e.iter().all(|f| s.contains(f)) {
                return Err("Δ(εx A(x)) is not part of the conclusion".into());
            }
            let at = b.instantiate(t);
            let naz = Formula::not(b.instantiate(&zt));
            for gamma in [ps[1].without(&at), ps[1].clone()] {
                if ps[1].contains(&at)
                    && gamma.with(delta_e.iter().cloned()) == *s
                    && *ps[0] == gamma.with(data.delta.iter().cloned()).with([naz.clone()])
                {
                    return Ok(());
                }
            }
            Err("premises do not match Γ, Δ(z), ¬A(z) and Γ, A(t)".into())
        }
        RuleName::Eps1 => {
            let e = need(&data.eps, "ε-term")?;
            let b = e.as_eps().ok_or("the ε1 term is not an ε-term")?;
            let t = need(&data.witness, "witness")?;
            if data.delta.is_empty() {
                return Err("Δ must not be empty".into());
            }
            if !data.delta.iter().all(|f| s.contains(f)) {
                return Err("Δ(εx A(x)) is not part of the conclusion".into());
            }
            let at = b.instantiate(t);
            let nae = Formula::not(b.instantiate(e));
            for gamma in [ps[1].without(&at), ps[1].clone()] {
                if ps[1].contains(&at)
                    && gamma.with(data.delta.iter().cloned()) == *s
                    && *ps[0] == s.with([nae.clone()])
                {
                    return Ok(());
                }
            }
            Err("premises do not match Γ, Δ(εx A(x)), ¬A(εx A(x)) and Γ, A(t)".into())
        }
    }
}
