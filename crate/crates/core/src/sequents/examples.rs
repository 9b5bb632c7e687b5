//! Worked derivations and semantic claims about the sequent systems.

use std::fmt;

use crate::semantics::{
    check_consequence, satisfies, Assignment, CheckOptions, Choice, ConsequenceKind, ExtChoiceFunction,
    IntChoiceOperator, Mode, Structure,
};
use crate::syntax::{epsilon_type, parse_formula, parse_term, Signature};
use crate::translation::epsilon_translate;

use super::{
    bounded_cutfree_search, check_derivation, default_universe, is_cut_free, parse_derivation, parse_sequent,
    Derivation, SearchLimits, SearchOutcome, SequentSystem,
};

/// Depth used for the bounded cut-free search claims.
pub const SEARCH_DEPTH: usize = 8;

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub system: SequentSystem,
    pub summary: &'static str,
    /// The derivation in text form, if the example has one.
    pub source: Option<&'static str>,
}

impl Example {
    pub fn derivation(&self) -> Option<Derivation> {
        self.source
            .map(|src| parse_derivation(src).expect("built-in derivations parse"))
    }
}

/// Outcome of running an example: one named boolean per claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleReport {
    pub name: String,
    pub checks: Vec<(String, bool)>,
}

impl ExampleReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, if self.ok() { "ok" } else { "FAILED" })?;
        for (claim, ok) in &self.checks {
            write!(f, "\n  [{}] {claim}", if *ok { "ok" } else { "FAILED" })?;
        }
        Ok(())
    }
}

const LEISENRING_CRIT: &str = "\
rule cut [cut: ex x (P(x))] {
  |- ~P(t), P(eps x (P(x)))
  ; rule ex-r [witness: t] { |- ~P(t), ex x (P(x)) ; rule axiom { |- ~P(t), P(t) } }
  ; rule ex-l { |- ~ex x (P(x)), P(eps x (P(x))) ; rule axiom { |- ~P(eps x (P(x))), P(eps x (P(x))) } }
}";

const MAEHARA_CONVERSE: &str = "\
rule cut [cut: ~P(t)] {
  |- ~P(eps x (~P(x))), P(t)
  ; rule crit-axiom { |- ~~P(t), ~P(eps x (~P(x))) }
  ; rule axiom { |- ~P(t), P(t) }
}";

const WESSELS_EXAMPLE: &str = "\
rule cut [cut: P(eps x (~(P(x) | Q(x)))) | Q(eps x (~(P(x) | Q(x))))] {
  |- ~P(eps x (~(P(x) | Q(x)))), P(t) | Q(t)
  ; rule cut [cut: ~(P(t) | Q(t))] {
      |- ~(P(eps x (~(P(x) | Q(x)))) | Q(eps x (~(P(x) | Q(x))))), P(t) | Q(t)
      ; rule crit-axiom { |- ~~(P(t) | Q(t)), ~(P(eps x (~(P(x) | Q(x)))) | Q(eps x (~(P(x) | Q(x))))) }
      ; rule axiom { |- ~(P(t) | Q(t)), P(t) | Q(t) }
    }
  ; rule or-r {
      |- ~P(eps x (~(P(x) | Q(x)))), P(eps x (~(P(x) | Q(x)))) | Q(eps x (~(P(x) | Q(x))))
      ; rule axiom { |- ~P(eps x (~(P(x) | Q(x)))), P(eps x (~(P(x) | Q(x)))), Q(eps x (~(P(x) | Q(x)))) }
    }
}";

const WESSELS_CRIT: &str = "\
rule eps0 [eps: eps x (P(x))] [witness: t] [z: z] [delta: P(z)] {
  |- ~P(t), P(eps x (P(x)))
  ; rule w { |- ~P(t), P(z), ~P(z) ; rule axiom { |- P(z), ~P(z) } }
  ; rule axiom { |- ~P(t), P(t) }
}";

const MINTS_YASUHARA_CRIT: &str = "\
rule eps1 [eps: eps x (P(x))] [witness: t] [delta: P(eps x (P(x)))] {
  |- ~P(t), P(eps x (P(x)))
  ; rule w {
      |- ~P(t), P(eps x (P(x))), ~P(eps x (P(x)))
      ; rule axiom { |- P(eps x (P(x))), ~P(eps x (P(x))) }
    }
  ; rule axiom { |- ~P(t), P(t) }
}";

/// `S1 = ¬Q(εx P(x,w)), Q(εx P(x, εy Q(εu P(u,y))))`, derived by ε0 on
/// `εy Q(εu P(u,y))` with `Δ(z) = Q(εx P(x,z))`.
const WESSELS_LEMMA_S1: &str = "\
rule eps0 [eps: eps y (Q(eps u (P(u, y))))] [witness: w] [z: z] [delta: Q(eps x (P(x, z)))] {
  |- ~Q(eps x (P(x, w))), Q(eps x (P(x, eps y (Q(eps u (P(u, y)))))))
  ; rule axiom { |- ~Q(eps x (P(x, w))), Q(eps x (P(x, z))), ~Q(eps u (P(u, z))) }
  ; rule axiom { |- ~Q(eps x (P(x, w))), Q(eps u (P(u, w))) }
}";

const WESSELS_LEMMA_S2: &str = "|- ~Q(eps x (P(x, w))), Q(z), ~P(z, eps y (Q(eps u (P(u, y)))))";

const PLATO: &str = "ex x (ex y (P(y)) -> P(x))";

pub fn builtin_examples() -> Vec<Example> {
    vec![
        Example {
            name: "leisenring-crit",
            system: SequentSystem::Leisenring,
            summary: "critical formula ¬A(t), A(εx A(x)) via a cut on ∃x A(x); no cut-free proof found",
            source: Some(LEISENRING_CRIT),
        },
        Example {
            name: "maehara-converse",
            system: SequentSystem::Maehara,
            summary: "converse ¬A(εx ¬A(x)), A(t) via a cut; no cut-free proof found",
            source: Some(MAEHARA_CONVERSE),
        },
        Example {
            name: "wessels-example",
            system: SequentSystem::Maehara,
            summary: "¬A(e), A(t) ∨ B(t) for e = εx ¬(A(x) ∨ B(x)) via two cuts",
            source: Some(WESSELS_EXAMPLE),
        },
        Example {
            name: "wessels-crit",
            system: SequentSystem::Wessels,
            summary: "critical formula by the rule ε0",
            source: Some(WESSELS_CRIT),
        },
        Example {
            name: "mints-yasuhara-crit",
            system: SequentSystem::MintsYasuhara,
            summary: "critical formula by the rule ε1",
            source: Some(MINTS_YASUHARA_CRIT),
        },
        Example {
            name: "wessels-lemma-countermodel",
            system: SequentSystem::Wessels,
            summary: "S1 is derivable but S2, its image under the lemma, is falsified in a two-element model",
            source: Some(WESSELS_LEMMA_S1),
        },
        Example {
            name: "plato",
            system: SequentSystem::Leisenring,
            summary: "the ε-translation of ∃x(∃y A(y) → A(x)) is generically valid",
            source: None,
        },
    ]
}

pub fn example_names() -> Vec<&'static str> {
    builtin_examples().iter().map(|e| e.name).collect()
}

/// Runs every claim of the named example.
pub fn run_example(name: &str) -> Option<ExampleReport> {
    let ex = builtin_examples().into_iter().find(|e| e.name == name)?;
    let mut checks = Vec::new();
    if let Some(d) = ex.derivation() {
        let checked = check_derivation(&d, ex.system);
        checks.push((
            format!("derivation checks in {}", ex.system),
            checked.is_ok(),
        ));
        let cut_free = is_cut_free(&d);
        match ex.name {
            "leisenring-crit" | "maehara-converse" | "wessels-example" => {
                checks.push(("derivation uses cut".into(), !cut_free));
            }
            _ => checks.push(("derivation is cut-free".into(), cut_free)),
        }
        if matches!(ex.name, "leisenring-crit" | "maehara-converse") {
            let outcome = bounded_cutfree_search(
                &d.sequent,
                ex.system,
                SEARCH_DEPTH,
                &default_universe(&d.sequent),
                SearchLimits::default(),
            );
            checks.push((
                format!("bounded cut-free search exhausted at depth {SEARCH_DEPTH}"),
                matches!(outcome, SearchOutcome::Exhausted { .. }),
            ));
        }
    }
    match ex.name {
        "wessels-lemma-countermodel" => wessels_lemma_claims(&mut checks),
        "plato" => plato_claims(&mut checks),
        _ => {}
    }
    Some(ExampleReport {
        name: ex.name.into(),
        checks,
    })
}

fn generically_valid(f: &crate::syntax::Formula, max_domain: usize, mode: Mode) -> bool {
    check_consequence(ConsequenceKind::GenericValidity, &[], f, CheckOptions { max_domain, mode })
        .is_ok_and(|v| v.holds())
}

fn wessels_lemma_claims(checks: &mut Vec<(String, bool)>) {
    let s1 = parse_derivation(WESSELS_LEMMA_S1).expect("S1 parses").sequent;
    let s2 = parse_sequent(WESSELS_LEMMA_S2).expect("S2 parses");
    checks.push((
        "S1 is generically valid on domains up to 2 (intensional)".into(),
        generically_valid(&s1.as_formula(), 2, Mode::Intensional),
    ));
    checks.push((
        "S2 is false in the reference model".into(),
        reference_model_falsifies(&s2.as_formula()).unwrap_or(false),
    ));
    checks.push((
        "S2 is not generically valid on domains up to 2 (intensional)".into(),
        !generically_valid(&s2.as_formula(), 2, Mode::Intensional),
    ));
}

/// Domain `{0, 1}`, `Q = {0}`,
/// `P = {(0,1), (1,1)}`, `z = w = 1`. The operator chooses least elements
/// except that `εy Q(εu P(u,y))` picks 1 from `{0, 1}`.
fn reference_model_falsifies(s2: &crate::syntax::Formula) -> Option<bool> {
    let sig = Signature::of_formulas([s2]).ok()?;
    let mut m = Structure::new(&sig, 2).ok()?;
    m.set_predicate("Q", &[&[0]]).ok()?;
    m.set_predicate("P", &[&[0, 1], &[1, 1]]).ok()?;
    let mut psi = IntChoiceOperator::constant(ExtChoiceFunction::least(2));
    let e = parse_term("eps y (Q(eps u (P(u, y))))").ok()?;
    let (ty, params) = epsilon_type(&e);
    debug_assert!(params.is_empty());
    psi.insert(ty, Vec::new(), ExtChoiceFunction::new(2, vec![0, 0, 1, 1]).ok()?)
        .ok()?;
    let s = Assignment::new([("z", 1), ("w", 1)]);
    Some(!satisfies(&m, Choice::Int(&psi), &s, s2).ok()?)
}

fn plato_claims(checks: &mut Vec<(String, bool)>) {
    let f = epsilon_translate(&parse_formula(PLATO).expect("parses"));
    checks.push((
        format!("{f} is generically valid on domains up to 3"),
        generically_valid(&f, 3, Mode::Extensional),
    ));
}
