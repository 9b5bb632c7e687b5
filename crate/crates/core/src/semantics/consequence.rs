//! Truth notions and consequence relations, decided by exhaustive search
//! over all structures up to a domain bound, all assignments to the free
//! variables, and all choice functions (or intensional operators).

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::syntax::{Formula, Signature};

use super::choice::{for_all_choices, ChoiceKey, ChoiceWitness, PartialChoice};
use super::eval::{Assignment, Choice, Program};
use super::model::{tuple_at, Structure, StructureSpace, SymbolTable};
use super::{Mode, SemanticsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConsequenceKind {
    /// For all M, Φ, s: if M, Φ, s ⊨ Γ then M, Φ, s ⊨ A.
    Local,
    /// For all M, Φ: if M, Φ ⊨ Γ then M, Φ ⊨ A.
    Truth,
    /// For all M, s: if M, s ⊨ᵍ Γ then M ⊨ A.
    Generic,
    /// For all M: if M ⊨ Γ then M ⊨ A.
    GenericValidity,
}

impl std::str::FromStr for ConsequenceKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "local" => Ok(Self::Local),
            "truth" => Ok(Self::Truth),
            "generic" => Ok(Self::Generic),
            "generic-validity" => Ok(Self::GenericValidity),
            _ => Err(format!("unknown consequence kind `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_domain: usize,
    pub mode: Mode,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_domain: 3,
            mode: Mode::Extensional,
        }
    }
}

/// A falsifying situation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub structure: Structure,
    pub choice: ChoiceWitness,
    /// The assignment under which the conclusion fails.
    pub assignment: Assignment,
    /// For generic consequence, the assignment at which the hypotheses hold
    /// for every choice function.
    pub hypothesis_assignment: Option<Assignment>,
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain size: {}", self.structure.size)?;
        write!(f, "{}", self.structure)?;
        writeln!(f, "choices:")?;
        writeln!(f, "{}", self.choice)?;
        if let Some(h) = &self.hypothesis_assignment {
            writeln!(f, "hypotheses hold generically at: {h}")?;
        }
        write!(f, "assignment: {}", self.assignment)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Countermodel(Box<Countermodel>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Compiled hypotheses (indices `0..n`) and conclusion (index `n`).
struct Problem {
    prog: Program,
    hyps: usize,
}

impl Problem {
    fn assignments(&self, k: usize) -> impl Iterator<Item = Vec<usize>> {
        let n = self.prog.free_vars.len();
        let total = k.pow(n as u32);
        (0..total).map(move |i| tuple_at(i, n, k))
    }

    fn assignment(&self, values: &[usize]) -> Assignment {
        Assignment {
            values: self.prog.free_vars.iter().cloned().zip(values.iter().copied()).collect(),
            default: 0,
        }
    }

    fn sat(&self, m: &Structure, p: &mut PartialChoice, values: &[usize], i: usize) -> Result<bool, ChoiceKey> {
        let mut env = self.prog.env(values);
        self.prog.satisfies(m, &mut *p, &mut env, i)
    }

    fn hyps_hold(&self, m: &Structure, p: &mut PartialChoice, values: &[usize]) -> Result<bool, ChoiceKey> {
        for i in 0..self.hyps {
            if !self.sat(m, p, values, i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn witness(&self, m: &Structure, p: &PartialChoice) -> ChoiceWitness {
        ChoiceWitness::from_partial(p, &self.prog.types, m.size)
    }

    fn counter(&self, m: &Structure, p: &PartialChoice, values: &[usize], hyp: Option<&[usize]>) -> Box<Countermodel> {
        Box::new(Countermodel {
            structure: m.clone(),
            choice: self.witness(m, p),
            assignment: self.assignment(values),
            hypothesis_assignment: hyp.map(|h| self.assignment(h)),
        })
    }

    /// First assignment at which the conclusion fails for some choice, with
    /// the failing choices.
    fn invalidity(&self, m: &Structure) -> Option<(PartialChoice, Vec<usize>)> {
        let concl = self.hyps;
        self.assignments(m.size).find_map(|s| {
            for_all_choices(m.size, &mut |p| self.sat(m, p, &s, concl)).map(|p| (p, s))
        })
    }

    fn check(&self, kind: ConsequenceKind, m: &Structure) -> Option<Box<Countermodel>> {
        let k = m.size;
        let concl = self.hyps;
        match kind {
            ConsequenceKind::Local => self.assignments(k).find_map(|s| {
                for_all_choices(k, &mut |p| Ok(!self.hyps_hold(m, p, &s)? || self.sat(m, p, &s, concl)?))
                    .map(|p| self.counter(m, &p, &s, None))
            }),
            ConsequenceKind::Truth => {
                let all: Vec<Vec<usize>> = self.assignments(k).collect();
                let test = |p: &mut PartialChoice| -> Result<Option<usize>, ChoiceKey> {
                    for s in &all {
                        if !self.hyps_hold(m, p, s)? {
                            return Ok(None);
                        }
                    }
                    for (i, s) in all.iter().enumerate() {
                        if !self.sat(m, p, s, concl)? {
                            return Ok(Some(i));
                        }
                    }
                    Ok(None)
                };
                let mut p = for_all_choices(k, &mut |p| test(p).map(|r| r.is_none()))?;
                let i = test(&mut p).ok().flatten().expect("failing branch replays");
                Some(self.counter(m, &p, &all[i], None))
            }
            ConsequenceKind::Generic => {
                let hyp = self
                    .assignments(k)
                    .find(|s| for_all_choices(k, &mut |p| self.hyps_hold(m, p, s)).is_none())?;
                let (p, s) = self.invalidity(m)?;
                Some(self.counter(m, &p, &s, Some(&hyp)))
            }
            ConsequenceKind::GenericValidity => {
                let valid_hyps = self
                    .assignments(k)
                    .all(|s| for_all_choices(k, &mut |p| self.hyps_hold(m, p, &s)).is_none());
                if !valid_hyps {
                    return None;
                }
                let (p, s) = self.invalidity(m)?;
                Some(self.counter(m, &p, &s, None))
            }
        }
    }
}

fn problem(gamma: &[Formula], a: &Formula, mode: Mode) -> Result<(Problem, Arc<SymbolTable>), SemanticsError> {
    let mut all: Vec<Formula> = gamma.to_vec();
    all.push(a.clone());
    let sig = Signature::of_formulas(&all).map_err(|e| SemanticsError::Syntax(e.to_string()))?;
    let symbols = Arc::new(SymbolTable::new(&sig));
    let prog = Program::compile(symbols.clone(), &all, &[], mode)?;
    Ok((
        Problem {
            prog,
            hyps: gamma.len(),
        },
        symbols,
    ))
}

/// Decides `Γ ⊨ A` for the given kind over every structure with domain
/// size `1..=max_domain`. The first countermodel in enumeration order is
/// returned.
pub fn check_consequence(
    kind: ConsequenceKind,
    gamma: &[Formula],
    a: &Formula,
    opts: CheckOptions,
) -> Result<Verdict, SemanticsError> {
    let (prob, symbols) = problem(gamma, a, opts.mode)?;
    for k in 1..=opts.max_domain {
        let space = StructureSpace::with_symbols(symbols.clone(), k)?;
        let found = (0..space.count() as u64)
            .into_par_iter()
            .find_map_first(|i| prob.check(kind, &space.get(i as u128)));
        if let Some(c) = found {
            return Ok(Verdict::Countermodel(c));
        }
    }
    Ok(Verdict::Holds)
}

/// Consequence checked within one given structure only.
pub fn check_consequence_in(
    kind: ConsequenceKind,
    m: &Structure,
    gamma: &[Formula],
    a: &Formula,
    mode: Mode,
) -> Result<Verdict, SemanticsError> {
    let mut all: Vec<Formula> = gamma.to_vec();
    all.push(a.clone());
    let prog = Program::compile(m.symbols.clone(), &all, &[], mode)?;
    let prob = Problem {
        prog,
        hyps: gamma.len(),
    };
    Ok(match prob.check(kind, m) {
        Some(c) => Verdict::Countermodel(c),
        None => Verdict::Holds,
    })
}

/// The four truth notions of a formula in one structure. Notions whose
/// parameters are not supplied are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthFlags {
    /// `M, Φ, s ⊨ A`.
    pub locally_true: Option<bool>,
    /// `M, Φ ⊨ A`: for all s.
    pub true_: Option<bool>,
    /// `M, s ⊨ᵍ A`: for all Φ.
    pub generically_true: Option<bool>,
    /// `M ⊨ A`: for all Φ and s.
    pub generically_valid: bool,
}

pub fn classify_truth(
    m: &Structure,
    s: Option<&Assignment>,
    choice: Option<Choice<'_>>,
    a: &Formula,
    mode: Mode,
) -> Result<TruthFlags, SemanticsError> {
    let prog = Program::compile(m.symbols.clone(), std::slice::from_ref(a), &[], mode)?;
    let k = m.size;
    let n = prog.free_vars.len();
    let values_of = |s: &Assignment| -> Vec<usize> { prog.free_vars.iter().map(|x| s.get(x)).collect() };
    let total = |vals: &[usize], c: Choice<'_>| -> bool {
        let mut env = prog.env(vals);
        let r = match c {
            Choice::Ext(phi) => prog.satisfies(m, phi, &mut env, 0),
            Choice::Int(psi) => prog.satisfies(m, psi, &mut env, 0),
        };
        r.expect("total choices never defer")
    };
    let generic_at = |vals: &[usize]| -> bool {
        for_all_choices(k, &mut |p| {
            let mut env = prog.env(vals);
            prog.satisfies(m, &mut *p, &mut env, 0)
        })
        .is_none()
    };
    let all_values: Vec<Vec<usize>> = (0..k.pow(n as u32)).map(|i| tuple_at(i, n, k)).collect();
    if let Some(s) = s {
        if values_of(s).iter().any(|&v| v >= k) {
            return Err(SemanticsError::Bound("assignment value outside the domain".into()));
        }
    }
    Ok(TruthFlags {
        locally_true: match (s, choice) {
            (Some(s), Some(c)) => Some(total(&values_of(s), c)),
            _ => None,
        },
        true_: choice.map(|c| all_values.iter().all(|v| total(v, c))),
        generically_true: s.map(|s| generic_at(&values_of(s))),
        generically_valid: all_values.iter().all(|v| generic_at(v)),
    })
}
