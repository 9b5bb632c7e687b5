//! Evaluation of terms and formulas in a finite structure.
//!
//! Formulas are compiled once into a slot-based form: free variables and
//! every binder get a slot in a flat environment, symbols are resolved to
//! table positions, and in intensional mode every ε-term carries its type
//! and compiled parameter terms.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::syntax::{epsilon_type, replace_loose_in_term, EpsilonType, Formula, Name, Term};

use super::choice::{ChoiceKey, Chooser, ExtChoiceFunction, IntChoiceOperator};
use super::model::{Structure, SymbolTable};
use super::{Mode, SemanticsError};

#[derive(Clone, Debug)]
pub(crate) enum TermIr {
    Slot(usize),
    App(usize, Vec<TermIr>),
    Eps {
        slot: usize,
        body: Box<FormIr>,
        ty: Option<usize>,
        params: Vec<TermIr>,
    },
}

#[derive(Clone, Debug)]
pub(crate) enum FormIr {
    Const(bool),
    Atom(usize, Vec<TermIr>),
    Eq(TermIr, TermIr),
    Not(Box<FormIr>),
    And(Box<FormIr>, Box<FormIr>),
    Or(Box<FormIr>, Box<FormIr>),
    Implies(Box<FormIr>, Box<FormIr>),
    Iff(Box<FormIr>, Box<FormIr>),
    Exists(usize, Box<FormIr>),
    Forall(usize, Box<FormIr>),
}

/// Formulas compiled against one symbol table.
#[derive(Clone, Debug)]
pub struct Program {
    pub symbols: Arc<SymbolTable>,
    /// Free variables, occupying slots `0..free_vars.len()`.
    pub free_vars: Vec<Name>,
    /// ε-types referenced by intensional choice keys.
    pub types: Vec<EpsilonType>,
    pub mode: Mode,
    pub(crate) formulas: Vec<FormIr>,
    pub(crate) terms: Vec<TermIr>,
    slots: usize,
}

struct Compiler<'a> {
    symbols: &'a SymbolTable,
    mode: Mode,
    free: BTreeMap<Name, usize>,
    types: Vec<EpsilonType>,
    type_ids: HashMap<EpsilonType, usize>,
    slots: usize,
}

const SLOT_PREFIX: &str = "#slot";

impl Compiler<'_> {
    fn term(&mut self, t: &Term, scope: &mut Vec<usize>) -> Result<TermIr, SemanticsError> {
        Ok(match t {
            Term::Var(x) => {
                if let Some(n) = x.strip_prefix(SLOT_PREFIX) {
                    TermIr::Slot(n.parse().expect("internal slot name"))
                } else {
                    TermIr::Slot(self.free[x])
                }
            }
            Term::Bound(i) => TermIr::Slot(scope[scope.len() - 1 - i]),
            Term::App(f, args) => {
                let id = self
                    .symbols
                    .function_id(f)
                    .ok_or_else(|| SemanticsError::UnknownSymbol(f.to_string()))?;
                let arity = self.symbols.functions[id].1;
                if arity != args.len() {
                    return Err(SemanticsError::Arity(f.to_string()));
                }
                let args = args.iter().map(|a| self.term(a, scope)).collect::<Result<_, _>>()?;
                TermIr::App(id, args)
            }
            Term::Eps(b) => {
                let (ty, params) = match self.mode {
                    Mode::Extensional => (None, Vec::new()),
                    Mode::Intensional => {
                        let names: Vec<usize> = scope.clone();
                        let opened = replace_loose_in_term(t, &|i| {
                            Term::var(&format!("{SLOT_PREFIX}{}", names[names.len() - 1 - i]))
                        });
                        let (ty, params) = epsilon_type(&opened);
                        let next = self.types.len();
                        let id = *self.type_ids.entry(ty.clone()).or_insert(next);
                        if id == next {
                            self.types.push(ty);
                        }
                        let params = params
                            .iter()
                            .map(|p| self.term(p, &mut Vec::new()))
                            .collect::<Result<_, _>>()?;
                        (Some(id), params)
                    }
                };
                let slot = self.fresh_slot();
                scope.push(slot);
                let body = self.formula(&b.body, scope);
                scope.pop();
                TermIr::Eps {
                    slot,
                    body: Box::new(body?),
                    ty,
                    params,
                }
            }
        })
    }

    fn fresh_slot(&mut self) -> usize {
        self.slots += 1;
        self.slots - 1
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<usize>) -> Result<FormIr, SemanticsError> {
        let mut bin = |c: &mut Self, a: &Formula, b: &Formula| -> Result<(Box<FormIr>, Box<FormIr>), SemanticsError> {
            Ok((Box::new(c.formula(a, scope)?), Box::new(c.formula(b, scope)?)))
        };
        Ok(match f {
            Formula::Top => FormIr::Const(true),
            Formula::Bottom => FormIr::Const(false),
            Formula::Atom(p, args) => {
                let id = self
                    .symbols
                    .predicate_id(p)
                    .ok_or_else(|| SemanticsError::UnknownSymbol(p.to_string()))?;
                if self.symbols.predicates[id].1 != args.len() {
                    return Err(SemanticsError::Arity(p.to_string()));
                }
                let args = args.iter().map(|a| self.term(a, scope)).collect::<Result<_, _>>()?;
                FormIr::Atom(id, args)
            }
            Formula::Eq(a, b) => FormIr::Eq(self.term(a, scope)?, self.term(b, scope)?),
            Formula::Not(a) => FormIr::Not(Box::new(self.formula(a, scope)?)),
            Formula::And(a, b) => {
                let (a, b) = bin(self, a, b)?;
                FormIr::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(self, a, b)?;
                FormIr::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(self, a, b)?;
                FormIr::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(self, a, b)?;
                FormIr::Iff(a, b)
            }
            Formula::Exists(b) | Formula::Forall(b) => {
                let slot = self.fresh_slot();
                scope.push(slot);
                let body = self.formula(&b.body, scope);
                scope.pop();
                let body = Box::new(body?);
                if matches!(f, Formula::Exists(_)) {
                    FormIr::Exists(slot, body)
                } else {
                    FormIr::Forall(slot, body)
                }
            }
        })
    }
}

impl Program {
    pub fn compile(
        symbols: Arc<SymbolTable>,
        formulas: &[Formula],
        terms: &[Term],
        mode: Mode,
    ) -> Result<Program, SemanticsError> {
        let mut free = BTreeMap::new();
        for f in formulas {
            for x in f.free_vars() {
                let n = free.len();
                free.entry(x).or_insert(n);
            }
        }
        for t in terms {
            for x in t.free_vars() {
                let n = free.len();
                free.entry(x).or_insert(n);
            }
        }
        let mut free_vars = vec![Name::from(""); free.len()];
        for (x, i) in &free {
            free_vars[*i] = x.clone();
        }
        let mut c = Compiler {
            symbols: &symbols,
            mode,
            slots: free.len(),
            free,
            types: Vec::new(),
            type_ids: HashMap::new(),
        };
        let formulas = formulas
            .iter()
            .map(|f| c.formula(f, &mut Vec::new()))
            .collect::<Result<_, _>>()?;
        let terms = terms
            .iter()
            .map(|t| c.term(t, &mut Vec::new()))
            .collect::<Result<_, _>>()?;
        Ok(Program {
            types: c.types,
            slots: c.slots,
            symbols,
            free_vars,
            mode,
            formulas,
            terms,
        })
    }

    pub fn formula_count(&self) -> usize {
        self.formulas.len()
    }

    /// Fresh environment with the free variables set from `values`.
    pub fn env(&self, values: &[usize]) -> Vec<usize> {
        let mut env = vec![0; self.slots];
        env[..values.len()].copy_from_slice(values);
        env
    }

    /// Satisfaction of formula `i` under the given environment.
    pub fn satisfies<C: Chooser>(
        &self,
        m: &Structure,
        chooser: C,
        env: &mut [usize],
        i: usize,
    ) -> Result<bool, ChoiceKey> {
        let mut ev = Evaluator {
            m,
            types: &self.types,
            env,
            chooser,
        };
        ev.formula(&self.formulas[i])
    }

    pub fn value<C: Chooser>(&self, m: &Structure, chooser: C, env: &mut [usize], i: usize) -> Result<usize, ChoiceKey> {
        let mut ev = Evaluator {
            m,
            types: &self.types,
            env,
            chooser,
        };
        ev.term(&self.terms[i])
    }
}

struct Evaluator<'a, C> {
    m: &'a Structure,
    types: &'a [EpsilonType],
    env: &'a mut [usize],
    chooser: C,
}

impl<C: Chooser> Evaluator<'_, C> {
    fn term(&mut self, t: &TermIr) -> Result<usize, ChoiceKey> {
        match t {
            TermIr::Slot(s) => Ok(self.env[*s]),
            TermIr::App(f, args) => {
                let k = self.m.size;
                let mut idx = 0;
                for a in args {
                    idx = idx * k + self.term(a)?;
                }
                Ok(self.m.functions[*f][idx])
            }
            TermIr::Eps { slot, body, ty, params } => {
                let saved = self.env[*slot];
                let mut subset = 0u32;
                for v in 0..self.m.size {
                    self.env[*slot] = v;
                    if self.formula(body)? {
                        subset |= 1 << v;
                    }
                }
                self.env[*slot] = saved;
                let params = params.iter().map(|p| self.term(p)).collect::<Result<Vec<_>, _>>()?;
                let key = ChoiceKey {
                    ty: *ty,
                    params,
                    subset,
                };
                self.chooser.choose(self.types, &key)
            }
        }
    }

    fn formula(&mut self, f: &FormIr) -> Result<bool, ChoiceKey> {
        Ok(match f {
            FormIr::Const(b) => *b,
            FormIr::Atom(p, args) => {
                let k = self.m.size;
                let mut idx = 0;
                for a in args {
                    idx = idx * k + self.term(a)?;
                }
                self.m.predicates[*p][idx]
            }
            FormIr::Eq(a, b) => self.term(a)? == self.term(b)?,
            FormIr::Not(a) => !self.formula(a)?,
            FormIr::And(a, b) => self.formula(a)? && self.formula(b)?,
            FormIr::Or(a, b) => self.formula(a)? || self.formula(b)?,
            FormIr::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            FormIr::Iff(a, b) => self.formula(a)? == self.formula(b)?,
            FormIr::Exists(slot, body) | FormIr::Forall(slot, body) => {
                let want = matches!(f, FormIr::Exists(..));
                let saved = self.env[*slot];
                let mut result = !want;
                for v in 0..self.m.size {
                    self.env[*slot] = v;
                    if self.formula(body)? == want {
                        result = want;
                        break;
                    }
                }
                self.env[*slot] = saved;
                result
            }
        })
    }
}

/// A total assignment: listed variables get their values, all others the
/// default element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<Name, usize>,
    pub default: usize,
}

impl Assignment {
    pub fn new<I: IntoIterator<Item = (&'static str, usize)>>(pairs: I) -> Self {
        Assignment {
            values: pairs.into_iter().map(|(x, v)| (Name::from(x), v)).collect(),
            default: 0,
        }
    }

    pub fn get(&self, x: &str) -> usize {
        self.values.get(x).copied().unwrap_or(self.default)
    }

    /// `s[x/m]`.
    pub fn with(&self, x: &str, m: usize) -> Self {
        let mut s = self.clone();
        s.values.insert(Name::from(x), m);
        s
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.values.iter().map(|(x, v)| format!("{x} = {v}")).collect();
        write!(f, "{}", items.join(", "))
    }
}

/// A concrete choice function or operator for direct evaluation.
#[derive(Clone, Copy, Debug)]
pub enum Choice<'a> {
    Ext(&'a ExtChoiceFunction),
    Int(&'a IntChoiceOperator),
}

impl Choice<'_> {
    fn mode(&self) -> Mode {
        match self {
            Choice::Ext(_) => Mode::Extensional,
            Choice::Int(_) => Mode::Intensional,
        }
    }
}

fn run<T>(
    m: &Structure,
    choice: Choice<'_>,
    s: &Assignment,
    formulas: &[Formula],
    terms: &[Term],
    go: impl FnOnce(&Program, &mut Vec<usize>, Choice<'_>) -> Result<T, ChoiceKey>,
) -> Result<T, SemanticsError> {
    let prog = Program::compile(m.symbols.clone(), formulas, terms, choice.mode())?;
    let values: Vec<usize> = prog.free_vars.iter().map(|x| s.get(x)).collect();
    if values.iter().any(|&v| v >= m.size) {
        return Err(SemanticsError::Bound("assignment value outside the domain".into()));
    }
    let mut env = prog.env(&values);
    go(&prog, &mut env, choice).map_err(|_| unreachable!("total choices never defer"))
}

/// `M, Φ, s ⊨ A` (or with an intensional operator).
pub fn satisfies(m: &Structure, choice: Choice<'_>, s: &Assignment, f: &Formula) -> Result<bool, SemanticsError> {
    run(m, choice, s, std::slice::from_ref(f), &[], |p, env, c| match c {
        Choice::Ext(phi) => p.satisfies(m, phi, env, 0),
        Choice::Int(psi) => p.satisfies(m, psi, env, 0),
    })
}

/// Value of a term.
pub fn evaluate_term(m: &Structure, choice: Choice<'_>, s: &Assignment, t: &Term) -> Result<usize, SemanticsError> {
    run(m, choice, s, &[], std::slice::from_ref(t), |p, env, c| match c {
        Choice::Ext(phi) => p.value(m, phi, env, 0),
        Choice::Int(psi) => p.value(m, psi, env, 0),
    })
}
