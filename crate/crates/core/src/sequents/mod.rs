//! One-sided sequent calculi for the ε-calculus: derivation checking,
//! bounded cut-free proof search and worked examples.

mod check;
mod examples;
mod format;
mod search;


use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Formula, Name, Term};

pub use check::{check_derivation, is_cut_free};
pub use examples::{builtin_examples, example_names, run_example, Example, ExampleReport};
pub use format::{parse_derivation, parse_sequent, DerivationParseError};
pub use search::{bounded_cutfree_search, default_universe, SearchLimits, SearchOutcome};

/// A finite set of formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent(pub BTreeSet<Formula>);

impl Sequent {
    pub fn new<I: IntoIterator<Item = Formula>>(fs: I) -> Self {
        Sequent(fs.into_iter().collect())
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }

    /// The sequent with `fs` added.
    pub fn with<I: IntoIterator<Item = Formula>>(&self, fs: I) -> Sequent {
        let mut s = self.clone();
        s.0.extend(fs);
        s
    }

    /// The sequent with `f` removed.
    pub fn without(&self, f: &Formula) -> Sequent {
        let mut s = self.clone();
        s.0.remove(f);
        s
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.0.iter().flat_map(|f| f.free_vars()).collect()
    }

    /// The disjunction of the members, read as one formula.
    pub fn as_formula(&self) -> Formula {
        Formula::disjunction(self.0.iter().cloned())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|-")?;
        for (i, a) in self.0.iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequentSystem {
    /// Propositional and quantifier rules with ε-terms as witnesses.
    Leisenring,
    /// Propositional rules plus critical axioms `¬A(t), A(εx A(x))`.
    Maehara,
    /// Propositional rules plus the rule ε0.
    Wessels,
    /// Propositional rules plus the rule ε1.
    MintsYasuhara,
}

impl SequentSystem {
    pub const ALL: [SequentSystem; 4] = [
        SequentSystem::Leisenring,
        SequentSystem::Maehara,
        SequentSystem::Wessels,
        SequentSystem::MintsYasuhara,
    ];

    pub fn allows(self, rule: RuleName) -> bool {
        use RuleName::*;
        match rule {
            Axiom | AndR | AndL | NotNot | OrR | OrL | Cut | Weak => true,
            ExR | ExL | AllR | AllL => self == SequentSystem::Leisenring,
            CritAxiom => self == SequentSystem::Maehara,
            Eps0 => self == SequentSystem::Wessels,
            Eps1 => self == SequentSystem::MintsYasuhara,
        }
    }
}

impl fmt::Display for SequentSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequentSystem::Leisenring => "leisenring",
            SequentSystem::Maehara => "maehara",
            SequentSystem::Wessels => "wessels",
            SequentSystem::MintsYasuhara => "mints-yasuhara",
        })
    }
}

impl FromStr for SequentSystem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SequentSystem::ALL
            .into_iter()
            .find(|sys| sys.to_string() == s)
            .ok_or_else(|| format!("unknown sequent system `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    /// A sequent containing `A` and `¬A`.
    Axiom,
    /// A sequent containing `¬A(t)` and `A(εx A(x))`.
    CritAxiom,
    AndR,
    AndL,
    NotNot,
    OrR,
    OrL,
    Cut,
    ExR,
    ExL,
    AllR,
    AllL,
    Weak,
    Eps0,
    Eps1,
}

impl RuleName {
    pub const ALL: [RuleName; 15] = [
        RuleName::Axiom,
        RuleName::CritAxiom,
        RuleName::AndR,
        RuleName::AndL,
        RuleName::NotNot,
        RuleName::OrR,
        RuleName::OrL,
        RuleName::Cut,
        RuleName::ExR,
        RuleName::ExL,
        RuleName::AllR,
        RuleName::AllL,
        RuleName::Weak,
        RuleName::Eps0,
        RuleName::Eps1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Axiom => "axiom",
            RuleName::CritAxiom => "crit-axiom",
            RuleName::AndR => "and-r",
            RuleName::AndL => "and-l",
            RuleName::NotNot => "not-not",
            RuleName::OrR => "or-r",
            RuleName::OrL => "or-l",
            RuleName::Cut => "cut",
            RuleName::ExR => "ex-r",
            RuleName::ExL => "ex-l",
            RuleName::AllR => "all-r",
            RuleName::AllL => "all-l",
            RuleName::Weak => "w",
            RuleName::Eps0 => "eps0",
            RuleName::Eps1 => "eps1",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Rule-specific data of a derivation node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RuleData {
    /// Witness `t` of ∃R, ∀L, ε0, ε1 and (optionally) critical axioms.
    pub witness: Option<Term>,
    /// Cut formula.
    pub cut: Option<Formula>,
    /// The ε-term `εx A(x)` of ε0 and ε1.
    pub eps: Option<Term>,
    /// The fresh variable of ε0.
    pub z: Option<Name>,
    /// `Δ(z)` for ε0 (positions marked by `z`), `Δ(εx A(x))` for ε1.
    pub delta: Vec<Formula>,
}

/// A derivation tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: RuleName,
    pub data: RuleData,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: RuleName, sequent: Sequent) -> Self {
        Derivation {
            sequent,
            rule,
            data: RuleData::default(),
            premises: Vec::new(),
        }
    }

    pub fn node(rule: RuleName, sequent: Sequent, data: RuleData, premises: Vec<Derivation>) -> Self {
        Derivation {
            sequent,
            rule,
            data,
            premises,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }
}

/// A rejected node, addressed by the premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("node {}: {reason}", path_string(.path))]
pub struct DerivationError {
    pub path: Vec<usize>,
    pub reason: String,
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}
