//! Hilbert-style proofs for the elementary calculus and its extensions by
//! identity, ε-terms, extensionality and quantifiers.

mod build;
mod check;
mod eq2;
mod format;
mod matching;
mod taut;
mod transform;


use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Formula, Term};

pub use build::ProofBuilder;
pub use check::{check_proof, critical_formulas, proof_stats, CheckReport, CriticalFormula, LineInfo, ProofStats, RankStats};
pub use eq2::{derive_eq2_restricted, differs_only_by};
pub use format::{parse_proof, ProofParseError};
pub use matching::{match_instance, match_pattern};
pub use taut::{is_tautology, is_tautology_with_bound, max_atoms, DEFAULT_MAX_ATOMS};
pub use transform::{deduction, embed_proof, substitute_proof};
pub(crate) use check::recover_critical;
pub(crate) use eq2::derive_eq2_into;
pub(crate) use transform::deduction_unchecked;

/// Which axioms and rules a proof may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SystemId {
    pub identity: bool,
    pub epsilon: bool,
    pub extensionality: bool,
    pub quantifiers: bool,
    /// Identity axioms restricted to (=₂′), (=₂″) and (=_ε); (=₂) is
    /// unavailable.
    pub restricted_identity: bool,
}

impl SystemId {
    pub const EC: SystemId = SystemId {
        identity: false,
        epsilon: false,
        extensionality: false,
        quantifiers: false,
        restricted_identity: false,
    };

    pub fn with_identity(self) -> Self {
        SystemId { identity: true, ..self }
    }

    pub fn with_epsilon(self) -> Self {
        SystemId { epsilon: true, ..self }
    }

    pub fn with_extensionality(self) -> Self {
        SystemId {
            extensionality: true,
            epsilon: true,
            identity: true,
            ..self
        }
    }

    pub fn with_quantifiers(self) -> Self {
        SystemId {
            quantifiers: true,
            ..self
        }
    }

    pub fn restricted(self) -> Self {
        SystemId {
            identity: true,
            restricted_identity: true,
            ..self
        }
    }

    pub fn without_epsilon(self) -> Self {
        SystemId {
            epsilon: false,
            extensionality: false,
            ..self
        }
    }

    pub fn without_quantifiers(self) -> Self {
        SystemId {
            quantifiers: false,
            ..self
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ec")?;
        if self.epsilon {
            write!(f, "-eps")?;
        }
        if self.extensionality {
            write!(f, "-ext")?;
        }
        if self.quantifiers {
            write!(f, "-q")?;
        }
        if self.identity {
            write!(f, "=")?;
        }
        if self.restricted_identity {
            write!(f, "-restricted")?;
        }
        Ok(())
    }
}

impl FromStr for SystemId {
    type Err = String;

    /// Accepts `ec` followed by any of `-eps`, `-ext`, `-q`, `=` and
    /// `-restricted`, in any order.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut rest = s.trim().strip_prefix("ec").ok_or_else(|| format!("unknown system `{s}`"))?;
        let mut sys = SystemId::EC;
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("-eps") {
                sys = sys.with_epsilon();
                rest = r;
            } else if let Some(r) = rest.strip_prefix("-ext") {
                sys = sys.with_extensionality();
                rest = r;
            } else if let Some(r) = rest.strip_prefix("-q") {
                sys = sys.with_quantifiers();
                rest = r;
            } else if let Some(r) = rest.strip_prefix("-restricted") {
                sys = sys.restricted();
                rest = r;
            } else if let Some(r) = rest.strip_prefix('=') {
                sys = sys.with_identity();
                rest = r;
            } else {
                return Err(format!("unknown system `{s}`"));
            }
        }
        Ok(sys)
    }
}

/// How a proof line is obtained. Line references are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Hyp,
    Taut,
    /// Modus ponens from two earlier lines, in either order.
    MP(usize, usize),
    /// `t = t`.
    Eq1,
    /// `t = u → (A(t) ↔ A(u))` or `t = u → (A(t) → A(u))`.
    Eq2,
    /// `t = u → (P(..t..) → P(..u..))`.
    Eq2P,
    /// `t = u → f(..t..) = f(..u..)`.
    Eq2PP,
    /// `t = u → εx A(x; ..t..) = εx A(x; ..u..)`.
    EqEps,
    /// `A(t) → A(εx A(x))`, optionally with the witness `t` given.
    Crit(Option<Term>),
    Ext,
    AxExists,
    AxForall,
    RExists(usize),
    RForall(usize),
}

impl Justification {
    /// Earlier lines this justification refers to.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::MP(i, j) => vec![*i, *j],
            Justification::RExists(i) | Justification::RForall(i) => vec![*i],
            _ => Vec::new(),
        }
    }

    /// The same justification with line references mapped by `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::MP(i, j) => Justification::MP(f(*i), f(*j)),
            Justification::RExists(i) => Justification::RExists(f(*i)),
            Justification::RForall(i) => Justification::RForall(f(*i)),
            other => other.clone(),
        }
    }

    pub fn is_axiom(&self) -> bool {
        !matches!(
            self,
            Justification::Hyp
                | Justification::MP(..)
                | Justification::RExists(_)
                | Justification::RForall(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofLine {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub system: SystemId,
    pub hyps: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(system: SystemId, hyps: Vec<Formula>) -> Self {
        Proof {
            system,
            hyps,
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(ProofLine { formula, just });
        self.lines.len() - 1
    }

    /// The last line, if any.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("not an instance of {0}")]
    BadInstance(String),
    #[error("{0} is not available in system {1}")]
    Disabled(&'static str, SystemId),
    #[error("reference to line {0}, which does not precede this line")]
    DanglingReference(usize),
    #[error("eigenvariable condition violated: {0}")]
    Eigenvariable(String),
    #[error("formula outside the language of the system: {0}")]
    Language(String),
    #[error("tautology check needs {0} atoms, above the bound of {1}")]
    TooManyAtoms(usize, usize),
    #[error("proof has no lines")]
    Empty,
}

/// A rejected proof line (one-based line number, zero for the hypotheses).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct CheckError {
    pub line: usize,
    pub kind: CheckErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input proof does not check: {0}")]
    Input(CheckError),
    #[error("transformed proof does not check: {0}")]
    Output(CheckError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
