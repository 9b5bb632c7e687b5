//! Text format for proofs.
//!
//! ```text
//! #system ec-eps=
//! #hyp P(a)
//! fun g/0
//! 1. P(g) -> P(eps x (P(x))) ; crit witness: g
//! 2. P(a) -> P(a) ; taut
//! ```
//!
//! Justifications: `hyp`, `taut`, `mp i j`, `eq1`, `eq2`, `eq2p`, `eq2pp`,
//! `eqeps`, `crit [witness: t]`, `ext`, `ax-ex`, `ax-all`, `r-ex i`,
//! `r-all i`. Line references are one-based. Other lines starting with `#`
//! and blank lines are ignored.

use std::fmt;

use thiserror::Error;

use crate::syntax::{is_constant_name, Parser, Signature};

use super::{Justification, Proof, ProofLine, SystemId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("proof text line {line}: {msg}")]
pub struct ProofParseError {
    pub line: usize,
    pub msg: String,
}

pub fn parse_proof(src: &str) -> Result<Proof, ProofParseError> {
    let mut parser = Parser::new();
    let mut system: Option<SystemId> = None;
    let mut hyps = Vec::new();
    let mut lines = Vec::new();
    for (no, raw) in src.lines().enumerate() {
        let no = no + 1;
        let fail = |msg: String| ProofParseError { line: no, msg };
        let text = raw.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(rest) = text.strip_prefix("#system") {
            system = Some(rest.trim().parse().map_err(fail)?);
            continue;
        }
        if let Some(rest) = text.strip_prefix("#hyp") {
            hyps.push(parser.formula(rest).map_err(|e| fail(e.to_string()))?);
            continue;
        }
        if text.starts_with('#') {
            continue;
        }
        if parser.declare_line(text).map_err(|e| fail(e.to_string()))? {
            continue;
        }
        let (num, rest) = text
            .split_once('.')
            .ok_or_else(|| fail("expected `n. <formula> ; <justification>`".into()))?;
        let n: usize = num.trim().parse().map_err(|_| fail(format!("bad line number `{num}`")))?;
        if n != lines.len() + 1 {
            return Err(fail(format!("line number {n}, expected {}", lines.len() + 1)));
        }
        let (form, just) = rest
            .rsplit_once(';')
            .ok_or_else(|| fail("missing `;` before the justification".into()))?;
        let formula = parser.formula(form).map_err(|e| fail(e.to_string()))?;
        let just = parse_just(&mut parser, just.trim(), n).map_err(fail)?;
        lines.push(ProofLine { formula, just });
    }
    let system = system.ok_or(ProofParseError {
        line: 0,
        msg: "missing `#system` header".into(),
    })?;
    Ok(Proof { system, hyps, lines })
}

fn parse_just(parser: &mut Parser, s: &str, n: usize) -> Result<Justification, String> {
    let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    let refs = |count: usize| -> Result<Vec<usize>, String> {
        let v: Vec<usize> = rest
            .split_whitespace()
            .map(|x| x.parse::<usize>().map_err(|_| format!("bad line reference `{x}`")))
            .collect::<Result<_, _>>()?;
        if v.len() != count {
            return Err(format!("`{head}` takes {count} line reference(s)"));
        }
        if let Some(&bad) = v.iter().find(|&&i| i == 0 || i >= n) {
            return Err(format!("reference to line {bad} does not precede line {n}"));
        }
        Ok(v.into_iter().map(|i| i - 1).collect())
    };
    let no_args = |j: Justification| {
        if rest.is_empty() {
            Ok(j)
        } else {
            Err(format!("`{head}` takes no arguments"))
        }
    };
    match head {
        "hyp" => no_args(Justification::Hyp),
        "taut" => no_args(Justification::Taut),
        "mp" => refs(2).map(|v| Justification::MP(v[0], v[1])),
        "eq1" => no_args(Justification::Eq1),
        "eq2" => no_args(Justification::Eq2),
        "eq2p" => no_args(Justification::Eq2P),
        "eq2pp" => no_args(Justification::Eq2PP),
        "eqeps" => no_args(Justification::EqEps),
        "ext" => no_args(Justification::Ext),
        "ax-ex" => no_args(Justification::AxExists),
        "ax-all" => no_args(Justification::AxForall),
        "r-ex" => refs(1).map(|v| Justification::RExists(v[0])),
        "r-all" => refs(1).map(|v| Justification::RForall(v[0])),
        "crit" => {
            if rest.is_empty() {
                return Ok(Justification::Crit(None));
            }
            let w = rest
                .strip_prefix("witness:")
                .ok_or_else(|| "expected `crit witness: <term>`".to_string())?;
            let t = parser.term(w).map_err(|e| e.to_string())?;
            Ok(Justification::Crit(Some(t)))
        }
        _ => Err(format!("unknown justification `{head}`")),
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Hyp => write!(f, "hyp"),
            Justification::Taut => write!(f, "taut"),
            Justification::MP(i, j) => write!(f, "mp {} {}", i + 1, j + 1),
            Justification::Eq1 => write!(f, "eq1"),
            Justification::Eq2 => write!(f, "eq2"),
            Justification::Eq2P => write!(f, "eq2p"),
            Justification::Eq2PP => write!(f, "eq2pp"),
            Justification::EqEps => write!(f, "eqeps"),
            Justification::Crit(None) => write!(f, "crit"),
            Justification::Crit(Some(t)) => write!(f, "crit witness: {t}"),
            Justification::Ext => write!(f, "ext"),
            Justification::AxExists => write!(f, "ax-ex"),
            Justification::AxForall => write!(f, "ax-all"),
            Justification::RExists(i) => write!(f, "r-ex {}", i + 1),
            Justification::RForall(i) => write!(f, "r-all {}", i + 1),
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "#system {}", self.system)?;
        let mut sig = Signature::new();
        for h in &self.hyps {
            let _ = sig.absorb_formula(h);
        }
        for l in &self.lines {
            let _ = sig.absorb_formula(&l.formula);
            if let Justification::Crit(Some(t)) = &l.just {
                let _ = sig.absorb_term(t);
            }
        }
        for (name, arity) in &sig.functions {
            if *arity == 0 && !is_constant_name(name) {
                writeln!(f, "fun {name}/0")?;
            }
        }
        for h in &self.hyps {
            writeln!(f, "#hyp {h}")?;
        }
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.just)?;
        }
        Ok(())
    }
}
