//! Text format for sequents and derivations.
//!
//! ```text
//! rule cut [cut: ex x (P(x))] {
//!   |- ~P(t), P(eps x (P(x)))
//!   ; rule ex-r [witness: t] { |- ~P(t), ex x (P(x)) ; rule axiom { |- ~P(t), P(t) } }
//!   ; rule ex-l { |- ~ex x (P(x)), P(eps x (P(x))) ; rule axiom { |- ~P(eps x (P(x))), P(eps x (P(x))) } }
//! }
//! ```
//!
//! Options: `[witness: t]`, `[cut: A]`, `[eps: e]`, `[z: v]` and
//! `[delta: A1, A2]`. Lines before the first `rule` may declare symbols
//! (`fun f/1`, `pred P/2`) or be comments starting with `#`.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Name, Parser};

use super::{Derivation, RuleData, RuleName, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("derivation text at byte {pos}: {msg}")]
pub struct DerivationParseError {
    pub pos: usize,
    pub msg: String,
}

/// Splits at `sep` outside parentheses, brackets and braces.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Index just past the bracket matching the one at `open`.
fn matching(s: &str, open: usize) -> Option<usize> {
    let (o, c) = match s[open..].chars().next()? {
        '[' => ('[', ']'),
        '{' => ('{', '}'),
        _ => return None,
    };
    let mut depth = 0;
    for (i, ch) in s[open..].char_indices() {
        if ch == o {
            depth += 1;
        } else if ch == c {
            depth -= 1;
            if depth == 0 {
                return Some(open + i + 1);
            }
        }
    }
    None
}

fn sequent_in(parser: &mut Parser, s: &str, pos: usize) -> Result<Sequent, DerivationParseError> {
    let fail = |msg: String| DerivationParseError { pos, msg };
    let body = s
        .trim()
        .strip_prefix("|-")
        .ok_or_else(|| fail("a sequent starts with `|-`".into()))?;
    let mut fs = Vec::new();
    if !body.trim().is_empty() {
        for part in split_top(body, ',') {
            fs.push(parser.formula(part).map_err(|e| fail(e.to_string()))?);
        }
    }
    Ok(Sequent::new(fs))
}

/// Parses `|- A1, ..., An`.
pub fn parse_sequent(src: &str) -> Result<Sequent, DerivationParseError> {
    let mut parser = Parser::new();
    let mut last = src;
    for line in src.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if parser
            .declare_line(t)
            .map_err(|e| DerivationParseError { pos: 0, msg: e.to_string() })?
        {
            continue;
        }
        last = t;
        break;
    }
    sequent_in(&mut parser, last, 0)
}

pub fn parse_derivation(src: &str) -> Result<Derivation, DerivationParseError> {
    let mut parser = Parser::new();
    let mut offset = 0;
    for line in src.split_inclusive('\n') {
        let t = line.trim();
        if t.starts_with("rule") {
            break;
        }
        if !t.is_empty() && !t.starts_with('#') {
            let known = parser.declare_line(t).map_err(|e| DerivationParseError {
                pos: offset,
                msg: e.to_string(),
            })?;
            if !known {
                return Err(DerivationParseError {
                    pos: offset,
                    msg: "expected a declaration or `rule`".into(),
                });
            }
        }
        offset += line.len();
    }
    let (d, rest) = node(&mut parser, src, offset)?;
    if !src[rest..].trim().is_empty() {
        return Err(DerivationParseError {
            pos: rest,
            msg: "trailing text after the derivation".into(),
        });
    }
    Ok(d)
}

fn skip_ws(s: &str, mut i: usize) -> usize {
    while i < s.len() && s[i..].starts_with(char::is_whitespace) {
        i += s[i..].chars().next().map_or(1, char::len_utf8);
    }
    i
}

/// Parses a node starting at `i`; returns it and the index after it.
fn node(parser: &mut Parser, s: &str, i: usize) -> Result<(Derivation, usize), DerivationParseError> {
    let fail = |pos: usize, msg: &str| DerivationParseError { pos, msg: msg.into() };
    let mut i = skip_ws(s, i);
    if !s[i..].starts_with("rule") {
        return Err(fail(i, "expected `rule`"));
    }
    i = skip_ws(s, i + 4);
    let name_end = s[i..]
        .find(|c: char| c.is_whitespace() || c == '[' || c == '{')
        .map_or(s.len(), |k| i + k);
    let rule: RuleName = s[i..name_end].parse().map_err(|e: String| fail(i, &e))?;
    i = skip_ws(s, name_end);
    let mut data = RuleData::default();
    while s[i..].starts_with('[') {
        let end = matching(s, i).ok_or_else(|| fail(i, "unclosed `[`"))?;
        let inner = &s[i + 1..end - 1];
        let (key, value) = inner.split_once(':').ok_or_else(|| fail(i, "expected `[key: value]`"))?;
        let value = value.trim();
        let err = |e: crate::syntax::SyntaxError| DerivationParseError {
            pos: i,
            msg: e.to_string(),
        };
        match key.trim() {
            "witness" => data.witness = Some(parser.term(value).map_err(err)?),
            "cut" => data.cut = Some(parser.formula(value).map_err(err)?),
            "eps" => data.eps = Some(parser.term(value).map_err(err)?),
            "z" => data.z = Some(Name::from(value)),
            "delta" => {
                for part in split_top(value, ',') {
                    data.delta.push(parser.formula(part).map_err(err)?);
                }
            }
            other => return Err(fail(i, &format!("unknown option `{other}`"))),
        }
        i = skip_ws(s, end);
    }
    if !s[i..].starts_with('{') {
        return Err(fail(i, "expected `{`"));
    }
    let end = matching(s, i).ok_or_else(|| fail(i, "unclosed `{`"))?;
    let inner_start = i + 1;
    let inner = &s[inner_start..end - 1];
    let parts = split_top(inner, ';');
    let sequent = sequent_in(parser, parts[0], inner_start)?;
    let mut premises = Vec::new();
    let mut at = inner_start + parts[0].len() + 1;
    for part in &parts[1..] {
        let (child, stop) = node(parser, s, at)?;
        if !s[stop..at + part.len()].trim().is_empty() {
            return Err(fail(stop, "expected `;` or `}` after a premise"));
        }
        premises.push(child);
        at += part.len() + 1;
    }
    Ok((
        Derivation {
            sequent,
            rule,
            data,
            premises,
        },
        end,
    ))
}

impl Derivation {
    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        write!(f, "rule {}", self.rule)?;
        if let Some(e) = &self.data.eps {
            write!(f, " [eps: {e}]")?;
        }
        if let Some(t) = &self.data.witness {
            write!(f, " [witness: {t}]")?;
        }
        if let Some(z) = &self.data.z {
            write!(f, " [z: {z}]")?;
        }
        if !self.data.delta.is_empty() {
            let ds: Vec<String> = self.data.delta.iter().map(|d| d.to_string()).collect();
            write!(f, " [delta: {}]", ds.join(", "))?;
        }
        if let Some(c) = &self.data.cut {
            write!(f, " [cut: {c}]")?;
        }
        if self.premises.is_empty() {
            return write!(f, " {{ {} }}", self.sequent);
        }
        writeln!(f, " {{")?;
        writeln!(f, "{pad}  {}", self.sequent)?;
        for p in &self.premises {
            write!(f, "{pad}  ; ")?;
            p.write(f, indent + 1)?;
            writeln!(f)?;
        }
        write!(f, "{pad}}}")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
