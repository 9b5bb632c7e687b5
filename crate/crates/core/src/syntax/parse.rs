//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := imp ('<->' formula)?
//! imp     := or ('->' imp)?
//! or      := and ('|' or)?
//! and     := unary ('&' and)?
//! unary   := '~' unary | ('all' | 'ex') var scope | primary
//! scope   := '(' formula ')' | unary
//! primary := 'true' | 'false' | '(' formula ')' | Pred ('(' terms ')')?
//!          | term ('=' | '!=') term
//! term    := 'eps' var scope | fun '(' terms ')' | name
//! ```
//!
//! All binary connectives associate to the right. A bare lowercase name is
//! a bound variable if a binder for it is in scope, otherwise a constant if
//! it is declared `fun c/0` or starts with one of `a`..`e`, otherwise a free
//! variable.

use std::collections::BTreeMap;

use super::ast::{Binder, Expr, Formula, Name, Term};
use super::{formula_mentions_index, SyntaxError};

/// Function and predicate symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub functions: BTreeMap<Name, usize>,
    pub predicates: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        check_arity(&mut self.functions, name, arity)
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        check_arity(&mut self.predicates, name, arity)
    }

    /// Signature of the symbols occurring in the given formulas.
    pub fn of_formulas<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Result<Self, SyntaxError> {
        let mut sig = Signature::new();
        for f in formulas {
            sig.absorb_formula(f)?;
        }
        Ok(sig)
    }

    pub fn absorb_formula(&mut self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Top | Formula::Bottom => Ok(()),
            Formula::Atom(p, args) => {
                self.declare_predicate(p, args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
            Formula::Eq(a, b) => {
                self.absorb_term(a)?;
                self.absorb_term(b)
            }
            Formula::Not(a) => self.absorb_formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.absorb_formula(a)?;
                self.absorb_formula(b)
            }
            Formula::Exists(b) | Formula::Forall(b) => self.absorb_formula(&b.body),
        }
    }

    pub fn absorb_term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) | Term::Bound(_) => Ok(()),
            Term::App(f, args) => {
                self.declare_function(f, args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
            Term::Eps(b) => self.absorb_formula(&b.body),
        }
    }

    pub fn merge(&mut self, other: &Signature) -> Result<(), SyntaxError> {
        for (f, n) in &other.functions {
            self.declare_function(f, *n)?;
        }
        for (p, n) in &other.predicates {
            self.declare_predicate(p, *n)?;
        }
        Ok(())
    }
}

fn check_arity(table: &mut BTreeMap<Name, usize>, name: &str, arity: usize) -> Result<(), SyntaxError> {
    match table.get(name) {
        Some(&n) if n != arity => Err(SyntaxError::Arity {
            symbol: name.to_string(),
            expected: n,
            found: arity,
        }),
        Some(_) => Ok(()),
        None => {
            table.insert(Name::from(name), arity);
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Eq,
    Neq,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    s.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        it.next();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Imp,
            '↔' => Tok::Iff,
            '=' => Tok::Eq,
            '≠' => Tok::Neq,
            '⊤' => Tok::Ident("true".into()),
            '⊥' => Tok::Ident("false".into()),
            '∀' => Tok::Ident("all".into()),
            '∃' => Tok::Ident("ex".into()),
            'ε' => Tok::Ident("eps".into()),
            '-' if it.peek().map(|p| p.1) == Some('>') => {
                it.next();
                Tok::Imp
            }
            '!' if it.peek().map(|p| p.1) == Some('=') => {
                it.next();
                Tok::Neq
            }
            '<' => {
                let a = it.next().map(|p| p.1);
                let b = it.next().map(|p| p.1);
                if a == Some('-') && b == Some('>') {
                    Tok::Iff
                } else {
                    return Err(SyntaxError::Parse {
                        pos,
                        msg: "expected `<->`".into(),
                    });
                }
            }
            other => {
                return Err(SyntaxError::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

const KEYWORDS: &[&str] = &["eps", "all", "ex", "true", "false"];

/// Parser state: the signature grows as symbols are first used.
#[derive(Clone, Debug, Default)]
pub struct Parser {
    pub signature: Signature,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_signature(signature: Signature) -> Self {
        Parser {
            signature,
            ..Self::default()
        }
    }

    /// Handles a `fun f/2` or `pred P/1` header line. Returns `Ok(false)` if
    /// the line is not a declaration.
    pub fn declare_line(&mut self, line: &str) -> Result<bool, SyntaxError> {
        let line = line.trim();
        let (kind, rest) = match line.split_once(char::is_whitespace) {
            Some((k @ ("fun" | "pred"), rest)) => (k, rest.trim()),
            _ => return Ok(false),
        };
        let bad = || SyntaxError::Parse {
            pos: 0,
            msg: format!("malformed declaration `{line}`"),
        };
        let (name, arity) = rest.split_once('/').ok_or_else(bad)?;
        let arity: usize = arity.trim().parse().map_err(|_| bad())?;
        let name = name.trim();
        if kind == "fun" {
            if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
                return Err(bad());
            }
            self.signature.declare_function(name, arity)?;
        } else {
            if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                return Err(bad());
            }
            self.signature.declare_predicate(name, arity)?;
        }
        Ok(true)
    }

    /// Parses text that may start with declaration lines.
    pub fn formula_with_header(&mut self, src: &str) -> Result<Formula, SyntaxError> {
        let body = self.strip_header(src)?;
        self.formula(&body)
    }

    /// Blanks out declaration lines, keeping byte offsets of the rest.
    fn strip_header(&mut self, src: &str) -> Result<String, SyntaxError> {
        let mut body = String::with_capacity(src.len());
        for line in src.split_inclusive('\n') {
            let content = line.trim_end_matches(['\n', '\r']);
            if self.declare_line(content)? {
                body.extend(std::iter::repeat_n(' ', content.len()));
                body.push_str(&line[content.len()..]);
            } else {
                body.push_str(line);
            }
        }
        Ok(body)
    }

    pub fn formula(&mut self, src: &str) -> Result<Formula, SyntaxError> {
        self.reset(src)?;
        let f = self.parse_formula()?;
        self.expect_eof()?;
        Ok(f)
    }

    pub fn term(&mut self, src: &str) -> Result<Term, SyntaxError> {
        self.reset(src)?;
        let t = self.parse_term()?;
        self.expect_eof()?;
        Ok(t)
    }

    /// A term if the whole input is a term, otherwise a formula.
    pub fn expr(&mut self, src: &str) -> Result<Expr, SyntaxError> {
        let body = self.strip_header(src)?;
        let saved = self.signature.clone();
        match self.term(&body) {
            Ok(t) => Ok(Expr::Term(t)),
            Err(_) => {
                self.signature = saved;
                self.formula(&body).map(Expr::Formula)
            }
        }
    }

    fn reset(&mut self, src: &str) -> Result<(), SyntaxError> {
        self.toks = lex(src)?;
        self.pos = 0;
        self.scope.clear();
        Ok(())
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expect_eof(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    fn parse_formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.parse_formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.parse_imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_or(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_and()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.parse_or()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.parse_and()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.parse_unary()?))
            }
            Tok::Ident(k) if k == "all" || k == "ex" => {
                self.bump();
                let b = self.parse_binder()?;
                Ok(if k == "all" {
                    Formula::Forall(b)
                } else {
                    Formula::Exists(b)
                })
            }
            _ => self.parse_primary(),
        }
    }

    /// Variable and scope of a binder; the keyword is already consumed.
    fn parse_binder(&mut self) -> Result<Binder, SyntaxError> {
        let var = match self.peek().clone() {
            Tok::Ident(v)
                if v.starts_with(|c: char| c.is_ascii_lowercase()) && !KEYWORDS.contains(&v.as_str()) =>
            {
                v
            }
            _ => return self.error("expected a variable after binder"),
        };
        if self.scope.contains(&var) {
            return Err(SyntaxError::Rebound(var));
        }
        self.bump();
        self.scope.push(var.clone());
        let body = if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.parse_formula();
            
            f.and_then(|f| self.expect(Tok::RParen, "`)`").map(|_| f))
        } else {
            self.parse_unary()
        };
        self.scope.pop();
        let body = body?;
        if !formula_mentions_index(&body, 0) {
            return Err(SyntaxError::VacuousBinder(var));
        }
        Ok(Binder {
            hint: Name::from(var.as_str()),
            body: Box::new(body),
        })
    }

    fn parse_primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.parse_formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "true" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(k) if k == "false" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(p) if p.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.parse_args()?
                } else {
                    Vec::new()
                };
                self.signature.declare_predicate(&p, args.len())?;
                Ok(Formula::Atom(Name::from(p.as_str()), args))
            }
            Tok::Ident(_) => {
                let lhs = self.parse_term()?;
                match self.bump() {
                    Tok::Eq => Ok(Formula::Eq(lhs, self.parse_term()?)),
                    Tok::Neq => Ok(Formula::not(Formula::Eq(lhs, self.parse_term()?))),
                    _ => {
                        self.pos -= 1;
                        self.error("expected `=` after term")
                    }
                }
            }
            _ => self.error("expected a formula"),
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Term>, SyntaxError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.parse_term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.parse_term()?);
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn parse_term(&mut self) -> Result<Term, SyntaxError> {
        let name = match self.peek().clone() {
            Tok::Ident(n) if n.starts_with(|c: char| c.is_ascii_lowercase() || c == '_') => n,
            _ => return self.error("expected a term"),
        };
        if name == "eps" && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            return Ok(Term::Eps(self.parse_binder()?));
        }
        if KEYWORDS.contains(&name.as_str()) {
            return self.error(format!("`{name}` cannot start a term"));
        }
        self.bump();
        if *self.peek() == Tok::LParen {
            let args = self.parse_args()?;
            self.signature.declare_function(&name, args.len())?;
            return Ok(Term::App(Name::from(name.as_str()), args));
        }
        if let Some(i) = self.scope.iter().rev().position(|v| *v == name) {
            return Ok(Term::Bound(i));
        }
        match self.signature.functions.get(name.as_str()) {
            Some(0) => return Ok(Term::App(Name::from(name.as_str()), Vec::new())),
            Some(&n) => {
                return Err(SyntaxError::Arity {
                    symbol: name,
                    expected: n,
                    found: 0,
                })
            }
            None => {}
        }
        if is_constant_name(&name) {
            self.signature.declare_function(&name, 0)?;
            return Ok(Term::App(Name::from(name.as_str()), Vec::new()));
        }
        Ok(Term::Var(Name::from(name.as_str())))
    }
}

/// Undeclared bare names starting with `a`..`e` denote constants.
pub(crate) fn is_constant_name(name: &str) -> bool {
    name.starts_with(|c: char| ('a'..='e').contains(&c))
}

pub fn parse_formula(src: &str) -> Result<Formula, SyntaxError> {
    Parser::new().formula_with_header(src)
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new();
    let body = p.strip_header(src)?;
    p.term(&body)
}

pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    Parser::new().expr(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_with_constant() {
        assert_eq!(
            parse_formula("P(a)").unwrap(),
            Formula::atom("P", vec![Term::constant("a")])
        );
    }

    #[test]
    fn eps_term() {
        let t = parse_term("eps x (P(x, c))").unwrap();
        let expected = Term::eps(
            "x",
            &Formula::atom("P", vec![Term::var("x"), Term::constant("c")]),
        )
        .unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn vacuous_eps_rejected() {
        assert_eq!(
            parse_term("eps x (P(y))"),
            Err(SyntaxError::VacuousBinder("x".into()))
        );
        assert!(matches!(
            parse_formula("all x (P(y))"),
            Err(SyntaxError::VacuousBinder(_))
        ));
    }

    #[test]
    fn rebinding_rejected() {
        assert!(matches!(
            parse_formula("ex x (P(x) & all x (Q(x)))"),
            Err(SyntaxError::Rebound(_))
        ));
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            parse_formula("P(a) & P(a, b)"),
            Err(SyntaxError::Arity { .. })
        ));
        assert!(matches!(
            parse_formula("Q(f(a)) & Q(f(a, b))"),
            Err(SyntaxError::Arity { .. })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("~P | Q & R -> S <-> T").unwrap();
        let p = |s: &str| Formula::atom(s, vec![]);
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(Formula::not(p("P")), Formula::and(p("Q"), p("R"))),
                p("S"),
            ),
            p("T"),
        );
        assert_eq!(f, expected);
        let g = parse_formula("P -> Q -> R").unwrap();
        assert_eq!(g, Formula::implies(p("P"), Formula::implies(p("Q"), p("R"))));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_formula("P(a) & ") {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_declares_constant() {
        let f = parse_formula("fun k/0\nP(k)").unwrap();
        assert_eq!(f, Formula::atom("P", vec![Term::constant("k")]));
        let g = parse_formula("P(k)").unwrap();
        assert_eq!(g, Formula::atom("P", vec![Term::var("k")]));
    }

    #[test]
    fn equality_and_disequality() {
        let f = parse_formula("t = u -> f(t) != f(u)").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::eq(Term::var("t"), Term::var("u")),
                Formula::not(Formula::eq(
                    Term::app("f", vec![Term::var("t")]),
                    Term::app("f", vec![Term::var("u")])
                ))
            )
        );
    }

    #[test]
    fn expr_distinguishes_terms() {
        assert!(matches!(parse_expr("f(x)").unwrap(), Expr::Term(_)));
        assert!(matches!(parse_expr("P(x)").unwrap(), Expr::Formula(_)));
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            parse_formula("∀x (P(x) → ∃y (Q(y)))").unwrap(),
            parse_formula("all x (P(x) -> ex y (Q(y)))").unwrap()
        );
    }
}
