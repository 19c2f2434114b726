//! TPTP `fof` reading and writing.
//!
//! The writer emits one statement per formula:
//! `fof(<name>, <role>, <formula>).` with `~ & | => <=>` connectives and
//! `! [X] :` / `? [X] :` quantifiers. Binary connectives are always
//! parenthesized and runs of like quantifiers are collapsed into one
//! variable list, so reading a written statement back reproduces the
//! original formula structure exactly.

use super::{Atom, Formula, Term};
use std::fmt::Write as _;
use thiserror::Error;

/// Statement role. Axioms are taken as given; a conjecture is the
/// statement a refutation run negates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Axiom,
    Conjecture,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Conjecture => "conjecture",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TptpError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot serialize: {0}")]
    Serialize(String),
}

/// A named, role-tagged formula as read from a TPTP file.
#[derive(Debug, Clone, PartialEq)]
pub struct TptpStatement {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
}

fn valid_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn valid_upper_word(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_term(t: &Term, out: &mut String) -> Result<(), TptpError> {
    match t {
        Term::Variable(v) => {
            if !valid_upper_word(v) {
                return Err(TptpError::Serialize(format!("invalid variable name {v:?}")));
            }
            out.push_str(v);
        }
        Term::Constant(c) => {
            if !valid_lower_word(c) {
                return Err(TptpError::Serialize(format!("invalid constant name {c:?}")));
            }
            out.push_str(c);
        }
        Term::Function(f, args) => {
            if !valid_lower_word(f) {
                return Err(TptpError::Serialize(format!("invalid functor name {f:?}")));
            }
            if args.is_empty() {
                return Err(TptpError::Serialize(format!(
                    "function {f:?} with zero arguments; use a constant"
                )));
            }
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(a, out)?;
            }
            out.push(')');
        }
    }
    Ok(())
}

fn write_atom(a: &Atom, out: &mut String) -> Result<(), TptpError> {
    if !valid_lower_word(&a.predicate) {
        return Err(TptpError::Serialize(format!(
            "invalid predicate name {:?}",
            a.predicate
        )));
    }
    out.push_str(&a.predicate);
    if !a.args.is_empty() {
        out.push('(');
        for (i, t) in a.args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_term(t, out)?;
        }
        out.push(')');
    }
    Ok(())
}

fn write_formula(f: &Formula, out: &mut String) -> Result<(), TptpError> {
    match f {
        Formula::Atom(a) => write_atom(a, out),
        Formula::Not(inner) => {
            out.push('~');
            match inner.as_ref() {
                Formula::Atom(_) | Formula::Not(_) => write_formula(inner, out),
                _ => {
                    out.push('(');
                    write_formula(inner, out)?;
                    out.push(')');
                    Ok(())
                }
            }
        }
        Formula::And(a, b) => write_binary(a, "&", b, out),
        Formula::Or(a, b) => write_binary(a, "|", b, out),
        Formula::Implies(a, b) => write_binary(a, "=>", b, out),
        Formula::Iff(a, b) => write_binary(a, "<=>", b, out),
        Formula::Forall(_, _) => write_quantified(f, '!', out),
        Formula::Exists(_, _) => write_quantified(f, '?', out),
    }
}

fn write_binary(a: &Formula, op: &str, b: &Formula, out: &mut String) -> Result<(), TptpError> {
    out.push('(');
    write_formula(a, out)?;
    let _ = write!(out, " {op} ");
    write_formula(b, out)?;
    out.push(')');
    Ok(())
}

/// Collapse a run of like quantifiers into a single variable list.
fn write_quantified(f: &Formula, sym: char, out: &mut String) -> Result<(), TptpError> {
    let mut vars = Vec::new();
    let mut body = f;
    loop {
        match (sym, body) {
            ('!', Formula::Forall(v, inner)) | ('?', Formula::Exists(v, inner)) => {
                if !valid_upper_word(v) {
                    return Err(TptpError::Serialize(format!("invalid variable name {v:?}")));
                }
                vars.push(v.clone());
                body = inner;
            }
            _ => break,
        }
    }
    let _ = write!(out, "{sym} [{}] : ", vars.join(","));
    match body {
        Formula::Atom(_) | Formula::Not(_) | Formula::Forall(_, _) | Formula::Exists(_, _) => {
            write_formula(body, out)
        }
        _ => write_formula(body, out), // binary bodies already parenthesize themselves
    }
}

/// Render one `fof` statement. Fails on names or symbols that are not
/// legal TPTP words.
pub fn serialize_tptp(formula: &Formula, name: &str, role: Role) -> Result<String, TptpError> {
    if !valid_lower_word(name) {
        return Err(TptpError::Serialize(format!("invalid statement name {name:?}")));
    }
    let mut out = String::new();
    let _ = write!(out, "fof({name}, {}, ", role.as_str());
    write_formula(formula, &mut out)?;
    out.push_str(").");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Period,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Bang,
    Question,
    Lower(String),
    Upper(String),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, message: impl Into<String>) -> TptpError {
        TptpError::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, TptpError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and % line comments
            loop {
                match self.peek() {
                    Some(c) if (c as char).is_whitespace() => {
                        self.bump();
                    }
                    Some(b'%') => {
                        while let Some(c) = self.peek() {
                            if c == b'\n' {
                                break;
                            }
                            self.bump();
                        }
                    }
                    _ => break,
                }
            }
            let (line, col) = (self.line, self.col);
            let c = match self.bump() {
                Some(c) => c,
                None => return Ok(out),
            };
            let tok = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b',' => Tok::Comma,
                b':' => Tok::Colon,
                b'.' => Tok::Period,
                b'~' => Tok::Tilde,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'!' => Tok::Bang,
                b'?' => Tok::Question,
                b'=' => {
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.err("expected '>' after '='"));
                    }
                }
                b'<' => {
                    if self.peek() == Some(b'=') {
                        self.bump();
                        if self.peek() == Some(b'>') {
                            self.bump();
                            Tok::DoubleArrow
                        } else {
                            return Err(self.err("expected '>' after '<='"));
                        }
                    } else {
                        return Err(self.err("expected '=' after '<'"));
                    }
                }
                c if (c as char).is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos - 1;
                    while let Some(n) = self.peek() {
                        if (n as char).is_ascii_alphanumeric() || n == b'_' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos])
                        .expect("ascii word")
                        .to_string();
                    if (c as char).is_ascii_uppercase() {
                        Tok::Upper(word)
                    } else {
                        Tok::Lower(word)
                    }
                }
                other => {
                    return Err(self.err(format!("unexpected character {:?}", other as char)));
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn err_at(&self, message: impl Into<String>) -> TptpError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1));
        TptpError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), TptpError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.bump();
                Ok(())
            }
            Some(t) => Err(self.err_at(format!("expected {what}, found {t:?}"))),
            None => Err(self.err_at(format!("expected {what}, found end of input"))),
        }
    }

    fn lower_word(&mut self, what: &str) -> Result<String, TptpError> {
        match self.bump() {
            Some(Tok::Lower(w)) => Ok(w),
            Some(t) => {
                self.pos -= 1;
                Err(self.err_at(format!("expected {what}, found {t:?}")))
            }
            None => Err(self.err_at(format!("expected {what}, found end of input"))),
        }
    }

    fn statement(&mut self) -> Result<TptpStatement, TptpError> {
        match self.lower_word("'fof'")? {
            w if w == "fof" => {}
            w => {
                self.pos -= 1;
                return Err(self.err_at(format!("expected 'fof', found {w:?}")));
            }
        }
        self.expect(Tok::LParen, "'('")?;
        let name = self.lower_word("statement name")?;
        self.expect(Tok::Comma, "','")?;
        let role_word = self.lower_word("role")?;
        let role = match role_word.as_str() {
            "axiom" => Role::Axiom,
            "conjecture" => Role::Conjecture,
            other => {
                self.pos -= 1;
                return Err(self.err_at(format!(
                    "unsupported role {other:?} (expected axiom or conjecture)"
                )));
            }
        };
        self.expect(Tok::Comma, "','")?;
        let formula = self.formula()?;
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Period, "'.'")?;
        Ok(TptpStatement { name, role, formula })
    }

    /// Binary connectives by loosest-first precedence: `<=>`, `=>`, `|`, `&`.
    /// `&` and `|` chains nest to the right; `=>` and `<=>` do not chain.
    fn formula(&mut self) -> Result<Formula, TptpError> {
        let lhs = self.or_formula()?;
        match self.peek() {
            Some(Tok::Arrow) => {
                self.bump();
                let rhs = self.or_formula()?;
                Ok(Formula::implies(lhs, rhs))
            }
            Some(Tok::DoubleArrow) => {
                self.bump();
                let rhs = self.or_formula()?;
                Ok(Formula::iff(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn or_formula(&mut self) -> Result<Formula, TptpError> {
        let lhs = self.and_formula()?;
        if matches!(self.peek(), Some(Tok::Pipe)) {
            self.bump();
            let rhs = self.or_formula()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn and_formula(&mut self) -> Result<Formula, TptpError> {
        let lhs = self.unitary()?;
        if matches!(self.peek(), Some(Tok::Amp)) {
            self.bump();
            let rhs = self.and_formula()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unitary(&mut self) -> Result<Formula, TptpError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Tilde) => {
                self.bump();
                let f = self.unitary()?;
                Ok(Formula::not(f))
            }
            Some(Tok::Bang) => {
                self.bump();
                self.quantified(true)
            }
            Some(Tok::Question) => {
                self.bump();
                self.quantified(false)
            }
            Some(Tok::Lower(_)) => self.atom(),
            Some(t) => Err(self.err_at(format!("expected a formula, found {t:?}"))),
            None => Err(self.err_at("expected a formula, found end of input")),
        }
    }

    fn quantified(&mut self, universal: bool) -> Result<Formula, TptpError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut vars = Vec::new();
        loop {
            match self.bump() {
                Some(Tok::Upper(v)) => vars.push(v),
                Some(t) => {
                    self.pos -= 1;
                    return Err(self.err_at(format!("expected a variable, found {t:?}")));
                }
                None => return Err(self.err_at("expected a variable, found end of input")),
            }
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                }
                _ => break,
            }
        }
        self.expect(Tok::RBracket, "']'")?;
        self.expect(Tok::Colon, "':'")?;
        let body = self.unitary()?;
        let mut f = body;
        for v in vars.into_iter().rev() {
            f = if universal {
                Formula::forall(v, f)
            } else {
                Formula::exists(v, f)
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, TptpError> {
        let predicate = self.lower_word("predicate")?;
        let mut args = Vec::new();
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.bump();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Some(Tok::Comma) => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(Formula::Atom(Atom { predicate, args }))
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.bump() {
            Some(Tok::Upper(v)) => Ok(Term::Variable(v)),
            Some(Tok::Lower(w)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    self.bump();
                    let mut args = Vec::new();
                    loop {
                        args.push(self.term()?);
                        match self.peek() {
                            Some(Tok::Comma) => {
                                self.bump();
                            }
                            _ => break,
                        }
                    }
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Term::Function(w, args))
                } else {
                    Ok(Term::Constant(w))
                }
            }
            Some(t) => {
                self.pos -= 1;
                Err(self.err_at(format!("expected a term, found {t:?}")))
            }
            None => Err(self.err_at("expected a term, found end of input")),
        }
    }
}

/// Parse a TPTP document into its `fof` statements. Errors carry the
/// line and column of the offending token.
pub fn parse_tptp(text: &str) -> Result<Vec<TptpStatement>, TptpError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.statement()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::Formula;

    #[test]
    fn serializes_universal_implication() {
        let f = Formula::forall(
            "X",
            Formula::implies(
                Formula::atom("dog", vec![Term::var("X")]),
                Formula::atom("animal", vec![Term::var("X")]),
            ),
        );
        assert_eq!(
            serialize_tptp(&f, "a1", Role::Axiom).unwrap(),
            "fof(a1, axiom, ! [X] : (dog(X) => animal(X)))."
        );
    }

    #[test]
    fn serializes_zero_arity_atom_without_parens() {
        let f = Formula::atom("p", vec![]);
        assert_eq!(
            serialize_tptp(&f, "a2", Role::Axiom).unwrap(),
            "fof(a2, axiom, p)."
        );
    }

    #[test]
    fn parses_what_it_writes() {
        let f = Formula::exists(
            "X",
            Formula::and(
                Formula::atom("object", vec![Term::var("X"), Term::constant("dog")]),
                Formula::not(Formula::atom(
                    "property1",
                    vec![Term::var("X"), Term::constant("small")],
                )),
            ),
        );
        let text = serialize_tptp(&f, "s", Role::Conjecture).unwrap();
        let parsed = parse_tptp(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].name, "s");
        assert_eq!(parsed[0].role, Role::Conjecture);
        assert!(parsed[0].formula.alpha_eq(&f));
    }

    #[test]
    fn collapses_quantifier_runs() {
        let f = Formula::forall(
            "A",
            Formula::forall(
                "B",
                Formula::implies(
                    Formula::atom("predicate1", vec![Term::var("A"), Term::constant("sprint"), Term::var("B")]),
                    Formula::atom("predicate1", vec![Term::var("A"), Term::constant("run"), Term::var("B")]),
                ),
            ),
        );
        let text = serialize_tptp(&f, "s2_v_0", Role::Axiom).unwrap();
        assert!(text.contains("! [A,B] :"), "{text}");
        assert!(parse_tptp(&text).unwrap()[0].formula.alpha_eq(&f));
    }

    #[test]
    fn reports_error_location() {
        let err = parse_tptp("fof(a, axiom, p(X) &&& q).").unwrap_err();
        match err {
            TptpError::Syntax { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_role() {
        assert!(parse_tptp("fof(a, lemma, p).").is_err());
    }

    #[test]
    fn skips_comments() {
        let text = "% a header comment\nfof(a, axiom, p). % trailing\n% tail\n";
        assert_eq!(parse_tptp(text).unwrap().len(), 1);
    }
}
