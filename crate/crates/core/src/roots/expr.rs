//! Text form of pair expressions.
//!
//! ```text
//! expr    := term (('+' | '#0' | '#2' ['[' i ',' j ']']) term)*
//! term    := [count '*'] (atom | '(' expr ')')
//! atom    := Prime(label [, c] [, comps] [, key=value]*) | Opaque(...)
//!          | Trivial0 | Trivial2 | D | Handle | S3 | S3core | P3 | P3core
//!          | L31 | L31core | Xn(n) | T(m,q) | Torus(m,q)
//! c       := n | ? | [n, n] | [n, ?]
//! ```
//!
//! Sums are evaluated left to right. Without an index annotation `#2` joins
//! the last atom on the left and the first atom on the right that carry a
//! nonempty link.

use std::fmt::Write as _;

use thiserror::Error;

use super::{sum2, Ambient, Atom, AtomKind, Complexity, Exceptional, PairExpression, RootError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(u64),
    Str(String),
    Sym(char),
    Hash(u8),
}

struct Lexer<'a> {
    src: &'a str,
    tokens: Vec<(usize, Token)>,
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { position, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut lx = Lexer { src, tokens: Vec::new() };
        let mut chars = src.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '(' | ')' | '[' | ']' | ',' | '=' | '+' | '*' | '?' => {
                    chars.next();
                    lx.tokens.push((i, Token::Sym(c)));
                }
                '#' => {
                    chars.next();
                    match chars.next() {
                        Some((_, '0')) => lx.tokens.push((i, Token::Hash(0))),
                        Some((_, '2')) => lx.tokens.push((i, Token::Hash(2))),
                        _ => return Err(syntax(i, "expected #0 or #2")),
                    }
                }
                '"' => {
                    chars.next();
                    let mut s = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '"')) => break,
                            Some((_, '\\')) => match chars.next() {
                                Some((_, e)) => s.push(e),
                                None => return Err(syntax(i, "unterminated string")),
                            },
                            Some((_, ch)) => s.push(ch),
                            None => return Err(syntax(i, "unterminated string")),
                        }
                    }
                    lx.tokens.push((i, Token::Str(s)));
                }
                c if c.is_ascii_digit() => {
                    let end = lx.scan(i, |c| c.is_ascii_digit());
                    let n = lx.src[i..end].parse().map_err(|_| syntax(i, "integer too large"))?;
                    while chars.peek().is_some_and(|&(j, _)| j < end) {
                        chars.next();
                    }
                    lx.tokens.push((i, Token::Int(n)));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let end = lx.scan(i, |c| c.is_alphanumeric() || c == '_' || c == '\'');
                    while chars.peek().is_some_and(|&(j, _)| j < end) {
                        chars.next();
                    }
                    lx.tokens.push((i, Token::Ident(lx.src[i..end].to_string())));
                }
                _ => return Err(syntax(i, format!("unexpected character {c:?}"))),
            }
        }
        Ok(lx.tokens)
    }

    fn scan(&self, start: usize, keep: impl Fn(char) -> bool) -> usize {
        self.src[start..].char_indices().find(|&(_, c)| !keep(c)).map_or(self.src.len(), |(j, _)| start + j)
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        let at = self.offset();
        match self.next() {
            Some(Token::Int(n)) => Ok(n),
            _ => Err(syntax(at, "expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<PairExpression, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Sym('+')) | Some(Token::Hash(0)) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc.atoms.extend(rhs.atoms);
                    acc.log.extend(rhs.log);
                }
                Some(Token::Hash(2)) => {
                    self.pos += 1;
                    let targets = if self.eat('[') {
                        let i = self.int()? as usize;
                        self.expect(',')?;
                        let j = self.int()? as usize;
                        self.expect(']')?;
                        Some((i, j))
                    } else {
                        None
                    };
                    let rhs = self.term()?;
                    let (i, j) = match targets {
                        Some(t) => t,
                        None => (
                            acc.atoms.iter().rposition(|a| a.components > 0).ok_or(RootError::NoTarget)?,
                            rhs.atoms.iter().position(|a| a.components > 0).ok_or(RootError::NoTarget)?,
                        ),
                    };
                    acc = sum2(&acc, i, &rhs, j)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PairExpression, ParseError> {
        let count = match (self.peek(), self.tokens.get(self.pos + 1).map(|(_, t)| t)) {
            (Some(&Token::Int(k)), Some(Token::Sym('*'))) => {
                self.pos += 2;
                k
            }
            _ => 1,
        };
        let one = if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            e
        } else {
            PairExpression::new(vec![self.atom()?])
        };
        let mut out = PairExpression::empty();
        for _ in 0..count {
            out.atoms.extend(one.atoms.iter().cloned());
            out.log.extend(one.log.iter().cloned());
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.offset();
        let name = match self.next() {
            Some(Token::Ident(name)) => name,
            _ => return Err(syntax(at, "expected an atom")),
        };
        let simple = match name.as_str() {
            "Trivial0" => Some(Atom::trivial0()),
            "Trivial2" => Some(Atom::trivial2()),
            "D" => Some(Atom::d()),
            "Handle" => Some(Atom::handle()),
            other => Exceptional::ALL.iter().find(|e| e.name() == other).map(|&e| Atom::exceptional(e)),
        };
        if let Some(a) = simple {
            if self.eat('(') {
                self.expect(')')?;
            }
            return Ok(a);
        }
        self.expect('(')?;
        let atom = match name.as_str() {
            "Xn" => Atom::xn(self.int()?)?,
            "T" | "Torus" => {
                let m = self.int()?;
                self.expect(',')?;
                Atom::torus(m, self.int()?)?
            }
            "Prime" | "Opaque" => return self.labelled(name == "Prime"),
            _ => return Err(syntax(at, format!("unknown atom {name}"))),
        };
        self.expect(')')?;
        Ok(atom)
    }

    /// Arguments of `Prime(...)` or `Opaque(...)` after the opening paren.
    fn labelled(&mut self, prime: bool) -> Result<Atom, ParseError> {
        let at = self.offset();
        let label = match self.next() {
            Some(Token::Str(s)) | Some(Token::Ident(s)) => s,
            _ => return Err(syntax(at, "expected a label")),
        };
        let mut complexity = if prime { Complexity::UNKNOWN } else { Complexity::ZERO };
        let mut components = 1;
        let mut ambient = Ambient::S3;
        let mut positional = 0;
        while self.eat(',') {
            let keyed = matches!(
                (self.peek(), self.tokens.get(self.pos + 1).map(|(_, t)| t)),
                (Some(Token::Ident(_)), Some(Token::Sym('=')))
            );
            if keyed {
                let at = self.offset();
                let Some(Token::Ident(key)) = self.next() else { unreachable!() };
                self.expect('=')?;
                match key.as_str() {
                    "c" => complexity = self.complexity()?,
                    "comps" => components = self.int()? as usize,
                    "ambient" if prime => ambient = self.ambient()?,
                    _ => return Err(syntax(at, format!("unknown key {key}"))),
                }
            } else {
                match positional {
                    0 => complexity = self.complexity()?,
                    1 => components = self.int()? as usize,
                    _ => return Err(syntax(self.offset(), "too many arguments")),
                }
                positional += 1;
            }
        }
        self.expect(')')?;
        let kind =
            if prime { AtomKind::Prime { label, complexity, ambient } } else { AtomKind::Opaque { label, complexity } };
        Ok(Atom { kind, components })
    }

    fn complexity(&mut self) -> Result<Complexity, ParseError> {
        if self.eat('?') {
            return Ok(Complexity::UNKNOWN);
        }
        if self.eat('[') {
            let lower = self.int()?;
            self.expect(',')?;
            let upper = if self.eat('?') { None } else { Some(self.int()?) };
            self.expect(']')?;
            if upper.is_some_and(|u| u < lower) {
                return Err(syntax(self.offset(), "complexity interval has lower > upper"));
            }
            return Ok(Complexity { lower, upper });
        }
        Ok(Complexity::exact(self.int()?))
    }

    fn ambient(&mut self) -> Result<Ambient, ParseError> {
        let at = self.offset();
        match self.next() {
            Some(Token::Ident(s)) if s == "S3" => Ok(Ambient::S3),
            Some(Token::Ident(s)) if s == "other" => Ok(Ambient::Other),
            _ => Err(syntax(at, "ambient must be S3 or other")),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<PairExpression, ParseError> {
    let tokens = Lexer::run(text)?;
    if tokens.is_empty() {
        return Ok(PairExpression::empty());
    }
    let mut p = Parser { tokens, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

fn quote(label: &str) -> String {
    let mut s = String::from('"');
    for c in label.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    s
}

pub(crate) fn serialize_atom(a: &Atom) -> String {
    match &a.kind {
        AtomKind::Prime { label, complexity, ambient } => {
            let mut s = format!("Prime({}, c={complexity}", quote(label));
            if a.components != 1 {
                let _ = write!(s, ", comps={}", a.components);
            }
            if *ambient == Ambient::Other {
                s.push_str(", ambient=other");
            }
            s.push(')');
            s
        }
        AtomKind::Opaque { label, complexity } => {
            let mut s = format!("Opaque({}, c={complexity}", quote(label));
            if a.components != 1 {
                let _ = write!(s, ", comps={}", a.components);
            }
            s.push(')');
            s
        }
        AtomKind::Trivial0 => "Trivial0".into(),
        AtomKind::Trivial2 => "Trivial2".into(),
        AtomKind::D => "D".into(),
        AtomKind::Handle => "Handle".into(),
        AtomKind::Exceptional(e) => e.name().into(),
        AtomKind::Xn(n) => format!("Xn({n})"),
        AtomKind::TorusPair(m, q) => format!("T({m},{q})"),
    }
}

/// Atoms joined by ` + `, runs of equal atoms written as `k*Atom`.
pub(crate) fn serialize(e: &PairExpression) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < e.atoms.len() {
        let run = e.atoms[i..].iter().take_while(|a| **a == e.atoms[i]).count();
        let atom = serialize_atom(&e.atoms[i]);
        parts.push(if run > 1 { format!("{run}*{atom}") } else { atom });
        i += run;
    }
    parts.join(" + ")
}
