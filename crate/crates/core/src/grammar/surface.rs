//! Surface syntax: a small PEG notation with the GTDPL ternary as an extra
//! primary.
//!
//! ```text
//! # comment
//! S    <- (A / B)* !'x' "lit" [a-z_] eps fail
//! T    <- Cond[Then,Else]
//! ```
//!
//! Choice `/` binds loosest and nests to the right, sequences are formed by
//! juxtaposition (also right-nested), `!` is prefix and `*`, `+`, `?` postfix.
//! A rule ends where the next `NAME <-` begins, so continuation lines can be
//! indented freely.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Inclusive byte range inside a character class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ByteRange {
    pub lo: u8,
    pub hi: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceExpr {
    Empty,
    Fail,
    Terminal(u8),
    /// Sorted, non-overlapping, non-adjacent ranges; never empty.
    ByteClass(Vec<ByteRange>),
    /// Never empty.
    Literal(Vec<u8>),
    Nonterminal(String),
    Seq(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Choice(Box<SurfaceExpr>, Box<SurfaceExpr>),
    Star(Box<SurfaceExpr>),
    Plus(Box<SurfaceExpr>),
    Opt(Box<SurfaceExpr>),
    Not(Box<SurfaceExpr>),
    Ternary(String, String, String),
}

impl SurfaceExpr {
    pub fn seq(a: SurfaceExpr, b: SurfaceExpr) -> Self {
        SurfaceExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: SurfaceExpr, b: SurfaceExpr) -> Self {
        SurfaceExpr::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(a: SurfaceExpr) -> Self {
        SurfaceExpr::Star(Box::new(a))
    }

    pub fn nt(name: &str) -> Self {
        SurfaceExpr::Nonterminal(name.to_string())
    }

    /// Normalized class over an arbitrary set of ranges. `None` if empty.
    pub fn class(ranges: impl IntoIterator<Item = ByteRange>) -> Option<Self> {
        let mut rs: Vec<ByteRange> = ranges
            .into_iter()
            .map(|r| ByteRange { lo: r.lo.min(r.hi), hi: r.lo.max(r.hi) })
            .collect();
        rs.sort();
        let mut merged: Vec<ByteRange> = Vec::with_capacity(rs.len());
        for r in rs {
            match merged.last_mut() {
                Some(last) if r.lo as u16 <= last.hi as u16 + 1 => last.hi = last.hi.max(r.hi),
                _ => merged.push(r),
            }
        }
        if merged.is_empty() {
            None
        } else {
            Some(SurfaceExpr::ByteClass(merged))
        }
    }
}

/// Rules in textual order; the first rule is the start symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceGrammar {
    pub rules: Vec<(String, SurfaceExpr)>,
}

impl SurfaceGrammar {
    pub fn start(&self) -> &str {
        &self.rules[0].0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrammarErrorKind {
    Syntax(String),
    DuplicateRule(String),
    UndefinedNonterminal(String),
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarError {
    pub kind: GrammarErrorKind,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            GrammarErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            GrammarErrorKind::DuplicateRule(n) => write!(f, "rule `{n}` is defined more than once"),
            GrammarErrorKind::UndefinedNonterminal(n) => write!(f, "undefined nonterminal `{n}`"),
            GrammarErrorKind::Empty => write!(f, "grammar has no rules"),
        }
    }
}

impl core::error::Error for GrammarError {}

/// Parses grammar text into a [`SurfaceGrammar`].
pub fn parse_grammar(text: &str) -> Result<SurfaceGrammar, GrammarError> {
    let mut p = GrammarParser { src: text.as_bytes(), pos: 0, line: 1, col: 1, refs: Vec::new() };
    let mut rules: Vec<(String, SurfaceExpr)> = Vec::new();
    let mut defined: BTreeMap<String, ()> = BTreeMap::new();
    p.skip_trivia();
    while !p.at_end() {
        let (line, col) = (p.line, p.col);
        let name = p.ident().ok_or_else(|| p.syntax("expected rule name"))?;
        if is_keyword(&name) {
            return Err(GrammarError { kind: GrammarErrorKind::Syntax(alloc::format!("`{name}` is reserved")), line, col });
        }
        p.skip_trivia();
        if !p.eat_str("<-") {
            return Err(p.syntax("expected `<-`"));
        }
        p.skip_trivia();
        let body = p.expr()?;
        if defined.insert(name.clone(), ()).is_some() {
            return Err(GrammarError { kind: GrammarErrorKind::DuplicateRule(name), line, col });
        }
        rules.push((name, body));
    }
    if rules.is_empty() {
        return Err(GrammarError { kind: GrammarErrorKind::Empty, line: p.line, col: p.col });
    }
    for (name, line, col) in p.refs {
        if !defined.contains_key(&name) {
            return Err(GrammarError { kind: GrammarErrorKind::UndefinedNonterminal(name), line, col });
        }
    }
    Ok(SurfaceGrammar { rules })
}

fn is_keyword(s: &str) -> bool {
    s == "eps" || s == "fail"
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

struct GrammarParser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    refs: Vec<(String, usize, usize)>,
}

impl GrammarParser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.src.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            for _ in 0..s.len() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn syntax(&self, msg: &str) -> GrammarError {
        GrammarError { kind: GrammarErrorKind::Syntax(msg.to_string()), line: self.line, col: self.col }
    }

    fn skip_trivia(&mut self) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Option<String> {
        if !self.peek().is_some_and(is_ident_start) {
            return None;
        }
        let start = self.pos;
        while self.peek().is_some_and(is_ident_continue) {
            self.bump();
        }
        Some(String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii identifier"))
    }

    /// True when the upcoming tokens are `NAME <-`, i.e. a new rule starts.
    fn at_rule_start(&self) -> bool {
        let mut i = self.pos;
        if !self.src.get(i).copied().is_some_and(is_ident_start) {
            return false;
        }
        while self.src.get(i).copied().is_some_and(is_ident_continue) {
            i += 1;
        }
        loop {
            match self.src.get(i) {
                Some(b) if b.is_ascii_whitespace() => i += 1,
                Some(b'#') => {
                    while self.src.get(i).is_some_and(|&b| b != b'\n') {
                        i += 1;
                    }
                }
                _ => break,
            }
        }
        self.src[i..].starts_with(b"<-")
    }

    fn expr(&mut self) -> Result<SurfaceExpr, GrammarError> {
        let first = self.sequence()?;
        if self.eat(b'/') {
            self.skip_trivia();
            let rest = self.expr()?;
            Ok(SurfaceExpr::choice(first, rest))
        } else {
            Ok(first)
        }
    }

    fn sequence(&mut self) -> Result<SurfaceExpr, GrammarError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None | Some(b'/') | Some(b')') => break,
                _ if self.at_rule_start() => break,
                _ => {
                    items.push(self.prefix()?);
                    self.skip_trivia();
                }
            }
        }
        let mut it = items.into_iter().rev();
        let last = it.next().ok_or_else(|| self.syntax("expected expression"))?;
        Ok(it.fold(last, |acc, e| SurfaceExpr::seq(e, acc)))
    }

    fn prefix(&mut self) -> Result<SurfaceExpr, GrammarError> {
        if self.eat(b'!') {
            self.skip_trivia();
            let inner = self.prefix()?;
            return Ok(SurfaceExpr::Not(Box::new(inner)));
        }
        let mut e = self.primary()?;
        loop {
            e = match self.peek() {
                Some(b'*') => SurfaceExpr::Star(Box::new(e)),
                Some(b'+') => SurfaceExpr::Plus(Box::new(e)),
                Some(b'?') => SurfaceExpr::Opt(Box::new(e)),
                _ => return Ok(e),
            };
            self.bump();
        }
    }

    fn primary(&mut self) -> Result<SurfaceExpr, GrammarError> {
        let (line, col) = (self.line, self.col);
        match self.peek() {
            Some(b'(') => {
                self.bump();
                self.skip_trivia();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(b'\'') => {
                self.bump();
                let bytes = self.quoted(b'\'')?;
                match bytes.as_slice() {
                    [b] => Ok(SurfaceExpr::Terminal(*b)),
                    _ => Err(GrammarError {
                        kind: GrammarErrorKind::Syntax("character literal must be exactly one byte".to_string()),
                        line,
                        col,
                    }),
                }
            }
            Some(b'"') => {
                self.bump();
                let bytes = self.quoted(b'"')?;
                if bytes.is_empty() {
                    return Err(GrammarError {
                        kind: GrammarErrorKind::Syntax("empty string literal".to_string()),
                        line,
                        col,
                    });
                }
                Ok(SurfaceExpr::Literal(bytes))
            }
            Some(b'[') => self.class(line, col),
            Some(b) if is_ident_start(b) => {
                let name = self.ident().expect("checked ident start");
                match name.as_str() {
                    "eps" => return Ok(SurfaceExpr::Empty),
                    "fail" => return Ok(SurfaceExpr::Fail),
                    _ => {}
                }
                if self.peek() == Some(b'[') {
                    self.bump();
                    let cont = self.ternary_arg(b',')?;
                    let alt = self.ternary_arg(b']')?;
                    self.refs.push((name.clone(), line, col));
                    return Ok(SurfaceExpr::Ternary(name, cont, alt));
                }
                self.refs.push((name.clone(), line, col));
                Ok(SurfaceExpr::Nonterminal(name))
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn ternary_arg(&mut self, close: u8) -> Result<String, GrammarError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let arg = self.ident().ok_or_else(|| self.syntax("expected nonterminal in ternary"))?;
        if is_keyword(&arg) {
            return Err(GrammarError {
                kind: GrammarErrorKind::Syntax("ternary arguments must be nonterminals".to_string()),
                line,
                col,
            });
        }
        self.refs.push((arg.clone(), line, col));
        self.skip_trivia();
        if !self.eat(close) {
            return Err(self.syntax(if close == b',' { "expected `,`" } else { "expected `]`" }));
        }
        Ok(arg)
    }

    fn escape(&mut self) -> Result<u8, GrammarError> {
        let b = self.bump().ok_or_else(|| self.syntax("unterminated escape"))?;
        Ok(match b {
            b'n' => b'\n',
            b't' => b'\t',
            b'r' => b'\r',
            b'0' => 0,
            b'x' => {
                let hi = self.bump().and_then(hex_val);
                let lo = self.bump().and_then(hex_val);
                match (hi, lo) {
                    (Some(h), Some(l)) => h * 16 + l,
                    _ => return Err(self.syntax("invalid \\x escape")),
                }
            }
            b'\\' | b'\'' | b'"' | b'[' | b']' | b'-' | b'^' => b,
            _ => return Err(self.syntax("unknown escape")),
        })
    }

    fn quoted(&mut self, close: u8) -> Result<Vec<u8>, GrammarError> {
        let mut out = Vec::new();
        loop {
            match self.bump() {
                None | Some(b'\n') => return Err(self.syntax("unterminated literal")),
                Some(b'\\') => out.push(self.escape()?),
                Some(b) if b == close => return Ok(out),
                Some(b) => out.push(b),
            }
        }
    }

    fn class_byte(&mut self) -> Result<u8, GrammarError> {
        match self.bump() {
            None | Some(b'\n') => Err(self.syntax("unterminated character class")),
            Some(b'\\') => self.escape(),
            Some(b) => Ok(b),
        }
    }

    fn class(&mut self, line: usize, col: usize) -> Result<SurfaceExpr, GrammarError> {
        self.bump();
        let negated = self.eat(b'^');
        let mut ranges = Vec::new();
        while self.peek() != Some(b']') {
            let lo = self.class_byte()?;
            let hi = if self.peek() == Some(b'-') && self.peek_at(1) != Some(b']') {
                self.bump();
                self.class_byte()?
            } else {
                lo
            };
            if hi < lo {
                return Err(self.syntax("reversed range in character class"));
            }
            ranges.push(ByteRange { lo, hi });
        }
        self.bump();
        if negated {
            ranges = complement(&ranges);
        }
        SurfaceExpr::class(ranges).ok_or(GrammarError {
            kind: GrammarErrorKind::Syntax("empty character class".to_string()),
            line,
            col,
        })
    }
}

fn hex_val(b: u8) -> Option<u8> {
    (b as char).to_digit(16).map(|d| d as u8)
}

fn complement(ranges: &[ByteRange]) -> Vec<ByteRange> {
    let mut member = [false; 256];
    for r in ranges {
        for b in r.lo..=r.hi {
            member[b as usize] = true;
        }
    }
    let mut out = Vec::new();
    let mut b = 0usize;
    while b < 256 {
        if member[b] {
            b += 1;
            continue;
        }
        let lo = b;
        while b < 256 && !member[b] {
            b += 1;
        }
        out.push(ByteRange { lo: lo as u8, hi: (b - 1) as u8 });
    }
    out
}

/// Grammar-file spelling of a single byte, e.g. `'a'` or `'\x07'`.
pub(crate) struct QuotedByte(pub u8);

impl fmt::Display for QuotedByte {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            b'\n' => write!(f, "'\\n'"),
            b'\t' => write!(f, "'\\t'"),
            b'\r' => write!(f, "'\\r'"),
            b'\\' => write!(f, "'\\\\'"),
            b'\'' => write!(f, "'\\''"),
            b if b.is_ascii_graphic() || b == b' ' => write!(f, "'{}'", b as char),
            b => write!(f, "'\\x{b:02x}'"),
        }
    }
}
