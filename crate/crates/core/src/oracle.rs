//! Reference semantics: the full parse table computed right to left, and the
//! parse trees and parse codes it determines.
//!
//! Nothing here streams. The streaming engine is tested against these
//! results.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grammar::{GExpr, Program, RuleId};
use crate::table::Entry;

/// Result of running a rule on an input suffix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Res {
    Fail,
    Consumed(usize),
}

impl From<Res> for Entry {
    fn from(r: Res) -> Entry {
        match r {
            Res::Fail => Entry::Fail,
            Res::Consumed(m) => Entry::Consumed(m),
        }
    }
}

/// The complete parse table of an input: `len + 1` columns, the last one
/// for the end marker. Reads past the last column repeat it.
///
/// A cell left `Bottom` means the rule does not terminate on that suffix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullTable {
    rows: usize,
    cols: usize,
    cells: Vec<Entry>,
    input: Vec<u8>,
}

impl FullTable {
    pub fn build(p: &Program, input: &[u8]) -> Self {
        Self::build_with_tail(p, input, 1)
    }

    /// Full table with `tail >= 1` materialized end-marker columns.
    pub fn build_with_tail(p: &Program, input: &[u8], tail: usize) -> Self {
        assert!(tail >= 1);
        let rows = p.len();
        let cols = input.len() + tail;
        let mut t = FullTable { rows, cols, cells: vec![Entry::Bottom; rows * cols], input: input.to_vec() };
        for j in (0..cols).rev() {
            // round-robin sweeps over the column until nothing changes
            loop {
                let mut changed = false;
                for i in 0..rows {
                    let row = RuleId::from(i);
                    if t.entry(row, j).is_bottom() {
                        let v = t.eval(p, row, j);
                        if v.is_resolved() {
                            t.cells[j * rows + i] = v;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        t
    }

    fn eval(&self, p: &Program, row: RuleId, j: usize) -> Entry {
        match p.rule(row) {
            GExpr::Eps => Entry::Consumed(0),
            GExpr::Fail => Entry::Fail,
            GExpr::Term(a) => match self.input.get(j) {
                Some(&b) if b == a => Entry::Consumed(1),
                _ => Entry::Fail,
            },
            GExpr::Ternary { cond, cont, alt } => match self.entry(cond, j) {
                Entry::Consumed(m) => match self.entry(cont, j + m) {
                    Entry::Consumed(m2) => Entry::Consumed(m + m2),
                    other => other,
                },
                Entry::Fail => self.entry(alt, j),
                Entry::Bottom => Entry::Bottom,
            },
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of materialized columns (input length plus end-marker columns).
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn input(&self) -> &[u8] {
        &self.input
    }

    #[inline]
    pub fn entry(&self, row: RuleId, col: usize) -> Entry {
        let col = col.min(self.cols - 1);
        self.cells[col * self.rows + row.index()]
    }

    /// Result of `row` on the suffix starting at `col`; `None` if it diverges.
    pub fn result(&self, row: RuleId, col: usize) -> Option<Res> {
        match self.entry(row, col) {
            Entry::Bottom => None,
            Entry::Fail => Some(Res::Fail),
            Entry::Consumed(m) => Some(Res::Consumed(m)),
        }
    }

    /// Dump of all materialized columns.
    pub fn dump(&self, p: &Program) -> String {
        crate::table::dump(p, 0..self.cols, |ix| self.entry(ix.row, ix.col))
    }

    pub fn column(&self, col: usize) -> &[Entry] {
        &self.cells[col * self.rows..(col + 1) * self.rows]
    }
}

/// Result of rule `a` on the whole input.
pub fn match_rule(p: &Program, a: RuleId, input: &[u8]) -> Option<Res> {
    FullTable::build(p, input).result(a, 0)
}

/// A parse code: the ternary choices of a derivation in leftmost order,
/// stored as ASCII `'0'`/`'1'` bytes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParseCode(Vec<u8>);

impl ParseCode {
    pub fn new() -> Self {
        ParseCode(Vec::new())
    }

    /// From ASCII `'0'`/`'1'` bytes. `None` on any other byte.
    pub fn from_ascii(bits: &[u8]) -> Option<Self> {
        bits.iter().all(|&b| b == b'0' || b == b'1').then(|| ParseCode(bits.to_vec()))
    }

    pub fn push(&mut self, one: bool) {
        self.0.push(if one { b'1' } else { b'0' });
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for ParseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(core::str::from_utf8(&self.0).expect("ascii bits"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// The rule fails or diverges on the input, so there is no code.
    NoMatch(Option<Res>),
    CodeExhausted,
    TrailingBits(usize),
    /// The code steers into a rule that cannot match the input.
    InputMismatch { offset: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::NoMatch(None) => write!(f, "rule diverges on this input"),
            OracleError::NoMatch(Some(_)) => write!(f, "rule does not match this input"),
            OracleError::CodeExhausted => write!(f, "code ended before the tree was complete"),
            OracleError::TrailingBits(n) => write!(f, "{n} bits left after the tree was complete"),
            OracleError::InputMismatch { offset } => write!(f, "code does not fit the input at offset {offset}"),
        }
    }
}

/// Code of the unique derivation of `a` on the table's input.
pub fn build_code(p: &Program, t: &FullTable, a: RuleId) -> Result<ParseCode, OracleError> {
    match t.result(a, 0) {
        Some(Res::Consumed(_)) => {}
        other => return Err(OracleError::NoMatch(other)),
    }
    let mut code = ParseCode::new();
    let mut pending = vec![(a, 0usize)];
    while let Some((r, j)) = pending.pop() {
        if let GExpr::Ternary { cond, cont, alt } = p.rule(r) {
            match t.entry(cond, j) {
                Entry::Consumed(m) => {
                    code.push(false);
                    pending.push((cont, j + m));
                    pending.push((cond, j));
                }
                Entry::Fail => {
                    code.push(true);
                    pending.push((alt, j));
                }
                Entry::Bottom => unreachable!("a matching derivation only visits terminating cells"),
            }
        }
    }
    Ok(code)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leaf {
    Empty,
    Byte(u8),
}

/// Subscript of an internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    /// Simple rule (`ε` subscript).
    Simple,
    /// Condition matched: two subtrees.
    Zero,
    /// Condition failed: one subtree.
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseTree {
    Leaf(Leaf),
    Node { rule: RuleId, tag: Tag, children: Vec<ParseTree> },
}

impl ParseTree {
    fn simple(rule: RuleId, leaf: Leaf) -> Self {
        ParseTree::Node { rule, tag: Tag::Simple, children: vec![ParseTree::Leaf(leaf)] }
    }

    /// In-order concatenation of the leaf bytes.
    pub fn flatten(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut todo = vec![self];
        while let Some(t) = todo.pop() {
            match t {
                ParseTree::Leaf(Leaf::Byte(b)) => out.push(*b),
                ParseTree::Leaf(Leaf::Empty) => {}
                ParseTree::Node { children, .. } => todo.extend(children.iter().rev()),
            }
        }
        out
    }

    /// Node subscripts in in-order (leftmost expansion) order.
    pub fn code(&self) -> ParseCode {
        let mut code = ParseCode::new();
        let mut todo = vec![self];
        while let Some(t) = todo.pop() {
            if let ParseTree::Node { tag, children, .. } = t {
                match tag {
                    Tag::Zero => code.push(false),
                    Tag::One => code.push(true),
                    Tag::Simple => {}
                }
                todo.extend(children.iter().rev());
            }
        }
        code
    }

    /// Bracketed rendering, e.g. `S0(L1(E(ε)) R0(...))`.
    pub fn render(&self, p: &Program) -> String {
        let mut s = String::new();
        self.render_into(p, &mut s);
        s
    }

    fn render_into(&self, p: &Program, s: &mut String) {
        match self {
            ParseTree::Leaf(Leaf::Empty) => s.push('ε'),
            ParseTree::Leaf(Leaf::Byte(b)) => s.push(*b as char),
            ParseTree::Node { rule, tag, children } => {
                s.push_str(p.name(*rule));
                match tag {
                    Tag::Zero => s.push('0'),
                    Tag::One => s.push('1'),
                    Tag::Simple => {}
                }
                s.push('(');
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        s.push(' ');
                    }
                    c.render_into(p, s);
                }
                s.push(')');
            }
        }
    }
}

/// Number of nodes, leaves included.
pub fn tree_size(t: &ParseTree) -> usize {
    let mut n = 0;
    let mut todo = vec![t];
    while let Some(t) = todo.pop() {
        n += 1;
        if let ParseTree::Node { children, .. } = t {
            todo.extend(children.iter());
        }
    }
    n
}

/// Parse tree of the derivation of `a` on the table's input, read directly
/// off the table.
pub fn build_tree(p: &Program, t: &FullTable, a: RuleId) -> Result<ParseTree, OracleError> {
    match t.result(a, 0) {
        Some(Res::Consumed(_)) => Ok(tree_at(p, t, a, 0)),
        other => Err(OracleError::NoMatch(other)),
    }
}

fn tree_at(p: &Program, t: &FullTable, r: RuleId, j: usize) -> ParseTree {
    match p.rule(r) {
        GExpr::Eps => ParseTree::simple(r, Leaf::Empty),
        GExpr::Term(b) => ParseTree::simple(r, Leaf::Byte(b)),
        GExpr::Fail => unreachable!("fail rules are never part of a matching derivation"),
        GExpr::Ternary { cond, cont, alt } => match t.entry(cond, j) {
            Entry::Consumed(m) => ParseTree::Node {
                rule: r,
                tag: Tag::Zero,
                children: vec![tree_at(p, t, cond, j), tree_at(p, t, cont, j + m)],
            },
            Entry::Fail => ParseTree::Node { rule: r, tag: Tag::One, children: vec![tree_at(p, t, alt, j)] },
            Entry::Bottom => unreachable!("a matching derivation only visits terminating cells"),
        },
    }
}

/// Rebuilds the parse tree a code describes, checking terminals against
/// `input`.
pub fn decode(p: &Program, a: RuleId, code: &ParseCode, input: &[u8]) -> Result<ParseTree, OracleError> {
    let mut d = Decoder { p, bits: code.as_bytes(), pos: 0, input, off: 0 };
    let tree = d.node(a)?;
    if d.pos != d.bits.len() {
        return Err(OracleError::TrailingBits(d.bits.len() - d.pos));
    }
    Ok(tree)
}

struct Decoder<'a> {
    p: &'a Program,
    bits: &'a [u8],
    pos: usize,
    input: &'a [u8],
    off: usize,
}

impl Decoder<'_> {
    fn node(&mut self, r: RuleId) -> Result<ParseTree, OracleError> {
        match self.p.rule(r) {
            GExpr::Eps => Ok(ParseTree::simple(r, Leaf::Empty)),
            GExpr::Term(b) => {
                if self.input.get(self.off) == Some(&b) {
                    self.off += 1;
                    Ok(ParseTree::simple(r, Leaf::Byte(b)))
                } else {
                    Err(OracleError::InputMismatch { offset: self.off })
                }
            }
            GExpr::Fail => Err(OracleError::InputMismatch { offset: self.off }),
            GExpr::Ternary { cond, cont, alt } => {
                let bit = *self.bits.get(self.pos).ok_or(OracleError::CodeExhausted)?;
                self.pos += 1;
                if bit == b'0' {
                    let first = self.node(cond)?;
                    let second = self.node(cont)?;
                    Ok(ParseTree::Node { rule: r, tag: Tag::Zero, children: vec![first, second] })
                } else {
                    let only = self.node(alt)?;
                    Ok(ParseTree::Node { rule: r, tag: Tag::One, children: vec![only] })
                }
            }
        }
    }
}
