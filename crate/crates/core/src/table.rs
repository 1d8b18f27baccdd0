//! Table cells, the column store for prefix tables, and the single-cell table
//! operator.
//!
//! Column indices are absolute input offsets and never rebased: after
//! [`PrefixTable::truncate`] the first stored column is `base()`, not 0.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use core::fmt;
use core::fmt::Write;

use crate::grammar::{GExpr, Program, RuleId};

/// A table cell. `Bottom` is below both `Fail` and every `Consumed(m)`; the
/// resolved values are pairwise incomparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Entry {
    #[default]
    Bottom,
    Fail,
    /// Number of input symbols consumed.
    Consumed(usize),
}

impl Entry {
    #[inline]
    pub fn is_bottom(self) -> bool {
        matches!(self, Entry::Bottom)
    }

    #[inline]
    pub fn is_resolved(self) -> bool {
        !self.is_bottom()
    }

    /// Lattice order: `self ⊑ other`.
    #[inline]
    pub fn below(self, other: Entry) -> bool {
        self.is_bottom() || self == other
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Bottom => f.write_str("_"),
            Entry::Fail => f.write_str("f"),
            Entry::Consumed(m) => write!(f, "{m}"),
        }
    }
}

/// An input symbol: a byte, or the end marker that follows the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Byte(u8),
    End,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::End => f.write_str("#"),
            Symbol::Byte(b) if b.is_ascii_graphic() || *b == b' ' => write!(f, "{}", *b as char),
            Symbol::Byte(b) => write!(f, "\\x{b:02x}"),
        }
    }
}

/// A cell address: rule row and absolute column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbsIndex {
    pub row: RuleId,
    pub col: usize,
}

impl AbsIndex {
    #[inline]
    pub fn new(row: RuleId, col: usize) -> Self {
        AbsIndex { row, col }
    }
}

/// Prefix table over the window `a_base .. a_{base+len-1}`.
///
/// Reads at or past `end()` are `Bottom` (input not seen yet); reads below
/// `base()` are a driver bug and panic.
#[derive(Clone, Debug)]
pub struct PrefixTable {
    rows: usize,
    base: usize,
    cols: VecDeque<Box<[Entry]>>,
    window: VecDeque<Symbol>,
    resolved: u64,
}

impl PrefixTable {
    pub fn new(rows: usize) -> Self {
        PrefixTable { rows, base: 0, cols: VecDeque::new(), window: VecDeque::new(), resolved: 0 }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Absolute index of the first stored column.
    #[inline]
    pub fn base(&self) -> usize {
        self.base
    }

    /// Number of stored columns.
    #[inline]
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    /// One past the last stored column.
    #[inline]
    pub fn end(&self) -> usize {
        self.base + self.cols.len()
    }

    /// Total number of cells set over the table's lifetime.
    #[inline]
    pub fn resolved_count(&self) -> u64 {
        self.resolved
    }

    #[inline]
    pub fn symbol(&self, col: usize) -> Option<Symbol> {
        assert!(col >= self.base, "column {col} is below the table base {}", self.base);
        self.window.get(col - self.base).copied()
    }

    pub fn window(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.window.iter().copied()
    }

    #[inline]
    pub fn get(&self, ix: AbsIndex) -> Entry {
        assert!(ix.col >= self.base, "column {} is below the table base {}", ix.col, self.base);
        match self.cols.get(ix.col - self.base) {
            Some(col) => col[ix.row.index()],
            None => Entry::Bottom,
        }
    }

    /// Stored column at absolute position `col`.
    pub fn column(&self, col: usize) -> &[Entry] {
        &self.cols[col - self.base]
    }

    /// Sets a `Bottom` cell to a resolved value. Cells only ever ascend.
    pub fn set(&mut self, ix: AbsIndex, v: Entry) {
        assert!(v.is_resolved(), "cells can only be set to resolved values");
        assert!(ix.col >= self.base && ix.col < self.end(), "cell {ix:?} is outside the stored window");
        let cell = &mut self.cols[ix.col - self.base][ix.row.index()];
        assert!(cell.is_bottom(), "cell {ix:?} is already resolved to {cell}");
        *cell = v;
        self.resolved += 1;
    }

    /// Appends an all-`Bottom` column for `sym`.
    pub fn push_column(&mut self, sym: Symbol) {
        self.cols.push_back(vec![Entry::Bottom; self.rows].into_boxed_slice());
        self.window.push_back(sym);
    }

    /// Drops the first `m` stored columns.
    pub fn truncate(&mut self, m: usize) {
        assert!(m <= self.cols.len(), "cannot drop {m} of {} columns", self.cols.len());
        self.cols.drain(..m);
        self.window.drain(..m);
        self.base += m;
    }
}

/// Table dump: one line `NAME: v0 v1 ...` per rule in rule order, values
/// `_`, `f` or the consumed length, over columns `cols`.
pub fn dump(p: &Program, cols: core::ops::Range<usize>, cell: impl Fn(AbsIndex) -> Entry) -> String {
    let mut out = String::new();
    for row in p.ids() {
        out.push_str(p.name(row));
        out.push(':');
        for col in cols.clone() {
            let _ = write!(out, " {}", cell(AbsIndex::new(row, col)));
        }
        out.push('\n');
    }
    out
}

impl PrefixTable {
    /// Dump of the stored columns.
    pub fn dump(&self, p: &Program) -> String {
        dump(p, self.base..self.end(), |ix| self.get(ix))
    }
}

/// Value of the table operator at `ix`: what the rule's expression yields
/// given the cells it reads.
///
/// `ix.col` must be inside the stored window.
pub fn apply_operator(p: &Program, t: &PrefixTable, ix: AbsIndex) -> Entry {
    match p.rule(ix.row) {
        GExpr::Eps => Entry::Consumed(0),
        GExpr::Fail => Entry::Fail,
        GExpr::Term(a) => match t.symbol(ix.col) {
            Some(Symbol::Byte(b)) if b == a => Entry::Consumed(1),
            Some(_) => Entry::Fail,
            None => panic!("operator applied outside the stored window at {ix:?}"),
        },
        GExpr::Ternary { cond, cont, alt } => match t.get(AbsIndex::new(cond, ix.col)) {
            Entry::Consumed(m) => match t.get(AbsIndex::new(cont, ix.col + m)) {
                Entry::Consumed(m2) => Entry::Consumed(m + m2),
                Entry::Fail => Entry::Fail,
                Entry::Bottom => Entry::Bottom,
            },
            Entry::Fail => t.get(AbsIndex::new(alt, ix.col)),
            Entry::Bottom => Entry::Bottom,
        },
    }
}
