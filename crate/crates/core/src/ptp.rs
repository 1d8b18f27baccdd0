//! Incremental prefix-table computation.
//!
//! [`fix`] extends a prefix table by one input symbol and brings it back to
//! the least fixed point of the restricted table operator. It is a worklist
//! algorithm: a cell is processed exactly when everything it needs is
//! resolved, so every loop iteration resolves one cell and no cell is ever
//! revisited.
//!
//! The worklist is driven by two maps. The static reverse condition map
//! ([`Program::condition_inverse`]) says which ternary cells become
//! interesting when a condition cell resolves. The dynamic dependency of a
//! ternary cell with a resolved condition is the one cell it still waits for
//! (the continuation after the consumed prefix, or the failure branch), and
//! [`RevDeps`] stores the inverse of that relation.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::grammar::{GExpr, Program, RuleId};
use crate::table::{apply_operator, AbsIndex, Entry, PrefixTable, Symbol};

/// The cell that `ix` currently waits for, if its rule is a ternary whose
/// condition is resolved at `ix.col`.
#[inline]
pub fn dyn_dep(p: &Program, t: &PrefixTable, ix: AbsIndex) -> Option<AbsIndex> {
    match p.rule(ix.row) {
        GExpr::Ternary { cond, cont, alt } => match t.get(AbsIndex::new(cond, ix.col)) {
            Entry::Consumed(m) => Some(AbsIndex::new(cont, ix.col + m)),
            Entry::Fail => Some(AbsIndex::new(alt, ix.col)),
            Entry::Bottom => None,
        },
        _ => None,
    }
}

/// Reverse dynamic dependencies: for each cell, the cells waiting on it.
///
/// Shares the absolute column numbering of [`PrefixTable`]. A target may sit
/// one column past the table's end (a dependency on input not yet seen).
/// Truncation drops whole target columns; sources below the base that remain
/// in surviving lists are skipped on lookup.
#[derive(Clone, Debug)]
pub struct RevDeps {
    rows: usize,
    base: usize,
    cols: VecDeque<Vec<Vec<AbsIndex>>>,
}

impl RevDeps {
    pub fn new(rows: usize) -> Self {
        RevDeps { rows, base: 0, cols: VecDeque::new() }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Records that `source` waits for `target`.
    pub fn add(&mut self, target: AbsIndex, source: AbsIndex) {
        assert!(target.col >= self.base, "dependency target {target:?} is below base {}", self.base);
        let k = target.col - self.base;
        while self.cols.len() <= k {
            self.cols.push_back(vec![Vec::new(); self.rows]);
        }
        self.cols[k][target.row.index()].push(source);
    }

    /// Cells waiting for `target`.
    pub fn sources(&self, target: AbsIndex) -> impl Iterator<Item = AbsIndex> + '_ {
        let base = self.base;
        target
            .col
            .checked_sub(base)
            .and_then(|k| self.cols.get(k))
            .map(|col| col[target.row.index()].as_slice())
            .unwrap_or(&[])
            .iter()
            .copied()
            .filter(move |s| s.col >= base)
    }

    /// Drops the first `m` columns.
    pub fn truncate(&mut self, m: usize) {
        let drop = m.min(self.cols.len());
        self.cols.drain(..drop);
        self.base += m;
    }

    /// Every live `(target, source)` pair, in no particular order.
    pub fn pairs(&self) -> impl Iterator<Item = (AbsIndex, AbsIndex)> + '_ {
        let base = self.base;
        self.cols.iter().enumerate().flat_map(move |(k, col)| {
            col.iter().enumerate().flat_map(move |(row, list)| {
                let target = AbsIndex::new(RuleId::from(row), base + k);
                list.iter().filter(move |s| s.col >= base).map(move |&s| (target, s))
            })
        })
    }
}

/// Observation points inside [`fix_with`]. Both methods default to no-ops.
pub trait FixProbe {
    /// Called at the head of every worklist iteration and once more when the
    /// loop exits (with an empty worklist).
    fn loop_head(&mut self, _p: &Program, _t: &PrefixTable, _r: &RevDeps, _work: &[AbsIndex]) {}

    /// Called after a cell has been set.
    fn resolved(&mut self, _ix: AbsIndex, _v: Entry) {}
}

impl FixProbe for () {}

/// Appends `sym` to the table's window and recomputes the prefix table and
/// reverse dependencies for the extended window. Returns the number of cells
/// resolved.
pub fn fix(p: &Program, t: &mut PrefixTable, r: &mut RevDeps, sym: Symbol) -> usize {
    fix_with(p, t, r, sym, &mut ())
}

pub fn fix_with<P: FixProbe + ?Sized>(
    p: &Program,
    t: &mut PrefixTable,
    r: &mut RevDeps,
    sym: Symbol,
    probe: &mut P,
) -> usize {
    t.push_column(sym);
    let last = t.end() - 1;
    // LIFO worklist; the three sources of new work are disjoint, so nothing
    // is ever pushed twice
    let mut work: Vec<AbsIndex> =
        p.ids().filter(|&i| p.rule(i).is_simple()).map(|i| AbsIndex::new(i, last)).collect();
    let mut iterations = 0;
    loop {
        probe.loop_head(p, t, r, &work);
        let Some(ix) = work.pop() else { break };
        let v = apply_operator(p, t, ix);
        debug_assert!(v.is_resolved(), "worklist cell {ix:?} was not ready");
        t.set(ix, v);
        probe.resolved(ix, v);
        iterations += 1;
        work.extend(r.sources(ix));
        for &waiter in p.condition_inverse(ix.row) {
            let src = AbsIndex::new(waiter, ix.col);
            let dep = dyn_dep(p, t, src).expect("condition was just resolved");
            r.add(dep, src);
            if t.get(dep).is_resolved() {
                work.push(src);
            }
        }
    }
    iterations
}

/// The work set computed from scratch: unresolved cells in the window whose
/// value the operator can already determine.
pub fn delta_naive(p: &Program, t: &PrefixTable) -> BTreeSet<AbsIndex> {
    let mut out = BTreeSet::new();
    for col in t.base()..t.end() {
        for row in p.ids() {
            let ix = AbsIndex::new(row, col);
            if t.get(ix).is_resolved() {
                continue;
            }
            let ready = match p.rule(row) {
                GExpr::Ternary { .. } => dyn_dep(p, t, ix).is_some_and(|d| t.get(d).is_resolved()),
                _ => true,
            };
            if ready {
                out.insert(ix);
            }
        }
    }
    out
}

/// Every `(dependency, cell)` pair over the stored window, from scratch.
pub fn dyn_dep_inverse_naive(p: &Program, t: &PrefixTable) -> BTreeSet<(AbsIndex, AbsIndex)> {
    let mut out = BTreeSet::new();
    for col in t.base()..t.end() {
        for row in p.ids() {
            let ix = AbsIndex::new(row, col);
            if let Some(d) = dyn_dep(p, t, ix) {
                out.insert((d, ix));
            }
        }
    }
    out
}
