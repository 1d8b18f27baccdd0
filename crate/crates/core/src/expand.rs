//! Leftmost parse-tree expansion over a (prefix) table.
//!
//! The expansion state is the stack of unexpanded nodes plus the input offset
//! of the leftmost one. A ternary node on top is expanded when the table
//! decides its condition, or speculatively when its failure branch (followed
//! by the rest of the stack) is known to fail. Simple nodes are popped when
//! the table says how much they consume. Each ternary expansion emits one
//! code bit.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::grammar::{GExpr, Program, RuleId};
use crate::table::{AbsIndex, Entry, PrefixTable};

/// Stack of unexpanded nodes (top is the last element) and the absolute
/// input offset of the top node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpansionState {
    pub stack: Vec<RuleId>,
    pub offset: usize,
}

impl ExpansionState {
    pub fn new(start: RuleId) -> Self {
        ExpansionState { stack: vec![start], offset: 0 }
    }

    pub fn is_complete(&self) -> bool {
        self.stack.is_empty()
    }

    /// Stack from top to bottom.
    pub fn frames(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.stack.iter().rev().copied()
    }
}

/// Speculation bound: how many stack frames the failure analysis may step
/// past.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpecDepth {
    Bounded(usize),
    #[default]
    Unbounded,
}

impl fmt::Display for SpecDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecDepth::Bounded(d) => write!(f, "{d}"),
            SpecDepth::Unbounded => f.write_str("inf"),
        }
    }
}

/// Speculation settings.
///
/// With depth 0 the failure analysis is off entirely unless `head_check` is
/// set, in which case it may still look at the top frame of the failure
/// branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Speculation {
    pub depth: SpecDepth,
    pub head_check: bool,
}

impl Speculation {
    pub fn new(depth: SpecDepth) -> Self {
        Speculation { depth, head_check: false }
    }

    /// `None` when speculation is disabled, otherwise the frame budget
    /// (`None` inside for unbounded).
    fn budget(&self) -> Option<Option<usize>> {
        match self.depth {
            SpecDepth::Bounded(0) if !self.head_check => None,
            SpecDepth::Bounded(d) => Some(Some(d)),
            SpecDepth::Unbounded => Some(None),
        }
    }
}

/// Unique table cells consulted by the expansion, tracked per column from
/// the table base on.
#[derive(Clone, Debug, Default)]
pub struct VisitLog {
    base: usize,
    words_per_col: usize,
    cols: VecDeque<Vec<u64>>,
    count: u64,
}

impl VisitLog {
    pub fn new(rows: usize) -> Self {
        VisitLog { base: 0, words_per_col: rows.div_ceil(64).max(1), cols: VecDeque::new(), count: 0 }
    }

    pub fn mark(&mut self, ix: AbsIndex) {
        debug_assert!(ix.col >= self.base);
        let k = ix.col - self.base;
        while self.cols.len() <= k {
            self.cols.push_back(vec![0; self.words_per_col]);
        }
        let (w, bit) = (ix.row.index() / 64, ix.row.index() % 64);
        let word = &mut self.cols[k][w];
        if *word & (1 << bit) == 0 {
            *word |= 1 << bit;
            self.count += 1;
        }
    }

    /// Forgets columns below `base`; they are never consulted again.
    pub fn advance_to(&mut self, base: usize) {
        let drop = (base - self.base).min(self.cols.len());
        self.cols.drain(..drop);
        self.base = base;
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Counters maintained by the expansion.
#[derive(Clone, Debug, Default)]
pub struct StepStats {
    /// Stack frames inspected by the failure analysis.
    pub speculation_steps: u64,
    /// Transitions taken.
    pub expansion_steps: u64,
    pub visited: VisitLog,
}

impl StepStats {
    pub fn new(rows: usize) -> Self {
        StepStats { speculation_steps: 0, expansion_steps: 0, visited: VisitLog::new(rows) }
    }
}

/// Whether the frames, read top to bottom from offset `j`, are guaranteed to
/// fail: some frame's cell is `Fail` and every frame above it is resolved to
/// a match, with at most `budget` matched frames stepped past.
pub fn fails(
    t: &PrefixTable,
    frames: impl IntoIterator<Item = RuleId>,
    j: usize,
    budget: Option<usize>,
    stats: &mut StepStats,
) -> bool {
    let mut j = j;
    let mut budget = budget;
    for rule in frames {
        stats.speculation_steps += 1;
        let ix = AbsIndex::new(rule, j);
        stats.visited.mark(ix);
        match t.get(ix) {
            Entry::Fail => return true,
            Entry::Bottom => return false,
            Entry::Consumed(m) => {
                match budget.as_mut() {
                    Some(0) => return false,
                    Some(n) => *n -= 1,
                    None => {}
                }
                j += m;
            }
        }
    }
    false
}

/// A single transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// Ternary expansion; `true` when the failure branch was taken.
    Expand(bool),
    /// A simple node matched and was popped.
    Pop,
}

impl Transition {
    pub fn bit(self) -> Option<u8> {
        match self {
            Transition::Expand(false) => Some(b'0'),
            Transition::Expand(true) => Some(b'1'),
            Transition::Pop => None,
        }
    }
}

/// Takes one transition if one is enabled, updating `s` in place.
pub fn step(
    p: &Program,
    t: &PrefixTable,
    s: &mut ExpansionState,
    spec: Speculation,
    stats: &mut StepStats,
) -> Option<Transition> {
    let &top = s.stack.last()?;
    let j = s.offset;
    let taken = match p.rule(top) {
        GExpr::Ternary { cond, cont, alt } => {
            let cix = AbsIndex::new(cond, j);
            stats.visited.mark(cix);
            let expand_cond = match t.get(cix) {
                Entry::Consumed(_) => true,
                Entry::Fail => {
                    s.stack.pop();
                    s.stack.push(alt);
                    stats.expansion_steps += 1;
                    return Some(Transition::Expand(true));
                }
                Entry::Bottom => match spec.budget() {
                    Some(budget) => {
                        let below = s.stack[..s.stack.len() - 1].iter().rev().copied();
                        fails(t, core::iter::once(alt).chain(below), j, budget, stats)
                    }
                    None => false,
                },
            };
            if !expand_cond {
                return None;
            }
            s.stack.pop();
            s.stack.push(cont);
            s.stack.push(cond);
            Transition::Expand(false)
        }
        _ => {
            let ix = AbsIndex::new(top, j);
            stats.visited.mark(ix);
            let Entry::Consumed(m) = t.get(ix) else { return None };
            s.stack.pop();
            s.offset += m;
            Transition::Pop
        }
    };
    stats.expansion_steps += 1;
    Some(taken)
}

/// The expansion does not terminate: the program does not handle this
/// input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub offset: usize,
    pub stack_depth: usize,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expansion diverges at offset {} (stack depth {}): the program does not handle this input",
            self.offset, self.stack_depth
        )
    }
}

/// Sees every transition of [`run_to_quiescence`].
pub trait ExpansionProbe {
    /// When false, `transition` is never called and no states are copied.
    fn enabled(&self) -> bool {
        false
    }

    fn transition(&mut self, _from: &ExpansionState, _t: Transition, _to: &ExpansionState) {}
}

impl ExpansionProbe for () {}

/// Steps until no transition is enabled, appending the emitted bits to
/// `out`.
///
/// Runs that cannot terminate are reported as [`Divergence`]: a state that
/// repeats without the offset moving, or a stack that grows by more than
/// the number of rules without the offset moving (a terminating derivation
/// never nests the same rule twice at one offset).
pub fn run_to_quiescence<O: ExpansionProbe + ?Sized>(
    p: &Program,
    t: &PrefixTable,
    s: &mut ExpansionState,
    spec: Speculation,
    stats: &mut StepStats,
    out: &mut Vec<u8>,
    probe: &mut O,
) -> Result<(), Divergence> {
    let mut anchor_offset = s.offset;
    let mut anchor_height = s.stack.len();
    // Brent-style cycle check: compare against a checkpoint refreshed at
    // power-of-two distances since the last offset change
    let mut checkpoint: Option<Vec<RuleId>> = None;
    let mut power = 1usize;
    let mut since = 0usize;
    loop {
        let before = probe.enabled().then(|| s.clone());
        let Some(tr) = step(p, t, s, spec, stats) else { return Ok(()) };
        if let Some(bit) = tr.bit() {
            out.push(bit);
        }
        if let Some(before) = before {
            probe.transition(&before, tr, s);
        }
        if s.offset != anchor_offset {
            anchor_offset = s.offset;
            anchor_height = s.stack.len();
            checkpoint = None;
            power = 1;
            since = 0;
            continue;
        }
        if s.stack.len() > anchor_height + p.len() {
            return Err(Divergence { offset: s.offset, stack_depth: s.stack.len() });
        }
        if checkpoint.as_deref() == Some(s.stack.as_slice()) {
            return Err(Divergence { offset: s.offset, stack_depth: s.stack.len() });
        }
        since += 1;
        if since == power {
            checkpoint = Some(s.stack.clone());
            power *= 2;
            since = 0;
        }
    }
}
