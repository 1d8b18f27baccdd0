//! The streaming parser: per input byte, extend the prefix table, advance the
//! expansion as far as the table allows, and drop the columns it has moved
//! past.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::expand::{run_to_quiescence, Divergence, ExpansionProbe, ExpansionState, Speculation, StepStats};
use crate::grammar::{GExpr, Program};
use crate::ptp::{fix_with, FixProbe, RevDeps};
use crate::table::{AbsIndex, Entry, PrefixTable, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    /// `feed` or `finish` after the parse has ended.
    Finished,
    Divergence(Divergence),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Finished => f.write_str("parser already finished"),
            ParseError::Divergence(d) => d.fmt(f),
        }
    }
}

impl core::error::Error for ParseError {}

/// Run statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Most columns stored at once (measured right after each fix).
    pub max_cols: usize,
    /// Cells set by fix.
    pub resolved_entries: u64,
    /// Cells set whose rule is not immediate.
    pub non_immediate_entries: u64,
    /// Stack frames inspected by the failure analysis.
    pub speculation_steps: u64,
    /// Unique cells read by the expansion.
    pub visited_entries: u64,
    /// Expansion transitions.
    pub expansion_steps: u64,
}

/// Per-rule immediacy: the least set containing the simple rules and every
/// `X <- A[B,C]` with `A`, `B` immediate and `C` an `eps` or `fail` rule.
pub fn classify_immediate(p: &Program) -> Vec<bool> {
    let mut imm: Vec<bool> = p.rules().iter().map(GExpr::is_simple).collect();
    loop {
        let mut changed = false;
        for (i, g) in p.rules().iter().enumerate() {
            if let GExpr::Ternary { cond, cont, alt } = *g {
                if !imm[i]
                    && imm[cond.index()]
                    && imm[cont.index()]
                    && matches!(p.rule(alt), GExpr::Eps | GExpr::Fail)
                {
                    imm[i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return imm;
        }
    }
}

/// Observation points of a parse. Everything defaults to a no-op.
pub trait Observer: FixProbe + ExpansionProbe {
    /// The table right after fix, before truncation.
    fn after_fix(&mut self, _p: &Program, _t: &PrefixTable) {}
}

impl Observer for () {}

/// Counts non-immediate resolutions and forwards to the caller's probe.
struct Counting<'a, O: ?Sized> {
    immediate: &'a [bool],
    non_immediate: u64,
    inner: &'a mut O,
}

impl<O: FixProbe + ?Sized> FixProbe for Counting<'_, O> {
    #[inline]
    fn loop_head(&mut self, p: &Program, t: &PrefixTable, r: &RevDeps, work: &[AbsIndex]) {
        self.inner.loop_head(p, t, r, work);
    }

    #[inline]
    fn resolved(&mut self, ix: AbsIndex, v: Entry) {
        if !self.immediate[ix.row.index()] {
            self.non_immediate += 1;
        }
        self.inner.resolved(ix, v);
    }
}

/// A streaming parse of one input against one program.
#[derive(Clone, Debug)]
pub struct Parser<'p> {
    program: &'p Program,
    spec: Speculation,
    immediate: Vec<bool>,
    table: PrefixTable,
    revdeps: RevDeps,
    state: ExpansionState,
    step_stats: StepStats,
    stats: Stats,
    emitted: u64,
    consumed: u64,
    finished: bool,
}

impl<'p> Parser<'p> {
    pub fn new(program: &'p Program, spec: Speculation) -> Self {
        let rows = program.len();
        Parser {
            program,
            spec,
            immediate: classify_immediate(program),
            table: PrefixTable::new(rows),
            revdeps: RevDeps::new(rows),
            state: ExpansionState { stack: vec![program.start()], offset: 0 },
            step_stats: StepStats::new(rows),
            stats: Stats::default(),
            emitted: 0,
            consumed: 0,
            finished: false,
        }
    }

    pub fn program(&self) -> &'p Program {
        self.program
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn table(&self) -> &PrefixTable {
        &self.table
    }

    pub fn state(&self) -> &ExpansionState {
        &self.state
    }

    /// Bits emitted so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Bytes fed so far.
    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Consumes one byte and returns the code bits (as `b'0'`/`b'1'`) it
    /// determined.
    pub fn feed(&mut self, byte: u8) -> Result<Vec<u8>, ParseError> {
        self.feed_with(byte, &mut ())
    }

    pub fn feed_with<O: Observer + ?Sized>(&mut self, byte: u8, obs: &mut O) -> Result<Vec<u8>, ParseError> {
        if self.finished {
            return Err(ParseError::Finished);
        }
        self.consumed += 1;
        self.advance(Symbol::Byte(byte), obs)
    }

    /// Feeds every byte of `input`, returning the concatenated bits.
    pub fn feed_all(&mut self, input: &[u8]) -> Result<Vec<u8>, ParseError> {
        let mut out = Vec::new();
        for &b in input {
            out.extend(self.feed(b)?);
        }
        Ok(out)
    }

    /// Ends the input and returns the last bits and the verdict.
    pub fn finish(&mut self) -> Result<(Vec<u8>, Verdict), ParseError> {
        self.finish_with(&mut ())
    }

    pub fn finish_with<O: Observer + ?Sized>(&mut self, obs: &mut O) -> Result<(Vec<u8>, Verdict), ParseError> {
        if self.finished {
            return Err(ParseError::Finished);
        }
        let bits = self.advance(Symbol::End, obs)?;
        self.finished = true;
        let verdict = if self.state.is_complete() { Verdict::Accept } else { Verdict::Reject };
        Ok((bits, verdict))
    }

    fn advance<O: Observer + ?Sized>(&mut self, sym: Symbol, obs: &mut O) -> Result<Vec<u8>, ParseError> {
        let p = self.program;
        let mut counting = Counting { immediate: &self.immediate, non_immediate: 0, inner: obs };
        let resolved = fix_with(p, &mut self.table, &mut self.revdeps, sym, &mut counting);
        self.stats.resolved_entries += resolved as u64;
        self.stats.non_immediate_entries += counting.non_immediate;
        self.stats.max_cols = self.stats.max_cols.max(self.table.len());
        obs.after_fix(p, &self.table);

        let mut out = Vec::new();
        let run =
            run_to_quiescence(p, &self.table, &mut self.state, self.spec, &mut self.step_stats, &mut out, obs);
        self.stats.speculation_steps = self.step_stats.speculation_steps;
        self.stats.expansion_steps = self.step_stats.expansion_steps;
        self.stats.visited_entries = self.step_stats.visited.count();
        self.emitted += out.len() as u64;
        if let Err(d) = run {
            self.finished = true;
            return Err(ParseError::Divergence(d));
        }

        let m = self.state.offset - self.table.base();
        self.table.truncate(m);
        self.revdeps.truncate(m);
        self.step_stats.visited.advance_to(self.state.offset);
        debug_assert_eq!(self.state.offset, self.table.base());
        Ok(out)
    }
}

/// Parses a whole input: the concatenated code and the verdict.
pub fn parse(p: &Program, spec: Speculation, input: &[u8]) -> Result<(Vec<u8>, Verdict, Stats), ParseError> {
    let mut parser = Parser::new(p, spec);
    let mut code = parser.feed_all(input)?;
    let (last, verdict) = parser.finish()?;
    code.extend(last);
    Ok((code, verdict, parser.stats()))
}
