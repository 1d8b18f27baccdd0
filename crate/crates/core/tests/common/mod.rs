//! Shared test corpus, reference interpreters and property checks.
//!
//! Every check returns `Err` with a counterexample description instead of
//! panicking, so the acceptance suite can report it as a failed line.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ptp_core::expand::{run_to_quiescence, ExpansionProbe, ExpansionState, Transition};
use ptp_core::grammar::{ByteRange, SurfaceExpr, SurfaceGrammar};
use ptp_core::oracle::{build_code, decode, match_rule, FullTable, Res};
use ptp_core::ptp::{delta_naive, dyn_dep_inverse_naive, fix, FixProbe, RevDeps};
use ptp_core::table::apply_operator;
use ptp_core::{
    desugar, parse_grammar, AbsIndex, Entry, GExpr, Parser, PrefixTable, Program, SpecDepth, Speculation, Symbol,
    Verdict,
};

pub const EXAMPLE: &str = "S <- L[R,F]\nL <- P[E,E]\nP <- A[P,B]\nR <- A[R,E]\nA <- 'a'\nB <- 'b'\nE <- eps\nF <- fail\n";

/// Complete grammars over `{a, b}`.
pub const CORPUS: &[(&str, &str)] = &[
    ("example", EXAMPLE),
    ("example_sugar", "S <- ('a'* 'b' / eps) 'a'*"),
    ("nfa", "S <- 'a' S / 'a' T / 'b' E\nT <- 'a' S\nE <- eps"),
    ("balanced", "S <- ('a' S 'b')?"),
    ("lookahead", "S <- !'b' ('a' 'b')* 'a'?"),
    ("literals", "S <- \"ab\" S / \"a\" / 'b' 'b'+"),
    ("ternary", "S <- A[S,B]\nA <- 'a'\nB <- 'b' / eps"),
    ("pairs", "S <- P* !'a'\nP <- 'a' 'b'? / 'b' 'a'"),
];

/// Grammars exercising every surface construct, over `{a, b, c}`.
pub const SUGAR: &[(&str, &str)] = &[
    ("classes", "S <- [ab]+ [^a]? !'c'"),
    ("literal_choice", "S <- \"abc\" / \"ab\" / \"b\"* 'c'"),
    ("nested", "S <- (A / B)* C\nA <- 'a' 'b'?\nB <- !'a' [bc] 'c'*\nC <- 'c' / eps"),
    ("opt_plus", "S <- ('a'? 'b')+ ('c' S)?"),
    ("ternary_mix", "S <- X[Y,Z]\nX <- 'a'+\nY <- 'b' / fail\nZ <- [b-c] S / eps"),
];

pub const SPEC_DEPTHS: &[SpecDepth] =
    &[SpecDepth::Bounded(0), SpecDepth::Bounded(1), SpecDepth::Bounded(2), SpecDepth::Bounded(4), SpecDepth::Unbounded];

pub fn program(src: &str) -> Program {
    desugar(&parse_grammar(src).expect("corpus grammar parses"))
}

pub fn corpus() -> Vec<(&'static str, Program)> {
    CORPUS.iter().map(|&(n, s)| (n, program(s))).collect()
}

/// Every word over `alphabet` of length at most `max`, shortest first.
pub fn words(alphabet: &[u8], max: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<u8>| {
                alphabet.iter().map(move |&c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn show(w: &[u8]) -> String {
    String::from_utf8_lossy(w).into_owned()
}

/// Direct recursive evaluation of a core program with memoization. A cell
/// whose evaluation re-enters itself does not terminate and is `Bottom`.
pub struct Interp<'a> {
    p: &'a Program,
    input: &'a [u8],
    memo: HashMap<(usize, usize), Entry>,
    active: BTreeSet<(usize, usize)>,
}

impl<'a> Interp<'a> {
    pub fn new(p: &'a Program, input: &'a [u8]) -> Self {
        Interp { p, input, memo: HashMap::new(), active: BTreeSet::new() }
    }

    pub fn eval(&mut self, row: usize, j: usize) -> Entry {
        if let Some(&e) = self.memo.get(&(row, j)) {
            return e;
        }
        if !self.active.insert((row, j)) {
            return Entry::Bottom;
        }
        let e = match self.p.rules()[row] {
            GExpr::Eps => Entry::Consumed(0),
            GExpr::Fail => Entry::Fail,
            GExpr::Term(c) => {
                if self.input.get(j) == Some(&c) {
                    Entry::Consumed(1)
                } else {
                    Entry::Fail
                }
            }
            GExpr::Ternary { cond, cont, alt } => match self.eval(cond.index(), j) {
                Entry::Consumed(m) => match self.eval(cont.index(), j + m) {
                    Entry::Consumed(k) => Entry::Consumed(m + k),
                    other => other,
                },
                Entry::Fail => self.eval(alt.index(), j),
                Entry::Bottom => Entry::Bottom,
            },
        };
        self.active.remove(&(row, j));
        self.memo.insert((row, j), e);
        e
    }
}

/// Direct PEG semantics of a surface grammar: `Some(consumed)` or `None`
/// on failure. Only for grammars without left recursion or nullable loops.
pub struct Peg<'a> {
    rules: HashMap<&'a str, &'a SurfaceExpr>,
    input: &'a [u8],
}

impl<'a> Peg<'a> {
    pub fn new(g: &'a SurfaceGrammar, input: &'a [u8]) -> Self {
        Peg { rules: g.rules.iter().map(|(n, e)| (n.as_str(), e)).collect(), input }
    }

    pub fn rule(&self, name: &str, j: usize) -> Option<usize> {
        self.eval(self.rules[name], j)
    }

    fn in_class(ranges: &[ByteRange], b: u8) -> bool {
        ranges.iter().any(|r| r.lo <= b && b <= r.hi)
    }

    pub fn eval(&self, e: &SurfaceExpr, j: usize) -> Option<usize> {
        let at = self.input.get(j).copied();
        match e {
            SurfaceExpr::Empty => Some(0),
            SurfaceExpr::Fail => None,
            SurfaceExpr::Terminal(c) => (at == Some(*c)).then_some(1),
            SurfaceExpr::ByteClass(rs) => at.filter(|&b| Self::in_class(rs, b)).map(|_| 1),
            SurfaceExpr::Literal(bs) => self.input[j.min(self.input.len())..].starts_with(bs).then_some(bs.len()),
            SurfaceExpr::Nonterminal(n) => self.rule(n, j),
            SurfaceExpr::Seq(a, b) => {
                let m = self.eval(a, j)?;
                Some(m + self.eval(b, j + m)?)
            }
            SurfaceExpr::Choice(a, b) => self.eval(a, j).or_else(|| self.eval(b, j)),
            SurfaceExpr::Star(a) => {
                let mut k = j;
                while let Some(m) = self.eval(a, k) {
                    assert!(m > 0, "nullable loop body");
                    k += m;
                }
                Some(k - j)
            }
            SurfaceExpr::Plus(a) => {
                let m = self.eval(a, j)?;
                Some(m + self.eval(&SurfaceExpr::Star(a.clone()), j + m)?)
            }
            SurfaceExpr::Opt(a) => Some(self.eval(a, j).unwrap_or(0)),
            SurfaceExpr::Not(a) => self.eval(a, j).is_none().then_some(0),
            SurfaceExpr::Ternary(x, y, z) => match self.rule(x, j) {
                Some(m) => Some(m + self.rule(y, j + m)?),
                None => self.rule(z, j),
            },
        }
    }
}

/// `T^<(u)`, optionally followed by the end marker, without truncation.
pub fn prefix_table(p: &Program, u: &[u8], end: bool) -> PrefixTable {
    let mut t = PrefixTable::new(p.len());
    let mut r = RevDeps::new(p.len());
    for &b in u {
        fix(p, &mut t, &mut r, Symbol::Byte(b));
    }
    if end {
        fix(p, &mut t, &mut r, Symbol::End);
    }
    t
}

/// Least fixed point of the restricted operator by plain Kleene iteration
/// from the all-`Bottom` table.
pub fn kleene(p: &Program, u: &[u8], end: bool) -> PrefixTable {
    let mut t = PrefixTable::new(p.len());
    for &b in u {
        t.push_column(Symbol::Byte(b));
    }
    if end {
        t.push_column(Symbol::End);
    }
    loop {
        let mut next = Vec::new();
        for col in 0..t.end() {
            for row in p.ids() {
                let ix = AbsIndex::new(row, col);
                if t.get(ix).is_bottom() {
                    let v = apply_operator(p, &t, ix);
                    if v.is_resolved() {
                        next.push((ix, v));
                    }
                }
            }
        }
        if next.is_empty() {
            return t;
        }
        for (ix, v) in next {
            t.set(ix, v);
        }
    }
}

fn code_string(p: &Program, input: &[u8]) -> Option<String> {
    let t = FullTable::build(p, input);
    build_code(p, &t, p.start()).ok().map(|c| c.to_string())
}

fn ascii(bits: &[u8]) -> String {
    String::from_utf8(bits.to_vec()).expect("bits are ASCII")
}

/// Runs the streaming parser, returning the chunks and the final verdict.
pub fn stream(p: &Program, spec: Speculation, input: &[u8]) -> Result<(Vec<String>, Verdict), String> {
    let mut parser = Parser::new(p, spec);
    let mut chunks = Vec::new();
    for &b in input {
        chunks.push(ascii(&parser.feed(b).map_err(|e| e.to_string())?));
    }
    let (last, verdict) = parser.finish().map_err(|e| e.to_string())?;
    chunks.push(ascii(&last));
    Ok((chunks, verdict))
}

// ---- oracle and desugaring ----

/// The full table agrees cell for cell with the recursive interpreter.
pub fn check_oracle_equivalence(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = FullTable::build(&p, &u);
            let mut interp = Interp::new(&p, &u);
            for j in 0..=u.len() {
                for row in 0..p.len() {
                    let want = interp.eval(row, j);
                    let got = t.entry(row.into(), j);
                    if got != want {
                        return Err(format!("{name} on {:?}: cell ({}, {j}) is {got}, expected {want}", show(&u), p.names()[row]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Desugared programs match every user rule exactly like the PEG semantics.
pub fn check_desugar_semantics(max_len: usize) -> Result<(), String> {
    let grammars = CORPUS.iter().filter(|(n, _)| *n != "example").map(|&(n, s)| (n, s, &b"ab"[..]));
    let sugar = SUGAR.iter().map(|&(n, s)| (n, s, &b"abc"[..]));
    for (name, src, alphabet) in grammars.chain(sugar) {
        let g = parse_grammar(src).map_err(|e| format!("{name}: {e}"))?;
        let p = desugar(&g);
        for u in words(alphabet, max_len) {
            let peg = Peg::new(&g, &u);
            for (rule, _) in &g.rules {
                let want = peg.rule(rule, 0).map(Res::Consumed).unwrap_or(Res::Fail);
                let got = match_rule(&p, p.rule_id(rule).expect("user rule kept"), &u);
                if got != Some(want) {
                    return Err(format!("{name}: rule {rule} on {:?}: {got:?}, expected {want:?}", show(&u)));
                }
            }
        }
    }
    Ok(())
}

/// Cells at column `j` depend only on the input from `j` on.
pub fn check_independence(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = FullTable::build(&p, &u);
            for j in 0..=u.len() {
                let suffix = FullTable::build(&p, &u[j..]);
                if t.column(j) != suffix.column(0) {
                    return Err(format!("{name} on {:?}: column {j} differs from the suffix table", show(&u)));
                }
            }
        }
    }
    Ok(())
}

/// Decoding the oracle's code reproduces the oracle's tree.
pub fn check_code_round_trip(max_len: usize) -> Result<(), String> {
    use ptp_core::oracle::build_tree;
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = FullTable::build(&p, &u);
            let Ok(code) = build_code(&p, &t, p.start()) else { continue };
            let tree = build_tree(&p, &t, p.start()).map_err(|e| format!("{name}: {e}"))?;
            let decoded = decode(&p, p.start(), &code, &u).map_err(|e| format!("{name} on {:?}: {e}", show(&u)))?;
            if decoded != tree || tree.code() != code {
                return Err(format!("{name} on {:?}: code and tree disagree", show(&u)));
            }
        }
    }
    Ok(())
}

// ---- prefix tables ----

/// Resolved prefix-table cells hold for every continuation.
pub fn check_approximation(max_len: usize, ext: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = prefix_table(&p, &u, false);
            for v in words(b"ab", ext) {
                let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
                let full = FullTable::build(&p, &uv);
                for j in 0..u.len() {
                    for row in p.ids() {
                        let e = t.get(AbsIndex::new(row, j));
                        if e.is_resolved() && e != full.entry(row, j) {
                            return Err(format!(
                                "{name}: T<({:?}) has {e} at ({}, {j}) but T({:?}) has {}",
                                show(&u),
                                p.name(row),
                                show(&uv),
                                full.entry(row, j)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Extending the input only refines the prefix table.
pub fn check_prefix_monotonicity(max_len: usize, ext: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = prefix_table(&p, &u, false);
            for v in words(b"ab", ext) {
                let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
                let t2 = prefix_table(&p, &uv, false);
                for j in 0..u.len() {
                    for row in p.ids() {
                        let ix = AbsIndex::new(row, j);
                        if !t.get(ix).below(t2.get(ix)) {
                            return Err(format!("{name}: ({}, {j}) not refined from {:?} to {:?}", p.name(row), show(&u), show(&uv)));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// With the end marker appended, the prefix table is the full table.
pub fn check_end_marker(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let t = prefix_table(&p, &u, true);
            let full = FullTable::build(&p, &u);
            for j in 0..=u.len() {
                if t.column(j) != full.column(j) {
                    return Err(format!("{name} on {:?}: column {j} differs from the full table", show(&u)));
                }
            }
        }
    }
    Ok(())
}

/// The worklist computation equals plain Kleene iteration.
pub fn check_kleene_vs_fix(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            for end in [false, true] {
                let a = prefix_table(&p, &u, end);
                let b = kleene(&p, &u, end);
                for j in 0..a.end() {
                    if a.column(j) != b.column(j) {
                        return Err(format!("{name} on {:?} (end: {end}): column {j} differs", show(&u)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks the worklist and reverse-dependency invariants at every loop head.
#[derive(Default)]
pub struct InvariantProbe {
    pub error: Option<String>,
    pub heads: u64,
}

impl FixProbe for InvariantProbe {
    fn loop_head(&mut self, p: &Program, t: &PrefixTable, r: &RevDeps, work: &[AbsIndex]) {
        self.heads += 1;
        if self.error.is_some() {
            return;
        }
        let set: BTreeSet<AbsIndex> = work.iter().copied().collect();
        if set.len() != work.len() {
            self.error = Some("worklist holds a duplicate".into());
        } else if set != delta_naive(p, t) {
            self.error = Some(format!("worklist {set:?} is not the ready set {:?}", delta_naive(p, t)));
        } else {
            let pairs: BTreeSet<(AbsIndex, AbsIndex)> = r.pairs().collect();
            if pairs != dyn_dep_inverse_naive(p, t) {
                self.error = Some("reverse dependencies differ from the dependency relation".into());
            }
        }
    }
}

impl ExpansionProbe for InvariantProbe {}

impl ptp_core::driver::Observer for InvariantProbe {}

/// Worklist and reverse-dependency invariants hold throughout streaming
/// parses, truncation included.
pub fn check_fix_invariants(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let mut probe = InvariantProbe::default();
            let mut parser = Parser::new(&p, Speculation::default());
            for &b in &u {
                parser.feed_with(b, &mut probe).map_err(|e| e.to_string())?;
            }
            parser.finish_with(&mut probe).map_err(|e| e.to_string())?;
            if let Some(e) = probe.error {
                return Err(format!("{name} on {:?}: {e}", show(&u)));
            }
            if probe.heads == 0 {
                return Err(format!("{name}: probe never ran"));
            }
        }
    }
    Ok(())
}

/// `t ⊑ t'` implies `F(t) ⊑ F(t')` cell for cell. `keep` and `keep2`
/// select which cells of the full table the two tables carry
/// (`t` keeps a cell iff both select it).
pub fn check_operator_monotone(p: &Program, u: &[u8], keep: &[bool], keep2: &[bool]) -> Result<(), String> {
    let full = FullTable::build(p, u);
    let mut small = PrefixTable::new(p.len());
    let mut big = PrefixTable::new(p.len());
    for &b in u {
        small.push_column(Symbol::Byte(b));
        big.push_column(Symbol::Byte(b));
    }
    small.push_column(Symbol::End);
    big.push_column(Symbol::End);
    let mut k = 0;
    for col in 0..=u.len() {
        for row in p.ids() {
            let ix = AbsIndex::new(row, col);
            let v = full.entry(row, col);
            let (a, b) = (keep[k % keep.len()], keep2[k % keep2.len()]);
            k += 1;
            if v.is_bottom() || !a {
                continue;
            }
            big.set(ix, v);
            if b {
                small.set(ix, v);
            }
        }
    }
    for col in 0..=u.len() {
        for row in p.ids() {
            let ix = AbsIndex::new(row, col);
            let (x, y) = (apply_operator(p, &small, ix), apply_operator(p, &big, ix));
            if !x.below(y) {
                return Err(format!("F(t) = {x} but F(t') = {y} at ({}, {col}) on {:?}", p.name(row), show(u)));
            }
        }
    }
    Ok(())
}

// ---- expansion and streaming ----

#[derive(Default)]
struct Recorder(Vec<(ExpansionState, Transition)>);

impl ExpansionProbe for Recorder {
    fn enabled(&self) -> bool {
        true
    }

    fn transition(&mut self, from: &ExpansionState, t: Transition, _to: &ExpansionState) {
        self.0.push((from.clone(), t));
    }
}

fn transitions(p: &Program, t: &PrefixTable, spec: Speculation) -> Option<Vec<(ExpansionState, Transition)>> {
    let mut s = ExpansionState::new(p.start());
    let mut stats = ptp_core::expand::StepStats::new(p.len());
    let mut rec = Recorder::default();
    let mut out = Vec::new();
    run_to_quiescence(p, t, &mut s, spec, &mut stats, &mut out, &mut rec).ok()?;
    Some(rec.0)
}

/// Transitions taken under a prefix table are taken verbatim under every
/// refinement, the full table included, as long as the refined input is
/// accepted.
pub fn check_path_monotonicity(max_len: usize, ext: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for &d in SPEC_DEPTHS {
            let spec = Speculation::new(d);
            for u in words(b"ab", max_len) {
                let Some(base) = transitions(&p, &prefix_table(&p, &u, false), spec) else { continue };
                for v in words(b"ab", ext) {
                    let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
                    // on rejected inputs a speculative bet may be contradicted
                    if code_string(&p, &uv).is_none() {
                        continue;
                    }
                    for end in [false, true] {
                        let Some(more) = transitions(&p, &prefix_table(&p, &uv, end), spec) else { continue };
                        if !more.starts_with(&base) {
                            return Err(format!(
                                "{name} (d={d}): run under T<({:?}) is not a prefix of the run for {:?} (end: {end})",
                                show(&u),
                                show(&uv)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Dropping the columns left of the offset does not change what the
/// expansion does: the truncating parser emits the same chunks as an
/// expansion over the untruncated tables.
pub fn check_shift(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for &d in SPEC_DEPTHS {
            let spec = Speculation::new(d);
            for u in words(b"ab", max_len) {
                let (chunks, _) = stream(&p, spec, &u)?;
                let mut t = PrefixTable::new(p.len());
                let mut r = RevDeps::new(p.len());
                let mut s = ExpansionState::new(p.start());
                let mut stats = ptp_core::expand::StepStats::new(p.len());
                let symbols = u.iter().map(|&b| Symbol::Byte(b)).chain([Symbol::End]);
                for (k, sym) in symbols.enumerate() {
                    fix(&p, &mut t, &mut r, sym);
                    let mut out = Vec::new();
                    run_to_quiescence(&p, &t, &mut s, spec, &mut stats, &mut out, &mut ())
                        .map_err(|e| e.to_string())?;
                    if ascii(&out) != chunks[k] {
                        return Err(format!("{name} (d={d}) on {:?}: chunk {k} differs after truncation", show(&u)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Streaming contract: emitted bits only grow, are a prefix of the code of
/// every accepted extension, and complete to the oracle's code exactly.
pub fn check_streaming_contract(max_len: usize, ext: usize) -> Result<(), String> {
    let alphabet = b"ab";
    for (name, p) in corpus() {
        let codes: HashMap<Vec<u8>, Option<String>> =
            words(alphabet, max_len + ext).into_iter().map(|w| (w.clone(), code_string(&p, &w))).collect();
        for &d in SPEC_DEPTHS {
            let spec = Speculation::new(d);
            for u in words(alphabet, max_len) {
                let mut parser = Parser::new(&p, spec);
                let emitted = ascii(&parser.feed_all(&u).map_err(|e| e.to_string())?);
                for v in words(alphabet, ext) {
                    let uv: Vec<u8> = u.iter().chain(&v).copied().collect();
                    if let Some(code) = &codes[&uv] {
                        if !code.starts_with(&emitted) {
                            return Err(format!(
                                "{name} (d={d}): emitted {emitted:?} after {:?}, but {:?} has code {code}",
                                show(&u),
                                show(&uv)
                            ));
                        }
                    }
                }
                let (last, verdict) = parser.finish().map_err(|e| e.to_string())?;
                let full = emitted + &ascii(&last);
                match (&codes[&u], verdict) {
                    (Some(code), Verdict::Accept) if *code == full => {}
                    (None, Verdict::Reject) => {}
                    (want, got) => {
                        return Err(format!("{name} (d={d}) on {:?}: got {got} with {full:?}, oracle {want:?}", show(&u)))
                    }
                }
            }
        }
    }
    Ok(())
}

/// Speculation changes when bits come out, never the verdict, nor the code
/// of an accepted input. (Bits emitted before a rejection are meaningless
/// and may differ.)
pub fn check_speculation_soundness(max_len: usize) -> Result<(), String> {
    let head_only = Speculation { depth: SpecDepth::Bounded(0), head_check: true };
    let specs: Vec<Speculation> = SPEC_DEPTHS.iter().map(|&d| Speculation::new(d)).chain([head_only]).collect();
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let (chunks, verdict) = stream(&p, specs[0], &u)?;
            let code = chunks.concat();
            for &spec in &specs[1..] {
                let (chunks, v) = stream(&p, spec, &u)?;
                let c = chunks.concat();
                if v != verdict || (verdict == Verdict::Accept && c != code) {
                    return Err(format!("{name} on {:?}: {spec:?} gives {c:?}/{v}, d=0 gives {code:?}/{verdict}", show(&u)));
                }
            }
        }
    }
    Ok(())
}

/// Per-run counters stay within the linear bounds.
pub fn check_linear_bounds(max_len: usize) -> Result<(), String> {
    for (name, p) in corpus() {
        for u in words(b"ab", max_len) {
            let mut parser = Parser::new(&p, Speculation::default());
            parser.feed_all(&u).map_err(|e| e.to_string())?;
            parser.finish().map_err(|e| e.to_string())?;
            let s = parser.stats();
            let n = u.len() as u64;
            let rows = p.len() as u64;
            if s.resolved_entries > rows * (n + 2)
                || s.non_immediate_entries > s.resolved_entries
                || parser.emitted() > s.resolved_entries
                || s.max_cols as u64 > n + 1
            {
                return Err(format!("{name} on {:?}: counters out of bounds: {s:?}", show(&u)));
            }
        }
    }
    Ok(())
}
