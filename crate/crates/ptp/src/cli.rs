//! The `ptp` command: stream an input through a grammar and print its parse
//! code.
//!
//! Exit status: 0 accept, 1 reject, 2 usage or grammar error, 3 divergence
//! (the grammar does not handle the input), 4 oracle mismatch.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser as _;
use ptp_core::oracle::{build_code, FullTable};
use ptp_core::driver::Observer;
use ptp_core::{ParseError, Parser, Program, SpecDepth, Speculation, Verdict};

use crate::packed::pack;
use crate::report::{Outcome, StatsReport};
use crate::trace::Tracer;

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, clap::Parser)]
#[command(name = "ptp", version, about = "Streaming PEG parser using progressive tabular parsing")]
pub struct Cli {
    /// Grammar file (PEG or core rule syntax).
    #[arg(long, value_name = "PATH")]
    pub grammar: PathBuf,

    /// Input file, or `-` for standard input.
    #[arg(long, value_name = "PATH|-", default_value = "-")]
    pub input: String,

    /// Speculation depth: a number or `inf`.
    #[arg(long, value_name = "N|inf", default_value = "inf", value_parser = parse_spec_depth)]
    pub spec_depth: SpecDepth,

    /// Allow the failure-branch head check even at depth 0.
    #[arg(long)]
    pub spec_head_check: bool,

    /// Print a key=value statistics report to standard error.
    #[arg(long)]
    pub stats: bool,

    /// Dump the prefix table after every input symbol to standard error.
    #[arg(long)]
    pub trace_tables: bool,

    /// Print every expansion transition to standard error.
    #[arg(long)]
    pub trace_expansion: bool,

    /// Recompute the code with the full table and compare.
    #[arg(long)]
    pub oracle_check: bool,

    /// Write the code packed (bit-count header, MSB-first bytes).
    #[arg(long, conflicts_with = "quiet")]
    pub packed: bool,

    /// Do not write the code.
    #[arg(long)]
    pub quiet: bool,

    /// Read block size in bytes.
    #[arg(long, value_name = "BYTES", default_value_t = 64 * 1024, value_parser = clap::value_parser!(u32).range(1..))]
    pub block_size: u32,
}

pub fn parse_spec_depth(s: &str) -> Result<SpecDepth, String> {
    if s == "inf" {
        return Ok(SpecDepth::Unbounded);
    }
    s.parse().map(SpecDepth::Bounded).map_err(|_| format!("expected a natural number or `inf`, got `{s}`"))
}

/// Parses `args` and runs; clap usage errors exit with status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_ACCEPT };
        }
    };
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(&cli, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command with explicit streams; returns the exit status.
pub fn run(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "ptp: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, String> {
    let program = crate::load_grammar(&cli.grammar).map_err(|e| e.to_string())?;
    let mut file;
    let input: &mut dyn Read = if cli.input == "-" {
        stdin
    } else {
        file = File::open(&cli.input).map_err(|e| format!("{}: {e}", cli.input))?;
        &mut file
    };
    let spec = Speculation { depth: cli.spec_depth, head_check: cli.spec_head_check };

    let started = Instant::now();
    let mut parser = Parser::new(&program, spec);
    let mut tracer = Tracer::new(&program, io::BufWriter::new(&mut *stderr), cli.trace_tables, cli.trace_expansion);
    let mut out = io::BufWriter::new(&mut *stdout);

    let mut sink = Sink { ascii: !cli.packed && !cli.quiet, out: &mut out, code: Vec::new() };
    let mut seen = Vec::new();
    let keep = if cli.oracle_check { Some(&mut seen) } else { None };
    let result = stream(&mut parser, &mut tracer, input, cli.block_size as usize, &mut sink, keep)
        .map_err(|e| format!("{}: {e}", cli.input))?;
    let code = sink.code;

    let elapsed = started.elapsed();
    tracer.finish().map_err(|e| format!("writing trace: {e}"))?;
    if let (Ok(_), true) = (&result, cli.packed) {
        out.write_all(&pack(&code)).map_err(|e| format!("writing output: {e}"))?;
    }
    out.flush().map_err(|e| format!("writing output: {e}"))?;
    drop(out);

    let outcome = match &result {
        Ok(v) => Outcome::from(*v),
        Err(_) => Outcome::Diverge,
    };
    if cli.stats {
        let report = StatsReport {
            stats: parser.stats(),
            verdict: outcome,
            input_len: parser.consumed(),
            rules: program.len(),
            wall_time_us: elapsed.as_micros() as u64,
        };
        write!(stderr, "{report}").map_err(|e| e.to_string())?;
    }

    if cli.oracle_check {
        if let Some(msg) = oracle_mismatch(&program, &seen, &result, &code) {
            let _ = writeln!(stderr, "ptp: oracle mismatch: {msg}");
            return Ok(EXIT_MISMATCH);
        }
    }

    Ok(match &result {
        Ok(Verdict::Accept) => EXIT_ACCEPT,
        Ok(Verdict::Reject) => EXIT_REJECT,
        Err(e) => {
            let _ = writeln!(stderr, "ptp: {e}");
            EXIT_DIVERGE
        }
    })
}

/// Where code bits go: written through in ASCII mode, always collected.
struct Sink<'a, W: Write> {
    ascii: bool,
    out: &'a mut W,
    code: Vec<u8>,
}

impl<W: Write> Sink<'_, W> {
    fn emit(&mut self, bits: &[u8]) -> io::Result<()> {
        if self.ascii {
            self.out.write_all(bits)?;
        }
        self.code.extend_from_slice(bits);
        Ok(())
    }
}

/// Feeds `input` block by block, then the end marker. The outer error is an
/// IO failure, the inner one a parse failure.
fn stream<O: Observer, W: Write>(
    parser: &mut Parser<'_>,
    obs: &mut O,
    input: &mut dyn Read,
    block_size: usize,
    sink: &mut Sink<'_, W>,
    mut keep: Option<&mut Vec<u8>>,
) -> io::Result<Result<Verdict, ParseError>> {
    let mut buf = vec![0u8; block_size];
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        };
        if let Some(keep) = keep.as_deref_mut() {
            keep.extend_from_slice(&buf[..n]);
        }
        for &b in &buf[..n] {
            match parser.feed_with(b, obs) {
                Ok(bits) => sink.emit(&bits)?,
                Err(e) => return Ok(Err(e)),
            }
        }
    }
    match parser.finish_with(obs) {
        Ok((bits, verdict)) => {
            sink.emit(&bits)?;
            Ok(Ok(verdict))
        }
        Err(e) => Ok(Err(e)),
    }
}

fn oracle_mismatch(p: &Program, input: &[u8], result: &Result<Verdict, ParseError>, code: &[u8]) -> Option<String> {
    let table = FullTable::build(p, input);
    let expected = build_code(p, &table, p.start()).ok();
    match (result, expected) {
        (Ok(Verdict::Accept), Some(want)) if want.as_bytes() == code => None,
        (Ok(Verdict::Reject), None) => None,
        (Ok(Verdict::Accept), Some(want)) => Some(format!("streamed code differs from {want}")),
        (Ok(v), want) => Some(format!("streamed verdict {v}, full table gives {}", if want.is_some() { "accept" } else { "reject" })),
        (Err(e), _) => Some(format!("streaming failed ({e})")),
    }
}
