//! Human-readable traces of a parse: table snapshots after every fix and
//! one line per expansion transition.

use std::fmt;
use std::io::Write;

use ptp_core::driver::Observer;
use ptp_core::expand::{ExpansionProbe, ExpansionState, Transition};
use ptp_core::ptp::FixProbe;
use ptp_core::{PrefixTable, Program};

/// An expansion state as `(<stack top first>, <offset>)`, `ε` for the empty
/// stack.
pub struct DisplayState<'a>(pub &'a Program, pub &'a ExpansionState);

impl fmt::Display for DisplayState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let DisplayState(p, s) = *self;
        f.write_str("(")?;
        if s.is_complete() {
            f.write_str("ε")?;
        }
        for (i, r) in s.frames().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(p.name(r))?;
        }
        write!(f, ", {})", s.offset)
    }
}

/// One transition line: `(S, 0) -0-> (L R, 0)`.
pub fn transition_line(p: &Program, from: &ExpansionState, t: Transition, to: &ExpansionState) -> String {
    let label = match t.bit() {
        Some(b) => char::from(b).to_string(),
        None => "ε".into(),
    };
    format!("{} -{label}-> {}", DisplayState(p, from), DisplayState(p, to))
}

/// Table snapshot: header `== after byte k (c) ==` (k counts symbols fed,
/// from 1; the end marker shows as `#`) followed by the table dump.
pub fn table_snapshot(p: &Program, t: &PrefixTable) -> String {
    let k = t.end();
    let sym = t.symbol(k - 1).expect("snapshot of a nonempty window");
    format!("== after byte {k} ({sym}) ==\n{}", t.dump(p))
}

/// Writes the selected traces to `out`. Write errors are kept and
/// reported by [`Tracer::finish`].
pub struct Tracer<'p, W: Write> {
    program: &'p Program,
    out: W,
    pub tables: bool,
    pub expansion: bool,
    error: Option<std::io::Error>,
}

impl<'p, W: Write> Tracer<'p, W> {
    pub fn new(program: &'p Program, out: W, tables: bool, expansion: bool) -> Self {
        Tracer { program, out, tables, expansion, error: None }
    }

    fn emit(&mut self, text: &str) {
        if self.error.is_none() {
            if let Err(e) = self.out.write_all(text.as_bytes()) {
                self.error = Some(e);
            }
        }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        match self.error.take() {
            Some(e) => Err(e),
            None => {
                self.out.flush()?;
                Ok(self.out)
            }
        }
    }
}

impl<W: Write> FixProbe for Tracer<'_, W> {}

impl<W: Write> ExpansionProbe for Tracer<'_, W> {
    fn enabled(&self) -> bool {
        self.expansion
    }

    fn transition(&mut self, from: &ExpansionState, t: Transition, to: &ExpansionState) {
        let line = transition_line(self.program, from, t, to);
        self.emit(&line);
        self.emit("\n");
    }
}

impl<W: Write> Observer for Tracer<'_, W> {
    fn after_fix(&mut self, p: &Program, t: &PrefixTable) {
        if self.tables {
            let snap = table_snapshot(p, t);
            self.emit(&snap);
        }
    }
}
