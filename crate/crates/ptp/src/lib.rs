//! IO companion to `ptp-core`: grammar loading, the trace and statistics
//! formats, packed code output, and the `ptp` command-line front end.

pub mod cli;
pub mod packed;
pub mod report;
pub mod trace;

use std::path::{Path, PathBuf};

pub use ptp_core;
use ptp_core::grammar::GrammarError;
use ptp_core::{desugar, parse_grammar, Program};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Grammar { path: PathBuf, source: GrammarError },
}

/// Reads a grammar file and lowers it to a core program.
pub fn load_grammar(path: &Path) -> Result<Program, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })?;
    let g = parse_grammar(&text).map_err(|source| LoadError::Grammar { path: path.into(), source })?;
    Ok(desugar(&g))
}
