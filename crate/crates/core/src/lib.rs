//! Progressive tabular parsing for GTDPL programs.
//!
//! A GTDPL program is a set of rules of the form `A <- eps`, `A <- fail`,
//! `A <- 'a'` or `A <- B[C,D]` ("try `B`; on success continue with `C`, on
//! failure run `D` from the same position"). Ordinary PEG notation is accepted
//! by [`grammar::parse_grammar`] and lowered to that core form by
//! [`grammar::desugar`].
//!
//! The streaming engine ([`driver::Parser`]) consumes input one byte at a
//! time. For every byte it extends a *prefix table* whose resolved cells are
//! guaranteed to hold for every continuation of the input ([`ptp::fix`]),
//! then advances a leftmost parse-tree expansion over that table
//! ([`expand::run_to_quiescence`]), emitting the parse code bits that are
//! already determined. Columns the expansion has moved past are dropped, so
//! the table only holds the input that is still ambiguous.
//!
//! [`oracle`] holds the classical right-to-left table construction and the
//! code/tree utilities the streaming engine is checked against.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod driver;
pub mod expand;
pub mod grammar;
pub mod oracle;
pub mod ptp;
pub mod table;

pub use driver::{Parser, ParseError, Stats, Verdict};
pub use expand::{SpecDepth, Speculation};
pub use grammar::{desugar, parse_grammar, GExpr, Program, RuleId};
pub use table::{AbsIndex, Entry, PrefixTable, Symbol};
