//! Grammars: surface PEG syntax, its lowering to core GTDPL, and the indexed
//! [`Program`] the tabular machinery runs on.

mod desugar;
mod surface;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use desugar::desugar;
pub use surface::{parse_grammar, ByteRange, GrammarError, GrammarErrorKind, SurfaceExpr, SurfaceGrammar};

/// Dense index of a rule inside a [`Program`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(pub u32);

impl RuleId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for RuleId {
    fn from(i: usize) -> Self {
        RuleId(i as u32)
    }
}

/// Right-hand side of a core rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GExpr {
    Eps,
    Fail,
    Term(u8),
    /// `cond[cont, alt]`.
    Ternary { cond: RuleId, cont: RuleId, alt: RuleId },
}

impl GExpr {
    /// Simple expressions are everything but the ternary.
    #[inline]
    pub fn is_simple(&self) -> bool {
        !matches!(self, GExpr::Ternary { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgramError {
    Empty,
    StartOutOfRange(RuleId),
    DanglingReference { rule: RuleId, target: RuleId },
    NameCountMismatch { rules: usize, names: usize },
}

impl fmt::Display for ProgramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramError::Empty => write!(f, "program has no rules"),
            ProgramError::StartOutOfRange(s) => write!(f, "start rule {} is out of range", s.0),
            ProgramError::DanglingReference { rule, target } => {
                write!(f, "rule {} refers to missing rule {}", rule.0, target.0)
            }
            ProgramError::NameCountMismatch { rules, names } => {
                write!(f, "{rules} rules but {names} names")
            }
        }
    }
}

/// An indexed core GTDPL program.
///
/// Immutable once built. `condition_inverse[x]` lists every rule whose
/// ternary condition is `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    rules: Vec<GExpr>,
    names: Vec<String>,
    start: RuleId,
    condition_inverse: Vec<Vec<RuleId>>,
}

impl Program {
    pub fn new(rules: Vec<GExpr>, names: Vec<String>, start: RuleId) -> Result<Self, ProgramError> {
        if rules.is_empty() {
            return Err(ProgramError::Empty);
        }
        if names.len() != rules.len() {
            return Err(ProgramError::NameCountMismatch { rules: rules.len(), names: names.len() });
        }
        if start.index() >= rules.len() {
            return Err(ProgramError::StartOutOfRange(start));
        }
        for (i, g) in rules.iter().enumerate() {
            if let GExpr::Ternary { cond, cont, alt } = *g {
                for target in [cond, cont, alt] {
                    if target.index() >= rules.len() {
                        return Err(ProgramError::DanglingReference { rule: RuleId::from(i), target });
                    }
                }
            }
        }
        let condition_inverse = build_condition_inverse(&rules);
        Ok(Program { rules, names, start, condition_inverse })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    #[inline]
    pub fn start(&self) -> RuleId {
        self.start
    }

    #[inline]
    pub fn rule(&self, id: RuleId) -> GExpr {
        self.rules[id.index()]
    }

    pub fn rules(&self) -> &[GExpr] {
        &self.rules
    }

    pub fn name(&self, id: RuleId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rule_id(&self, name: &str) -> Option<RuleId> {
        self.names.iter().position(|n| n == name).map(RuleId::from)
    }

    pub fn ids(&self) -> impl Iterator<Item = RuleId> + '_ {
        (0..self.rules.len()).map(RuleId::from)
    }

    /// Rules whose ternary condition is `x`.
    #[inline]
    pub fn condition_inverse(&self, x: RuleId) -> &[RuleId] {
        &self.condition_inverse[x.index()]
    }

    /// Same program with a different start rule.
    pub fn with_start(&self, start: RuleId) -> Result<Self, ProgramError> {
        if start.index() >= self.rules.len() {
            return Err(ProgramError::StartOutOfRange(start));
        }
        Ok(Program { start, ..self.clone() })
    }
}

/// Inverse of the condition position of ternary rules.
pub fn build_condition_inverse(rules: &[GExpr]) -> Vec<Vec<RuleId>> {
    let mut inv = vec![Vec::new(); rules.len()];
    for (i, g) in rules.iter().enumerate() {
        if let GExpr::Ternary { cond, .. } = *g {
            inv[cond.index()].push(RuleId::from(i));
        }
    }
    inv
}

/// Renders a rule in grammar-file syntax, e.g. `S <- L[R,F]`.
pub struct DisplayRule<'a>(pub &'a Program, pub RuleId);

impl fmt::Display for DisplayRule<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        write!(f, "{} <- ", p.name(self.1))?;
        match p.rule(self.1) {
            GExpr::Eps => write!(f, "eps"),
            GExpr::Fail => write!(f, "fail"),
            GExpr::Term(b) => write!(f, "{}", surface::QuotedByte(b)),
            GExpr::Ternary { cond, cont, alt } => {
                write!(f, "{}[{},{}]", p.name(cond), p.name(cont), p.name(alt))
            }
        }
    }
}
