//! Statistics report: one `key=value` line per field.

use std::fmt;
use std::str::FromStr;

use ptp_core::{Stats, Verdict};

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
    Diverge,
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Accept => Outcome::Accept,
            Verdict::Reject => Outcome::Reject,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Accept => "accept",
            Outcome::Reject => "reject",
            Outcome::Diverge => "diverge",
        })
    }
}

impl FromStr for Outcome {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "accept" => Ok(Outcome::Accept),
            "reject" => Ok(Outcome::Reject),
            "diverge" => Ok(Outcome::Diverge),
            _ => Err(ReportError::BadValue("verdict".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsReport {
    pub stats: Stats,
    pub verdict: Outcome,
    pub input_len: u64,
    pub rules: usize,
    pub wall_time_us: u64,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("malformed line: {0:?}")]
    Malformed(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("duplicate key `{0}`")]
    Duplicate(String),
    #[error("bad value for `{0}`")]
    BadValue(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
}

const KEYS: [&str; 10] = [
    "max_cols",
    "resolved_entries",
    "non_immediate_entries",
    "speculation_steps",
    "visited_entries",
    "expansion_steps",
    "verdict",
    "input_len",
    "rules",
    "wall_time_us",
];

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.stats;
        writeln!(f, "max_cols={}", s.max_cols)?;
        writeln!(f, "resolved_entries={}", s.resolved_entries)?;
        writeln!(f, "non_immediate_entries={}", s.non_immediate_entries)?;
        writeln!(f, "speculation_steps={}", s.speculation_steps)?;
        writeln!(f, "visited_entries={}", s.visited_entries)?;
        writeln!(f, "expansion_steps={}", s.expansion_steps)?;
        writeln!(f, "verdict={}", self.verdict)?;
        writeln!(f, "input_len={}", self.input_len)?;
        writeln!(f, "rules={}", self.rules)?;
        writeln!(f, "wall_time_us={}", self.wall_time_us)
    }
}

impl FromStr for StatsReport {
    type Err = ReportError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut values: [Option<&str>; KEYS.len()] = [None; KEYS.len()];
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once('=').ok_or_else(|| ReportError::Malformed(line.into()))?;
            let i = KEYS.iter().position(|&key| key == k).ok_or_else(|| ReportError::UnknownKey(k.into()))?;
            if values[i].replace(v).is_some() {
                return Err(ReportError::Duplicate(k.into()));
            }
        }
        let get = |i: usize| values[i].ok_or(ReportError::Missing(KEYS[i]));
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, ReportError> {
            v.parse().map_err(|_| ReportError::BadValue(key.into()))
        }
        let n = |i: usize| -> Result<u64, ReportError> { num(KEYS[i], get(i)?) };
        Ok(StatsReport {
            stats: Stats {
                max_cols: num(KEYS[0], get(0)?)?,
                resolved_entries: n(1)?,
                non_immediate_entries: n(2)?,
                speculation_steps: n(3)?,
                visited_entries: n(4)?,
                expansion_steps: n(5)?,
            },
            verdict: get(6)?.parse()?,
            input_len: n(7)?,
            rules: num(KEYS[8], get(8)?)?,
            wall_time_us: n(9)?,
        })
    }
}
