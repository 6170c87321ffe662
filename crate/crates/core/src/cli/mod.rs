//! Library side of the command-line front end: parameter ranges, the
//! verification campaigns, table emission and the single-instance KZ report.

pub mod kzreport;
pub mod report;
pub mod table;
pub mod verify;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::modarith::is_prime;

/// An inclusive integer range written `A..B` or a single value `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
}

impl IntRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self { lo, hi }
    }

    pub fn single(v: u64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }

    /// Clips the upper end to `max`; `None` when nothing is left.
    pub fn clip(&self, max: u64) -> Option<Self> {
        (self.lo <= max).then(|| Self { lo: self.lo, hi: self.hi.min(max) })
    }

    pub fn primes(&self) -> Vec<u64> {
        self.iter().filter(|&v| v >= 3 && is_prime(v)).collect()
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("invalid bound {t:?}: {e}"));
        let range = match s.split_once("..") {
            Some((lo, hi)) => Self::new(parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
            None => Self::single(parse(s)?),
        };
        if range.lo > range.hi {
            return Err(format!("empty range {s}"));
        }
        Ok(range)
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

/// Failure to run a command at all, as opposed to a failed identity.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<crate::Error> for UsageError {
    fn from(e: crate::Error) -> Self {
        UsageError(e.to_string())
    }
}
