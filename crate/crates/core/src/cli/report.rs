use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

/// Counterexamples listed per report before truncation.
pub const MAX_COUNTEREXAMPLES: usize = 200;

/// Result of checking one grid cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Outside the regime of the identity under test.
    Skip,
    Fail(String),
}

/// The machine-readable summary of a verification campaign.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub grid: serde_json::Value,
    pub checked: u64,
    pub passed: u64,
    pub skipped: u64,
    pub failed: u64,
    pub counterexamples: Vec<String>,
    pub wall_time_ms: u64,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(suite: &str, grid: serde_json::Value) -> Self {
        Self {
            suite: suite.to_string(),
            grid,
            checked: 0,
            passed: 0,
            skipped: 0,
            failed: 0,
            counterexamples: Vec::new(),
            wall_time_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Pass => {
                self.checked += 1;
                self.passed += 1;
            }
            Outcome::Skip => self.skipped += 1,
            Outcome::Fail(msg) => {
                self.checked += 1;
                self.failed += 1;
                if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    self.counterexamples.push(msg);
                }
            }
        }
    }

    /// Checks every cell in parallel and records the outcomes in cell order.
    pub fn run_cells<T, F>(&mut self, cells: &[T], check: F)
    where
        T: Sync,
        F: Fn(&T) -> Outcome + Sync + Send,
    {
        let outcomes: Vec<Outcome> = cells.par_iter().map(&check).collect();
        for o in outcomes {
            self.record(o);
        }
    }

    /// Adds another report's counts, prefixing its messages with its suite.
    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.skipped += other.skipped;
        self.failed += other.failed;
        for c in other.counterexamples {
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(format!("[{}] {c}", other.suite));
            }
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("[{}] {n}", other.suite)));
        if let serde_json::Value::Object(map) = &mut self.grid {
            map.insert(other.suite, other.grid);
        }
    }

    pub fn success(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Times `body` and stores the elapsed milliseconds in its report.
pub fn timed(body: impl FnOnce() -> Result<Report, super::UsageError>) -> Result<Report, super::UsageError> {
    let start = Instant::now();
    let mut report = body()?;
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// `Pass` when `lhs == rhs`, otherwise a failure naming the cell and both values.
pub fn compare<T: PartialEq + std::fmt::Display>(cell: &str, lhs: &T, rhs: &T) -> Outcome {
    if lhs == rhs {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{cell}: lhs = {lhs}, rhs = {rhs}"))
    }
}
