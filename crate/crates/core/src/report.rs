//! Verification reports shared by the oracle and the suites.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Decimal value of the failing input.
    pub x: String,
    pub detail: String,
    #[serde(skip)]
    key: BigUint,
}

impl Counterexample {
    pub fn new(x: impl Into<BigUint>, detail: impl Into<String>) -> Self {
        let key = x.into();
        Counterexample { x: key.to_string(), detail: detail.into(), key }
    }
}

/// Result of one verification suite. `pass` holds exactly when
/// `counterexamples` is empty.
///
/// Wall time is kept out of the serialized form so JSON output stays
/// byte-identical between runs.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub base: String,
    pub bound: String,
    pub pass: bool,
    /// Individual assertions evaluated.
    pub checked: u64,
    /// Inputs excluded by a precondition.
    pub skipped: u64,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

pub(crate) struct ReportBuilder {
    report: VerificationReport,
    started: Instant,
}

impl ReportBuilder {
    pub(crate) fn start(suite: &str, base: impl Into<String>, bound: impl ToString) -> Self {
        ReportBuilder {
            report: VerificationReport {
                suite: suite.to_string(),
                base: base.into(),
                bound: bound.to_string(),
                pass: false,
                checked: 0,
                skipped: 0,
                counterexamples: Vec::new(),
                notes: Vec::new(),
                wall_time: Duration::ZERO,
            },
            started: Instant::now(),
        }
    }

    pub(crate) fn check(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) {
        self.report.checked += 1;
        if !ok {
            self.report.counterexamples.push(fail());
        }
    }

    pub(crate) fn add_checked(&mut self, n: u64) {
        self.report.checked += n;
    }

    pub(crate) fn skip(&mut self) {
        self.report.skipped += 1;
    }

    pub(crate) fn fail(&mut self, c: Counterexample) {
        self.report.counterexamples.push(c);
    }

    pub(crate) fn note(&mut self, line: impl Into<String>) {
        self.report.notes.push(line.into());
    }

    pub(crate) fn finish(mut self) -> VerificationReport {
        self.report.counterexamples.sort_by(|a, b| a.key.cmp(&b.key));
        self.report.pass = self.report.counterexamples.is_empty();
        self.report.wall_time = self.started.elapsed();
        self.report
    }
}
