use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::scenario::ScenarioKind;
use crate::analysis::{ExtinctionReport, TimeSeriesRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A measured value with nothing asserted about it.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    /// The run the check refers to, when a scenario has several.
    pub run: Option<String>,
    pub verdict: Verdict,
    pub value: Option<f64>,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(check: &str, run: Option<&str>, verdict: Verdict, value: Option<f64>, detail: impl Into<String>) -> Self {
        Self {
            check: check.to_string(),
            run: run.map(str::to_string),
            verdict,
            value,
            detail: detail.into(),
        }
    }

    pub fn judged(check: &str, run: Option<&str>, pass: bool, value: Option<f64>, detail: impl Into<String>) -> Self {
        let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        Self::new(check, run, verdict, value, detail)
    }
}

/// One simulation inside a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    /// Distinguishes runs of one scenario, e.g. `seed-3` or `delta-0.01`.
    pub label: String,
    pub steps: usize,
    pub t_end: f64,
    pub extinct: bool,
    pub t_extinct: Option<f64>,
    pub extinction: Option<ExtinctionReport>,
    /// The recorded series; written to CSV rather than into reports.
    #[serde(skip)]
    pub series: Vec<TimeSeriesRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    /// The scenario could not be run to completion.
    Errored,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub name: String,
    pub kind: ScenarioKind,
    pub status: Status,
    pub error: Option<String>,
    pub runs: Vec<RunSummary>,
    pub checks: Vec<CheckOutcome>,
    /// Named measurements: fitted slopes, ensemble maxima, distances.
    pub values: BTreeMap<String, f64>,
    pub duration_s: f64,
}

impl ScenarioResult {
    pub(crate) fn from_parts(
        name: &str,
        kind: ScenarioKind,
        runs: Vec<RunSummary>,
        checks: Vec<CheckOutcome>,
        values: BTreeMap<String, f64>,
    ) -> Self {
        let status = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Status::Failed
        } else {
            Status::Passed
        };
        Self {
            name: name.to_string(),
            kind,
            status,
            error: None,
            runs,
            checks,
            values,
            duration_s: 0.0,
        }
    }

    pub(crate) fn errored(name: &str, kind: ScenarioKind, error: String) -> Self {
        Self {
            name: name.to_string(),
            kind,
            status: Status::Errored,
            error: Some(error),
            runs: Vec::new(),
            checks: Vec::new(),
            values: BTreeMap::new(),
            duration_s: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    /// Outcomes of the named check, across runs.
    pub fn check<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CheckOutcome> + 'a {
        self.checks.iter().filter(move |c| c.check == name)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub scenarios: Vec<ScenarioResult>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.scenarios.iter().all(ScenarioResult::passed)
    }

    /// Number of check outcomes with each verdict: `(pass, fail, reported)`.
    pub fn verdict_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for c in self.scenarios.iter().flat_map(|s| &s.checks) {
            match c.verdict {
                Verdict::Pass => counts.0 += 1,
                Verdict::Fail => counts.1 += 1,
                Verdict::Reported => counts.2 += 1,
            }
        }
        counts
    }

    pub fn get(&self, name: &str) -> Option<&ScenarioResult> {
        self.scenarios.iter().find(|s| s.name == name)
    }
}
