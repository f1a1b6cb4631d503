use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;

use super::outcome::{ScenarioResult, Status, SuiteResult};
use super::scenario::Scenario;
use super::studies::run_scenario;
use crate::error::{Error, Result};

/// Receives each scenario result as soon as it is ready. Scenarios may
/// finish concurrently, so sinks must be shareable across threads.
pub trait ResultSink: Sync {
    fn accept(&self, result: &ScenarioResult) -> Result<()>;
}

/// A sink that discards everything.
pub struct NoSink;

impl ResultSink for NoSink {
    fn accept(&self, _: &ScenarioResult) -> Result<()> {
        Ok(())
    }
}

/// Runs every scenario, concurrently, on at most `threads` worker threads
/// (all available cores when `None`).
///
/// A scenario that errors is recorded with [`Status::Errored`] and does not
/// stop the others. Results keep the order of `scenarios`. Duplicate names
/// are rejected up front.
pub fn run_suite(scenarios: &[Scenario], threads: Option<usize>, sink: &dyn ResultSink) -> Result<SuiteResult> {
    let mut seen = HashSet::new();
    for s in scenarios {
        if !seen.insert(s.name.as_str()) {
            return Err(Error::Config(format!("duplicate scenario name `{}`", s.name)));
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("thread limit must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
    let scenarios = pool.install(|| {
        scenarios
            .par_iter()
            .map(|s| {
                let start = Instant::now();
                let mut result = run_scenario(s)
                    .unwrap_or_else(|e| ScenarioResult::errored(&s.name, s.kind, e.to_string()));
                result.duration_s = start.elapsed().as_secs_f64();
                if let Err(e) = sink.accept(&result) {
                    result.status = Status::Errored;
                    result.error = Some(format!("output: {e}"));
                }
                result
            })
            .collect()
    });
    Ok(SuiteResult { scenarios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DampingParams;
    use crate::experiments::{InitialData, ScenarioKind};

    fn quick(name: &str, t_max: f64) -> Scenario {
        let mut s = Scenario::new(name, ScenarioKind::Extinction1d, 1, DampingParams::exact(1.0, 1.0).unwrap());
        s.grid.points = vec![16];
        s.scheme.dt = 1e-2;
        s.t_max = Some(t_max);
        s
    }

    #[test]
    fn empty_suite_passes() {
        let r = run_suite(&[], Some(1), &NoSink).unwrap();
        assert!(r.passed() && r.scenarios.is_empty());
    }

    #[test]
    fn duplicate_names_and_zero_threads_rejected() {
        assert!(run_suite(&[quick("a", 2.0), quick("a", 2.0)], None, &NoSink).is_err());
        assert!(run_suite(&[quick("a", 2.0)], Some(0), &NoSink).is_err());
    }

    #[test]
    fn failures_and_errors_are_recorded_in_order() {
        let mut broken = quick("broken", 2.0);
        broken.initial = InitialData::File {
            path: "/nonexistent/field.txt".into(),
        };
        let suite = [quick("ok", 2.0), quick("short", 0.5), broken];
        let r = run_suite(&suite, Some(2), &NoSink).unwrap();
        let status: Vec<Status> = r.scenarios.iter().map(|s| s.status).collect();
        assert_eq!(status, vec![Status::Passed, Status::Failed, Status::Errored]);
        assert!(!r.passed());
        assert!(r.get("broken").unwrap().error.is_some());
        assert_eq!(r.get("short").unwrap().check("extinct").next().unwrap().verdict, crate::experiments::Verdict::Fail);
    }
}
