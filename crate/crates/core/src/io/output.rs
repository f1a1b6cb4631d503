use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::analysis::TimeSeriesRecord;
use crate::error::{Error, Result};
use crate::experiments::{ResultSink, Scenario, ScenarioResult, SuiteResult};

/// Column order of time-series CSV files.
pub const CSV_HEADER: [&str; 9] = [
    "t",
    "mass_sq",
    "l2ma_pow",
    "h1",
    "h2",
    "linf",
    "mass_law_residual",
    "dtu_l2",
    "nls_energy",
];

/// Bumped whenever the report layout changes incompatibly.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Config(format!("{}: malformed CSV: {other:?}", path.display())),
    }
}

fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes records as CSV with [`CSV_HEADER`]. Floats use `{:.16e}`, which
/// reads back bit-exact; absent optional values are empty fields.
pub fn write_timeseries_csv<W: Write>(out: W, records: &[TimeSeriesRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| csv_error(Path::new("<csv>"), e);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let opt = |v: Option<f64>| v.map(fmt_value).unwrap_or_default();
        w.write_record([
            fmt_value(r.t),
            fmt_value(r.mass_sq),
            fmt_value(r.l2ma_pow),
            fmt_value(r.h1),
            fmt_value(r.h2),
            fmt_value(r.linf),
            fmt_value(r.mass_law_residual),
            opt(r.dtu_l2),
            opt(r.nls_energy),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_timeseries_file(path: &Path, records: &[TimeSeriesRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_timeseries_csv(BufWriter::new(file), records).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_timeseries_csv(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!(
            "{}: unexpected header `{}`",
            path.display(),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize().map(|rec| rec.map_err(|e| csv_error(path, e))).collect()
}

/// Where the report was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentStamp {
    pub package: String,
    pub version: String,
    pub precision: String,
    pub os: String,
    pub arch: String,
}

impl EnvironmentStamp {
    pub fn current() -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            precision: "f64".to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub passed: bool,
    pub pass: usize,
    pub fail: usize,
    pub reported: usize,
    pub errored_scenarios: usize,
}

/// The JSON report of a suite.
///
/// `config` holds the configuration text verbatim, so the report alone is
/// enough to rerun it. Time series go to CSV files and are not part of
/// the report. JSON has no infinities or NaNs: non-finite check
/// values are stored as `null` and non-finite named values are left out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub config: String,
    pub scenarios: Vec<Scenario>,
    pub verdicts: VerdictSummary,
    pub results: Vec<ScenarioResult>,
    pub environment: EnvironmentStamp,
}

impl ReportDocument {
    pub fn new(config_text: &str, config: &RunConfig, suite: &SuiteResult, environment: EnvironmentStamp) -> Self {
        let (pass, fail, reported) = suite.verdict_counts();
        let results = suite
            .scenarios
            .iter()
            .cloned()
            .map(|mut r| {
                for run in &mut r.runs {
                    run.series.clear();
                }
                for c in &mut r.checks {
                    c.value = c.value.filter(|v| v.is_finite());
                }
                r.values.retain(|_, v| v.is_finite());
                r
            })
            .collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            config: config_text.to_string(),
            scenarios: config.scenarios.clone(),
            verdicts: VerdictSummary {
                passed: suite.passed(),
                pass,
                fail,
                reported,
                errored_scenarios: suite
                    .scenarios
                    .iter()
                    .filter(|s| s.status == crate::experiments::Status::Errored)
                    .count(),
            },
            results,
            environment,
        }
    }
}

/// Pretty-printed JSON with keys in declaration order and a final newline.
pub fn write_report_json<W: Write>(mut out: W, doc: &ReportDocument) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| Error::Json {
        path: PathBuf::from("<report>"),
        source: e,
    })?;
    out.write_all(b"\n").map_err(|e| Error::io("<report>", e))
}

pub fn write_report_file(path: &Path, doc: &ReportDocument) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_report_json(&mut w, doc).map_err(|e| match e {
        Error::Json { source, .. } => Error::Json {
            path: path.to_path_buf(),
            source,
        },
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_report_json(path: &Path) -> Result<ReportDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes each run's series to `<dir>/<scenario>/<run>.csv` as scenarios
/// finish.
#[derive(Clone, Debug)]
pub struct DirectorySink {
    dir: PathBuf,
}

impl DirectorySink {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn series_path(&self, scenario: &str, run: &str) -> PathBuf {
        self.dir.join(scenario).join(format!("{run}.csv"))
    }
}

impl ResultSink for DirectorySink {
    fn accept(&self, result: &ScenarioResult) -> Result<()> {
        if result.runs.iter().all(|r| r.series.is_empty()) {
            return Ok(());
        }
        let sub = self.dir.join(&result.name);
        fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
        for run in result.runs.iter().filter(|r| !r.series.is_empty()) {
            write_timeseries_file(&self.series_path(&result.name, &run.label), &run.series)?;
        }
        Ok(())
    }
}
