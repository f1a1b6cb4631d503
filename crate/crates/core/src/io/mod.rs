//! Configuration files, time-series CSV and JSON reports.

mod config;
mod output;

pub use config::{load_config, parse_config, OutputSettings, RunConfig};
pub use output::{
    read_report_json, read_timeseries_csv, write_report_file, write_report_json, write_timeseries_csv,
    write_timeseries_file, DirectorySink, EnvironmentStamp, ReportDocument, VerdictSummary, CSV_HEADER,
    REPORT_SCHEMA_VERSION,
};
