//! Reproducible scenarios that combine the dynamics and the diagnostics
//! into pass/fail studies, and the suite runner that executes them.
//!
//! A [`Scenario`] fixes a grid, parameters, a step scheme, initial data and
//! a list of checks. [`run_scenario`] dispatches on its [`ScenarioKind`];
//! [`run_suite`] runs many in parallel and collects a [`SuiteResult`].

mod initial;
mod outcome;
mod runs;
mod scenario;
mod studies;
mod suite;

pub use initial::{random_field, InitialData};
pub use outcome::{CheckOutcome, RunSummary, ScenarioResult, Status, SuiteResult, Verdict};
pub use runs::RunData;
pub use scenario::{CheckId, EnsembleSpec, GridSpec, Scenario, ScenarioKind};
pub use studies::{
    fit_log_mass_slope, run_scenario, scenario_delta_convergence, scenario_extinction_1d,
    scenario_extinction_23d, scenario_gamma_sweep, scenario_nash_ensemble, scenario_nls_corollary,
    scenario_regularized_sweep, scenario_single, time_to_relative_mass, SLOPE_WINDOW,
};
pub use suite::{run_suite, NoSink, ResultSink};
