//! Diagnostics: closed-form ODE oracles, time-series records and the
//! numerical counterparts of every dissipation identity and inequality.

mod checks;
mod extinction;
mod inequalities;
mod ode;
mod series;

pub use checks::{
    contraction_check, dtu_monotonicity_check, h2_persistence_check, holder_continuity_check,
    mass_law_residual, pointwise_monotonicity, H2Persistence,
};
pub use extinction::{extinction_bound, extinction_bound_check, sobolev_order_for, ExtinctionReport};
pub use inequalities::{gn_ratio_check, nash_ratio, nash_ratio_from_norms, nls_energy};
pub use ode::{
    ode_oracle_exact, ode_oracle_regularized, ode_oracle_regularized_log, ode_oracle_tc, OdeState,
};
pub use series::{l2_distance, Recorder, TimeSeriesRecord, Trajectory};
