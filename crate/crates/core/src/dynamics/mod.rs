//! Time evolution by operator splitting.
//!
//! The equation is split into three exactly solvable pieces: the damping
//! flow (pointwise, modulus only), the phase rotation generated by the power
//! nonlinearity (pointwise, phase only) and the free Schrödinger flow
//! (diagonal in Fourier space). Damping is either the sublinear term, whose
//! flow has a closed form, or its `δ`-regularization, integrated per cell.

mod flows;
mod modulus;
mod params;
mod simulate;
mod splitting;

pub use flows::{damping_flow_exact, damping_flow_regularized, linear_flow, phase_rotation_flow};
pub use params::{
    DampingParams, NlsParams, Splitting, StepScheme, SubstepPolicy, DEFAULT_ATOL, DEFAULT_RTOL,
};
pub use simulate::{
    run_simulation, ExtinctionDetector, RunOptions, SimulationOutcome, EXTINCTION_REL_THRESHOLD,
};
pub use splitting::{strang_step, Stepper};
