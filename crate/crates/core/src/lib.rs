//! Pseudospectral simulation of the Schrödinger equation with sublinear
//! damping,
//!
//! ```text
//! i ∂ₜu + Δu = λ|u|^{2σ}u − iγ u/|u|^α,     0 < α ≤ 1,
//! ```
//!
//! on flat tori, together with the diagnostics that check its dissipation
//! laws, contraction property, Nash-type inequalities and finite-time
//! extinction.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: grids, fields, FFTs and norms.
//! * [`dynamics`]: the exact and regularized damping flows, the free
//!   Schrödinger flow, the power-nonlinearity phase flow and their splitting.
//! * [`analysis`]: closed-form ODE oracles, time-series records and every
//!   identity/inequality check.
//! * [`experiments`]: reproducible scenarios and suites.
//! * [`io`]: config parsing, CSV series and JSON reports.
//!
//! The guide under `book/` walks through the mathematics; its code listings
//! are compiled and run as doc-tests of this crate.

pub mod analysis;
pub mod dynamics;
mod error;
pub mod experiments;
pub mod io;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/splitting.md")]
    mod splitting {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/nash.md")]
    mod nash {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/config.md")]
    mod config {}
    #[doc = include_str!("../../../book/src/outputs.md")]
    mod outputs {}
}
