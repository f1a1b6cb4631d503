//! Flat-torus grids, complex fields, Fourier transforms and the norms used
//! by every diagnostic.
//!
//! The spectral convention is
//!
//! ```text
//! ĉ_k = (1/N) Σ_x f(x) e^{-ik·x},      f(x) = Σ_k ĉ_k e^{ik·x},
//! ```
//!
//! so a constant field is its own zero mode and Plancherel reads
//! `‖f‖²_{L²} = V Σ_k |ĉ_k|²` with `V` the torus volume. Sobolev norms use the
//! weight `(1 + |k|²)^s`.

mod field;
mod grid;

pub use field::{
    l2_norm, laplacian_apply, linf_norm, lp_norm, lp_power, sobolev_norm, to_physical, to_spectral,
    ComplexField, SpectralField,
};
pub use grid::{frequency_index, make_grid, TorusGrid, MIN_POINTS};
