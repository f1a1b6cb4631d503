use std::sync::Arc;

use num_complex::Complex64;

use super::flows::{exact_damping_in_place, phase_rotation_in_place, regularized_damping_in_place};
use super::params::{DampingParams, NlsParams, Splitting, StepScheme};
use crate::error::{Error, Result};
use crate::spectral::{ComplexField, TorusGrid};

/// Advances fields by one splitting step with a fixed `dt`.
///
/// The linear propagator `e^{-i|k|²dt}/N` is tabulated once per stepper.
/// A Strang step is the palindrome
///
/// ```text
/// D(dt/2) → R(dt/2) → L(dt) → R(dt/2) → D(dt/2)
/// ```
///
/// with `D` the damping flow, `R` the phase rotation and `L` the free flow.
/// A Lie step is `D(dt) → R(dt) → L(dt)`.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Arc<TorusGrid>,
    damping: DampingParams,
    nls: NlsParams,
    scheme: StepScheme,
    propagator: Vec<Complex64>,
}

impl Stepper {
    pub fn new(grid: &Arc<TorusGrid>, damping: DampingParams, nls: NlsParams, scheme: StepScheme) -> Self {
        let norm = 1.0 / grid.total_cells() as f64;
        let propagator = grid
            .k_squared()
            .iter()
            .map(|&k2| Complex64::from_polar(norm, -k2 * scheme.dt))
            .collect();
        Self {
            grid: Arc::clone(grid),
            damping,
            nls,
            scheme,
            propagator,
        }
    }

    pub fn scheme(&self) -> &StepScheme {
        &self.scheme
    }

    pub fn damping(&self) -> &DampingParams {
        &self.damping
    }

    pub fn nls(&self) -> &NlsParams {
        &self.nls
    }

    /// Advances `f` in place by one step.
    pub fn step(&self, f: &mut ComplexField) -> Result<()> {
        if !f.is_on(&self.grid) {
            return Err(Error::Argument("field and stepper use different grids".into()));
        }
        let dt = self.scheme.dt;
        let values = f.values_mut();
        match self.scheme.splitting {
            Splitting::Strang => {
                let half = 0.5 * dt;
                self.damp(values, half)?;
                phase_rotation_in_place(values, &self.nls, half);
                self.free(values);
                phase_rotation_in_place(values, &self.nls, half);
                self.damp(values, half)?;
            }
            Splitting::Lie => {
                self.damp(values, dt)?;
                phase_rotation_in_place(values, &self.nls, dt);
                self.free(values);
            }
        }
        Ok(())
    }

    fn damp(&self, values: &mut [Complex64], dt: f64) -> Result<()> {
        if self.damping.is_regularized() {
            regularized_damping_in_place(values, &self.damping, dt, self.scheme.substeps)
        } else {
            exact_damping_in_place(values, self.damping.gamma, self.damping.alpha, dt);
            Ok(())
        }
    }

    fn free(&self, values: &mut [Complex64]) {
        self.grid.fft_in_place(values, true);
        for (c, p) in values.iter_mut().zip(&self.propagator) {
            *c *= p;
        }
        self.grid.fft_in_place(values, false);
    }
}

/// One splitting step of `f`; see [`Stepper`].
pub fn strang_step(f: &ComplexField, p: &DampingParams, q: &NlsParams, scheme: &StepScheme) -> Result<ComplexField> {
    let stepper = Stepper::new(f.grid(), *p, *q, *scheme);
    let mut out = f.clone();
    stepper.step(&mut out)?;
    Ok(out)
}
