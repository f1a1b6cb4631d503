use serde::{Deserialize, Serialize};

use super::params::{DampingParams, NlsParams, StepScheme};
use super::splitting::Stepper;
use crate::error::{Error, Result};
use crate::spectral::ComplexField;

/// Relative extinction threshold for the unregularized flow: a cell counts
/// as zero once its modulus is at most this fraction of the initial maximum.
pub const EXTINCTION_REL_THRESHOLD: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Invoke the recorder every this many steps (and at the start and end).
    pub record_every: usize,
    /// Stop as soon as the field is extinct.
    pub stop_on_extinction: bool,
    pub extinction_rel_threshold: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            record_every: 1,
            stop_on_extinction: true,
            extinction_rel_threshold: EXTINCTION_REL_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationOutcome {
    pub field: ComplexField,
    pub steps: usize,
    pub t: f64,
    pub extinct: bool,
    /// First step time at which the field was detected extinct.
    pub t_extinct: Option<f64>,
}

/// Decides extinction of a field.
///
/// For the unregularized flow (`delta = 0`) every cell must be at most
/// `threshold · initial max modulus`: below that level the values are
/// round-off left by transforming exact zeros. The regularized flow never
/// produces zeros from nonzero data, so there the field must vanish exactly.
#[derive(Clone, Copy, Debug)]
pub struct ExtinctionDetector {
    cutoff: f64,
    exact_zero: bool,
}

impl ExtinctionDetector {
    pub fn new(u0: &ComplexField, p: &DampingParams, rel_threshold: f64) -> Self {
        Self {
            cutoff: rel_threshold * u0.max_modulus(),
            exact_zero: p.is_regularized(),
        }
    }

    pub fn cutoff(&self) -> f64 {
        if self.exact_zero {
            0.0
        } else {
            self.cutoff
        }
    }

    pub fn is_extinct(&self, f: &ComplexField) -> bool {
        let cutoff = self.cutoff();
        f.values().iter().all(|z| z.norm() <= cutoff)
    }
}

/// Runs the splitting scheme from `u0` until `t >= t_max` or extinction.
///
/// `recorder(t, step, field)` is called at `t = 0`, every
/// `opts.record_every` steps and at the final state. Step times are
/// `n·dt`, so the last step may overshoot `t_max` by less than `dt`.
pub fn run_simulation<F>(
    u0: &ComplexField,
    p: &DampingParams,
    q: &NlsParams,
    scheme: &StepScheme,
    t_max: f64,
    opts: &RunOptions,
    mut recorder: F,
) -> Result<SimulationOutcome>
where
    F: FnMut(f64, usize, &ComplexField) -> Result<()>,
{
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Argument(format!("t_max must be > 0, got {t_max}")));
    }
    if opts.record_every == 0 {
        return Err(Error::Argument("record_every must be >= 1".into()));
    }
    let stepper = Stepper::new(u0.grid(), *p, *q, *scheme);
    let detector = ExtinctionDetector::new(u0, p, opts.extinction_rel_threshold);
    let dt = scheme.dt;
    let total_steps = (t_max / dt - 1e-9).ceil().max(1.0) as usize;

    let mut field = u0.clone();
    let mut t_extinct = detector.is_extinct(&field).then_some(0.0);
    recorder(0.0, 0, &field)?;
    if t_extinct.is_some() && opts.stop_on_extinction {
        return Ok(SimulationOutcome {
            field,
            steps: 0,
            t: 0.0,
            extinct: true,
            t_extinct,
        });
    }

    let mut step = 0;
    let mut last_recorded = 0;
    while step < total_steps {
        stepper.step(&mut field)?;
        step += 1;
        let t = step as f64 * dt;
        if !field.is_finite() {
            return Err(Error::NumericalBlowup { t });
        }
        let extinct_now = detector.is_extinct(&field);
        if extinct_now && t_extinct.is_none() {
            t_extinct = Some(t);
        }
        let stopping = step == total_steps || (extinct_now && opts.stop_on_extinction);
        if step % opts.record_every == 0 || stopping {
            recorder(t, step, &field)?;
            last_recorded = step;
        }
        if stopping {
            break;
        }
    }
    debug_assert_eq!(last_recorded, step);

    let extinct = detector.is_extinct(&field);
    Ok(SimulationOutcome {
        field,
        steps: step,
        t: step as f64 * dt,
        extinct,
        t_extinct: if extinct { t_extinct } else { None },
    })
}
