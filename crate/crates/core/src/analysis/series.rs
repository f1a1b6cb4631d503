use serde::{Deserialize, Serialize};

use super::inequalities::nls_energy;
use crate::dynamics::{DampingParams, NlsParams};
use crate::error::{Error, Result};
use crate::spectral::{linf_norm, ComplexField};

/// Diagnostics of one saved state.
///
/// `l2ma_pow` is `∫ |u|^{2-α}`, or for a regularized run the matching
/// dissipation integral `∫ |u|²/(|u|²+δ)^{α/2}`. `mass_law_residual`
/// refers to the interval ending at this record and is zero for the first
/// one. `dtu_l2` is a centered difference and so is absent at both ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub mass_sq: f64,
    pub l2ma_pow: f64,
    pub h1: f64,
    pub h2: f64,
    pub linf: f64,
    pub mass_law_residual: f64,
    pub dtu_l2: Option<f64>,
    pub nls_energy: Option<f64>,
}

impl TimeSeriesRecord {
    /// Norm entries of `f` at time `t`; the residual and `dtu_l2` are left
    /// for [`Recorder`] to fill in.
    pub fn of_field(t: f64, f: &ComplexField, p: &DampingParams, q: &NlsParams) -> Self {
        let dv = f.grid().cell_volume();
        let mut mass = 0.0;
        let mut dissipation = 0.0;
        for z in f.values() {
            let r = z.norm();
            mass += r * r;
            dissipation += p.dissipation_density(r);
        }
        let spec = f.to_spectral();
        let grad = spec.gradient_energy();
        let mass_sq = mass * dv;
        let h2 = spec.sobolev_norm(2.0);
        Self {
            t,
            mass_sq,
            l2ma_pow: dissipation * dv,
            h1: (mass_sq + grad).sqrt(),
            h2,
            linf: linf_norm(f),
            mass_law_residual: 0.0,
            dtu_l2: None,
            nls_energy: q.enabled.then(|| nls_energy(f, q)),
        }
    }
}

/// A sampled trajectory: the states a run saved and their times.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ComplexField>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, t: f64, state: ComplexField) {
        self.times.push(t);
        self.states.push(state);
    }

    /// Keeps every `stride`-th sample, starting with the first.
    pub fn thinned(&self, stride: usize) -> Trajectory {
        let stride = stride.max(1);
        Trajectory {
            times: self.times.iter().step_by(stride).copied().collect(),
            states: self.states.iter().step_by(stride).cloned().collect(),
        }
    }
}

/// Turns the states handed out by a simulation into [`TimeSeriesRecord`]s.
///
/// Pass [`Recorder::record`] as the recorder callback of
/// [`run_simulation`](crate::dynamics::run_simulation).
#[derive(Debug)]
pub struct Recorder {
    damping: DampingParams,
    nls: NlsParams,
    keep_states: bool,
    records: Vec<TimeSeriesRecord>,
    trajectory: Trajectory,
    // the last two states, for the centered time derivative
    previous: Option<(f64, ComplexField)>,
    before_previous: Option<(f64, ComplexField)>,
}

impl Recorder {
    pub fn new(damping: DampingParams, nls: NlsParams) -> Self {
        Self {
            damping,
            nls,
            keep_states: false,
            records: Vec::new(),
            trajectory: Trajectory::default(),
            previous: None,
            before_previous: None,
        }
    }

    /// Also keep a copy of every recorded state.
    pub fn keeping_states(mut self) -> Self {
        self.keep_states = true;
        self
    }

    pub fn record(&mut self, t: f64, f: &ComplexField) -> Result<()> {
        if let Some(last) = self.records.last() {
            if t <= last.t {
                return Err(Error::Argument(format!(
                    "record times must increase: {t} after {}",
                    last.t
                )));
            }
        }
        let mut rec = TimeSeriesRecord::of_field(t, f, &self.damping, &self.nls);
        if let Some(prev) = self.records.last() {
            rec.mass_law_residual = super::checks::mass_law_residual(prev, &rec, self.damping.gamma)?;
        }
        if let Some((t0, u0)) = &self.before_previous {
            let n = self.records.len();
            self.records[n - 1].dtu_l2 = Some(l2_distance(u0, f) / (t - t0));
        }
        self.records.push(rec);
        if self.keep_states {
            self.trajectory.push(t, f.clone());
        }
        self.before_previous = self.previous.take();
        self.previous = Some((t, f.clone()));
        Ok(())
    }

    pub fn records(&self) -> &[TimeSeriesRecord] {
        &self.records
    }

    pub fn finish(self) -> (Vec<TimeSeriesRecord>, Trajectory) {
        (self.records, self.trajectory)
    }
}

/// `‖a - b‖_{L²}` without allocating the difference.
pub fn l2_distance(a: &ComplexField, b: &ComplexField) -> f64 {
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    (sum * a.grid().cell_volume()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{l2_norm, make_grid, sobolev_norm};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn record_norms_match_spectral_module() {
        let g = make_grid(1, &[32], &[2.0 * PI]).unwrap();
        let f = ComplexField::from_fn(&g, |x| Complex64::new(x[0].cos() + 0.5, x[0].sin())).unwrap();
        let p = DampingParams::exact(1.0, 0.5).unwrap();
        let rec = TimeSeriesRecord::of_field(0.0, &f, &p, &NlsParams::disabled());
        assert!((rec.mass_sq - l2_norm(&f).powi(2)).abs() < 1e-12);
        assert!((rec.h1 - sobolev_norm(&f, 1.0)).abs() < 1e-12);
        assert!((rec.h2 - sobolev_norm(&f, 2.0)).abs() < 1e-12);
        assert!(rec.nls_energy.is_none());
        assert_eq!(rec.dtu_l2, None);
    }

    #[test]
    fn centered_difference_of_a_rotating_constant() {
        // u(t) = e^{-it}: ‖∂ₜu‖ = √V exactly, the centered quotient gives
        // √V·|sin h|/h.
        let g = make_grid(1, &[8], &[2.0 * PI]).unwrap();
        let p = DampingParams::exact(0.0, 1.0).unwrap();
        let mut rec = Recorder::new(p, NlsParams::disabled()).keeping_states();
        let h = 0.01;
        for n in 0..4 {
            let t = n as f64 * h;
            rec.record(t, &ComplexField::constant(&g, Complex64::from_polar(1.0, -t))).unwrap();
        }
        let (records, traj) = rec.finish();
        assert_eq!(traj.len(), 4);
        let expected = (2.0 * PI).sqrt() * h.sin() / h;
        assert!(records[0].dtu_l2.is_none() && records[3].dtu_l2.is_none());
        for r in &records[1..3] {
            assert!((r.dtu_l2.unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_increasing_times() {
        let g = make_grid(1, &[8], &[1.0]).unwrap();
        let mut rec = Recorder::new(DampingParams::exact(1.0, 1.0).unwrap(), NlsParams::disabled());
        let f = ComplexField::zeros(&g);
        rec.record(0.0, &f).unwrap();
        assert!(rec.record(0.0, &f).is_err());
    }
}
