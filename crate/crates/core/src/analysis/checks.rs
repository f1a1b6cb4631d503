use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::{l2_distance, TimeSeriesRecord, Trajectory};
use crate::error::{Error, Result};

/// Discrete residual of the mass law `d/dt‖u‖² + 2γ∫|u|^{2-α} = 0` between
/// two records, with the dissipation averaged by the trapezoidal rule and
/// the result normalized by `1 + mass_sq` of the earlier record.
pub fn mass_law_residual(earlier: &TimeSeriesRecord, later: &TimeSeriesRecord, gamma: f64) -> Result<f64> {
    let dt = later.t - earlier.t;
    if !(dt > 0.0) {
        return Err(Error::Argument(format!(
            "records must increase in time: {} then {}",
            earlier.t, later.t
        )));
    }
    let rate = (later.mass_sq - earlier.mass_sq) / dt;
    let dissipation = gamma * (earlier.l2ma_pow + later.l2ma_pow);
    Ok((rate + dissipation).abs() / (1.0 + earlier.mass_sq))
}

/// Largest increase of `m(t) = ‖u_A(t) - u_B(t)‖²` between consecutive
/// samples. A non-positive value means the distance never grew.
pub fn contraction_check(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "trajectories have {} and {} samples",
            a.len(),
            b.len()
        )));
    }
    for (ta, tb) in a.times.iter().zip(&b.times) {
        if (ta - tb).abs() > 1e-12 * ta.abs().max(1.0) {
            return Err(Error::Argument(format!("sample times differ: {ta} vs {tb}")));
        }
    }
    let mut distances = Vec::with_capacity(a.len());
    for (ua, ub) in a.states.iter().zip(&b.states) {
        ua.check_same_grid(ub)?;
        distances.push(l2_distance(ua, ub).powi(2));
    }
    Ok(distances
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max))
}

/// `Re((z₁/|z₁|^α - z₂/|z₂|^α)·conj(z₁ - z₂))`, taking `z/|z|^α = 0` at
/// `z = 0`. Monotonicity of the damping term means this is never negative.
pub fn pointwise_monotonicity(z1: Complex64, z2: Complex64, alpha: f64) -> f64 {
    let damp = |z: Complex64| {
        let r = z.norm();
        if r == 0.0 {
            Complex64::default()
        } else {
            z / r.powf(alpha)
        }
    };
    ((damp(z1) - damp(z2)) * (z1 - z2).conj()).re
}

/// Largest `‖u(t) - u(t')‖_{L²}/|t - t'|^{1/2}` over all sample pairs.
pub fn holder_continuity_check(traj: &Trajectory) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::Argument(format!(
            "need at least 3 samples, got {}",
            traj.len()
        )));
    }
    let mut worst: f64 = 0.0;
    for i in 0..traj.len() {
        for j in i + 1..traj.len() {
            let gap = traj.times[j] - traj.times[i];
            if gap <= 0.0 {
                return Err(Error::Argument("sample times must increase".into()));
            }
            worst = worst.max(l2_distance(&traj.states[i], &traj.states[j]) / gap.sqrt());
        }
    }
    Ok(worst)
}

/// Summary of the H² norm along a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct H2Persistence {
    pub sup: f64,
    pub initial: f64,
    pub first_quarter_max: f64,
    pub last_quarter_max: f64,
    /// Finite supremum and no upward trend: the largest value in the last
    /// quarter of the window is within 5% of the largest in the first.
    pub bounded: bool,
}

/// Examines `h2` over the records before `t_extinct` (all records when
/// `None`). An empty window counts as bounded.
pub fn h2_persistence_check(records: &[TimeSeriesRecord], t_extinct: Option<f64>) -> H2Persistence {
    let window: Vec<f64> = records
        .iter()
        .filter(|r| t_extinct.is_none_or(|tv| r.t < tv))
        .map(|r| r.h2)
        .collect();
    if window.is_empty() {
        return H2Persistence {
            sup: 0.0,
            initial: 0.0,
            first_quarter_max: 0.0,
            last_quarter_max: 0.0,
            bounded: true,
        };
    }
    let quarter = (window.len() / 4).max(1);
    let max_of = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
    let sup = max_of(&window);
    let first = max_of(&window[..quarter]);
    let last = max_of(&window[window.len() - quarter..]);
    H2Persistence {
        sup,
        initial: window[0],
        first_quarter_max: first,
        last_quarter_max: last,
        bounded: sup.is_finite() && last <= first * 1.05,
    }
}

/// Largest increase of the recorded `dtu_l2` between consecutive records
/// that carry it.
pub fn dtu_monotonicity_check(records: &[TimeSeriesRecord]) -> Result<f64> {
    let values: Vec<f64> = records.iter().filter_map(|r| r.dtu_l2).collect();
    if values.len() < 2 {
        return Err(Error::Argument(
            "need at least two records with dtu_l2".into(),
        ));
    }
    Ok(values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::series::Recorder;
    use crate::dynamics::{DampingParams, NlsParams};
    use crate::spectral::{make_grid, ComplexField};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn record(t: f64, mass_sq: f64, l2ma_pow: f64) -> TimeSeriesRecord {
        TimeSeriesRecord {
            t,
            mass_sq,
            l2ma_pow,
            h1: 0.0,
            h2: 0.0,
            linf: 0.0,
            mass_law_residual: 0.0,
            dtu_l2: None,
            nls_energy: None,
        }
    }

    #[test]
    fn residual_of_zero_field_vanishes() {
        let r = mass_law_residual(&record(0.0, 0.0, 0.0), &record(0.1, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(r, 0.0);
        assert!(mass_law_residual(&record(0.1, 0.0, 0.0), &record(0.1, 0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn residual_of_scalar_ode_is_second_order() {
        // Constant data: mass = V·y and l2ma_pow = V·y^{1-α/2} with y from
        // the closed form, so the residual is the trapezoidal error.
        let (alpha, gamma, v) = (0.5, 1.0, 2.0);
        let y = |t: f64| super::super::ode::ode_oracle_exact(1.0, alpha, gamma, t);
        let residual = |h: f64| {
            let a = record(0.2, v * y(0.2), v * y(0.2).powf(1.0 - alpha / 2.0));
            let b = record(0.2 + h, v * y(0.2 + h), v * y(0.2 + h).powf(1.0 - alpha / 2.0));
            mass_law_residual(&a, &b, gamma).unwrap()
        };
        let order = (residual(1e-2) / residual(5e-3)).log2();
        assert!((order - 2.0).abs() < 0.05, "order {order}");
    }

    #[test]
    fn contraction_of_identical_and_zero_trajectories() {
        let g = make_grid(1, &[16], &[2.0 * PI]).unwrap();
        let p = DampingParams::exact(1.0, 1.0).unwrap();
        let mut rec = Recorder::new(p, NlsParams::disabled()).keeping_states();
        let mut zero = Trajectory::default();
        for n in 0..5 {
            let t = 0.1 * n as f64;
            let f = ComplexField::constant(&g, Complex64::new(1.0 - t, 0.0));
            rec.record(t, &f).unwrap();
            zero.push(t, ComplexField::zeros(&g));
        }
        let (_, traj) = rec.finish();
        assert_eq!(contraction_check(&traj, &traj).unwrap(), 0.0);
        // against the zero solution this is mass monotonicity
        assert!(contraction_check(&traj, &zero).unwrap() <= 0.0);
        assert!(contraction_check(&traj, &zero.thinned(2)).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        let z = Complex64::new(0.3, -1.2);
        assert_eq!(pointwise_monotonicity(z, z, 0.7), 0.0);
        let v = pointwise_monotonicity(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), 1.0);
        assert!((v - 4.0).abs() < 1e-15);
        assert!(pointwise_monotonicity(z, Complex64::default(), 0.5) > 0.0);
    }

    proptest! {
        #[test]
        fn monotonicity_is_nonnegative(
            a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0,
            alpha in prop::sample::select(vec![0.25, 0.5, 0.75, 1.0]),
        ) {
            let (z1, z2) = (Complex64::new(a, b), Complex64::new(c, d));
            let scale = (z1.norm() + z2.norm()).powf(2.0 - alpha);
            prop_assert!(pointwise_monotonicity(z1, z2, alpha) >= -1e-12 * scale);
        }
    }

    #[test]
    fn holder_of_stationary_and_rotating_modes() {
        let g = make_grid(1, &[16], &[2.0 * PI]).unwrap();
        let mut still = Trajectory::default();
        let mut wave = Trajectory::default();
        let k = 3.0;
        for n in 0..6 {
            let t = 0.05 * n as f64;
            still.push(t, ComplexField::zeros(&g));
            wave.push(
                t,
                ComplexField::plane_wave(&g, &[3], Complex64::from_polar(1.0, -k * k * t)).unwrap(),
            );
        }
        assert_eq!(holder_continuity_check(&still).unwrap(), 0.0);
        let ratio = holder_continuity_check(&wave).unwrap();
        // ‖u(t)-u(t')‖ = 2|sin(k²Δt/2)|√V ≤ k²Δt√V
        let bound = k * k * (0.25f64).sqrt() * (2.0 * PI).sqrt();
        assert!(ratio > 0.0 && ratio <= bound);
        assert!(holder_continuity_check(&still.thinned(3)).is_err());
    }

    #[test]
    fn h2_persistence_windows() {
        let mut recs: Vec<_> = (0..8).map(|n| record(n as f64, 1.0, 1.0)).collect();
        for (n, r) in recs.iter_mut().enumerate() {
            r.h2 = 8.0 - n as f64;
        }
        let rep = h2_persistence_check(&recs, None);
        assert!(rep.bounded);
        assert_eq!(rep.sup, 8.0);
        assert_eq!(rep.last_quarter_max, 2.0);

        recs.reverse();
        for (n, r) in recs.iter_mut().enumerate() {
            r.t = n as f64;
        }
        assert!(!h2_persistence_check(&recs, None).bounded);
        // cut before the growth sets in
        assert!(h2_persistence_check(&recs, Some(1.0)).bounded);
        assert!(h2_persistence_check(&[], None).bounded);
    }

    #[test]
    fn dtu_check_needs_values() {
        let mut recs: Vec<_> = (0..4).map(|n| record(n as f64, 1.0, 1.0)).collect();
        assert!(dtu_monotonicity_check(&recs).is_err());
        recs[1].dtu_l2 = Some(2.0);
        recs[2].dtu_l2 = Some(1.5);
        assert_eq!(dtu_monotonicity_check(&recs).unwrap(), -0.5);
    }
}
