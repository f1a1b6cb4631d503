use super::outcome::{CheckOutcome, RunSummary, Verdict};
use super::scenario::CheckId;
use crate::analysis::{
    dtu_monotonicity_check, gn_ratio_check, h2_persistence_check, holder_continuity_check, ExtinctionReport,
    Recorder, TimeSeriesRecord, Trajectory,
};
use crate::dynamics::{run_simulation, DampingParams, NlsParams, RunOptions, SimulationOutcome, StepScheme};
use crate::error::Result;
use crate::spectral::ComplexField;

/// Everything a finished run leaves behind.
#[derive(Debug)]
pub struct RunData {
    pub label: String,
    pub damping: DampingParams,
    pub nls: NlsParams,
    pub scheme: StepScheme,
    pub records: Vec<TimeSeriesRecord>,
    pub trajectory: Trajectory,
    pub outcome: SimulationOutcome,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct RunSpec {
    pub damping: DampingParams,
    pub nls: NlsParams,
    pub scheme: StepScheme,
    pub t_max: f64,
    pub record_every: usize,
    pub keep_states: bool,
    pub stop_on_extinction: bool,
}

pub(crate) fn simulate(label: &str, u0: &ComplexField, spec: &RunSpec) -> Result<RunData> {
    let mut recorder = Recorder::new(spec.damping, spec.nls);
    if spec.keep_states {
        recorder = recorder.keeping_states();
    }
    let opts = RunOptions {
        record_every: spec.record_every,
        stop_on_extinction: spec.stop_on_extinction,
        ..RunOptions::default()
    };
    let outcome = run_simulation(u0, &spec.damping, &spec.nls, &spec.scheme, spec.t_max, &opts, |t, _, f| {
        recorder.record(t, f)
    })?;
    let (records, trajectory) = recorder.finish();
    Ok(RunData {
        label: label.to_string(),
        damping: spec.damping,
        nls: spec.nls,
        scheme: spec.scheme,
        records,
        trajectory,
        outcome,
    })
}

impl RunData {
    /// Extinction report for unregularized damped runs.
    pub fn extinction_report(&self) -> Result<Option<ExtinctionReport>> {
        let p = &self.damping;
        if p.is_regularized() || p.gamma == 0.0 {
            return Ok(None);
        }
        let dim = self.outcome.field.grid().dim();
        ExtinctionReport::from_records(&self.records, self.outcome.t_extinct, p.gamma, p.alpha, dim).map(Some)
    }

    pub fn summary(&self) -> Result<RunSummary> {
        Ok(RunSummary {
            label: self.label.clone(),
            steps: self.outcome.steps,
            t_end: self.outcome.t,
            extinct: self.outcome.extinct,
            t_extinct: self.outcome.t_extinct,
            extinction: self.extinction_report()?,
            series: self.records.clone(),
        })
    }

    fn initial_mass(&self) -> f64 {
        self.records.first().map_or(0.0, |r| r.mass_sq)
    }

    /// Records strictly before extinction (all of them if none).
    fn pre_extinction(&self) -> impl Iterator<Item = &TimeSeriesRecord> {
        let tv = self.outcome.t_extinct;
        self.records.iter().filter(move |r| tv.is_none_or(|t| r.t < t))
    }
}

pub(crate) fn evaluate_checks(run: &RunData, checks: &[CheckId], exploratory: bool) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = checks.iter().map(|&c| evaluate(run, c)).collect();
    if exploratory {
        for c in &mut out {
            c.verdict = Verdict::Reported;
        }
    }
    out
}

fn evaluate(run: &RunData, check: CheckId) -> CheckOutcome {
    let label = Some(run.label.as_str());
    let name = check.name();
    let m0 = run.initial_mass();
    let o = &run.outcome;
    match check {
        CheckId::Extinct => CheckOutcome::judged(
            name,
            label,
            o.extinct,
            o.t_extinct,
            match o.t_extinct {
                Some(t) => format!("extinct at t = {t}"),
                None => format!("not extinct at t = {}, L∞ = {:e}", o.t, o.field.max_modulus()),
            },
        ),
        CheckId::NotExtinct => {
            let m_end = run.records.last().map_or(0.0, |r| r.mass_sq);
            CheckOutcome::judged(name, label, !o.extinct, Some(m_end), format!("mass at t = {}: {m_end:e}", o.t))
        }
        CheckId::ExtinctionBound => match run.extinction_report() {
            Ok(Some(rep)) => match (rep.t_v, rep.bound()) {
                (Some(tv), Some(bound)) => CheckOutcome::judged(
                    name,
                    label,
                    tv <= bound,
                    Some(bound),
                    format!(
                        "t_v = {tv}, bound = {bound}, C = {:e}, sup H^{} = {:e}",
                        rep.nash_constant_estimate, rep.sobolev_order, rep.hs_sup
                    ),
                ),
                _ => CheckOutcome::judged(name, label, false, None, "no extinction to bound"),
            },
            Ok(None) => CheckOutcome::judged(name, label, false, None, "bound needs gamma > 0 and delta = 0"),
            Err(e) => CheckOutcome::judged(name, label, false, None, e.to_string()),
        },
        CheckId::MassMonotone => {
            let worst = run
                .records
                .windows(2)
                .map(|w| w[1].mass_sq - w[0].mass_sq)
                .fold(0.0, f64::max)
                / m0.max(f64::MIN_POSITIVE);
            CheckOutcome::judged(name, label, worst <= 1e-12, Some(worst), "largest relative mass increase")
        }
        CheckId::MassConserved => {
            let worst = run
                .records
                .iter()
                .map(|r| (r.mass_sq - m0).abs())
                .fold(0.0, f64::max)
                / m0.max(f64::MIN_POSITIVE);
            CheckOutcome::judged(name, label, worst <= 1e-10, Some(worst), "largest relative mass deviation")
        }
        CheckId::MassLaw => {
            let worst = run.pre_extinction().map(|r| r.mass_law_residual).fold(0.0, f64::max);
            CheckOutcome::new(name, label, Verdict::Reported, Some(worst), "largest residual before extinction")
        }
        CheckId::H2Persistence => {
            let h = h2_persistence_check(&run.records, o.t_extinct);
            CheckOutcome::judged(
                name,
                label,
                h.bounded,
                Some(h.sup),
                format!(
                    "sup = {:e}, first quarter max = {:e}, last quarter max = {:e}",
                    h.sup, h.first_quarter_max, h.last_quarter_max
                ),
            )
        }
        CheckId::DtuMonotone => {
            let dt = run.scheme.dt * run_record_stride(run);
            match dtu_monotonicity_check(&run.records) {
                Ok(worst) => CheckOutcome::judged(
                    name,
                    label,
                    worst <= dt * dt,
                    Some(worst),
                    format!("largest increase of ‖∂ₜu‖, tolerance {:e}", dt * dt),
                ),
                Err(e) => CheckOutcome::judged(name, label, false, None, e.to_string()),
            }
        }
        CheckId::Holder => holder(run, label),
        CheckId::NlsEnergy => {
            let energies: Vec<f64> = run.records.iter().filter_map(|r| r.nls_energy).collect();
            match energies.first() {
                Some(&e0) => {
                    let rise = energies.iter().map(|e| e - e0).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE);
                    CheckOutcome::new(
                        name,
                        label,
                        Verdict::Reported,
                        Some(rise),
                        format!("E(0) = {e0:e}; value is the largest increase relative to E(0)"),
                    )
                }
                None => CheckOutcome::judged(name, label, false, None, "nonlinearity disabled, no energy recorded"),
            }
        }
        CheckId::H1Bounded => {
            let h0 = run.records.first().map_or(0.0, |r| r.h1);
            let sup = run.records.iter().map(|r| r.h1).fold(0.0, f64::max);
            let ratio = sup / h0.max(f64::MIN_POSITIVE);
            CheckOutcome::judged(name, label, ratio.is_finite(), Some(ratio), "sup ‖u‖_{H¹} / ‖u₀‖_{H¹}")
        }
        CheckId::GnRatio => {
            let worst = run
                .trajectory
                .states
                .iter()
                .filter(|f| !f.is_zero())
                .filter_map(|f| gn_ratio_check(f).ok())
                .fold(0.0, f64::max);
            CheckOutcome::judged(name, label, worst.is_finite(), Some(worst), "largest ‖u‖_∞/(‖u‖_{L²}‖u‖_{H¹})^{1/2}")
        }
    }
}

fn run_record_stride(run: &RunData) -> f64 {
    match run.records.get(1) {
        Some(r) => ((r.t - run.records[0].t) / run.scheme.dt).round().max(1.0),
        None => 1.0,
    }
}

const HOLDER_SAMPLES: usize = 128;

fn holder(run: &RunData, label: Option<&str>) -> CheckOutcome {
    let name = CheckId::Holder.name();
    let traj = &run.trajectory;
    let stride = traj.len().div_ceil(HOLDER_SAMPLES).max(1);
    let fine = holder_continuity_check(&traj.thinned(stride));
    let coarse = holder_continuity_check(&traj.thinned(2 * stride));
    match (fine, coarse) {
        (Ok(f), Ok(c)) => {
            let stable = f.is_finite() && f <= 2.0 * c && c <= 2.0 * f;
            CheckOutcome::judged(name, label, stable, Some(f), format!("quotient {f:e}, with half the samples {c:e}"))
        }
        (Err(e), _) | (_, Err(e)) => CheckOutcome::judged(name, label, false, None, e.to_string()),
    }
}
