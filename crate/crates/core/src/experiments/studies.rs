use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::initial::{random_field, InitialData};
use super::outcome::{CheckOutcome, RunSummary, ScenarioResult, Verdict};
use super::runs::{evaluate_checks, simulate, RunData, RunSpec};
use super::scenario::{GridSpec, Scenario, ScenarioKind};
use crate::analysis::{nash_ratio, TimeSeriesRecord};
use crate::dynamics::{DampingParams, NlsParams};
use crate::error::{Error, Result};
use crate::spectral::ComplexField;

/// Runs a scenario of any kind.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioResult> {
    s.validate()?;
    match s.kind {
        ScenarioKind::Run | ScenarioKind::Extinction1d | ScenarioKind::Extinction23d => scenario_single(s),
        ScenarioKind::NlsCorollary => scenario_nls_corollary(s),
        ScenarioKind::RegularizedSweep => scenario_regularized_sweep(s),
        ScenarioKind::DeltaConvergence => scenario_delta_convergence(s),
        ScenarioKind::GammaSweep => scenario_gamma_sweep(s),
        ScenarioKind::NashEnsemble => scenario_nash_ensemble(s),
    }
}

/// Labelled initial data: one entry per seed, or the scenario's own data.
fn initial_variants(s: &Scenario) -> Vec<(String, InitialData)> {
    if s.seeds.is_empty() {
        vec![("main".to_string(), s.initial.clone())]
    } else {
        s.seeds
            .iter()
            .map(|&seed| (format!("seed-{seed}"), s.initial.with_seed(seed)))
            .collect()
    }
}

fn spec(s: &Scenario, damping: DampingParams) -> Result<RunSpec> {
    Ok(RunSpec {
        damping,
        nls: s.nls,
        scheme: s.scheme,
        t_max: s.t_max()?,
        record_every: s.record_every,
        keep_states: s.effective_checks().iter().any(|c| c.needs_states()),
        stop_on_extinction: true,
    })
}

fn collect(
    s: &Scenario,
    runs: &[RunData],
    mut checks: Vec<CheckOutcome>,
    values: BTreeMap<String, f64>,
) -> Result<ScenarioResult> {
    let summaries = runs.iter().map(RunData::summary).collect::<Result<Vec<RunSummary>>>()?;
    if s.exploratory {
        for c in &mut checks {
            c.verdict = Verdict::Reported;
        }
    }
    Ok(ScenarioResult::from_parts(&s.name, s.kind, summaries, checks, values))
}

fn run_variants(s: &Scenario, damping: DampingParams) -> Result<Vec<RunData>> {
    let grid = s.grid.build()?;
    let spec = spec(s, damping)?;
    initial_variants(s)
        .par_iter()
        .map(|(label, data)| simulate(label, &data.build(&grid)?, &spec))
        .collect()
}

/// Single runs (one per seed) with the scenario's checks. Covers the
/// extinction studies in one and in two or three dimensions.
pub fn scenario_single(s: &Scenario) -> Result<ScenarioResult> {
    let runs = run_variants(s, s.damping)?;
    let checks = s.effective_checks();
    let outcomes = runs
        .iter()
        .flat_map(|r| evaluate_checks(r, &checks, s.exploratory))
        .collect();
    let mut values = BTreeMap::new();
    for r in &runs {
        if let Some(tv) = r.outcome.t_extinct {
            values.insert(format!("t_v[{}]", r.label), tv);
        }
    }
    collect(s, &runs, outcomes, values)
}

pub fn scenario_extinction_1d(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::Extinction1d)?;
    scenario_single(s)
}

pub fn scenario_extinction_23d(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::Extinction23d)?;
    scenario_single(s)
}

fn expect_kind(s: &Scenario, kind: ScenarioKind) -> Result<()> {
    if s.kind == kind {
        s.validate()
    } else {
        Err(Error::Config(format!(
            "scenario `{}` is of kind {}, expected {kind}",
            s.name, s.kind
        )))
    }
}

/// Damped NLS runs. With `λ = 0` the run is also compared against the pure
/// damping run from the same data.
pub fn scenario_nls_corollary(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::NlsCorollary)?;
    let runs = run_variants(s, s.damping)?;
    let checks = s.effective_checks();
    let mut outcomes: Vec<CheckOutcome> = runs
        .iter()
        .flat_map(|r| evaluate_checks(r, &checks, s.exploratory))
        .collect();
    let mut values = BTreeMap::new();
    if s.nls.lambda == 0.0 {
        let mut pure = s.clone();
        pure.nls = NlsParams::disabled();
        let reference = run_variants(&pure, s.damping)?;
        for (a, b) in runs.iter().zip(&reference) {
            let gap = series_gap(&a.records, &b.records).max(
                a.outcome
                    .field
                    .difference(&b.outcome.field)
                    .map(|d| d.max_modulus())
                    .unwrap_or(f64::INFINITY),
            );
            values.insert(format!("pure_damping_gap[{}]", a.label), gap);
            outcomes.push(CheckOutcome::judged(
                "matches_pure_damping",
                Some(&a.label),
                gap <= 1e-12,
                Some(gap),
                "largest difference in mass, H¹ and final field against the run without nonlinearity",
            ));
        }
    }
    collect(s, &runs, outcomes, values)
}

fn series_gap(a: &[TimeSeriesRecord], b: &[TimeSeriesRecord]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.mass_sq - y.mass_sq).abs().max((x.h1 - y.h1).abs()))
        .fold(0.0, f64::max)
}

/// Least-squares slope of `ln mass_sq` against `t` over the records whose
/// mass lies in `[lo, hi]·mass_sq(0)`. `None` with fewer than 3 such records.
pub fn fit_log_mass_slope(records: &[TimeSeriesRecord], lo: f64, hi: f64) -> Option<f64> {
    let m0 = records.first()?.mass_sq;
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.mass_sq >= lo * m0 && r.mass_sq <= hi * m0 && r.mass_sq > 0.0)
        .map(|r| (r.t, r.mass_sq.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    Some(sxy / sxx)
}

/// First recorded time at which `mass_sq ≤ level·mass_sq(0)`.
pub fn time_to_relative_mass(records: &[TimeSeriesRecord], level: f64) -> Option<f64> {
    let m0 = records.first()?.mass_sq;
    records.iter().find(|r| r.mass_sq <= level * m0).map(|r| r.t)
}

/// Relative window of the log-mass fit.
pub const SLOPE_WINDOW: (f64, f64) = (1e-8, 1e-2);

/// Regularized runs over decreasing `δ`. None may go extinct; the fitted
/// decay rates must steepen, by about `(δ_i/δ_{i+1})^{α/2}` (within 30%).
pub fn scenario_regularized_sweep(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::RegularizedSweep)?;
    let grid = s.grid.build()?;
    let u0 = s.initial.build(&grid)?;
    let runs: Vec<RunData> = s
        .deltas
        .par_iter()
        .map(|&delta| {
            let p = DampingParams::new(s.damping.gamma, s.damping.alpha, delta)?;
            simulate(&format!("delta-{delta:e}"), &u0, &spec(s, p)?)
        })
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut slopes = Vec::new();
    for r in &runs {
        let delta = r.damping.delta;
        checks.push(CheckOutcome::judged(
            "no_extinction",
            Some(&r.label),
            !r.outcome.extinct,
            Some(r.records.last().map_or(0.0, |x| x.mass_sq)),
            "mass at the end of the run",
        ));
        let slope = fit_log_mass_slope(&r.records, SLOPE_WINDOW.0, SLOPE_WINDOW.1);
        match slope {
            Some(k) => {
                values.insert(format!("slope[delta={delta:e}]"), k);
            }
            None => checks.push(CheckOutcome::judged(
                "slope_fit",
                Some(&r.label),
                false,
                None,
                "mass never crossed the fit window; increase t_max",
            )),
        }
        if let Some(t) = time_to_relative_mass(&r.records, 1e-6) {
            values.insert(format!("t_mass_1e-6[delta={delta:e}]"), t);
        }
        slopes.push(slope);
    }
    for (i, pair) in slopes.windows(2).enumerate() {
        let (Some(a), Some(b)) = (pair[0], pair[1]) else { continue };
        let (da, db) = (s.deltas[i], s.deltas[i + 1]);
        let measured = b / a;
        let expected = (da / db).powf(0.5 * s.damping.alpha);
        let label = format!("delta {da:e} -> {db:e}");
        checks.push(CheckOutcome::judged(
            "slopes_steepen",
            Some(&label),
            b.abs() > a.abs(),
            Some(b),
            format!("slopes {a} then {b}"),
        ));
        checks.push(CheckOutcome::judged(
            "slope_ratio",
            Some(&label),
            (measured / expected - 1.0).abs() <= 0.3,
            Some(measured),
            format!("measured ratio {measured}, expected {expected}"),
        ));
    }
    collect(s, &runs, checks, values)
}

/// Largest in-time `L²` distance between each `δ` run and the `δ = 0` run
/// from the same data; the distances must decrease strictly along the list.
pub fn scenario_delta_convergence(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::DeltaConvergence)?;
    let grid = s.grid.build()?;
    let u0 = s.initial.build(&grid)?;
    let mut deltas = vec![0.0];
    deltas.extend(&s.deltas);
    let runs: Vec<RunData> = deltas
        .par_iter()
        .map(|&delta| {
            let p = DampingParams::new(s.damping.gamma, s.damping.alpha, delta)?;
            let mut rs = spec(s, p)?;
            rs.keep_states = true;
            rs.stop_on_extinction = false;
            simulate(&format!("delta-{delta:e}"), &u0, &rs)
        })
        .collect::<Result<_>>()?;

    let reference = &runs[0].trajectory;
    let mut distances = Vec::new();
    let mut values = BTreeMap::new();
    for r in &runs[1..] {
        if r.trajectory.len() != reference.len() {
            return Err(Error::Scenario {
                name: s.name.clone(),
                reason: "runs recorded different numbers of samples".into(),
            });
        }
        let d = r
            .trajectory
            .states
            .iter()
            .zip(&reference.states)
            .map(|(a, b)| crate::analysis::l2_distance(a, b))
            .fold(0.0, f64::max);
        values.insert(format!("max_l2_distance[delta={:e}]", r.damping.delta), d);
        distances.push(d);
    }
    let mut checks = Vec::new();
    for (i, pair) in distances.windows(2).enumerate() {
        let label = format!("delta {:e} -> {:e}", s.deltas[i], s.deltas[i + 1]);
        checks.push(CheckOutcome::judged(
            "distance_decreases",
            Some(&label),
            pair[1] < pair[0],
            Some(pair[1]),
            format!("max L² distances {:e} then {:e}", pair[0], pair[1]),
        ));
    }
    collect(s, &runs, checks, values)
}

/// Extinction times over a list of `γ`. Between consecutive `γ`, `γ·t_v`
/// must agree within 10%; for constant data, where the Laplacian plays no
/// part, all of them within 1%.
pub fn scenario_gamma_sweep(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::GammaSweep)?;
    let grid = s.grid.build()?;
    let u0 = s.initial.build(&grid)?;
    let runs: Vec<RunData> = s
        .gammas
        .par_iter()
        .map(|&gamma| {
            let p = DampingParams::exact(gamma, s.damping.alpha)?;
            let mut rs = spec(s, p)?;
            rs.t_max = s.t_max.unwrap_or(10.0 / gamma);
            simulate(&format!("gamma-{gamma}"), &u0, &rs)
        })
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    let mut products = Vec::new();
    for r in &runs {
        checks.push(CheckOutcome::judged(
            "extinct",
            Some(&r.label),
            r.outcome.extinct,
            r.outcome.t_extinct,
            "extinction before t_max",
        ));
        if let Some(tv) = r.outcome.t_extinct {
            let prod = tv * r.damping.gamma;
            values.insert(format!("gamma_t_v[gamma={}]", r.damping.gamma), prod);
            products.push(prod);
        }
    }
    if products.len() == runs.len() {
        for (i, pair) in runs.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            let measured = products[i] / products[i + 1];
            checks.push(CheckOutcome::judged(
                "t_v_inverse_gamma",
                Some(&format!("gamma {} -> {}", a.damping.gamma, b.damping.gamma)),
                (measured - 1.0).abs() <= 0.1,
                Some(measured),
                "ratio of γ·t_v between consecutive γ, 1 for exact 1/γ scaling",
            ));
        }
        // without dispersion the scaling is exact
        if matches!(s.initial, InitialData::Constant { .. }) {
            let max = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = products.iter().copied().fold(f64::INFINITY, f64::min);
            let mean = products.iter().sum::<f64>() / products.len() as f64;
            let spread = (max - min) / mean;
            checks.push(CheckOutcome::judged(
                "gamma_scaling",
                None,
                spread <= 0.01,
                Some(spread),
                "relative spread of γ·t_v",
            ));
        }
    }
    collect(s, &runs, checks, values)
}

/// Largest Nash quotient over random ensembles, for every `(d, α, s)`
/// combination, together with the constant-field and rescaling checks.
pub fn scenario_nash_ensemble(s: &Scenario) -> Result<ScenarioResult> {
    expect_kind(s, ScenarioKind::NashEnsemble)?;
    let e = &s.ensemble;
    let mut checks = Vec::new();
    let mut values = BTreeMap::new();
    for &dim in &e.dims {
        let grid = GridSpec::cube(dim, e.points).build()?;
        let constant = ComplexField::constant(&grid, Complex64::new(1.0, 0.0));
        for &order in &e.orders {
            let decay = InitialData::default_decay(dim, order);
            values.insert(format!("decay[d={dim},s={order}]"), decay);
            let members: Vec<ComplexField> = (0..2 * e.count as u64)
                .into_par_iter()
                .map(|i| random_field(&grid, e.seed.wrapping_add(i), decay, 1.0))
                .collect::<Result<_>>()?;
            for &alpha in &e.alphas {
                let tag = format!("d={dim},alpha={alpha},s={order}");
                let ratios: Vec<f64> = members
                    .par_iter()
                    .map(|f| nash_ratio(f, alpha, order))
                    .collect::<Result<_>>()?;
                let max_of = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
                let single = max_of(&ratios[..e.count]);
                let double = max_of(&ratios);
                values.insert(format!("nash_max[{tag}]"), single);
                values.insert(format!("nash_max_doubled[{tag}]"), double);
                checks.push(CheckOutcome::judged(
                    "nash_stable",
                    Some(&tag),
                    double.is_finite() && double <= 2.0 * single,
                    Some(double),
                    format!("max over {} members {single:e}, over {} members {double:e}", e.count, 2 * e.count),
                ));

                let scaled = members[..e.count]
                    .par_iter()
                    .map(|f| nash_ratio(&f.scaled(Complex64::new(1e3, 0.0)), alpha, order))
                    .collect::<Result<Vec<f64>>>()?;
                let drift = max_of(&scaled) / single - 1.0;
                checks.push(CheckOutcome::judged(
                    "nash_scale_invariant",
                    Some(&tag),
                    drift.abs() <= 1e-10,
                    Some(drift),
                    "relative change of the ensemble maximum under amplitude ×1000",
                ));

                let ratio = nash_ratio(&constant, alpha, order)?;
                let expected = grid.volume().powf(-order * alpha);
                checks.push(CheckOutcome::judged(
                    "nash_constant_field",
                    Some(&tag),
                    ((ratio - expected) / expected).abs() <= 1e-10,
                    Some(ratio),
                    format!("expected V^(-sα) = {expected:e}"),
                ));
            }
        }
    }
    collect(s, &[], checks, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(points: &[(f64, f64)]) -> Vec<TimeSeriesRecord> {
        points
            .iter()
            .map(|&(t, m)| TimeSeriesRecord {
                t,
                mass_sq: m,
                l2ma_pow: 0.0,
                h1: 0.0,
                h2: 0.0,
                linf: 0.0,
                mass_law_residual: 0.0,
                dtu_l2: None,
                nls_energy: None,
            })
            .collect()
    }

    #[test]
    fn slope_of_exact_exponential() {
        let recs = series(&(0..200).map(|i| (0.1 * i as f64, 2.0 * (-1.5 * 0.1 * i as f64).exp())).collect::<Vec<_>>());
        let k = fit_log_mass_slope(&recs, 1e-8, 1e-2).unwrap();
        assert!((k + 1.5).abs() < 1e-10, "{k}");
        assert_eq!(fit_log_mass_slope(&recs[..5], 1e-8, 1e-2), None);
        let t = time_to_relative_mass(&recs, 1e-6).unwrap();
        assert!((t - 9.3).abs() < 0.05, "{t}");
    }

    #[test]
    fn small_nash_ensemble_passes() {
        let mut s = Scenario::new("nash", ScenarioKind::NashEnsemble, 1, DampingParams::exact(1.0, 1.0).unwrap());
        s.ensemble = super::super::scenario::EnsembleSpec {
            count: 10,
            seed: 3,
            alphas: vec![1.0],
            orders: vec![1.0],
            dims: vec![1],
            points: 16,
        };
        let r = run_scenario(&s).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let s = Scenario::new("x", ScenarioKind::Run, 1, DampingParams::exact(1.0, 1.0).unwrap());
        assert!(scenario_extinction_1d(&s).is_err());
    }

    fn small(kind: ScenarioKind, dim: usize, n: usize, alpha: f64) -> Scenario {
        let mut s = Scenario::new("t", kind, dim, DampingParams::exact(1.0, alpha).unwrap());
        s.grid = GridSpec::cube(dim, n);
        s
    }

    #[test]
    fn constant_data_in_two_dimensions_vanishes_at_tc() {
        let s = small(ScenarioKind::Extinction23d, 2, 8, 1.0);
        let r = run_scenario(&s).unwrap();
        let tv = r.runs[0].t_extinct.unwrap();
        assert!((tv - 1.0).abs() <= s.scheme.dt + 1e-12, "{tv}");
        assert!(r.passed(), "{:#?}", r.checks);
    }

    #[test]
    fn random_sublinear_data_meets_the_one_dimensional_bound() {
        let mut s = small(ScenarioKind::Extinction1d, 1, 64, 0.5);
        s.initial = InitialData::Random {
            seed: 4,
            decay: 1.5,
            amplitude: 1.0,
        };
        let r = run_scenario(&s).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        let rep = r.runs[0].extinction.as_ref().unwrap();
        assert!(rep.bound_1d.is_some() && rep.t_v.unwrap() <= rep.bound_1d.unwrap());
    }

    #[test]
    fn weakly_damped_regime_decays_at_the_linear_rate() {
        // |u|² ≪ δ: d/dt ln‖u‖² ≈ -2γ/δ^{α/2}
        let (gamma, alpha, delta) = (1.0, 1.0, 10.0);
        let p = DampingParams::new(gamma, alpha, delta).unwrap();
        let grid = GridSpec::cube(1, 16).build().unwrap();
        let u0 = ComplexField::constant(&grid, Complex64::new(0.1, 0.0));
        let mut s = small(ScenarioKind::Run, 1, 16, alpha);
        s.t_max = Some(2.0);
        let run = simulate("lin", &u0, &spec(&s, p).unwrap()).unwrap();
        let k = fit_log_mass_slope(&run.records, 0.0, 1.0).unwrap();
        let expected = -2.0 * gamma / delta.powf(0.5 * alpha);
        assert!((k / expected - 1.0).abs() < 0.05, "{k} vs {expected}");
    }

    #[test]
    fn time_to_small_mass_approaches_extinction_time() {
        let mut s = small(ScenarioKind::RegularizedSweep, 1, 16, 1.0);
        s.deltas = vec![1e-1, 1e-2, 1e-3];
        let r = run_scenario(&s).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        let gaps: Vec<f64> = s
            .deltas
            .iter()
            .map(|d| (r.values[&format!("t_mass_1e-6[delta={d:e}]")] - 1.0).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn delta_convergence_on_constant_data_matches_scalar_oracles() {
        use crate::analysis::{ode_oracle_exact, ode_oracle_regularized};
        let mut s = small(ScenarioKind::DeltaConvergence, 1, 16, 1.0);
        s.deltas = vec![0.0, 1e-2, 1e-3];
        s.t_max = Some(1.5);
        s.record_every = 10;
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.values["max_l2_distance[delta=0e0]"], 0.0);
        let volume = std::f64::consts::TAU;
        for delta in [1e-2, 1e-3] {
            let oracle = (0..=150)
                .map(|n| {
                    let t = n as f64 * 0.01;
                    let exact = ode_oracle_exact(1.0, 1.0, 1.0, t).sqrt();
                    let reg = ode_oracle_regularized(1.0, 1.0, 1.0, delta, t).unwrap().sqrt();
                    volume.sqrt() * (reg - exact)
                })
                .fold(0.0, f64::max);
            let measured = r.values[&format!("max_l2_distance[delta={delta:e}]")];
            assert!((measured - oracle).abs() < 1e-3 * oracle, "{measured} vs {oracle}");
        }
    }

    #[test]
    fn gamma_sweep_on_constant_data_is_exact() {
        let mut s = small(ScenarioKind::GammaSweep, 1, 16, 0.5);
        s.gammas = vec![0.5, 1.0, 2.0];
        let r = run_scenario(&s).unwrap();
        assert!(r.passed(), "{:#?}", r.checks);
        assert_eq!(r.check("gamma_scaling").count(), 1);
    }

    #[test]
    fn three_extinction_scenarios_give_three_reports() {
        let mut control = small(ScenarioKind::Extinction1d, 1, 16, 1.0);
        control.damping = DampingParams::exact(0.0, 1.0).unwrap();
        control.t_max = Some(1.0);
        control.name = "control".into();
        let mut one = small(ScenarioKind::Extinction1d, 1, 16, 1.0);
        one.name = "one".into();
        let mut two = small(ScenarioKind::Extinction23d, 2, 8, 1.0);
        two.name = "two".into();
        let r = super::super::suite::run_suite(&[one, two, control], Some(1), &super::super::suite::NoSink).unwrap();
        assert_eq!(r.scenarios.len(), 3);
        assert!(r.passed());
        assert!(r.scenarios[..2].iter().all(|s| s.runs[0].extinction.is_some()));
        assert!(r.scenarios[2].runs[0].extinction.is_none());
    }
}
