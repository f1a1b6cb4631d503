//! Acceptance criteria, one line each. Runs without the test harness so the
//! verdict lines are always printed; exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlsdamp::analysis::{
    contraction_check, ode_oracle_exact, ode_oracle_tc, pointwise_monotonicity, Recorder,
};
use nlsdamp::dynamics::{run_simulation, DampingParams, NlsParams, RunOptions, StepScheme};
use nlsdamp::experiments::{
    random_field, run_scenario, CheckId, EnsembleSpec, GridSpec, InitialData, Scenario, ScenarioKind, ScenarioResult,
    Verdict,
};
use nlsdamp::spectral::{make_grid, ComplexField};
use nlsdamp::Complex64;

struct Verdicts {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdicts {
    Verdicts {
        pass,
        detail: detail.into(),
    }
}

fn failing_checks(r: &ScenarioResult) -> String {
    if let Some(e) = &r.error {
        return format!("error: {e}");
    }
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| c.verdict == Verdict::Fail)
        .map(|c| format!("{}[{}]: {}", c.check, c.run.as_deref().unwrap_or("-"), c.detail))
        .collect();
    failed.join("; ")
}

fn with_failures(detail: String, r: &ScenarioResult) -> String {
    if r.passed() {
        detail
    } else {
        format!("{detail}; {}", failing_checks(r))
    }
}

fn damping(gamma: f64, alpha: f64) -> DampingParams {
    DampingParams::exact(gamma, alpha).unwrap()
}

fn c1_oracles() -> Verdicts {
    let y = ode_oracle_exact(1.0, 1.0, 1.0, 0.5);
    let tc = ode_oracle_tc(1.0, 1.0, 1.0);
    let pass = (y - 0.25).abs() <= 1e-12 && (tc - 1.0).abs() <= 1e-12;
    verdict(pass, format!("y(0.5) = {y}, t_c = {tc}"))
}

fn c2_constant_extinction() -> Verdicts {
    let s = Scenario::new("constant_1d", ScenarioKind::Extinction1d, 1, damping(1.0, 1.0));
    let dt = s.scheme.dt;
    let r = run_scenario(&s).unwrap();
    let tv = r.runs[0].t_extinct;
    let pass = tv.is_some_and(|t| (t - 1.0).abs() <= 2.0 * dt);
    verdict(pass, format!("t_v = {tv:?}, window [{}, {}]", 1.0 - 2.0 * dt, 1.0 + 2.0 * dt))
}

fn c3_mass_law_order() -> Verdicts {
    let grid = make_grid(1, &[256], &[std::f64::consts::TAU]).unwrap();
    let u0 = random_field(&grid, 1, InitialData::default_decay(1, 1.0), 1.0).unwrap();
    let p = damping(1.0, 0.5);
    let q = NlsParams::disabled();
    let mut runs = Vec::new();
    for dt in [4e-3, 2e-3, 1e-3] {
        let mut rec = Recorder::new(p, q);
        let mut first_zero = None;
        run_simulation(&u0, &p, &q, &StepScheme::strang(dt).unwrap(), 10.0, &RunOptions::default(), |t, _, f| {
            if first_zero.is_none() && f.min_modulus() == 0.0 {
                first_zero = Some(t);
            }
            rec.record(t, f)
        })
        .unwrap();
        runs.push((rec.finish().0, first_zero.unwrap_or(f64::INFINITY)));
    }
    // window: before any cell vanishes, in every run
    let t_end = runs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let worst: Vec<f64> = runs
        .iter()
        .map(|(recs, _)| {
            recs.iter()
                .filter(|r| r.t < t_end)
                .map(|r| r.mass_law_residual)
                .fold(0.0, f64::max)
        })
        .collect();
    let orders: Vec<f64> = worst.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = orders.iter().all(|&o| o >= 1.9);
    verdict(
        pass,
        format!(
            "window t < {t_end}, residuals {}, orders {orders:.3?}",
            worst.iter().map(|w| format!("{w:.3e}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

fn c4_extinction_bounds() -> Verdicts {
    let mut lines = Vec::new();
    let mut pass = true;
    for (dim, n, every) in [(1, 256, 1), (2, 64, 5), (3, 32, 10)] {
        let kind = if dim == 1 {
            ScenarioKind::Extinction1d
        } else {
            ScenarioKind::Extinction23d
        };
        let s_order = if dim == 1 { 1.0 } else { 2.0 };
        let mut s = Scenario::new(&format!("random_{dim}d"), kind, dim, damping(1.0, 1.0));
        s.grid = GridSpec::cube(dim, n);
        s.initial = InitialData::Random {
            seed: 0,
            decay: InitialData::default_decay(dim, s_order),
            amplitude: 1.0,
        };
        s.seeds = (1..=10).collect();
        s.record_every = every;
        s.checks = vec![CheckId::Extinct, CheckId::ExtinctionBound];
        let r = run_scenario(&s).unwrap();
        let worst = r
            .runs
            .iter()
            .filter_map(|run| {
                let rep = run.extinction.as_ref()?;
                Some(rep.t_v? / rep.bound()?)
            })
            .fold(0.0, f64::max);
        lines.push(format!("d={dim}: 10 runs, max t_v/bound = {worst:.3}"));
        if !r.passed() {
            pass = false;
            lines.push(failing_checks(&r));
        }
    }
    verdict(pass, lines.join(", "))
}

fn c5_regularized_sweep() -> Verdicts {
    let mut s = Scenario::new("regularized", ScenarioKind::RegularizedSweep, 1, damping(1.0, 1.0));
    s.deltas = vec![1e-1, 1e-2, 1e-3];
    let r = run_scenario(&s).unwrap();
    let slopes: Vec<String> = r
        .values
        .iter()
        .filter(|(k, _)| k.starts_with("slope"))
        .map(|(k, v)| format!("{k} = {v:.3}"))
        .collect();
    let ratios: Vec<String> = r
        .check("slope_ratio")
        .map(|c| format!("{:.3}", c.value.unwrap_or(f64::NAN)))
        .collect();
    let mut detail = format!("{}, ratios {} (expected {:.3})", slopes.join(", "), ratios.join(", "), 10f64.sqrt());
    if !r.passed() {
        detail = format!("{detail}; {}", failing_checks(&r));
    }
    verdict(r.passed(), detail)
}

fn c6_contraction() -> Verdicts {
    let grid = make_grid(1, &[256], &[std::f64::consts::TAU]).unwrap();
    let p = damping(1.0, 0.5);
    let q = NlsParams::disabled();
    let scheme = StepScheme::strang(1e-3).unwrap();
    let opts = RunOptions {
        stop_on_extinction: false,
        ..RunOptions::default()
    };
    let trajectory = |seed: u64| {
        let u0 = random_field(&grid, seed, 1.5, 1.0).unwrap();
        let mut rec = Recorder::new(p, q).keeping_states();
        run_simulation(&u0, &p, &q, &scheme, 3.0, &opts, |t, _, f| rec.record(t, f)).unwrap();
        rec.finish().1
    };
    let (a, b) = (trajectory(11), trajectory(12));
    let m0 = nlsdamp::analysis::l2_distance(&a.states[0], &b.states[0]).powi(2);
    let violation = contraction_check(&a, &b).unwrap();
    let traj_ok = violation <= 1e-10 * (1.0 + m0);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    for i in 0..1_000_000 {
        let alpha = [0.25, 0.5, 0.75, 1.0][i % 4];
        let draw = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.01) {
                return Complex64::default();
            }
            let r = 10f64.powf(rng.gen_range(-8.0..3.0));
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        };
        let z1 = draw(&mut rng);
        // every tenth pair nearly coincides
        let z2 = if i % 10 == 0 {
            z1 * Complex64::from_polar(1.0 + rng.gen_range(-1e-6..1e-6), rng.gen_range(-1e-6..1e-6))
        } else {
            draw(&mut rng)
        };
        let damp = |z: Complex64| if z.norm() == 0.0 { 0.0 } else { z.norm().powf(1.0 - alpha) };
        let scale = (z1 - z2).norm() * (damp(z1) + damp(z2));
        let m = pointwise_monotonicity(z1, z2, alpha);
        if scale > 0.0 {
            worst = worst.min(m / scale);
        }
    }
    let pairs_ok = worst >= -1e-12;
    verdict(
        traj_ok && pairs_ok,
        format!(
            "trajectory violation {violation:.3e} (limit {:.3e}), worst scaled pair value {worst:.3e} over 1e6 pairs",
            1e-10 * (1.0 + m0)
        ),
    )
}

fn c7_nash() -> Verdicts {
    let mut s = Scenario::new("nash", ScenarioKind::NashEnsemble, 1, damping(1.0, 1.0));
    s.ensemble = EnsembleSpec {
        count: 100,
        seed: 1,
        alphas: vec![0.5, 1.0],
        orders: vec![1.0, 2.0],
        dims: vec![1, 2],
        points: 32,
    };
    let r = run_scenario(&s).unwrap();
    // at s = 1 the constant-field value is exactly V^{-α}
    let mut const_ok = true;
    for dim in [1, 2] {
        let grid = GridSpec::cube(dim, 32).build().unwrap();
        let c = ComplexField::constant(&grid, Complex64::new(1.0, 0.0));
        for alpha in [0.5, 1.0] {
            let ratio = nlsdamp::analysis::nash_ratio(&c, alpha, 1.0).unwrap();
            let expected = grid.volume().powf(-alpha);
            const_ok &= ((ratio - expected) / expected).abs() <= 1e-10;
        }
    }
    let maxima: Vec<String> = r
        .values
        .iter()
        .filter(|(k, _)| k.starts_with("nash_max["))
        .map(|(k, v)| format!("{}={v:.3e}", &k[9..k.len() - 1]))
        .collect();
    let mut detail = format!("constants at s=1 match V^-α: {const_ok}; maxima {}", maxima.join(" "));
    if !r.passed() {
        detail = format!("{detail}; {}", failing_checks(&r));
    }
    verdict(const_ok && r.passed(), detail)
}

fn c8_h2_persistence() -> Verdicts {
    let mut s = Scenario::new("h2_2d", ScenarioKind::Extinction23d, 2, damping(1.0, 1.0));
    s.initial = InitialData::Random {
        seed: 3,
        decay: InitialData::default_decay(2, 2.0),
        amplitude: 1.0,
    };
    s.record_every = 5;
    s.checks = vec![CheckId::H2Persistence];
    let r = run_scenario(&s).unwrap();
    let c = r.check("h2_persistence").next().unwrap();
    verdict(r.passed(), with_failures(c.detail.clone(), &r))
}

fn c9_nls() -> Verdicts {
    let mut details = Vec::new();
    let mut pass = true;
    for (lambda, sigma) in [(1.0, 1.0), (-1.0, 1.0), (0.0, 1.0)] {
        let mut s = Scenario::new(&format!("nls_{lambda}"), ScenarioKind::NlsCorollary, 1, damping(1.0, 1.0));
        s.nls = NlsParams::new(lambda, sigma).unwrap();
        s.initial = InitialData::Random {
            seed: 5,
            decay: InitialData::default_decay(1, 1.0),
            amplitude: 1.0,
        };
        s.checks = vec![CheckId::Extinct];
        let r = run_scenario(&s).unwrap();
        let tv = r.runs[0].t_extinct;
        let mut line = format!("λ={lambda}: t_v = {tv:?}");
        if let Some(gap) = r.check("matches_pure_damping").next().and_then(|c| c.value) {
            line.push_str(&format!(", gap to pure damping {gap:.1e}"));
        }
        if !r.passed() {
            pass = false;
            line.push_str(&format!(" [{}]", failing_checks(&r)));
        }
        details.push(line);
    }
    verdict(pass, details.join("; "))
}

fn c10_delta_convergence() -> Verdicts {
    let mut s = Scenario::new("delta_limit", ScenarioKind::DeltaConvergence, 1, damping(1.0, 1.0));
    s.grid = GridSpec::cube(1, 128);
    s.initial = InitialData::Random {
        seed: 7,
        decay: InitialData::default_decay(1, 1.0),
        amplitude: 1.0,
    };
    s.deltas = vec![1e-2, 1e-3, 1e-4];
    s.t_max = Some(3.0);
    s.record_every = 10;
    let r = run_scenario(&s).unwrap();
    let d: Vec<String> = r.values.values().map(|v| format!("{v:.3e}")).collect();
    // keys sort as 1e-2 < 1e-3 < 1e-4, the order of the δ list
    verdict(r.passed(), with_failures(format!("max L² distances {}", d.join(" > ")), &r))
}

type Criterion = (&'static str, fn() -> Verdicts, f64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("ODE oracle closed forms", c1_oracles, 1.0),
        ("constant-data extinction time", c2_constant_extinction, 5.0),
        ("mass law second-order convergence", c3_mass_law_order, 60.0),
        ("random-data extinction within the bound", c4_extinction_bounds, 600.0),
        ("regularized runs decay exponentially", c5_regularized_sweep, 120.0),
        ("contraction and pointwise monotonicity", c6_contraction, 60.0),
        ("Nash quotients", c7_nash, 120.0),
        ("H2 persistence in 2-D", c8_h2_persistence, 120.0),
        ("damped NLS extinction", c9_nls, 120.0),
        ("regularized runs converge as delta -> 0", c10_delta_convergence, 120.0),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let id = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        if !v.pass {
            failed += 1;
        }
        let over = if secs > *budget { " (over time budget)" } else { "" };
        println!(
            "{id} {}: {name} [{secs:.1}s{over}] {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
