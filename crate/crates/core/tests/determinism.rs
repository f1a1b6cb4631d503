//! Reruns give identical numbers, whatever the thread count.

use nlsdamp::dynamics::DampingParams;
use nlsdamp::experiments::{random_field, run_suite, GridSpec, InitialData, NoSink, Scenario, ScenarioKind};
use nlsdamp::spectral::make_grid;

fn seeded(name: &str) -> Scenario {
    let mut s = Scenario::new(name, ScenarioKind::Extinction1d, 1, DampingParams::exact(1.0, 0.5).unwrap());
    s.grid = GridSpec::cube(1, 64);
    s.initial = InitialData::Random {
        seed: 0,
        decay: 1.5,
        amplitude: 1.0,
    };
    s.seeds = vec![1, 2, 3];
    s
}

#[test]
fn random_fields_depend_only_on_seed() {
    let g = make_grid(2, &[16, 16], &[1.0, 2.0]).unwrap();
    let a = random_field(&g, 42, 3.0, 1.0).unwrap();
    let b = random_field(&g, 42, 3.0, 1.0).unwrap();
    let c = random_field(&g, 43, 3.0, 1.0).unwrap();
    assert_eq!(a.values(), b.values());
    assert_ne!(a.values(), c.values());
}

#[test]
fn suite_results_do_not_depend_on_threads() {
    let scenarios = [seeded("a"), seeded("b")];
    let one = run_suite(&scenarios, Some(1), &NoSink).unwrap();
    let two = run_suite(&scenarios, Some(2), &NoSink).unwrap();
    for (x, y) in one.scenarios.iter().zip(&two.scenarios) {
        assert_eq!(x.checks, y.checks);
        assert_eq!(x.values, y.values);
        assert_eq!(x.runs, y.runs);
    }
    // same data under two names gives the same numbers
    assert_eq!(one.scenarios[0].values, one.scenarios[1].values);
}

#[test]
fn gamma_scaling_of_random_data() {
    // y = γt collapses extinction times for any data
    let mut s = seeded("gammas");
    s.kind = ScenarioKind::GammaSweep;
    s.seeds.clear();
    s.initial = InitialData::Random {
        seed: 9,
        decay: 1.5,
        amplitude: 1.0,
    };
    s.gammas = vec![0.5, 1.0, 2.0];
    s.scheme.dt = 5e-4;
    let r = nlsdamp::experiments::run_scenario(&s).unwrap();
    assert!(r.passed(), "{:#?}", r.checks);
}
