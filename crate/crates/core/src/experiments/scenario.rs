use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::initial::InitialData;
use crate::dynamics::{DampingParams, NlsParams, StepScheme};
use crate::error::{Error, Result};
use crate::spectral::{make_grid, TorusGrid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: Vec<usize>,
    pub lengths: Vec<f64>,
}

impl GridSpec {
    /// `n` points per axis on the cube `[0, 2π)^dim`.
    pub fn cube(dim: usize, n: usize) -> Self {
        Self {
            points: vec![n; dim],
            lengths: vec![std::f64::consts::TAU; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn build(&self) -> Result<Arc<TorusGrid>> {
        make_grid(self.points.len(), &self.points, &self.lengths)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// A single run with the listed checks.
    Run,
    #[serde(rename = "extinction_1d")]
    Extinction1d,
    #[serde(rename = "extinction_23d")]
    Extinction23d,
    RegularizedSweep,
    DeltaConvergence,
    GammaSweep,
    NlsCorollary,
    NashEnsemble,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Run,
        ScenarioKind::Extinction1d,
        ScenarioKind::Extinction23d,
        ScenarioKind::RegularizedSweep,
        ScenarioKind::DeltaConvergence,
        ScenarioKind::GammaSweep,
        ScenarioKind::NlsCorollary,
        ScenarioKind::NashEnsemble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Run => "run",
            ScenarioKind::Extinction1d => "extinction_1d",
            ScenarioKind::Extinction23d => "extinction_23d",
            ScenarioKind::RegularizedSweep => "regularized_sweep",
            ScenarioKind::DeltaConvergence => "delta_convergence",
            ScenarioKind::GammaSweep => "gamma_sweep",
            ScenarioKind::NlsCorollary => "nls_corollary",
            ScenarioKind::NashEnsemble => "nash_ensemble",
        }
    }

    /// Kinds whose checks are fixed by the study itself.
    pub fn is_study(self) -> bool {
        matches!(
            self,
            ScenarioKind::RegularizedSweep
                | ScenarioKind::DeltaConvergence
                | ScenarioKind::GammaSweep
                | ScenarioKind::NashEnsemble
        )
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown scenario kind `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Per-run diagnostics a scenario can ask for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    /// The field vanishes before `t_max`.
    Extinct,
    /// The field is still nonzero at `t_max`.
    NotExtinct,
    /// `t_v` is below the bound built from the run's own Nash constant.
    ExtinctionBound,
    /// `‖u‖²` never increases by more than `1e-12` relative.
    MassMonotone,
    /// `‖u‖²` stays within `1e-10` relative of its initial value.
    MassConserved,
    /// Largest mass-law residual before extinction (reported).
    MassLaw,
    H2Persistence,
    /// `‖∂ₜu‖` non-increasing up to `dt²`.
    DtuMonotone,
    /// Hölder-1/2 quotient, stable within a factor 2 when samples are halved.
    Holder,
    /// Largest increase of the NLS energy relative to its start (reported).
    NlsEnergy,
    /// `sup ‖u(t)‖_{H¹} / ‖u₀‖_{H¹}` finite (reported).
    H1Bounded,
    /// Largest Gagliardo–Nirenberg quotient along the run, `d = 1`.
    GnRatio,
}

impl CheckId {
    pub const ALL: [CheckId; 12] = [
        CheckId::Extinct,
        CheckId::NotExtinct,
        CheckId::ExtinctionBound,
        CheckId::MassMonotone,
        CheckId::MassConserved,
        CheckId::MassLaw,
        CheckId::H2Persistence,
        CheckId::DtuMonotone,
        CheckId::Holder,
        CheckId::NlsEnergy,
        CheckId::H1Bounded,
        CheckId::GnRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Extinct => "extinct",
            CheckId::NotExtinct => "not_extinct",
            CheckId::ExtinctionBound => "extinction_bound",
            CheckId::MassMonotone => "mass_monotone",
            CheckId::MassConserved => "mass_conserved",
            CheckId::MassLaw => "mass_law",
            CheckId::H2Persistence => "h2_persistence",
            CheckId::DtuMonotone => "dtu_monotone",
            CheckId::Holder => "holder",
            CheckId::NlsEnergy => "nls_energy",
            CheckId::H1Bounded => "h1_bounded",
            CheckId::GnRatio => "gn_ratio",
        }
    }

    /// Whether the check needs the saved states, not just the records.
    pub fn needs_states(self) -> bool {
        matches!(self, CheckId::Holder | CheckId::GnRatio)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CheckId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = CheckId::ALL.iter().map(|c| c.name()).collect();
            format!("unknown check `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Parameters of a Nash-quotient ensemble study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub count: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub orders: Vec<f64>,
    pub dims: Vec<usize>,
    /// Points per axis of the ensemble grids.
    pub points: usize,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            count: 100,
            seed: 1,
            alphas: vec![0.5, 1.0],
            orders: vec![1.0, 2.0],
            dims: vec![1, 2],
            points: 32,
        }
    }
}

/// A reproducible experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub grid: GridSpec,
    pub damping: DampingParams,
    pub nls: NlsParams,
    pub scheme: StepScheme,
    /// Defaults to `10/γ`.
    pub t_max: Option<f64>,
    pub initial: InitialData,
    pub record_every: usize,
    /// Empty means the kind's default list.
    pub checks: Vec<CheckId>,
    /// Run one simulation per seed (random initial data only).
    pub seeds: Vec<u64>,
    /// δ values of a regularized sweep or convergence study.
    pub deltas: Vec<f64>,
    /// γ values of a γ-sweep.
    pub gammas: Vec<f64>,
    pub ensemble: EnsembleSpec,
    /// Run and report, but turn every verdict into a plain report. Needed
    /// for extinction runs in two or three dimensions with data rougher
    /// than H²-type.
    pub exploratory: bool,
}

impl Scenario {
    /// A scenario with desk-scale defaults: `N = 256, 64², 32³` on
    /// `[0, 2π)^d`, `dt = 1e-3`, unit-modulus constant data.
    pub fn new(name: &str, kind: ScenarioKind, dim: usize, damping: DampingParams) -> Self {
        let n = match dim {
            1 => 256,
            2 => 64,
            _ => 32,
        };
        Self {
            name: name.to_string(),
            kind,
            grid: GridSpec::cube(dim, n),
            damping,
            nls: NlsParams::disabled(),
            scheme: StepScheme::strang(1e-3).expect("valid default step"),
            t_max: None,
            initial: InitialData::Constant { re: 1.0, im: 0.0 },
            record_every: 1,
            checks: Vec::new(),
            seeds: Vec::new(),
            deltas: Vec::new(),
            gammas: Vec::new(),
            ensemble: EnsembleSpec::default(),
            exploratory: false,
        }
    }

    pub fn t_max(&self) -> Result<f64> {
        match self.t_max {
            Some(t) => Ok(t),
            None if self.damping.gamma > 0.0 => Ok(10.0 / self.damping.gamma),
            None => Err(Error::Config(format!(
                "scenario `{}`: gamma = 0 needs an explicit t_max",
                self.name
            ))),
        }
    }

    /// The checks to run, falling back to the kind's defaults.
    pub fn effective_checks(&self) -> Vec<CheckId> {
        if !self.checks.is_empty() {
            return self.checks.clone();
        }
        use CheckId::*;
        match self.kind {
            ScenarioKind::Run => vec![MassMonotone],
            ScenarioKind::Extinction1d if self.damping.gamma == 0.0 => vec![NotExtinct, MassConserved],
            ScenarioKind::Extinction1d => vec![Extinct, ExtinctionBound, MassMonotone, MassLaw],
            ScenarioKind::Extinction23d => vec![Extinct, ExtinctionBound, MassMonotone, H2Persistence],
            ScenarioKind::NlsCorollary => vec![Extinct, MassMonotone, NlsEnergy, H1Bounded],
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(format!("scenario `{}`: {msg}", self.name)));
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return fail("name must be a non-empty identifier of [A-Za-z0-9_-]".into());
        }
        self.grid.build()?;
        let dim = self.grid.dim();
        if self.record_every == 0 {
            return fail("record_every must be >= 1".into());
        }
        if let Some(t) = self.t_max {
            if !(t.is_finite() && t > 0.0) {
                return fail(format!("t_max must be > 0, got {t}"));
            }
        }
        if self.kind != ScenarioKind::NashEnsemble {
            self.t_max()?;
        }
        match self.kind {
            ScenarioKind::Extinction1d | ScenarioKind::NlsCorollary if dim != 1 => {
                return fail(format!("{} needs a one-dimensional grid", self.kind))
            }
            ScenarioKind::Extinction23d if !(dim == 2 || dim == 3) => {
                return fail("extinction_23d needs a grid of dimension 2 or 3".into())
            }
            _ => {}
        }
        if matches!(
            self.kind,
            ScenarioKind::Extinction1d | ScenarioKind::Extinction23d | ScenarioKind::NlsCorollary | ScenarioKind::GammaSweep
        ) && self.damping.is_regularized()
        {
            return fail(format!("{} needs delta = 0", self.kind));
        }
        if self.kind == ScenarioKind::Extinction23d && !self.exploratory {
            if let InitialData::Random { decay, .. } = self.initial {
                let h2 = InitialData::default_decay(dim, 2.0);
                if decay < h2 {
                    return fail(format!(
                        "random data with decay {decay} < {h2} is not H²-type; set exploratory = true to run it without assertions"
                    ));
                }
            }
        }
        if self.kind.is_study() && !self.checks.is_empty() {
            return fail(format!("{} has a fixed set of checks", self.kind));
        }
        match self.kind {
            ScenarioKind::RegularizedSweep => {
                if self.deltas.is_empty() || self.deltas.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
                    return fail("deltas must be a non-empty list of positive values".into());
                }
                if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
                    return fail("deltas must be strictly decreasing".into());
                }
            }
            ScenarioKind::DeltaConvergence => {
                if self.deltas.is_empty() || self.deltas.iter().any(|&d| !(d >= 0.0 && d.is_finite())) {
                    return fail("deltas must be a non-empty list of values >= 0".into());
                }
            }
            ScenarioKind::GammaSweep => {
                if self.gammas.len() < 2 || self.gammas.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
                    return fail("gammas must list at least two positive values".into());
                }
            }
            ScenarioKind::NashEnsemble => {
                let e = &self.ensemble;
                if e.count < 10 {
                    return fail(format!("ensemble count must be >= 10, got {}", e.count));
                }
                if e.alphas.is_empty() || e.alphas.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
                    return fail("ensemble alphas must lie in (0, 1]".into());
                }
                if e.orders.is_empty() || e.orders.iter().any(|&s| !(s > 0.0)) {
                    return fail("ensemble orders must be > 0".into());
                }
                if e.dims.is_empty() || e.dims.iter().any(|&d| !(1..=3).contains(&d)) {
                    return fail("ensemble dims must lie in 1..=3".into());
                }
            }
            _ => {}
        }
        if !self.seeds.is_empty() && !matches!(self.initial, InitialData::Random { .. }) {
            return fail("seeds need random initial data".into());
        }
        if self.effective_checks().contains(&CheckId::GnRatio) && dim != 1 {
            return fail("gn_ratio is one-dimensional".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(kind: ScenarioKind, dim: usize) -> Scenario {
        Scenario::new("s", kind, dim, DampingParams::exact(1.0, 1.0).unwrap())
    }

    #[test]
    fn names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
        }
        for c in CheckId::ALL {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
        for k in ScenarioKind::ALL {
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
        assert!("bogus".parse::<CheckId>().is_err());
    }

    #[test]
    fn defaults() {
        let s = base(ScenarioKind::Extinction1d, 1);
        assert_eq!(s.t_max().unwrap(), 10.0);
        assert_eq!(s.grid.points, vec![256]);
        assert!(s.validate().is_ok());
        assert!(s.effective_checks().contains(&CheckId::Extinct));
    }

    #[test]
    fn undamped_control_needs_explicit_horizon() {
        let mut s = Scenario::new("c", ScenarioKind::Extinction1d, 1, DampingParams::exact(0.0, 1.0).unwrap());
        assert!(s.validate().is_err());
        s.t_max = Some(2.0);
        assert!(s.validate().is_ok());
        assert_eq!(s.effective_checks(), vec![CheckId::NotExtinct, CheckId::MassConserved]);
    }

    #[test]
    fn kind_constraints() {
        assert!(base(ScenarioKind::Extinction1d, 2).validate().is_err());
        assert!(base(ScenarioKind::Extinction23d, 1).validate().is_err());
        let mut sweep = base(ScenarioKind::RegularizedSweep, 1);
        assert!(sweep.validate().is_err());
        sweep.deltas = vec![1e-1, 1e-2];
        assert!(sweep.validate().is_ok());
        sweep.deltas = vec![1e-2, 1e-1];
        assert!(sweep.validate().is_err());
        let mut nash = base(ScenarioKind::NashEnsemble, 1);
        nash.ensemble.count = 5;
        assert!(nash.validate().is_err());
        let mut rough = base(ScenarioKind::Extinction23d, 2);
        rough.initial = InitialData::Random {
            seed: 1,
            decay: 2.0,
            amplitude: 1.0,
        };
        assert!(rough.validate().is_err());
        rough.exploratory = true;
        assert!(rough.validate().is_ok());
        let mut named = base(ScenarioKind::Run, 1);
        named.name = "has space".into();
        assert!(named.validate().is_err());
    }
}
