use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the damping term `-iγ u/(|u|²+δ)^{α/2}`.
///
/// `delta = 0` selects the sublinear term `u/|u|^α` itself. `gamma = 0` is
/// accepted as an undamped control.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampingParams {
    pub gamma: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl DampingParams {
    pub fn new(gamma: f64, alpha: f64, delta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::Config(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::Config(format!("delta must be >= 0, got {delta}")));
        }
        Ok(Self { gamma, alpha, delta })
    }

    /// Unregularized damping (`delta = 0`).
    pub fn exact(gamma: f64, alpha: f64) -> Result<Self> {
        Self::new(gamma, alpha, 0.0)
    }

    pub fn is_regularized(&self) -> bool {
        self.delta > 0.0
    }

    /// Pointwise dissipation density `|z|²/(|z|²+δ)^{α/2}`; reduces to
    /// `|z|^{2-α}` when `delta = 0`.
    pub fn dissipation_density(&self, modulus: f64) -> f64 {
        if modulus == 0.0 {
            return 0.0;
        }
        if self.delta == 0.0 {
            modulus.powf(2.0 - self.alpha)
        } else {
            let r2 = modulus * modulus;
            r2 / (r2 + self.delta).powf(0.5 * self.alpha)
        }
    }
}

/// Power nonlinearity `λ|u|^{2σ}u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NlsParams {
    pub lambda: f64,
    pub sigma: f64,
    pub enabled: bool,
}

impl NlsParams {
    /// Enabled nonlinearity. Focusing couplings (`lambda < 0`) require
    /// `sigma < 2`; beyond that, undamped solutions may blow up.
    pub fn new(lambda: f64, sigma: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Config(format!("lambda must be finite, got {lambda}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Config(format!("sigma must be > 0, got {sigma}")));
        }
        if lambda < 0.0 && sigma >= 2.0 {
            return Err(Error::Config(format!(
                "focusing coupling lambda = {lambda} requires sigma < 2, got sigma = {sigma}"
            )));
        }
        Ok(Self {
            lambda,
            sigma,
            enabled: true,
        })
    }

    pub fn disabled() -> Self {
        Self {
            lambda: 0.0,
            sigma: 1.0,
            enabled: false,
        }
    }

    pub fn is_active(&self) -> bool {
        self.enabled && self.lambda != 0.0
    }
}

impl Default for NlsParams {
    fn default() -> Self {
        Self::disabled()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Lie,
    Strang,
}

/// Relative tolerance of the adaptive modulus integrator.
pub const DEFAULT_RTOL: f64 = 1e-10;
/// Absolute tolerance (on the modulus) of the adaptive modulus integrator.
pub const DEFAULT_ATOL: f64 = 1e-14;

/// How the regularized modulus ODE is integrated over one damping substep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubstepPolicy {
    /// Embedded Dormand–Prince 5(4) with error control.
    AdaptiveRk { rtol: f64, atol: f64 },
    /// Classical RK4 with a fixed number of substeps.
    FixedSubsteps(usize),
}

impl Default for SubstepPolicy {
    fn default() -> Self {
        SubstepPolicy::AdaptiveRk {
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepScheme {
    pub dt: f64,
    pub splitting: Splitting,
    pub substeps: SubstepPolicy,
}

impl StepScheme {
    pub fn new(dt: f64, splitting: Splitting, substeps: SubstepPolicy) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {dt}")));
        }
        match substeps {
            SubstepPolicy::FixedSubsteps(0) => {
                return Err(Error::Config("fixed substep count must be >= 1".into()))
            }
            SubstepPolicy::AdaptiveRk { rtol, atol } if !(rtol > 0.0 && atol > 0.0) => {
                return Err(Error::Config(format!(
                    "adaptive tolerances must be positive, got rtol = {rtol}, atol = {atol}"
                )))
            }
            _ => {}
        }
        Ok(Self {
            dt,
            splitting,
            substeps,
        })
    }

    /// Strang splitting with the default adaptive substep policy.
    pub fn strang(dt: f64) -> Result<Self> {
        Self::new(dt, Splitting::Strang, SubstepPolicy::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn damping_constraints() {
        assert!(DampingParams::new(1.0, 1.0, 0.0).is_ok());
        assert!(DampingParams::new(0.0, 0.5, 0.0).is_ok());
        assert!(DampingParams::new(-1.0, 0.5, 0.0).is_err());
        assert!(DampingParams::new(1.0, 0.0, 0.0).is_err());
        assert!(DampingParams::new(1.0, 1.5, 0.0).is_err());
        assert!(DampingParams::new(1.0, 0.5, -1e-3).is_err());
    }

    #[test]
    fn focusing_requires_subcritical_power() {
        assert!(NlsParams::new(-1.0, 1.0).is_ok());
        assert!(NlsParams::new(-1.0, 3.0).is_err());
        assert!(NlsParams::new(-1.0, 2.0).is_err());
        assert!(NlsParams::new(1.0, 3.0).is_ok());
        assert!(NlsParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn scheme_constraints() {
        assert!(StepScheme::strang(1e-3).is_ok());
        assert!(StepScheme::strang(0.0).is_err());
        assert!(StepScheme::new(1e-3, Splitting::Lie, SubstepPolicy::FixedSubsteps(0)).is_err());
    }

    #[test]
    fn density_matches_power_at_zero_delta() {
        let p = DampingParams::exact(1.0, 0.5).unwrap();
        assert!((p.dissipation_density(4.0) - 4f64.powf(1.5)).abs() < 1e-14);
        assert_eq!(p.dissipation_density(0.0), 0.0);
    }
}
