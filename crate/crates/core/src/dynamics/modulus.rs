//! Scalar integrator for the regularized modulus equation
//! `dr/dt = -γ r/(r²+δ)^{α/2}`.
//!
//! The equation is integrated for `s = ln r`, where it reads
//! `ds/dt = -γ/(e^{2s}+δ)^{α/2}`. The right-hand side is negative and bounded
//! by `γ/δ^{α/2}`, so `r = e^s` stays positive and never increases, and for
//! `r ≪ √δ` the equation is nearly constant-coefficient instead of stiff.
//! The error tests are phrased in terms of `r`: a step is accepted when the
//! estimated error `|Δr| ≈ r·|Δs|` is below `atol + rtol·r`.

use super::params::SubstepPolicy;

const MAX_STEPS: usize = 200_000;

#[derive(Clone, Copy, Debug)]
pub(crate) struct ModulusEquation {
    pub gamma: f64,
    pub half_alpha: f64,
    pub delta: f64,
}

/// The integrator gave up; carries the time it reached.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stalled {
    pub reached: f64,
}

impl ModulusEquation {
    #[inline]
    fn rate(&self, s: f64) -> f64 {
        -self.gamma / ((2.0 * s).exp() + self.delta).powf(self.half_alpha)
    }

    /// Advances the modulus `r0 > 0` over `span`.
    pub fn advance(&self, r0: f64, span: f64, policy: SubstepPolicy) -> Result<f64, Stalled> {
        if r0 == 0.0 || self.gamma == 0.0 || span == 0.0 {
            return Ok(r0);
        }
        let s0 = r0.ln();
        let s = match policy {
            SubstepPolicy::FixedSubsteps(n) => self.rk4(s0, span, n),
            SubstepPolicy::AdaptiveRk { rtol, atol } => self.dopri(s0, span, rtol, atol)?,
        };
        Ok(s.exp())
    }

    fn rk4(&self, mut s: f64, span: f64, n: usize) -> f64 {
        let h = span / n as f64;
        for _ in 0..n {
            let k1 = self.rate(s);
            let k2 = self.rate(s + 0.5 * h * k1);
            let k3 = self.rate(s + 0.5 * h * k2);
            let k4 = self.rate(s + h * k3);
            s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        s
    }

    fn dopri(&self, mut s: f64, span: f64, rtol: f64, atol: f64) -> Result<f64, Stalled> {
        // Dormand–Prince 5(4) tableau; the equation is autonomous so the
        // nodes c_i are not needed.
        const A21: f64 = 1.0 / 5.0;
        const A31: f64 = 3.0 / 40.0;
        const A32: f64 = 9.0 / 40.0;
        const A41: f64 = 44.0 / 45.0;
        const A42: f64 = -56.0 / 15.0;
        const A43: f64 = 32.0 / 9.0;
        const A51: f64 = 19372.0 / 6561.0;
        const A52: f64 = -25360.0 / 2187.0;
        const A53: f64 = 64448.0 / 6561.0;
        const A54: f64 = -212.0 / 729.0;
        const A61: f64 = 9017.0 / 3168.0;
        const A62: f64 = -355.0 / 33.0;
        const A63: f64 = 46732.0 / 5247.0;
        const A64: f64 = 49.0 / 176.0;
        const A65: f64 = -5103.0 / 18656.0;
        const B1: f64 = 35.0 / 384.0;
        const B3: f64 = 500.0 / 1113.0;
        const B4: f64 = 125.0 / 192.0;
        const B5: f64 = -2187.0 / 6784.0;
        const B6: f64 = 11.0 / 84.0;
        // b - b*, the difference between the 5th and embedded 4th order weights
        const E1: f64 = 71.0 / 57600.0;
        const E3: f64 = -71.0 / 16695.0;
        const E4: f64 = 71.0 / 1920.0;
        const E5: f64 = -17253.0 / 339200.0;
        const E6: f64 = 22.0 / 525.0;
        const E7: f64 = -1.0 / 40.0;

        let mut t = 0.0;
        let mut h = span;
        let mut k1 = self.rate(s);
        for _ in 0..MAX_STEPS {
            if t >= span {
                return Ok(s);
            }
            h = h.min(span - t);
            let k2 = self.rate(s + h * A21 * k1);
            let k3 = self.rate(s + h * (A31 * k1 + A32 * k2));
            let k4 = self.rate(s + h * (A41 * k1 + A42 * k2 + A43 * k3));
            let k5 = self.rate(s + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
            let k6 = self.rate(s + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
            let s_new = s + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
            let k7 = self.rate(s_new);
            let err_s = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

            let r = s.exp().max(s_new.exp());
            let scale = rtol + atol / r;
            let err = (err_s / scale).abs();
            if err <= 1.0 {
                t += h;
                s = s_new;
                k1 = k7;
                if t >= span || span - t <= 1e-15 * span {
                    return Ok(s);
                }
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
            if h <= 1e-14 * span {
                return Err(Stalled { reached: t });
            }
        }
        Err(Stalled { reached: t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(gamma: f64, alpha: f64, delta: f64) -> ModulusEquation {
        ModulusEquation {
            gamma,
            half_alpha: 0.5 * alpha,
            delta,
        }
    }

    #[test]
    fn linear_regime_matches_exponential() {
        // δ ≫ r²: dr/dt ≈ -γ r/√δ for α = 1
        let e = eq(1.0, 1.0, 100.0);
        let r = e.advance(1.0, 0.1, SubstepPolicy::default()).unwrap();
        assert!((r - (-0.1 / 101f64.sqrt()).exp()).abs() < 1e-6);
    }

    #[test]
    fn exactly_linear_when_alpha_vanishes_effectively() {
        // For r ≪ √δ the log-rate is the constant -γ/δ^{α/2}.
        let e = eq(2.0, 0.5, 1.0);
        let r0 = 1e-200;
        let r = e.advance(r0, 3.0, SubstepPolicy::default()).unwrap();
        let expected = r0 * (-2.0 * 3.0f64).exp();
        assert!(((r - expected) / expected).abs() < 1e-10);
    }

    #[test]
    fn fixed_and_adaptive_agree() {
        let e = eq(1.0, 0.75, 0.01);
        let a = e.advance(0.8, 0.05, SubstepPolicy::default()).unwrap();
        let b = e.advance(0.8, 0.05, SubstepPolicy::FixedSubsteps(200)).unwrap();
        assert!(((a - b) / a).abs() < 1e-9);
        assert!(a < 0.8 && a > 0.0);
    }

    #[test]
    fn zero_is_fixed() {
        let e = eq(1.0, 1.0, 0.1);
        assert_eq!(e.advance(0.0, 1.0, SubstepPolicy::default()).unwrap(), 0.0);
    }
}
