//! Scalar reductions of the damped equation.
//!
//! For spatially constant data the Laplacian drops out and `y = |u|²`
//! solves `dy/dt = -2γ y^{1-α/2}`, so
//!
//! ```text
//! y(t) = max(y₀^{α/2} - αγt, 0)^{2/α},     t_c = |u₀|^α/(αγ).
//! ```
//!
//! The regularized analogue `dy/dt = -2γ y/(y+δ)^{α/2}` has no elementary
//! solution for general `α`. Writing `y = e^w`, the time needed to fall
//! from `w₀` to `w` is
//!
//! ```text
//! T(w) = (1/2γ) ∫_w^{w₀} (e^x + δ)^{α/2} dx,
//! ```
//!
//! which is evaluated by adaptive Simpson quadrature and inverted by Newton's
//! method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// State of the scalar ODE: `y = |u|²` at time `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeState {
    pub y: f64,
    pub t: f64,
}

impl OdeState {
    pub fn new(y: f64, t: f64) -> Result<Self> {
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::Argument(format!("y must be >= 0, got {y}")));
        }
        Ok(Self { y, t })
    }

    /// State after `dt` more time units of the unregularized ODE.
    pub fn advance_exact(&self, alpha: f64, gamma: f64, dt: f64) -> Self {
        Self {
            y: ode_oracle_exact(self.y, alpha, gamma, dt),
            t: self.t + dt,
        }
    }

    pub fn advance_regularized(&self, alpha: f64, gamma: f64, delta: f64, dt: f64) -> Result<Self> {
        Ok(Self {
            y: ode_oracle_regularized(self.y, alpha, gamma, delta, dt)?,
            t: self.t + dt,
        })
    }
}

/// Closed-form `y(t)` of `dy/dt = -2γ y^{1-α/2}`, clamped at zero.
pub fn ode_oracle_exact(y0: f64, alpha: f64, gamma: f64, t: f64) -> f64 {
    if y0 <= 0.0 {
        return 0.0;
    }
    let base = y0.powf(0.5 * alpha) - alpha * gamma * t;
    if base <= 0.0 {
        0.0
    } else {
        base.powf(2.0 / alpha)
    }
}

/// Extinction time `|u₀|^α/(αγ)` of constant data with modulus `u0_mod`.
pub fn ode_oracle_tc(u0_mod: f64, alpha: f64, gamma: f64) -> f64 {
    if u0_mod <= 0.0 {
        return 0.0;
    }
    u0_mod.powf(alpha) / (alpha * gamma)
}

/// Solution of `dy/dt = -2γ y/(y+δ)^{α/2}` at time `t`, to relative
/// accuracy about `1e-12`.
///
/// Positive data stays positive; for very long times the value may
/// underflow, in which case [`ode_oracle_regularized_log`] still resolves it.
pub fn ode_oracle_regularized(y0: f64, alpha: f64, gamma: f64, delta: f64, t: f64) -> Result<f64> {
    if y0 == 0.0 {
        check_regularized(y0, alpha, gamma, delta, t)?;
        return Ok(0.0);
    }
    Ok(ode_oracle_regularized_log(y0, alpha, gamma, delta, t)?.exp())
}

/// `ln y(t)` for the regularized ODE; requires `y0 > 0`.
pub fn ode_oracle_regularized_log(y0: f64, alpha: f64, gamma: f64, delta: f64, t: f64) -> Result<f64> {
    check_regularized(y0, alpha, gamma, delta, t)?;
    if y0 == 0.0 {
        return Err(Error::Argument("log of the zero solution is undefined".into()));
    }
    let w0 = y0.ln();
    if t == 0.0 || gamma == 0.0 {
        return Ok(w0);
    }
    let a = 0.5 * alpha;
    let floor = delta.powf(a);
    let elapsed = |w: f64| -> Result<f64> {
        // (e^x+δ)^a = δ^a + g(x), and g decays like e^x below ln δ, so the
        // quadrature only needs to cover a window above ln δ - 60.
        let lower = w.max(delta.ln() - 60.0);
        let tail = if lower < w0 {
            adaptive_simpson(&|x| excess(x, a, delta), lower, w0, 1e-15)?
        } else {
            0.0
        };
        Ok((floor * (w0 - w) + tail) / (2.0 * gamma))
    };

    // T(w) ≥ δ^a (w₀ - w)/2γ, so this start lies left of the root. T is
    // concave, so the first Newton step overshoots to the right and the
    // later iterates decrease monotonically onto the root.
    let mut w = w0 - 2.0 * gamma * t / floor;
    for _ in 0..100 {
        let residual = elapsed(w)? - t;
        let slope = -rate_weight(w, a, delta) / (2.0 * gamma);
        let step = residual / slope;
        let next = (w - step).min(w0);
        if (next - w).abs() <= 1e-12 * w.abs().max(1.0) {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::Convergence(format!(
        "regularized ODE inversion for y0 = {y0}, t = {t}"
    )))
}

fn check_regularized(y0: f64, alpha: f64, gamma: f64, delta: f64, t: f64) -> Result<()> {
    if !(y0.is_finite() && y0 >= 0.0) {
        return Err(Error::Argument(format!("y0 must be >= 0, got {y0}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Argument(format!("delta must be > 0, got {delta}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) || !(gamma >= 0.0) {
        return Err(Error::Argument(format!(
            "need 0 < alpha <= 1 and gamma >= 0, got alpha = {alpha}, gamma = {gamma}"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Argument(format!("t must be >= 0, got {t}")));
    }
    Ok(())
}

const SIMPSON_BUDGET: usize = 1 << 22;

/// `(e^x + δ)^a`.
fn rate_weight(x: f64, a: f64, delta: f64) -> f64 {
    (log_sum(x, delta) * a).exp()
}

/// `(e^x + δ)^a - δ^a`, without cancellation for `e^x ≪ δ`.
fn excess(x: f64, a: f64, delta: f64) -> f64 {
    let ld = delta.ln();
    if x <= ld {
        (a * ld).exp() * (a * (x - ld).exp().ln_1p()).exp_m1()
    } else {
        (a * log_sum(x, delta)).exp() - (a * ld).exp()
    }
}

/// `ln(e^x + δ)`.
fn log_sum(x: f64, delta: f64) -> f64 {
    let ld = delta.ln();
    if x > ld {
        x + (ld - x).exp().ln_1p()
    } else {
        ld + (x - ld).exp().ln_1p()
    }
}

/// Adaptive Simpson quadrature to relative accuracy `rel`. A panel is
/// accepted once its error estimate reaches the tolerance or the round-off
/// level of its own value; more than [`SIMPSON_BUDGET`] evaluations is an
/// error.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }

    struct Quad<'f> {
        f: &'f dyn Fn(f64) -> f64,
        evaluations: usize,
    }

    impl Quad<'_> {
        #[allow(clippy::too_many_arguments)]
        fn recurse(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Option<f64> {
            self.evaluations += 2;
            if self.evaluations > SIMPSON_BUDGET {
                return None;
            }
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = ((self.f)(lm), (self.f)(rm));
            let left = simpson(fa, flm, fm, m - a);
            let right = simpson(fm, frm, fb, b - m);
            let delta = left + right - whole;
            let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
            if depth == 0 || delta.abs() <= (15.0 * tol).max(noise) {
                return Some(left + right + delta / 15.0);
            }
            Some(
                self.recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
                    + self.recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
            )
        }
    }

    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    // a 16-panel pass fixes the scale the tolerance is relative to
    let panels = 16;
    let h = (b - a) / panels as f64;
    let rough: f64 = (0..panels)
        .map(|i| {
            let x = a + i as f64 * h;
            simpson(f(x), f(x + 0.5 * h), f(x + h), h).abs()
        })
        .sum();
    let tol = (rel * rough).max(f64::MIN_POSITIVE);
    let mut quad = Quad { f, evaluations: 0 };
    match quad.recurse(a, b, fa, fm, fb, whole, tol, 48) {
        Some(value) if value.is_finite() => Ok(value),
        _ => Err(Error::Convergence(format!("quadrature on [{a}, {b}]"))),
    }
}
