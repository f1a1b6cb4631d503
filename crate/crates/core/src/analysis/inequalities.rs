use crate::dynamics::NlsParams;
use crate::error::{Error, Result};
use crate::spectral::{l2_norm, linf_norm, lp_power, sobolev_norm, ComplexField};

/// Nash quotient
///
/// ```text
/// ‖f‖_{L²}^{αd + 2s(2-α)} / ( (‖f‖_{L^{2-α}}^{2-α})^{2s} · ‖f‖_{H^s}^{αd} ),
/// ```
///
/// which the Nash-type inequality bounds by a constant. It is invariant
/// under `f ↦ c·f`; for a constant field on a torus of volume `V` it equals
/// `V^{-sα}`.
pub fn nash_ratio(f: &ComplexField, alpha: f64, s: f64) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    nash_ratio_from_norms(
        l2_norm(f),
        lp_power(f, 2.0 - alpha),
        sobolev_norm(f, s),
        alpha,
        f.grid().dim(),
        s,
    )
}

/// [`nash_ratio`] from precomputed norms: `l2ma_pow` is `‖f‖_{L^{2-α}}^{2-α}`
/// and `hs` is `‖f‖_{H^s}`. Evaluated in logarithms, so tiny fields do not
/// underflow.
pub fn nash_ratio_from_norms(l2: f64, l2ma_pow: f64, hs: f64, alpha: f64, dim: usize, s: f64) -> Result<f64> {
    if !(l2 > 0.0 && l2ma_pow > 0.0 && hs > 0.0) {
        return Err(Error::UndefinedRatio);
    }
    let ad = alpha * dim as f64;
    let log = (ad + 2.0 * s * (2.0 - alpha)) * l2.ln() - 2.0 * s * l2ma_pow.ln() - ad * hs.ln();
    Ok(log.exp())
}

/// One-dimensional Gagliardo–Nirenberg quotient `‖f‖_∞/(‖f‖_{L²}‖f‖_{H¹})^{1/2}`.
pub fn gn_ratio_check(f: &ComplexField) -> Result<f64> {
    if f.grid().dim() != 1 {
        return Err(Error::Precondition(format!(
            "Gagliardo-Nirenberg quotient is one-dimensional, grid has d = {}",
            f.grid().dim()
        )));
    }
    if f.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    Ok(linf_norm(f) / (l2_norm(f) * sobolev_norm(f, 1.0)).sqrt())
}

/// `‖∇f‖² + λ/(σ+1)·‖f‖_{L^{2σ+2}}^{2σ+2}`.
pub fn nls_energy(f: &ComplexField, q: &NlsParams) -> f64 {
    let gradient = f.to_spectral().gradient_energy();
    if q.lambda == 0.0 {
        return gradient;
    }
    gradient + q.lambda / (q.sigma + 1.0) * lp_power(f, 2.0 * q.sigma + 2.0)
}
