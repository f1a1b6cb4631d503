use num_complex::Complex64;

use super::modulus::ModulusEquation;
use super::params::{DampingParams, NlsParams, SubstepPolicy};
use crate::error::{Error, Result};
use crate::spectral::ComplexField;

/// Exact flow of `∂ₜu = -γ u/|u|^α` over `dt`, applied cell by cell.
///
/// The modulus follows `r^α ↦ max(r^α - αγ·dt, 0)` and the phase is kept.
/// Cells whose modulus reaches zero are set to exactly zero, which is also
/// how the flow treats cells that start at zero.
pub fn damping_flow_exact(f: &ComplexField, p: &DampingParams, dt: f64) -> Result<ComplexField> {
    if p.is_regularized() {
        return Err(Error::Precondition(format!(
            "exact damping flow needs delta = 0, got {}",
            p.delta
        )));
    }
    check_dt(dt)?;
    let mut out = f.clone();
    exact_damping_in_place(out.values_mut(), p.gamma, p.alpha, dt);
    Ok(out)
}

pub(crate) fn exact_damping_in_place(values: &mut [Complex64], gamma: f64, alpha: f64, dt: f64) {
    if gamma == 0.0 {
        return;
    }
    let decrement = alpha * gamma * dt;
    if alpha == 1.0 {
        for z in values.iter_mut() {
            let r = z.norm();
            let r_new = r - decrement;
            *z = if r_new > 0.0 { *z * (r_new / r) } else { Complex64::default() };
        }
    } else if alpha == 0.5 {
        for z in values.iter_mut() {
            let r = z.norm();
            let root = r.sqrt() - decrement;
            *z = if root > 0.0 { *z * (root * root / r) } else { Complex64::default() };
        }
    } else {
        let inv = 1.0 / alpha;
        for z in values.iter_mut() {
            let r = z.norm();
            let power = r.powf(alpha) - decrement;
            *z = if power > 0.0 { *z * (power.powf(inv) / r) } else { Complex64::default() };
        }
    }
}

/// Flow of `∂ₜu = -γ u/(|u|²+δ)^{α/2}` over `dt`, cell by cell.
///
/// Each modulus is advanced with the scalar integrator selected by `policy`;
/// phases are kept and zero cells stay zero.
pub fn damping_flow_regularized(
    f: &ComplexField,
    p: &DampingParams,
    dt: f64,
    policy: SubstepPolicy,
) -> Result<ComplexField> {
    if !p.is_regularized() {
        return Err(Error::Precondition(
            "regularized damping flow needs delta > 0".into(),
        ));
    }
    check_dt(dt)?;
    let mut out = f.clone();
    regularized_damping_in_place(out.values_mut(), p, dt, policy)?;
    Ok(out)
}

pub(crate) fn regularized_damping_in_place(
    values: &mut [Complex64],
    p: &DampingParams,
    dt: f64,
    policy: SubstepPolicy,
) -> Result<()> {
    if p.gamma == 0.0 {
        return Ok(());
    }
    let eq = ModulusEquation {
        gamma: p.gamma,
        half_alpha: 0.5 * p.alpha,
        delta: p.delta,
    };
    for (cell, z) in values.iter_mut().enumerate() {
        let r = z.norm();
        if r == 0.0 {
            continue;
        }
        let r_new = eq.advance(r, dt, policy).map_err(|stall| Error::Integration {
            cell,
            modulus: r,
            reached: stall.reached,
            span: dt,
        })?;
        *z *= r_new.min(r) / r;
    }
    Ok(())
}

/// Free Schrödinger flow `e^{itΔ}`: mode `k` is multiplied by `e^{-i|k|²dt}`.
/// `dt` may be negative.
pub fn linear_flow(f: &ComplexField, dt: f64) -> ComplexField {
    let mut spec = f.to_spectral();
    let k2 = f.grid().k_squared();
    for (c, &k2) in spec.coeffs_mut().iter_mut().zip(k2) {
        *c *= Complex64::from_polar(1.0, -k2 * dt);
    }
    spec.to_physical()
}

/// Flow of `i∂ₜu = λ|u|^{2σ}u`: each cell is multiplied by
/// `e^{-iλ|u|^{2σ}dt}`, leaving every modulus unchanged.
pub fn phase_rotation_flow(f: &ComplexField, q: &NlsParams, dt: f64) -> ComplexField {
    let mut out = f.clone();
    phase_rotation_in_place(out.values_mut(), q, dt);
    out
}

pub(crate) fn phase_rotation_in_place(values: &mut [Complex64], q: &NlsParams, dt: f64) {
    if !q.is_active() {
        return;
    }
    let scale = -q.lambda * dt;
    if q.sigma == 1.0 {
        for z in values.iter_mut() {
            *z *= Complex64::from_polar(1.0, scale * z.norm_sqr());
        }
    } else {
        for z in values.iter_mut() {
            *z *= Complex64::from_polar(1.0, scale * z.norm_sqr().powf(q.sigma));
        }
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("time step must be > 0, got {dt}")))
    }
}
