//! Extinction times and their a-priori bounds.
//!
//! Combining the mass law with the Nash-type inequality of order `s`,
//! `‖u‖^{αd+2s(2-α)}_{L²} ≤ C (‖u‖^{2-α}_{L^{2-α}})^{2s} ‖u‖^{αd}_{H^s}`, and
//! writing `H` for the supremum of `‖u(t)‖_{H^s}` along the run, gives
//!
//! ```text
//! d/dt‖u‖² ≤ -2γ C^{-1/2s} H^{-αd/2s} ‖u‖^{2-β},     β = α(1 - d/2s),
//! ```
//!
//! so for `β > 0` the mass vanishes no later than
//!
//! ```text
//! T_v ≤ ‖u₀‖^β_{L²} · C^{1/2s} · H^{αd/2s} / (βγ).
//! ```
//!
//! With `d = 1, s = 1` this is `2√C ‖u₀‖^{α/2}_{L²} H^{α/2}/(αγ)`; in `d = 2, 3`
//! the order `s = 2` is needed. The constant `C` is estimated as the largest
//! Nash quotient observed along the run.

use serde::{Deserialize, Serialize};

use super::inequalities::nash_ratio_from_norms;
use super::series::TimeSeriesRecord;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtinctionReport {
    pub extinct: bool,
    pub t_v: Option<f64>,
    pub mass_at_end: f64,
    pub bound_1d: Option<f64>,
    pub bound_23d: Option<f64>,
    /// Largest Nash quotient (order `sobolev_order`) seen before extinction.
    pub nash_constant_estimate: f64,
    pub sobolev_order: f64,
    /// Supremum of the `H^s` norm over the same window.
    pub hs_sup: f64,
}

/// Sobolev order used by the extinction argument in dimension `dim`.
pub fn sobolev_order_for(dim: usize) -> f64 {
    if dim == 1 {
        1.0
    } else {
        2.0
    }
}

/// The bound `N₀^β C^{1/2s} H^{αd/2s}/(βγ)`; `None` when `β ≤ 0`.
pub fn extinction_bound(
    l2_initial: f64,
    hs_sup: f64,
    nash_constant: f64,
    gamma: f64,
    alpha: f64,
    dim: usize,
    s: f64,
) -> Option<f64> {
    let beta = alpha * (1.0 - dim as f64 / (2.0 * s));
    if beta <= 0.0 || gamma <= 0.0 {
        return None;
    }
    let ad = alpha * dim as f64;
    Some(
        l2_initial.powf(beta) * nash_constant.powf(0.5 / s) * hs_sup.powf(ad / (2.0 * s))
            / (beta * gamma),
    )
}

impl ExtinctionReport {
    /// Builds the report of a finished unregularized run from its records.
    ///
    /// The Nash constant and the `H^s` supremum are taken over the records
    /// strictly before `t_v` that still carry mass.
    pub fn from_records(
        records: &[TimeSeriesRecord],
        t_v: Option<f64>,
        gamma: f64,
        alpha: f64,
        dim: usize,
    ) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::Argument("no records".into()))?;
        let last = records.last().unwrap_or(first);
        let s = sobolev_order_for(dim);
        let hs = |r: &TimeSeriesRecord| if s == 1.0 { r.h1 } else { r.h2 };

        let mut nash: f64 = 0.0;
        let mut hs_sup: f64 = 0.0;
        for r in records
            .iter()
            .filter(|r| r.mass_sq > 0.0 && t_v.is_none_or(|tv| r.t < tv))
        {
            nash = nash.max(nash_ratio_from_norms(r.mass_sq.sqrt(), r.l2ma_pow, hs(r), alpha, dim, s)?);
            hs_sup = hs_sup.max(hs(r));
        }
        let bound = extinction_bound(first.mass_sq.sqrt(), hs_sup, nash, gamma, alpha, dim, s);
        Ok(Self {
            extinct: t_v.is_some(),
            t_v,
            mass_at_end: last.mass_sq,
            bound_1d: if dim == 1 { bound } else { None },
            bound_23d: if dim == 1 { None } else { bound },
            nash_constant_estimate: nash,
            sobolev_order: s,
            hs_sup,
        })
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound_1d.or(self.bound_23d)
    }
}

/// Whether the observed extinction time respects the report's bound.
pub fn extinction_bound_check(report: &ExtinctionReport) -> Result<bool> {
    let t_v = match (report.extinct, report.t_v) {
        (true, Some(t)) => t,
        _ => {
            return Err(Error::Precondition(
                "extinction bound needs an extinct run".into(),
            ))
        }
    };
    let bound = report
        .bound()
        .ok_or_else(|| Error::Precondition("no bound available for this run".into()))?;
    Ok(t_v <= bound)
}
