use std::sync::Arc;

use num_complex::Complex64;

use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// A complex amplitude per grid cell, in physical space.
#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Arc<TorusGrid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: &Arc<TorusGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.total_cells() {
            return Err(Error::SizeMismatch {
                expected: grid.total_cells(),
                actual: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Argument(format!("non-finite value at cell {i}")));
        }
        Ok(Self {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![Complex64::default(); grid.total_cells()],
        }
    }

    pub fn constant(grid: &Arc<TorusGrid>, c: Complex64) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: vec![c; grid.total_cells()],
        }
    }

    /// Samples `f` at every cell coordinate.
    pub fn from_fn(grid: &Arc<TorusGrid>, mut f: impl FnMut(&[f64]) -> Complex64) -> Result<Self> {
        let values = (0..grid.total_cells()).map(|i| f(&grid.coordinates(i))).collect();
        Self::new(grid, values)
    }

    /// `amplitude · e^{ik·x}` for the mode with integer frequencies `modes`.
    pub fn plane_wave(grid: &Arc<TorusGrid>, modes: &[i64], amplitude: Complex64) -> Result<Self> {
        let idx = grid.mode_index(modes)?;
        let mut coeffs = vec![Complex64::default(); grid.total_cells()];
        coeffs[idx] = amplitude;
        Ok(SpectralField::new(grid, coeffs)?.to_physical())
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// Pointwise `self - other`.
    pub fn difference(&self, other: &ComplexField) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &ComplexField, b: Complex64) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Whether the field lives on `grid` (same allocation or equal layout).
    pub fn is_on(&self, grid: &Arc<TorusGrid>) -> bool {
        Arc::ptr_eq(&self.grid, grid) || *self.grid == **grid
    }

    pub fn check_same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.is_on(&other.grid) {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "fields live on different grids: {:?} vs {:?}",
                self.grid, other.grid
            )))
        }
    }

    /// Spectral coefficients, normalized so a constant `c` maps to `c` in the
    /// zero mode.
    pub fn to_spectral(&self) -> SpectralField {
        let mut coeffs = self.values.clone();
        self.grid.fft_in_place(&mut coeffs, true);
        let scale = 1.0 / self.grid.total_cells() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }
}

/// Fourier coefficients `ĉ_k` with `f(x) = Σ_k ĉ_k e^{ik·x}`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<TorusGrid>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: &Arc<TorusGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.total_cells() {
            return Err(Error::SizeMismatch {
                expected: grid.total_cells(),
                actual: coeffs.len(),
            });
        }
        Ok(Self {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn to_physical(&self) -> ComplexField {
        let mut values = self.coeffs.clone();
        self.grid.fft_in_place(&mut values, false);
        ComplexField {
            grid: Arc::clone(&self.grid),
            values,
        }
    }

    /// `V Σ_k w(|k|²) |ĉ_k|²`.
    pub fn weighted_energy(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .zip(self.grid.k_squared())
            .map(|(c, &k2)| weight(k2) * c.norm_sqr())
            .sum();
        self.grid.volume() * sum
    }

    /// `‖f‖_{H^s}` with weight `(1 + |k|²)^s`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        if s == 0.0 {
            self.weighted_energy(|_| 1.0).sqrt()
        } else if s == 1.0 {
            self.weighted_energy(|k2| 1.0 + k2).sqrt()
        } else if s == 2.0 {
            self.weighted_energy(|k2| (1.0 + k2) * (1.0 + k2)).sqrt()
        } else {
            self.weighted_energy(|k2| (1.0 + k2).powf(s)).sqrt()
        }
    }

    /// `‖∇f‖²_{L²}`.
    pub fn gradient_energy(&self) -> f64 {
        self.weighted_energy(|k2| k2)
    }
}

/// Forward transform; see [`ComplexField::to_spectral`].
pub fn to_spectral(f: &ComplexField) -> SpectralField {
    f.to_spectral()
}

/// Inverse transform of `coeffs` on `grid`.
pub fn to_physical(coeffs: Vec<Complex64>, grid: &Arc<TorusGrid>) -> Result<ComplexField> {
    Ok(SpectralField::new(grid, coeffs)?.to_physical())
}

/// `(Σ |f|^p · dV)^{1/p}` by the rectangle rule.
pub fn lp_norm(f: &ComplexField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Argument(format!("Lp norm needs p >= 1, got {p}")));
    }
    Ok(lp_power(f, p).powf(1.0 / p))
}

/// `Σ |f|^p · dV`, i.e. `‖f‖_{L^p}^p` without the root. Accepts any `p > 0`.
pub fn lp_power(f: &ComplexField, p: f64) -> f64 {
    let w = f.grid().cell_volume();
    let sum: f64 = if p == 2.0 {
        f.values().iter().map(|z| z.norm_sqr()).sum()
    } else {
        f.values().iter().map(|z| z.norm().powf(p)).sum()
    };
    sum * w
}

pub fn l2_norm(f: &ComplexField) -> f64 {
    lp_power(f, 2.0).sqrt()
}

pub fn linf_norm(f: &ComplexField) -> f64 {
    f.max_modulus()
}

/// `‖f‖_{H^s}` with `‖f‖²_{H^s} = V Σ (1+|k|²)^s |ĉ_k|²`.
pub fn sobolev_norm(f: &ComplexField, s: f64) -> f64 {
    assert!(s >= 0.0, "Sobolev index must be nonnegative, got {s}");
    f.to_spectral().sobolev_norm(s)
}

/// Spectral Laplacian: multiplies mode `k` by `-|k|²`.
pub fn laplacian_apply(f: &ComplexField) -> ComplexField {
    let mut spec = f.to_spectral();
    let k2 = f.grid().k_squared().to_vec();
    spec.coeffs_mut()
        .iter_mut()
        .zip(&k2)
        .for_each(|(c, &k2)| *c *= -k2);
    spec.to_physical()
}
