use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{frequency_index, ComplexField, TorusGrid};

/// How a scenario builds its initial field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Constant { re: f64, im: f64 },
    /// `amplitude · e^{ik·x}` for the integer mode vector `modes`.
    Mode { modes: Vec<i64>, amplitude: f64 },
    /// Random band-limited field, see [`random_field`].
    Random { seed: u64, decay: f64, amplitude: f64 },
    /// One `re im` pair per line, cells in row-major order.
    File { path: PathBuf },
}

impl InitialData {
    /// Default decay exponent for random data of Sobolev order `s` in
    /// dimension `dim`: `d/2 + s`.
    pub fn default_decay(dim: usize, s: f64) -> f64 {
        0.5 * dim as f64 + s
    }

    pub fn build(&self, grid: &Arc<TorusGrid>) -> Result<ComplexField> {
        match self {
            InitialData::Constant { re, im } => Ok(ComplexField::constant(grid, Complex64::new(*re, *im))),
            InitialData::Mode { modes, amplitude } => {
                ComplexField::plane_wave(grid, modes, Complex64::new(*amplitude, 0.0))
            }
            InitialData::Random { seed, decay, amplitude } => random_field(grid, *seed, *decay, *amplitude),
            InitialData::File { path } => read_field(grid, path),
        }
    }

    /// Same data with a different seed; other kinds are returned unchanged.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            InitialData::Random { decay, amplitude, .. } => InitialData::Random {
                seed,
                decay: *decay,
                amplitude: *amplitude,
            },
            other => other.clone(),
        }
    }
}

/// Random field with Fourier coefficients `(1+|k|²)^{-decay}·e^{iθ_k}`.
///
/// Phases are uniform and drawn from ChaCha8 seeded with `seed`, in flat
/// mode order. Only modes with `|m_j| ≤ n_j/4` on every axis are excited, so
/// the field is resolved with room to spare. The result is scaled to maximum
/// modulus `amplitude`.
pub fn random_field(grid: &Arc<TorusGrid>, seed: u64, decay: f64, amplitude: f64) -> Result<ComplexField> {
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(Error::Argument(format!("amplitude must be > 0, got {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = grid.points_per_axis();
    let k2 = grid.k_squared();
    let mut coeffs = vec![Complex64::default(); grid.total_cells()];
    let mut index = vec![0usize; points.len()];
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let mut rest = flat;
        for axis in (0..points.len()).rev() {
            index[axis] = rest % points[axis];
            rest /= points[axis];
        }
        let in_band = index
            .iter()
            .zip(points)
            .all(|(&j, &n)| frequency_index(j, n).unsigned_abs() as usize <= n / 4);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        if in_band {
            *c = Complex64::from_polar((1.0 + k2[flat]).powf(-decay), theta);
        }
    }
    let field = crate::spectral::to_physical(coeffs, grid)?;
    let peak = field.max_modulus();
    Ok(field.scaled(Complex64::new(amplitude / peak, 0.0)))
}

fn read_field(grid: &Arc<TorusGrid>, path: &PathBuf) -> Result<ComplexField> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::with_capacity(grid.total_cells());
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |s: Option<&str>| -> Result<f64> {
            s.and_then(|v| v.parse().ok()).ok_or_else(|| {
                Error::Config(format!("{}:{}: expected `re im`", path.display(), n + 1))
            })
        };
        let mut parts = line.split_whitespace();
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        values.push(Complex64::new(re, im));
    }
    ComplexField::new(grid, values)
}
