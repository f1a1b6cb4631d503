use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Smallest admissible number of points along any axis.
pub const MIN_POINTS: usize = 4;

/// A uniform grid on the flat torus `∏ R/L_j Z` with its Fourier lattice.
///
/// Values are stored row-major: the last axis is contiguous. Spectral
/// coefficients use the same layout in FFT order, so index `j` along an axis
/// of `n` points carries the integer frequency `j` for `j < n/2` and `j - n`
/// otherwise. The Nyquist index `n/2` is therefore assigned to the negative
/// frequency `-n/2`.
pub struct TorusGrid {
    points: Vec<usize>,
    lengths: Vec<f64>,
    wavenumbers: Vec<Vec<f64>>,
    k_squared: Vec<f64>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl TorusGrid {
    pub fn new(dim: usize, points_per_axis: &[usize], axis_lengths: &[f64]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if points_per_axis.len() != dim || axis_lengths.len() != dim {
            return Err(Error::Config(format!(
                "dimension {dim} needs {dim} point counts and {dim} lengths, got {} and {}",
                points_per_axis.len(),
                axis_lengths.len()
            )));
        }
        for &n in points_per_axis {
            if n % 2 != 0 || n < MIN_POINTS {
                return Err(Error::Config(format!(
                    "points per axis must be even and at least {MIN_POINTS}, got {n}"
                )));
            }
        }
        for &l in axis_lengths {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Config(format!("axis length must be positive, got {l}")));
            }
        }

        let wavenumbers: Vec<Vec<f64>> = points_per_axis
            .iter()
            .zip(axis_lengths)
            .map(|(&n, &l)| (0..n).map(|j| TAU * frequency_index(j, n) as f64 / l).collect())
            .collect();

        let total: usize = points_per_axis.iter().product();
        let mut k_squared = vec![0.0; total];
        let mut index = vec![0usize; dim];
        for k2 in k_squared.iter_mut() {
            *k2 = index
                .iter()
                .zip(&wavenumbers)
                .map(|(&j, ks)| ks[j] * ks[j])
                .sum();
            advance(&mut index, points_per_axis);
        }

        let mut planner = FftPlanner::new();
        let forward = points_per_axis.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = points_per_axis.iter().map(|&n| planner.plan_fft_inverse(n)).collect();

        Ok(Self {
            points: points_per_axis.to_vec(),
            lengths: axis_lengths.to_vec(),
            wavenumbers,
            k_squared,
            forward,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn points_per_axis(&self) -> &[usize] {
        &self.points
    }

    pub fn axis_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn total_cells(&self) -> usize {
        self.k_squared.len()
    }

    /// Torus volume `∏ L_j`.
    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Quadrature weight of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.total_cells() as f64
    }

    /// Wavenumbers `2π m / L` along `axis`, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    /// `|k|²` for every mode, in the flat spectral layout.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_squared
    }

    /// Flat index of the mode with the given signed integer frequencies.
    pub fn mode_index(&self, modes: &[i64]) -> Result<usize> {
        if modes.len() != self.dim() {
            return Err(Error::Argument(format!(
                "expected {} frequency indices, got {}",
                self.dim(),
                modes.len()
            )));
        }
        let mut flat = 0;
        for (&m, &n) in modes.iter().zip(&self.points) {
            let half = (n / 2) as i64;
            if m < -half || m >= half {
                return Err(Error::Argument(format!(
                    "frequency {m} outside [{}, {}) for {n} points",
                    -half, half
                )));
            }
            flat = flat * n + m.rem_euclid(n as i64) as usize;
        }
        Ok(flat)
    }

    /// Cell-centre coordinates of the cell with flat index `flat`.
    pub fn coordinates(&self, flat: usize) -> Vec<f64> {
        let mut coords = vec![0.0; self.dim()];
        let mut rest = flat;
        for axis in (0..self.dim()).rev() {
            let n = self.points[axis];
            coords[axis] = self.lengths[axis] * (rest % n) as f64 / n as f64;
            rest /= n;
        }
        coords
    }

    /// In-place unnormalized multidimensional DFT. The forward transform uses
    /// `e^{-ik·x}`, the inverse `e^{+ik·x}`; neither applies `1/N`.
    pub(crate) fn fft_in_place(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.total_cells());
        let plans = if forward { &self.forward } else { &self.inverse };
        let total = data.len();
        let mut scratch = Vec::new();
        let mut lines = Vec::new();
        for (axis, plan) in plans.iter().enumerate() {
            let n = self.points[axis];
            let stride: usize = self.points[axis + 1..].iter().product();
            scratch.resize(plan.get_inplace_scratch_len(), Complex64::default());
            if stride == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            // Transpose each slab so the lines along `axis` become contiguous.
            lines.resize(n * stride, Complex64::default());
            for slab in data.chunks_exact_mut(n * stride) {
                for j in 0..n {
                    for inner in 0..stride {
                        lines[inner * n + j] = slab[j * stride + inner];
                    }
                }
                plan.process_with_scratch(&mut lines, &mut scratch);
                for j in 0..n {
                    for inner in 0..stride {
                        slab[j * stride + inner] = lines[inner * n + j];
                    }
                }
            }
            debug_assert_eq!(total % (n * stride), 0);
        }
    }
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("points", &self.points)
            .field("lengths", &self.lengths)
            .finish_non_exhaustive()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.lengths == other.lengths
    }
}

/// Builds a shared grid; see [`TorusGrid::new`].
pub fn make_grid(dim: usize, points_per_axis: &[usize], axis_lengths: &[f64]) -> Result<Arc<TorusGrid>> {
    TorusGrid::new(dim, points_per_axis, axis_lengths).map(Arc::new)
}

/// Signed integer frequency carried by FFT index `j` of an `n`-point axis.
pub fn frequency_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn advance(index: &mut [usize], points: &[usize]) {
    for axis in (0..index.len()).rev() {
        index[axis] += 1;
        if index[axis] < points[axis] {
            return;
        }
        index[axis] = 0;
    }
}
