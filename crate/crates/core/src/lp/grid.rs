use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on `[0, L)^dim`, `n` points per axis.
///
/// Samples are stored row-major with the last axis fastest. Axis index `j`
/// maps to the signed wavenumber index `j` for `j < n/2` and `j - n`
/// otherwise, so the Nyquist index is `-n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    period: f64,
}

pub fn make_grid(dim: usize, points_per_axis: usize, period: f64) -> Result<Grid> {
    Grid::new(dim, points_per_axis, period)
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize, period: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {points_per_axis}"
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }
        Ok(Grid {
            dim,
            points_per_axis,
            period,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.points_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.period.powi(self.dim as i32)
    }

    /// Lattice spacing `2π/L`.
    pub fn wavenumber_unit(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Nyquist wavenumber `π n / L`.
    pub fn k_max(&self) -> f64 {
        PI * self.points_per_axis as f64 / self.period
    }

    /// Largest signed index kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.points_per_axis / 3) as i64
    }

    pub fn signed_index(&self, j: usize) -> i64 {
        let n = self.points_per_axis;
        if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        }
    }

    /// Wavenumbers along one axis in storage order.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        let unit = self.wavenumber_unit();
        (0..self.points_per_axis)
            .map(|j| self.signed_index(j) as f64 * unit)
            .collect()
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rest % n;
            rest /= n;
        }
        idx
    }

    pub fn signed_multi_index(&self, flat: usize) -> [i64; 3] {
        let idx = self.multi_index(flat);
        let mut out = [0i64; 3];
        for a in 0..self.dim {
            out[a] = self.signed_index(idx[a]);
        }
        out
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        let n = self.points_per_axis;
        idx[..self.dim].iter().fold(0, |acc, &i| acc * n + i)
    }

    /// Wavevector at a flat spectral index (unused axes are zero).
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let unit = self.wavenumber_unit();
        let s = self.signed_multi_index(flat);
        [s[0] as f64 * unit, s[1] as f64 * unit, s[2] as f64 * unit]
    }

    pub fn k_norm(&self, flat: usize) -> f64 {
        let k = self.wavevector(flat);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
    }

    /// Physical coordinates of a flat sample index.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let h = self.spacing();
        let idx = self.multi_index(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = idx[a] as f64 * h;
        }
        x
    }

    /// True when the mode survives 2/3-rule truncation.
    pub fn is_resolved(&self, flat: usize) -> bool {
        let cut = self.dealias_cutoff();
        self.signed_multi_index(flat)[..self.dim].iter().all(|k| k.abs() <= cut)
    }

    pub fn is_nyquist_along(&self, flat: usize, axis: usize) -> bool {
        self.multi_index(flat)[axis] == self.points_per_axis / 2
    }

    /// Same grid with `n` points per axis.
    pub fn with_points(&self, points_per_axis: usize) -> Result<Grid> {
        Grid::new(self.dim, points_per_axis, self.period)
    }
}
