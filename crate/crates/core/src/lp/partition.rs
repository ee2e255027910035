//! Smooth dyadic partition of unity on the wavenumber lattice.
//!
//! The low-frequency profile `χ` equals 1 on `|ξ| ≤ 3/4`, vanishes on
//! `|ξ| ≥ 4/3`, and ramps down in between through the standard `C^∞` step
//! `θ(t) = g(t) / (g(t) + g(1 - t))`, `g(t) = exp(-1/t)`. The shell profile
//! is `φ(ξ) = χ(ξ/2) - χ(ξ)`, supported in `3/4 ≤ |ξ| ≤ 8/3`, so that
//! `χ + Σ_{q=0}^{Q} φ(2^{-q}·) = χ(2^{-Q-1}·)` telescopes to 1 on the lattice.

use serde::Serialize;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const INNER_RADIUS: f64 = 3.0 / 4.0;
pub const OUTER_RADIUS: f64 = 4.0 / 3.0;
pub const SHELL_OUTER: f64 = 8.0 / 3.0;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = bump(t);
    a / (a + bump(1.0 - t))
}

/// Radial low-frequency profile `χ(r)`.
pub fn chi(r: f64) -> f64 {
    if r <= INNER_RADIUS {
        1.0
    } else if r >= OUTER_RADIUS {
        0.0
    } else {
        1.0 - smooth_step((r - INNER_RADIUS) / (OUTER_RADIUS - INNER_RADIUS))
    }
}

/// Radial shell profile `φ(r) = χ(r/2) - χ(r)`.
pub fn phi(r: f64) -> f64 {
    chi(r / 2.0) - chi(r)
}

/// Tabulated multipliers for `Δ_{-1}` and `Δ_q`, `0 ≤ q ≤ q_max`.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    q_max: i32,
    tol: f64,
    residual: f64,
    chi_table: Vec<f64>,
    phi_tables: Vec<Vec<f64>>,
    k_norms: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub q_max: i32,
    pub tol: f64,
    pub max_residual: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub chi_support_ok: bool,
    pub phi_support_ok: bool,
    pub passed: bool,
}

pub fn build_partition(grid: Grid, tol: f64) -> Result<DyadicPartition> {
    DyadicPartition::new(grid, tol)
}

impl DyadicPartition {
    pub fn new(grid: Grid, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParams(format!(
                "partition tolerance must be positive, got {tol}"
            )));
        }
        let k_max = grid.k_max();
        let mut q_max = 0i32;
        while 2f64.powi(q_max) * INNER_RADIUS <= k_max {
            q_max += 1;
        }
        let k_norms: Vec<f64> = (0..grid.len()).map(|i| grid.k_norm(i)).collect();
        let chi_table: Vec<f64> = k_norms.iter().map(|&r| chi(r)).collect();
        let phi_tables: Vec<Vec<f64>> = (0..=q_max)
            .map(|q| {
                let s = 2f64.powi(-q);
                k_norms.iter().map(|&r| phi(s * r)).collect()
            })
            .collect();
        let mut part = DyadicPartition {
            grid,
            q_max,
            tol,
            residual: 0.0,
            chi_table,
            phi_tables,
            k_norms,
        };
        part.residual = part.unity_residual();
        if part.residual > tol {
            return Err(Error::PartitionResidual {
                residual: part.residual,
                tol,
            });
        }
        Ok(part)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn q_max(&self) -> i32 {
        self.q_max
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Block indices `-1..=q_max`.
    pub fn indices(&self) -> impl Iterator<Item = i32> + Clone {
        -1..=self.q_max
    }

    pub fn block_count(&self) -> usize {
        (self.q_max + 2) as usize
    }

    pub fn k_norms(&self) -> &[f64] {
        &self.k_norms
    }

    pub fn chi_table(&self) -> &[f64] {
        &self.chi_table
    }

    pub fn check_index(&self, q: i32) -> Result<()> {
        if q < -1 || q > self.q_max {
            Err(Error::BlockOutOfRange { q, q_max: self.q_max })
        } else {
            Ok(())
        }
    }

    /// Multiplier table of block `q`.
    pub fn table(&self, q: i32) -> Result<&[f64]> {
        self.check_index(q)?;
        Ok(if q == -1 {
            &self.chi_table
        } else {
            &self.phi_tables[q as usize]
        })
    }

    fn check_field(&self, f: &Field) -> Result<()> {
        if *f.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Max over the lattice of `|χ + Σ_q φ(2^{-q}·) - 1|`.
    pub fn unity_residual(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let sum: f64 = self.chi_table[i] + self.phi_tables.iter().map(|t| t[i]).sum::<f64>();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn report(&self) -> PartitionReport {
        let all = self.phi_tables.iter().flatten().chain(self.chi_table.iter());
        let (min_value, max_value) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        let chi_support_ok = self
            .k_norms
            .iter()
            .zip(&self.chi_table)
            .all(|(&r, &c)| (r > INNER_RADIUS || c == 1.0) && (r < OUTER_RADIUS || c == 0.0));
        let phi_support_ok = self.phi_tables.iter().enumerate().all(|(q, t)| {
            let s = 2f64.powi(-(q as i32));
            self.k_norms
                .iter()
                .zip(t)
                .all(|(&r, &v)| (INNER_RADIUS..=SHELL_OUTER).contains(&(s * r)) || v == 0.0)
        });
        let in_range = min_value >= 0.0 && max_value <= 1.0;
        PartitionReport {
            q_max: self.q_max,
            tol: self.tol,
            max_residual: self.residual,
            min_value,
            max_value,
            chi_support_ok,
            phi_support_ok,
            passed: self.residual <= self.tol && in_range && chi_support_ok && phi_support_ok,
        }
    }

    /// `Δ_q f`.
    pub fn dyadic_block(&self, f: &Field, q: i32) -> Result<Field> {
        self.check_field(f)?;
        Ok(f.apply_table(self.table(q)?))
    }

    /// All blocks `Δ_{-1} f, …, Δ_{q_max} f`.
    pub fn blocks(&self, f: &Field) -> Result<Vec<Field>> {
        self.indices().map(|q| self.dyadic_block(f, q)).collect()
    }

    /// `Δ̃_q = Δ_{q-1} + Δ_q + Δ_{q+1}`, out-of-range indices dropped.
    pub fn widened_block(&self, f: &Field, q: i32) -> Result<Field> {
        self.check_field(f)?;
        self.check_index(q)?;
        let mut table = vec![0.0; self.grid.len()];
        for p in q - 1..=q + 1 {
            if let Ok(t) = self.table(p) {
                for (acc, v) in table.iter_mut().zip(t) {
                    *acc += v;
                }
            }
        }
        Ok(f.apply_table(&table))
    }

    /// Multiplier of `S_q = Σ_{p ≤ q-1} Δ_p`; zero for `q ≤ -1`.
    pub fn low_cutoff_table(&self, q: i32) -> Vec<f64> {
        let mut table = vec![0.0; self.grid.len()];
        for p in -1..q.min(self.q_max + 1) {
            let t = self.table(p).expect("index in range");
            for (acc, v) in table.iter_mut().zip(t) {
                *acc += v;
            }
        }
        table
    }

    /// `S_q f`.
    pub fn low_cutoff(&self, f: &Field, q: i32) -> Result<Field> {
        self.check_field(f)?;
        if q < 0 {
            return Err(Error::BlockOutOfRange { q, q_max: self.q_max });
        }
        if q == 0 {
            return self.dyadic_block(f, -1);
        }
        Ok(f.apply_table(&self.low_cutoff_table(q)))
    }
}

pub fn dyadic_block(part: &DyadicPartition, f: &Field, q: i32) -> Result<Field> {
    part.dyadic_block(f, q)
}

pub fn low_cutoff(part: &DyadicPartition, f: &Field, q: i32) -> Result<Field> {
    part.low_cutoff(f, q)
}
