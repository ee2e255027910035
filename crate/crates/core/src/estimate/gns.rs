use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::band_limited_field;
use crate::lp::{lp_norm, lp_norm_multi, partial, DyadicPartition, Field, Grid};

/// `‖Δ_{-1} f‖_{L⁶} / ‖∇Δ_{-1} f‖_{L²}` for mean-zero `f` in three dimensions.
pub fn gns_check(part: &DyadicPartition, f: &Field) -> Result<f64> {
    let dim = f.grid().dim();
    if dim != 3 {
        return Err(Error::UnsupportedDimension {
            required: "3",
            got: dim,
        });
    }
    if f.grid() != part.grid() {
        return Err(Error::GridMismatch);
    }
    let mean = f.mean();
    if mean.abs() > 1e-12 * f.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NonzeroMean(mean));
    }
    let low = part.dyadic_block(f, -1)?;
    let grads: Vec<Field> = (0..dim).map(|j| partial(&low, j)).collect();
    let refs: Vec<&Field> = grads.iter().collect();
    let den = lp_norm_multi(&refs, 2.0)?;
    if !(den > 0.0) {
        return Err(Error::ZeroNorm("gradient of the low-frequency block vanishes".into()));
    }
    Ok(lp_norm(&low, 6.0)? / den)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GnsScanReport {
    pub points_per_axis: usize,
    pub samples: usize,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// Ratios over `samples` seeded random fields in `band`.
pub fn gns_scan(grid: &Grid, band: [f64; 2], samples: usize, seed: u64) -> Result<GnsScanReport> {
    let part = DyadicPartition::new(*grid, 1e-12)?;
    let ratios = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let f = band_limited_field(grid, band, 1.0, seed.wrapping_add(i))?;
            gns_check(&part, &f)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(GnsScanReport {
        points_per_axis: grid.points_per_axis(),
        samples,
        ratios,
        max_ratio,
    })
}
