use serde::{Deserialize, Serialize};

use super::field::{Field, VectorField};
use super::partition::DyadicPartition;
use crate::error::{Error, Result};

/// Riemann-sum `L^p` norm over the periodic box; `p = ∞` is the sample max.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    lp_norm_of_magnitudes(f.samples().iter().map(|x| x.abs()), f.grid().cell_volume(), p)
}

/// `L^p` norm of the pointwise Euclidean magnitude of several fields.
pub fn lp_norm_multi(fields: &[&Field], p: f64) -> Result<f64> {
    let first = fields.first().ok_or_else(|| Error::InvalidParams("no fields".into()))?;
    for f in &fields[1..] {
        first.ensure_same_grid(f)?;
    }
    let n = first.grid().len();
    let mags = (0..n).map(|i| fields.iter().map(|f| f.samples()[i].powi(2)).sum::<f64>().sqrt());
    lp_norm_of_magnitudes(mags, first.grid().cell_volume(), p)
}

pub fn vector_lp_norm(v: &VectorField, p: f64) -> Result<f64> {
    let refs: Vec<&Field> = v.components().iter().collect();
    lp_norm_multi(&refs, p)
}

fn lp_norm_of_magnitudes(mags: impl Iterator<Item = f64>, cell: f64, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(mags.fold(0.0, f64::max));
    }
    if p == 2.0 {
        return Ok((mags.map(|x| x * x).sum::<f64>() * cell).sqrt());
    }
    let sum: f64 = mags.map(|x| x.powf(p)).sum();
    Ok((sum * cell).powf(1.0 / p))
}

/// Besov indices `(s, p, r)`; `f64::INFINITY` selects the sup forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovSpec {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        let spec = BesovSpec { s, p, r };
        spec.validate()?;
        Ok(spec)
    }

    /// `H^s = B^s_{2,2}`.
    pub fn sobolev(s: f64) -> Self {
        BesovSpec { s, p: 2.0, r: 2.0 }
    }

    /// `B^s_{2,1}`.
    pub fn critical(s: f64) -> Self {
        BesovSpec { s, p: 2.0, r: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::InvalidExponent(self.p));
        }
        if self.r.is_nan() || self.r < 1.0 {
            return Err(Error::InvalidExponent(self.r));
        }
        if !self.s.is_finite() {
            return Err(Error::InvalidParams(format!(
                "smoothness must be finite, got {}",
                self.s
            )));
        }
        Ok(())
    }
}

/// Weighted `ℓ^r` combination `(Σ_q (2^{qs} a_q)^r)^{1/r}` of block norms
/// indexed from `q = -1`.
pub fn dyadic_sum(block_norms: &[f64], s: f64, r: f64) -> f64 {
    let weighted = block_norms
        .iter()
        .enumerate()
        .map(|(i, &a)| 2f64.powf((i as f64 - 1.0) * s) * a);
    if r.is_infinite() {
        weighted.fold(0.0, f64::max)
    } else if r == 1.0 {
        weighted.sum()
    } else if r == 2.0 {
        weighted.map(|x| x * x).sum::<f64>().sqrt()
    } else {
        weighted.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// Squared block `L²` norms `‖Δ_q f‖²`, from Parseval on the spectrum.
pub fn block_l2_squared(part: &DyadicPartition, f: &Field) -> Result<Vec<f64>> {
    if f.grid() != part.grid() {
        return Err(Error::GridMismatch);
    }
    let spec = f.spectrum();
    let vol = f.grid().volume();
    part.indices()
        .map(|q| {
            let t = part.table(q)?;
            Ok(vol * spec.iter().zip(t).map(|(c, w)| w * w * c.norm_sqr()).sum::<f64>())
        })
        .collect()
}

/// Block norms `‖Δ_q (f_1, …, f_k)‖_{L^p}` of a tuple, Euclidean pointwise.
pub fn block_norms_multi(part: &DyadicPartition, fields: &[&Field], p: f64) -> Result<Vec<f64>> {
    if fields.is_empty() {
        return Err(Error::InvalidParams("no fields".into()));
    }
    if p == 2.0 {
        let mut acc = vec![0.0; part.block_count()];
        for f in fields {
            for (a, b) in acc.iter_mut().zip(block_l2_squared(part, f)?) {
                *a += b;
            }
        }
        return Ok(acc.into_iter().map(f64::sqrt).collect());
    }
    part.indices()
        .map(|q| {
            let blocks = fields
                .iter()
                .map(|f| part.dyadic_block(f, q))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Field> = blocks.iter().collect();
            lp_norm_multi(&refs, p)
        })
        .collect()
}

/// Truncated dyadic Besov norm of a scalar field.
pub fn besov_norm(part: &DyadicPartition, f: &Field, spec: BesovSpec) -> Result<f64> {
    besov_norm_multi(part, &[f], spec)
}

/// Besov norm of a tuple of fields (e.g. `(m, u)` or the components of a
/// vector); block norms use the pointwise Euclidean magnitude, which for
/// `p = r = 2` equals the root-sum-square of the componentwise norms.
pub fn besov_norm_multi(part: &DyadicPartition, fields: &[&Field], spec: BesovSpec) -> Result<f64> {
    spec.validate()?;
    let blocks = block_norms_multi(part, fields, spec.p)?;
    Ok(dyadic_sum(&blocks, spec.s, spec.r))
}

pub fn vector_besov_norm(part: &DyadicPartition, v: &VectorField, spec: BesovSpec) -> Result<f64> {
    let refs: Vec<&Field> = v.components().iter().collect();
    besov_norm_multi(part, &refs, spec)
}
