use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::Trajectory;
use crate::lp::norms::{block_norms_multi, dyadic_sum};
use crate::lp::{DyadicPartition, Field};

/// Bound on the separation of trajectories that start from the same state.
pub const IDENTICAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    /// `(t, ‖U₁ - U₂‖_{B^{σ-1}_{2,1}})`
    pub delta: Vec<(f64, f64)>,
    /// `∫₀ᵗ (‖U₁‖_{B^σ_{2,1}} + ‖U₂‖_{B^σ_{2,1}})`, trapezoidal.
    pub integral: Vec<f64>,
    /// Smallest `C` with `δ(t) ≤ δ(0) exp(C ∫ …)`; absent when `δ(0) = 0`.
    pub c_fit: Option<f64>,
    pub initial_zero: bool,
    pub holds: bool,
}

fn check_compatible(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::MismatchedRuns("grids differ".into()));
    }
    if a.params != b.params {
        return Err(Error::MismatchedRuns("parameters differ".into()));
    }
    if a.dt != b.dt {
        return Err(Error::MismatchedRuns(format!(
            "time steps differ: {} vs {}",
            a.dt, b.dt
        )));
    }
    if a.times() != b.times() {
        return Err(Error::MismatchedRuns("record times differ".into()));
    }
    if a.states.is_none() || b.states.is_none() {
        return Err(Error::MismatchedRuns("both runs must keep their states".into()));
    }
    Ok(())
}

/// Gronwall-type fit of the separation of two runs in `B^{σ-1}_{2,1}`.
pub fn stability_divergence(a: &Trajectory, b: &Trajectory, part: &DyadicPartition) -> Result<StabilityReport> {
    check_compatible(a, b)?;
    if *part.grid() != a.grid {
        return Err(Error::GridMismatch);
    }
    let sigma = a.indices.sigma;
    let sa = a.states.as_ref().unwrap();
    let sb = b.states.as_ref().unwrap();
    let mut delta = Vec::with_capacity(sa.len());
    for ((x, y), rec) in sa.iter().zip(sb).zip(&a.records) {
        let mut diff: Vec<Field> = vec![x.m.sub(&y.m)?];
        for (p, q) in x.u.components().iter().zip(y.u.components()) {
            diff.push(p.sub(q)?);
        }
        let refs: Vec<&Field> = diff.iter().collect();
        delta.push((
            rec.t,
            dyadic_sum(&block_norms_multi(part, &refs, 2.0)?, sigma - 1.0, 1.0),
        ));
    }
    let mut integral = vec![0.0];
    for i in 1..a.records.len() {
        let h = a.records[i].t - a.records[i - 1].t;
        let f = |k: usize| a.records[k].besov_sigma_21 + b.records[k].besov_sigma_21;
        integral.push(integral[i - 1] + 0.5 * h * (f(i) + f(i - 1)));
    }
    let d0 = delta[0].1;
    let initial_zero = d0 == 0.0;
    let (c_fit, holds) = if initial_zero {
        (None, delta.iter().all(|p| p.1 <= IDENTICAL_TOL))
    } else {
        let mut c = f64::NEG_INFINITY;
        for i in 1..delta.len() {
            if integral[i] > 0.0 {
                c = c.max((delta[i].1 / d0).ln() / integral[i]);
            }
        }
        let c = if c.is_finite() { Some(c) } else { None };
        (c, c.is_some())
    };
    Ok(StabilityReport {
        delta,
        integral,
        c_fit,
        initial_zero,
        holds,
    })
}
