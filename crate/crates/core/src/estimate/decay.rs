use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::Trajectory;

/// Minimum number of samples in a fit window.
pub const MIN_FIT_POINTS: usize = 5;
/// Relative slack of the vorticity bound at desk amplitudes.
pub const VORTICITY_TOL: f64 = 1e-2;
/// Bound on the vorticity norm when it starts at zero.
pub const ZERO_VORTICITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    /// Negative slope of `ln value` against `t`.
    pub rate: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Least-squares fit of `ln v = c - rate·t` over samples with `t ∈ [t_lo, t_hi]`.
pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo <= hi) {
        return Err(Error::InvalidParams(format!("empty window [{lo}, {hi}]")));
    }
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|(t, _)| *t >= lo && *t <= hi).collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} samples in [{lo}, {hi}], need {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    if let Some(&(t, value)) = pts.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::NonPositiveSample { t, value });
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(t, v) in &pts {
        let (dx, dy) = (t - tm, v.ln() - ym);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all samples share one time".into()));
    }
    let slope = sxy / sxx;
    let ss_res: f64 = pts.iter().map(|&(t, v)| (v.ln() - ym - slope * (t - tm)).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(DecayFit {
        rate: -slope,
        r_squared,
        points: pts.len(),
    })
}

/// Fit over the full time span of a series.
pub fn fit_decay_rate_all(series: &[(f64, f64)]) -> Result<DecayFit> {
    let lo = series.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = series.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    fit_decay_rate(series, (lo, hi))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VorticityReport {
    pub holds: bool,
    pub damping: f64,
    pub tol: f64,
    /// `max_i ω(t_i) / (ω(0) e^{-a t_i})`, or `max_i ω(t_i)` when `ω(0)` is at roundoff level.
    pub worst_ratio: f64,
    pub fit: Option<DecayFit>,
    pub series: Vec<(f64, f64)>,
}

/// `‖ω(t)‖_{B^{σ-1}_{2,1}} ≤ ‖ω(0)‖_{B^{σ-1}_{2,1}} e^{-at}(1 + tol)` at every record.
pub fn vorticity_decay_check(traj: &Trajectory, tol: f64) -> Result<VorticityReport> {
    let dim = traj.grid.dim();
    if dim != 3 {
        return Err(Error::UnsupportedDimension {
            required: "3",
            got: dim,
        });
    }
    let series: Vec<(f64, f64)> = traj
        .records
        .iter()
        .map(|r| (r.t, r.vorticity_norm.unwrap_or(0.0)))
        .collect();
    let a = traj.params.damping();
    let w0 = series[0].1;
    let (holds, worst_ratio) = if w0 > ZERO_VORTICITY_TOL {
        let worst = series
            .iter()
            .map(|&(t, w)| w / (w0 * (-a * t).exp()))
            .fold(0.0, f64::max);
        (worst <= 1.0 + tol, worst)
    } else {
        let worst = series.iter().map(|p| p.1).fold(0.0, f64::max);
        (worst <= ZERO_VORTICITY_TOL, worst)
    };
    let fit = if series.len() >= MIN_FIT_POINTS && series.iter().all(|p| p.1 > 0.0) {
        Some(fit_decay_rate_all(&series)?)
    } else {
        None
    };
    Ok(VorticityReport {
        holds,
        damping: a,
        tol,
        worst_ratio,
        fit,
        series,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradMReport {
    /// Run length reaches `10/a`, so the halving assertion applies.
    pub applicable: bool,
    pub grad_m_halved: bool,
    pub u_halved: bool,
    pub holds: bool,
    pub grad_m: Vec<(f64, f64)>,
    pub u_eps_prime: Vec<(f64, f64)>,
}

/// Final `‖∇m‖_{B^{σ-1+ε′}_{2,2}}` and `‖u‖_{B^{σ+ε′}_{2,2}}` at most half their
/// initial values on runs of length at least `10/a`.
pub fn grad_m_decay_check(traj: &Trajectory) -> GradMReport {
    let grad_m = traj.series(|r| r.grad_m_norm);
    let u_eps_prime = traj.series(|r| r.u_norm_eps_prime);
    let halved = |s: &[(f64, f64)]| s.last().unwrap().1 <= 0.5 * s[0].1;
    let applicable = traj.last().t >= 10.0 / traj.params.damping() * (1.0 - 1e-12);
    let grad_m_halved = halved(&grad_m);
    let u_halved = halved(&u_eps_prime);
    GradMReport {
        applicable,
        grad_m_halved,
        u_halved,
        holds: !applicable || (grad_m_halved && u_halved),
        grad_m,
        u_eps_prime,
    }
}
