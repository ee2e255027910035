use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::Trajectory;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive, got {v}")))
    }
}

/// `T₀ = 1/(2 C̃ λ₀)`.
pub fn local_time_bound(lambda0: f64, c_tilde: f64) -> Result<f64> {
    check_positive("lambda0", lambda0)?;
    check_positive("c_tilde", c_tilde)?;
    Ok(1.0 / (2.0 * c_tilde * lambda0))
}

/// Solution `λ₀ / (1 - C̃ t λ₀)` of `λ' = C̃ λ²`, defined for `t < 1/(C̃ λ₀)`.
pub fn riccati_envelope(t: f64, lambda0: f64, c_tilde: f64) -> Result<f64> {
    check_positive("lambda0", lambda0)?;
    check_positive("c_tilde", c_tilde)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParams(format!("time must be non-negative, got {t}")));
    }
    let blowup = 1.0 / (c_tilde * lambda0);
    if t >= blowup {
        return Err(Error::PastBlowupTime { t, blowup });
    }
    Ok(lambda0 / (1.0 - c_tilde * t * lambda0))
}

/// Smallest positive floor for a fitted constant when the series never grows.
pub const MIN_C_TILDE: f64 = 1e-12;

/// `λ(t) = ‖U(t)‖_{B^σ_{2,1}} + 1` along a trajectory.
pub fn lambda_series(traj: &Trajectory) -> Vec<(f64, f64)> {
    traj.series(|r| r.besov_sigma_21 + 1.0)
}

/// Smallest `C̃` with `λ(t_i) ≤ λ₀/(1 - C̃ t_i λ₀)` at every sample:
/// `max_i (1/λ₀ - 1/λ_i)/t_i`, floored at [`MIN_C_TILDE`].
pub fn fit_riccati_constant(series: &[(f64, f64)]) -> Result<f64> {
    let &(t0, l0) = series
        .first()
        .ok_or_else(|| Error::InsufficientData("empty series".into()))?;
    if series.len() < 2 {
        return Err(Error::InsufficientData("need at least two samples".into()));
    }
    check_positive("lambda0", l0)?;
    let mut c = MIN_C_TILDE;
    for &(t, l) in &series[1..] {
        check_positive("lambda", l)?;
        let dt = t - t0;
        if dt > 0.0 {
            c = c.max((1.0 / l0 - 1.0 / l) / dt);
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiccatiReport {
    pub lambda0: f64,
    pub c_tilde: f64,
    pub t0: f64,
    pub envelope_at_t0: f64,
    /// `max λ(t)/envelope(t)` over samples with `t ≤ T₀`.
    pub max_ratio: f64,
    pub samples_checked: usize,
    pub holds: bool,
}

/// Checks `λ(t) ≤ envelope(t)(1 + tol)` for samples with `t ≤ T₀`.
pub fn riccati_check(series: &[(f64, f64)], c_tilde: f64, tol: f64) -> Result<RiccatiReport> {
    let &(_, lambda0) = series
        .first()
        .ok_or_else(|| Error::InsufficientData("empty series".into()))?;
    let t0 = local_time_bound(lambda0, c_tilde)?;
    let mut max_ratio: f64 = 0.0;
    let mut checked = 0;
    for &(t, l) in series.iter().filter(|(t, _)| *t <= t0) {
        max_ratio = max_ratio.max(l / riccati_envelope(t, lambda0, c_tilde)?);
        checked += 1;
    }
    Ok(RiccatiReport {
        lambda0,
        c_tilde,
        t0,
        envelope_at_t0: riccati_envelope(t0, lambda0, c_tilde)?,
        max_ratio,
        samples_checked: checked,
        holds: max_ratio <= 1.0 + tol,
    })
}
