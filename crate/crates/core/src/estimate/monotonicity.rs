use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::Trajectory;

/// Relative slack allowed in the integrated energy inequality.
pub const ENERGY_TOL: f64 = 1e-6;
/// Relative accuracy of the bisection for `μ`.
pub const MU_REL_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    /// Integrated inequality holds at `μ = mu_fit`.
    pub holds: bool,
    pub mu_fit: f64,
    /// Upper end of the search interval (the damping coefficient).
    pub mu_cap: f64,
    /// `E_{i+1} ≤ E_i + tol·E_0` for every consecutive pair of records.
    pub non_increasing: bool,
    /// `max_i (E_{i+1} - E_i) / E_0`; zero when `E_0 = 0`.
    pub max_step_increase: f64,
    pub tol: f64,
    pub records: usize,
}

/// `E_i + μ Σ_{j≤i} D_j (t_j - t_{j-1}) ≤ E_0 (1 + tol)` for every `i`.
pub fn energy_inequality_holds(times: &[f64], energy: &[f64], dissipation: &[f64], mu: f64, tol: f64) -> bool {
    let bound = energy[0] * (1.0 + tol);
    let mut integral = 0.0;
    for i in 0..energy.len() {
        if i > 0 {
            integral += dissipation[i] * (times[i] - times[i - 1]);
        }
        if energy[i] + mu * integral > bound {
            return false;
        }
    }
    true
}

/// Largest `μ ∈ [0, cap]` for which the inequality chain holds; `None` when it
/// fails already at `μ = 0`.
pub fn fit_mu(times: &[f64], energy: &[f64], dissipation: &[f64], cap: f64, tol: f64) -> Option<f64> {
    let ok = |mu| energy_inequality_holds(times, energy, dissipation, mu, tol);
    if !ok(0.0) {
        return None;
    }
    if ok(cap) {
        return Some(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    while hi - lo > MU_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

pub fn check_energy_monotonicity(traj: &Trajectory) -> Result<MonotonicityReport> {
    let n = traj.records.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "monotonicity check needs 3 records, got {n}"
        )));
    }
    let times = traj.times();
    let energy: Vec<f64> = traj.records.iter().map(|r| r.energy).collect();
    let dissipation: Vec<f64> = traj.records.iter().map(|r| r.dissipation).collect();
    let cap = traj.params.damping();
    let fitted = fit_mu(&times, &energy, &dissipation, cap, ENERGY_TOL);
    let e0 = energy[0];
    let max_step_increase = if e0 > 0.0 {
        energy
            .windows(2)
            .map(|w| (w[1] - w[0]) / e0)
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    let non_increasing = energy.windows(2).all(|w| w[1] <= w[0] + ENERGY_TOL * e0);
    Ok(MonotonicityReport {
        holds: fitted.is_some(),
        mu_fit: fitted.unwrap_or(0.0),
        mu_cap: cap,
        non_increasing,
        max_step_increase,
        tol: ENERGY_TOL,
        records: n,
    })
}
