use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

use super::params::PhysicalParams;

/// Fourier amplitudes of one linearized mode.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMode {
    pub m: Complex64,
    /// Velocity component along `k/|k|`.
    pub u_parallel: Complex64,
    /// Velocity components orthogonal to `k`, in any fixed basis.
    pub u_perp: Vec<Complex64>,
}

/// Roots `λ = -a/2 ± √(a²/4 - ω²)` with `ω = ψ̄|k|`.
pub fn mode_eigenvalues(k_norm: f64, params: &PhysicalParams) -> (Complex64, Complex64) {
    let a = params.damping();
    let omega = params.wave_speed() * k_norm;
    let delta = Complex64::new(a * a / 4.0 - omega * omega, 0.0).sqrt();
    (
        Complex64::new(-a / 2.0, 0.0) + delta,
        Complex64::new(-a / 2.0, 0.0) - delta,
    )
}

/// `sinh(z)/z·t` evaluated at `z = δt`, stable through `δ = 0`.
fn sinhc_t(delta: Complex64, t: f64) -> Complex64 {
    let z = delta * t;
    if z.norm() < 1e-3 {
        let z2 = z * z;
        t * (Complex64::new(1.0, 0.0) + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0)
    } else {
        z.sinh() / delta
    }
}

/// Exact solution of the linearized damped system for a single wavevector:
///
/// ```text
/// d/dt (m̂, û∥) = [[0, -iω], [-iω, -a]] (m̂, û∥),   û⊥(t) = û⊥(0) e^{-at}
/// ```
///
/// evaluated through `e^{Mt} = e^{-at/2} [cosh(δt) I + sinh(δt)/δ (M + a/2 I)]`,
/// which covers the under-, over- and critically damped cases.
pub fn linear_mode_solution(k: &[f64], params: &PhysicalParams, initial: &LinearMode, t: f64) -> Result<LinearMode> {
    let k_norm = k.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(k_norm > 0.0 && k_norm.is_finite()) {
        return Err(Error::InvalidParams("linear mode needs a nonzero wavevector".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("time must be non-negative, got {t}")));
    }
    let a = params.damping();
    let omega = params.wave_speed() * k_norm;
    let delta = Complex64::new(a * a / 4.0 - omega * omega, 0.0).sqrt();
    let envelope = (-a * t / 2.0).exp();
    let ch = (delta * t).cosh();
    let sh = sinhc_t(delta, t);
    let i_omega = Complex64::new(0.0, omega);
    let (m0, u0) = (initial.m, initial.u_parallel);
    let m = envelope * (ch * m0 + sh * (a / 2.0 * m0 - i_omega * u0));
    let u = envelope * (ch * u0 + sh * (-i_omega * m0 - a / 2.0 * u0));
    let decay = (-a * t).exp();
    Ok(LinearMode {
        m,
        u_parallel: u,
        u_perp: initial.u_perp.iter().map(|v| v * decay).collect(),
    })
}
