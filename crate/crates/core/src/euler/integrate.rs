use crate::error::{Error, Result};

use super::params::PhysicalParams;
use super::rhs::EulerModel;
use super::state::State;

/// `dt = cfl·h / (ψ̄ + |u|∞ + (γ-1)/2 |m|∞)`, never larger than `cfl/a`.
pub fn cfl_dt(s: &State, params: &PhysicalParams, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidConfig(format!("cfl must lie in (0, 1], got {cfl}")));
    }
    let c = match s.branch {
        super::params::Branch::Isentropic => params.coupling(),
        super::params::Branch::Isothermal => 0.0,
    };
    let speed = params.wave_speed() + s.u.max_abs() + c * s.m.max_abs();
    if !speed.is_finite() {
        return Err(Error::PositivityLost { min: f64::NAN });
    }
    let dt = cfl * s.grid().spacing() / speed;
    Ok(dt.min(cfl / params.damping()))
}

/// One classical fourth-order Runge-Kutta step. Fails with
/// [`Error::PositivityLost`] when the new state leaves the physical region.
pub fn step_rk4(model: &EulerModel, s: &State, dt: f64) -> Result<State> {
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidConfig(format!("dt must be non-negative, got {dt}")));
    }
    if dt == 0.0 {
        return Ok(s.clone());
    }
    let k1 = model.rate(s)?;
    let k2 = model.rate(&s.advance(dt / 2.0, &k1)?)?;
    let k3 = model.rate(&s.advance(dt / 2.0, &k2)?)?;
    let k4 = model.rate(&s.advance(dt, &k3)?)?;
    let grid = *s.grid();
    let n = grid.len();
    let w = dt / 6.0;
    let combine = |y: &[f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| y[i] + w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]))
            .collect()
    };
    let m = crate::lp::Field::from_samples(
        grid,
        combine(
            s.m.samples(),
            k1.dm.samples(),
            k2.dm.samples(),
            k3.dm.samples(),
            k4.dm.samples(),
        ),
    )?;
    let comps = (0..s.u.len())
        .map(|i| {
            crate::lp::Field::from_samples(
                grid,
                combine(
                    s.u.component(i).samples(),
                    k1.du.component(i).samples(),
                    k2.du.component(i).samples(),
                    k3.du.component(i).samples(),
                    k4.du.component(i).samples(),
                ),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let next = State::new(m, crate::lp::VectorField::new(comps)?, s.branch)?;
    if !next.is_finite() {
        return Err(Error::PositivityLost { min: f64::NAN });
    }
    next.check_positivity(&model.params)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::params::Branch;
    use crate::lp::{make_grid, Field, VectorField};
    use std::f64::consts::TAU;

    #[test]
    fn dt_respects_both_caps() {
        let g = make_grid(1, 32, TAU).unwrap();
        let p = PhysicalParams::new(1.0, 1.4, 1.0, 1.0).unwrap();
        let s = State::equilibrium(&g, Branch::Isentropic);
        let dt = cfl_dt(&s, &p, 0.5).unwrap();
        assert!((dt - 0.5 * g.spacing() / p.psi_bar()).abs() < 1e-15);
        let slow = PhysicalParams::new(1.0, 1.4, 100.0, 1.0).unwrap();
        assert_eq!(cfl_dt(&s, &slow, 0.5).unwrap(), 0.005);
        assert!(cfl_dt(&s, &p, 0.0).is_err());
        assert!(cfl_dt(&s, &p, 1.5).is_err());
    }

    #[test]
    fn damping_only_decay() {
        // Constant velocity and m = 0: u(t) = u0 e^{-at}.
        let g = make_grid(1, 8, TAU).unwrap();
        let p = PhysicalParams::new(1.0, 1.4, 2.0, 1.0).unwrap();
        let u = VectorField::new(vec![Field::constant(g, 0.1)]).unwrap();
        let mut s = State::new(Field::zeros(g), u, Branch::Isentropic).unwrap();
        let model = EulerModel::new(p);
        let dt = 0.01;
        for _ in 0..100 {
            s = step_rk4(&model, &s, dt).unwrap();
        }
        let want = 0.1 * (-2.0f64).exp();
        assert!((s.u.component(0).samples()[3] - want).abs() < 1e-10);
    }

    #[test]
    fn zero_and_negative_dt() {
        let g = make_grid(1, 8, TAU).unwrap();
        let p = PhysicalParams::new(1.0, 1.4, 2.0, 1.0).unwrap();
        let s = State::equilibrium(&g, Branch::Isentropic);
        let model = EulerModel::new(p);
        assert!(step_rk4(&model, &s, -1.0).is_err());
        assert_eq!(step_rk4(&model, &s, 0.0).unwrap().m.samples(), s.m.samples());
    }

    #[test]
    fn positivity_loss_is_reported() {
        let g = make_grid(1, 8, TAU).unwrap();
        let p = PhysicalParams::new(1.0, 3.0, 1.0, 1.0).unwrap();
        let m = Field::from_fn(g, |x| -1.2 * p.psi_bar() / p.coupling() * x[0].cos().max(0.0));
        let s = State::new(m, VectorField::zeros(g), Branch::Isentropic).unwrap();
        let r = step_rk4(&EulerModel::new(p), &s, 1e-6);
        assert!(matches!(r, Err(Error::PositivityLost { .. })));
    }
}
