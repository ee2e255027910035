use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{Field, Grid, VectorField};

use super::params::{Branch, PhysicalParams};

/// Symmetric-form state `(m, u)` on one grid.
#[derive(Clone, Debug)]
pub struct State {
    pub m: Field,
    pub u: VectorField,
    pub branch: Branch,
}

/// Time derivative of a [`State`].
#[derive(Clone, Debug)]
pub struct StateRate {
    pub dm: Field,
    pub du: VectorField,
}

/// Physical variables `(n, u)`.
#[derive(Clone, Debug)]
pub struct PhysicalState {
    pub density: Field,
    pub velocity: VectorField,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateNorms {
    pub sup_m: f64,
    pub sup_u: f64,
}

impl State {
    pub fn new(m: Field, u: VectorField, branch: Branch) -> Result<Self> {
        if m.grid() != u.grid() {
            return Err(Error::GridMismatch);
        }
        if u.len() != m.grid().dim() {
            return Err(Error::InvalidGrid(format!(
                "velocity has {} components on a {}-dimensional grid",
                u.len(),
                m.grid().dim()
            )));
        }
        Ok(State { m, u, branch })
    }

    pub fn equilibrium(grid: &Grid, branch: Branch) -> Self {
        State {
            m: Field::zeros(*grid),
            u: VectorField::zeros(*grid),
            branch,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.m.grid()
    }

    pub fn norms(&self) -> StateNorms {
        StateNorms {
            sup_m: self.m.max_abs(),
            sup_u: self.u.max_abs(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        let n = self.norms();
        n.sup_m.max(n.sup_u)
    }

    pub fn is_finite(&self) -> bool {
        self.m.samples().iter().all(|v| v.is_finite())
            && self
                .u
                .components()
                .iter()
                .all(|c| c.samples().iter().all(|v| v.is_finite()))
    }

    /// `self + h * rate`.
    pub fn advance(&self, h: f64, rate: &StateRate) -> Result<State> {
        let m = self.m.axpy(h, &rate.dm)?;
        let comps = self
            .u
            .components()
            .iter()
            .zip(rate.du.components())
            .map(|(c, d)| c.axpy(h, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(State {
            m,
            u: VectorField::new(comps)?,
            branch: self.branch,
        })
    }

    /// `ψ = ψ̄ + (γ-1)/2 m` on the isentropic branch, `n/n̄` on the isothermal one.
    pub fn positivity_margin(&self, params: &PhysicalParams) -> f64 {
        match self.branch {
            Branch::Isentropic => {
                let c = params.coupling();
                let psi_bar = params.psi_bar();
                self.m
                    .samples()
                    .iter()
                    .map(|&m| psi_bar + c * m)
                    .fold(f64::INFINITY, f64::min)
            }
            Branch::Isothermal => {
                let s = params.pressure_const().sqrt();
                self.m
                    .samples()
                    .iter()
                    .map(|&m| (m / s).exp())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn check_positivity(&self, params: &PhysicalParams) -> Result<()> {
        let min = self.positivity_margin(params);
        if min > 0.0 && min.is_finite() {
            Ok(())
        } else {
            Err(Error::PositivityLost { min })
        }
    }
}

fn check_density(n: &Field) -> Result<()> {
    let min = n.min();
    if !(min > 0.0) {
        return Err(Error::PositivityLost { min });
    }
    Ok(())
}

/// `ψ(n) = √(Aγ) n^{(γ-1)/2}` pointwise.
pub fn sound_speed(n: &Field, params: &PhysicalParams) -> Result<Field> {
    check_density(n)?;
    Ok(n.map(|v| params.sound_speed_at(v)))
}

/// Maps `(n, u)` to `(m, u)` with `m = 2/(γ-1) (ψ(n) - ψ̄)`; `γ = 1` goes to
/// [`to_isothermal`].
pub fn to_symmetric(n: &Field, u: &VectorField, params: &PhysicalParams) -> Result<State> {
    if params.branch() == Branch::Isothermal {
        return to_isothermal(n, u, params);
    }
    let psi = sound_speed(n, params)?;
    let inv = 1.0 / params.coupling();
    let psi_bar = params.psi_bar();
    let m = psi.map(|v| inv * (v - psi_bar));
    State::new(m, u.clone(), Branch::Isentropic)
}

pub fn from_symmetric(s: &State, params: &PhysicalParams) -> Result<PhysicalState> {
    if s.branch == Branch::Isothermal || params.branch() == Branch::Isothermal {
        return from_isothermal(s, params);
    }
    s.check_positivity(params)?;
    let c = params.coupling();
    let psi_bar = params.psi_bar();
    let base = params.pressure_const() * params.gamma();
    let expo = 1.0 / (params.gamma() - 1.0);
    let density = s.m.map(|m| ((psi_bar + c * m).powi(2) / base).powf(expo));
    Ok(PhysicalState {
        density,
        velocity: s.u.clone(),
    })
}

/// `ñ = √A (ln n - ln n̄)`.
pub fn to_isothermal(n: &Field, u: &VectorField, params: &PhysicalParams) -> Result<State> {
    check_density(n)?;
    let s = params.pressure_const().sqrt();
    let ln_bar = params.n_bar().ln();
    let m = n.map(|v| s * (v.ln() - ln_bar));
    State::new(m, u.clone(), Branch::Isothermal)
}

pub fn from_isothermal(s: &State, params: &PhysicalParams) -> Result<PhysicalState> {
    let inv = 1.0 / params.pressure_const().sqrt();
    let n_bar = params.n_bar();
    let density = s.m.map(|m| n_bar * (m * inv).exp());
    Ok(PhysicalState {
        density,
        velocity: s.u.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::make_grid;

    fn density(grid: &Grid) -> Field {
        Field::from_fn(*grid, |x| 1.3 + 0.4 * x[0].sin() * (2.0 * x[1]).cos())
    }

    #[test]
    fn isentropic_round_trip() {
        let g = make_grid(2, 16, std::f64::consts::TAU).unwrap();
        for gamma in [1.4, 2.0, 3.0, 1.0 + 1e-3] {
            let p = PhysicalParams::new(0.8, gamma, 1.0, 1.1).unwrap();
            let n = density(&g);
            let u = VectorField::zeros(g);
            let s = to_symmetric(&n, &u, &p).unwrap();
            let back = from_symmetric(&s, &p).unwrap();
            for (a, b) in n.samples().iter().zip(back.density.samples()) {
                assert!((a - b).abs() <= 1e-12 * a.abs(), "gamma {gamma}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn isothermal_round_trip_and_routing() {
        let g = make_grid(2, 16, std::f64::consts::TAU).unwrap();
        let p = PhysicalParams::new(0.8, 1.0, 1.0, 1.1).unwrap();
        let n = density(&g);
        let u = VectorField::zeros(g);
        let s = to_symmetric(&n, &u, &p).unwrap();
        assert_eq!(s.branch, Branch::Isothermal);
        let back = from_symmetric(&s, &p).unwrap();
        for (a, b) in n.samples().iter().zip(back.density.samples()) {
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn equilibrium_maps_to_zero() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let p = PhysicalParams::new(1.0, 1.4, 1.0, 2.0).unwrap();
        let n = Field::constant(g, 2.0);
        let s = to_symmetric(&n, &VectorField::zeros(g), &p).unwrap();
        assert!(s.m.max_abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_density() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let p = PhysicalParams::new(1.0, 1.4, 1.0, 1.0).unwrap();
        let n = Field::from_fn(g, |x| x[0] - 0.5);
        let u = VectorField::zeros(g);
        assert!(matches!(to_symmetric(&n, &u, &p), Err(Error::PositivityLost { .. })));
        let p1 = PhysicalParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(to_symmetric(&n, &u, &p1), Err(Error::PositivityLost { .. })));
    }

    #[test]
    fn from_symmetric_checks_margin() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let p = PhysicalParams::new(1.0, 3.0, 1.0, 1.0).unwrap();
        let s = State::new(Field::constant(g, -2.0), VectorField::zeros(g), Branch::Isentropic).unwrap();
        assert!(from_symmetric(&s, &p).is_err());
    }
}
