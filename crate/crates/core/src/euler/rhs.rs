use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{partial, Field, VectorField};

use super::params::{Branch, PhysicalParams};
use super::state::{State, StateRate};

fn on() -> bool {
    true
}

/// Switches for the quadratic terms of the symmetric system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearTerms {
    /// `u·∇m`
    #[serde(default = "on")]
    pub advect_density: bool,
    /// `(γ-1)/2 m div u`
    #[serde(default = "on")]
    pub compress_density: bool,
    /// `(u·∇)u`
    #[serde(default = "on")]
    pub advect_velocity: bool,
    /// `(γ-1)/2 m ∇m`
    #[serde(default = "on")]
    pub pressure_velocity: bool,
}

impl Default for NonlinearTerms {
    fn default() -> Self {
        Self::all()
    }
}

impl NonlinearTerms {
    pub fn all() -> Self {
        NonlinearTerms {
            advect_density: true,
            compress_density: true,
            advect_velocity: true,
            pressure_velocity: true,
        }
    }

    pub fn none() -> Self {
        NonlinearTerms {
            advect_density: false,
            compress_density: false,
            advect_velocity: false,
            pressure_velocity: false,
        }
    }

    pub fn any(&self) -> bool {
        self.advect_density || self.compress_density || self.advect_velocity || self.pressure_velocity
    }
}

/// Right-hand side of the damped symmetric system
///
/// ```text
/// ∂t m = -ψ̄ div u - u·∇m - c m div u
/// ∂t u = -ψ̄ ∇m - a u - (u·∇)u - c m ∇m
/// ```
///
/// with `c = (γ-1)/2`, or `c = 0` and speed `√A` on the isothermal branch.
#[derive(Clone, Copy, Debug)]
pub struct EulerModel {
    pub params: PhysicalParams,
    pub terms: NonlinearTerms,
    pub dealias: bool,
}

impl EulerModel {
    pub fn new(params: PhysicalParams) -> Self {
        EulerModel {
            params,
            terms: NonlinearTerms::all(),
            dealias: true,
        }
    }

    pub fn linearized(params: PhysicalParams) -> Self {
        EulerModel {
            params,
            terms: NonlinearTerms::none(),
            dealias: true,
        }
    }

    pub fn with_terms(mut self, terms: NonlinearTerms) -> Self {
        self.terms = terms;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn coupling(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Isentropic => self.params.coupling(),
            Branch::Isothermal => 0.0,
        }
    }

    pub fn rate(&self, s: &State) -> Result<StateRate> {
        let expected = self.params.branch();
        if s.branch != expected {
            return Err(Error::InvalidParams(format!(
                "state is on the {:?} branch but gamma = {} selects {:?}",
                s.branch,
                self.params.gamma(),
                expected
            )));
        }
        let speed = self.params.wave_speed();
        let c = self.coupling(s.branch);
        Ok(self.kernel(s, speed, c))
    }

    fn kernel(&self, s: &State, speed: f64, c: f64) -> StateRate {
        let grid = *s.grid();
        let dim = grid.dim();
        let n = grid.len();
        let a = self.params.damping();
        let t = self.terms;
        let m = s.m.samples();
        let u: Vec<&[f64]> = s.u.components().iter().map(|f| f.samples()).collect();
        let grad_m: Vec<Field> = (0..dim).map(|j| partial(&s.m, j)).collect();
        // grad_u[i][j] = ∂_j u_i
        let grad_u: Vec<Vec<Field>> =
            s.u.components()
                .iter()
                .map(|ui| (0..dim).map(|j| partial(ui, j)).collect())
                .collect();
        let mut div = vec![0.0; n];
        for (j, row) in grad_u.iter().enumerate() {
            for (d, v) in div.iter_mut().zip(row[j].samples()) {
                *d += v;
            }
        }

        let project = |v: Vec<f64>| -> Field {
            let f = Field::from_samples(grid, v).expect("grid-sized buffer");
            if self.dealias {
                f.dealiased()
            } else {
                f
            }
        };

        let mut nl_m = vec![0.0; n];
        if t.advect_density {
            for (j, gm) in grad_m.iter().enumerate() {
                for ((acc, uj), g) in nl_m.iter_mut().zip(u[j]).zip(gm.samples()) {
                    *acc += uj * g;
                }
            }
        }
        if t.compress_density && c != 0.0 {
            for ((acc, mv), d) in nl_m.iter_mut().zip(m).zip(&div) {
                *acc += c * mv * d;
            }
        }
        let nl_m = if t.advect_density || (t.compress_density && c != 0.0) {
            Some(project(nl_m))
        } else {
            None
        };
        let dm: Vec<f64> = (0..n)
            .map(|k| -speed * div[k] - nl_m.as_ref().map_or(0.0, |f| f.samples()[k]))
            .collect();

        let mut du = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut nl = vec![0.0; n];
            let active = t.advect_velocity || (t.pressure_velocity && c != 0.0);
            if t.advect_velocity {
                for (j, g) in grad_u[i].iter().enumerate() {
                    for ((acc, uj), gv) in nl.iter_mut().zip(u[j]).zip(g.samples()) {
                        *acc += uj * gv;
                    }
                }
            }
            if t.pressure_velocity && c != 0.0 {
                for ((acc, mv), g) in nl.iter_mut().zip(m).zip(grad_m[i].samples()) {
                    *acc += c * mv * g;
                }
            }
            let nl = if active { Some(project(nl)) } else { None };
            let gm = grad_m[i].samples();
            let comp: Vec<f64> = (0..n)
                .map(|k| -speed * gm[k] - a * u[i][k] - nl.as_ref().map_or(0.0, |f| f.samples()[k]))
                .collect();
            du.push(Field::from_samples(grid, comp).expect("grid-sized buffer"));
        }
        StateRate {
            dm: Field::from_samples(grid, dm).expect("grid-sized buffer"),
            du: VectorField::new(du).expect("components share one grid"),
        }
    }
}

/// Full nonlinear right-hand side on the isentropic branch.
pub fn rhs(s: &State, params: &PhysicalParams) -> Result<StateRate> {
    if params.branch() != Branch::Isentropic || s.branch != Branch::Isentropic {
        return Err(Error::InvalidParams("rhs needs gamma > 1; use rhs_isothermal".into()));
    }
    EulerModel::new(*params).rate(s)
}

/// Right-hand side for `γ = 1` in the log-density variable.
pub fn rhs_isothermal(s: &State, params: &PhysicalParams) -> Result<StateRate> {
    if params.branch() != Branch::Isothermal || s.branch != Branch::Isothermal {
        return Err(Error::InvalidParams("rhs_isothermal needs gamma = 1".into()));
    }
    EulerModel::new(*params).rate(s)
}
