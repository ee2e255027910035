use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::diagnostics::{Diagnostics, DiagnosticsRecord, Indices};
use crate::lp::{DyadicPartition, Grid};

use super::initial::IcSpec;
use super::integrate::{cfl_dt, step_rk4};
use super::params::PhysicalParams;
use super::rhs::{EulerModel, NonlinearTerms};
use super::state::State;

pub const SCHEMA_VERSION: u32 = 1;

/// Partition-of-unity tolerance used for all simulations.
pub const PARTITION_TOL: f64 = 1e-12;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}
fn default_period() -> f64 {
    TAU
}
fn default_cfl() -> f64 {
    0.5
}
fn yes() -> bool {
    true
}
fn one() -> usize {
    1
}
fn default_eps() -> f64 {
    Indices::DEFAULT_EPS
}
fn default_eps_prime() -> f64 {
    Indices::DEFAULT_EPS_PRIME
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub points_per_axis: usize,
    #[serde(default = "default_period")]
    pub period: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.dim, self.points_per_axis, self.period)
    }
}

/// Full description of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub grid: GridSpec,
    pub params: PhysicalParams,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    pub ic: IcSpec,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default = "one")]
    pub record_every: usize,
    /// Sup-norm cap; defaults to `10³ ×` the initial amplitude.
    #[serde(default)]
    pub blowup_threshold: Option<f64>,
    /// Fixed step; defaults to the CFL step of the initial state.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub terms: NonlinearTerms,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_eps_prime")]
    pub eps_prime: f64,
    /// Keep the state at every recorded time.
    #[serde(default)]
    pub keep_states: bool,
}

impl SimConfig {
    pub fn new(grid: GridSpec, params: PhysicalParams, t_end: f64, ic: IcSpec) -> Self {
        SimConfig {
            schema_version: SCHEMA_VERSION,
            grid,
            params,
            cfl: default_cfl(),
            t_end,
            ic,
            dealias: true,
            record_every: 1,
            blowup_threshold: None,
            dt: None,
            terms: NonlinearTerms::all(),
            eps: default_eps(),
            eps_prime: default_eps_prime(),
            keep_states: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let grid = self.grid.build()?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidConfig("record_every must be at least 1".into()));
        }
        if let Some(th) = self.blowup_threshold {
            if th.is_nan() || th < 0.0 {
                return Err(Error::InvalidConfig(format!("blowup_threshold must be >= 0, got {th}")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
            }
        }
        self.indices(grid.dim())?;
        self.ic.validate(&grid)
    }

    pub fn indices(&self, dim: usize) -> Result<Indices> {
        Indices::with_eps(dim, self.eps, self.eps_prime)
    }

    pub fn model(&self) -> EulerModel {
        EulerModel {
            params: self.params,
            terms: self.terms,
            dealias: self.dealias,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.blowup_threshold.unwrap_or(if self.ic.amplitude > 0.0 {
            1e3 * self.ic.amplitude
        } else {
            f64::INFINITY
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Completed,
    Blowup,
    PositivityLost,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: Grid,
    pub params: PhysicalParams,
    pub indices: Indices,
    pub dt: f64,
    pub steps_taken: usize,
    pub records: Vec<DiagnosticsRecord>,
    pub status: TerminalStatus,
    /// States matching `records`, when requested.
    pub states: Option<Vec<State>>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn series(&self, f: impl Fn(&DiagnosticsRecord) -> f64) -> Vec<(f64, f64)> {
        self.records.iter().map(|r| (r.t, f(r))).collect()
    }

    pub fn last(&self) -> &DiagnosticsRecord {
        self.records
            .last()
            .expect("trajectories always hold the initial record")
    }
}

/// Runs a configuration to `t_end`, a blow-up breach or loss of positivity.
pub fn simulate(cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid.build()?;
    let state = cfg.ic.build(&grid, &cfg.params)?;
    simulate_from(cfg, state)
}

/// Like [`simulate`] but starting from a given state.
pub fn simulate_from(cfg: &SimConfig, initial: State) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid.build()?;
    if *initial.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let model = cfg.model();
    let indices = cfg.indices(grid.dim())?;
    let diag = Diagnostics::new(DyadicPartition::new(grid, PARTITION_TOL)?, model, indices)?;
    initial.check_positivity(&cfg.params)?;
    let threshold = cfg.threshold();

    let dt0 = match cfg.dt {
        Some(dt) => dt,
        None => cfl_dt(&initial, &cfg.params, cfg.cfl)?,
    };
    let steps = ((cfg.t_end / dt0) - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;

    let mut traj = Trajectory {
        grid,
        params: cfg.params,
        indices,
        dt,
        steps_taken: 0,
        records: vec![diag.record(0.0, &initial)?],
        status: TerminalStatus::Completed,
        states: cfg.keep_states.then(|| vec![initial.clone()]),
    };
    if !(initial.sup_norm() < threshold) {
        traj.status = TerminalStatus::Blowup;
        return Ok(traj);
    }
    let mut state = initial;
    for step in 1..=steps {
        state = match step_rk4(&model, &state, dt) {
            Ok(s) => s,
            Err(Error::PositivityLost { .. }) => {
                traj.status = TerminalStatus::PositivityLost;
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        traj.steps_taken = step;
        let breach = !(state.sup_norm() < threshold);
        if step % cfg.record_every == 0 || step == steps || breach {
            let t = if step == steps { cfg.t_end } else { step as f64 * dt };
            traj.records.push(diag.record(t, &state)?);
            if let Some(states) = traj.states.as_mut() {
                states.push(state.clone());
            }
        }
        if breach {
            traj.status = TerminalStatus::Blowup;
            return Ok(traj);
        }
    }
    Ok(traj)
}
