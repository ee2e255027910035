//! Damped compressible Euler flow in symmetric variables.

pub mod initial;
pub mod integrate;
pub mod linear;
pub mod params;
pub mod rhs;
pub mod simulate;
pub mod state;

pub use initial::{band_limited_field, irrotational_ic, random_band_limited_ic, vortex_ic, IcKind, IcSpec};
pub use integrate::{cfl_dt, step_rk4};
pub use linear::{linear_mode_solution, mode_eigenvalues, LinearMode};
pub use params::{Branch, ParamSpec, PhysicalParams};
pub use rhs::{rhs, rhs_isothermal, EulerModel, NonlinearTerms};
pub use simulate::{simulate, simulate_from, GridSpec, SimConfig, TerminalStatus, Trajectory};
pub use state::{
    from_isothermal, from_symmetric, sound_speed, to_isothermal, to_symmetric, PhysicalState, State, StateNorms,
    StateRate,
};

use crate::error::Result;
use crate::lp::{curl, Curl, VectorField};

/// Spectral vorticity: a scalar in two dimensions, a vector in three.
pub fn vorticity(u: &VectorField) -> Result<Curl> {
    curl(u)
}
