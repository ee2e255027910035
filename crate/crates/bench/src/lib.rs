//! Shared fixtures for the benchmarks.

use std::f64::consts::TAU;

use besovlab::euler::random_band_limited_ic;
use besovlab::lp::make_grid;
use besovlab::{PhysicalParams, State};

pub fn params() -> PhysicalParams {
    PhysicalParams::new(1.0, 1.4, 1.0, 1.0).expect("valid parameters")
}

/// Random small-data state on an `n^3` grid.
pub fn state(n: usize) -> State {
    let grid = make_grid(3, n, TAU).expect("valid grid");
    random_band_limited_ic(&grid, 1e-2, [1.0, 4.0], 42, &params()).expect("valid initial data")
}
