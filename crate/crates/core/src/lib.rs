//! Littlewood-Paley analysis, damped Euler dynamics and numerical checks of
//! Besov-space energy estimates on the periodic box.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod euler;
pub mod lp;

pub use error::{Error, Result};
pub use euler::{EulerModel, NonlinearTerms, PhysicalParams, State};
pub use lp::{BesovSpec, DyadicPartition, Field, Grid, VectorField};
