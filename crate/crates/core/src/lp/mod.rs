//! Periodic Fourier grids, the dyadic partition of unity, block operators,
//! `L^p`/Besov norms, and Bony's paraproduct calculus.

pub mod bony;
pub mod calculus;
pub mod dump;
pub(crate) mod fft;
pub mod field;
pub mod grid;
pub mod norms;
pub mod partition;

pub use bony::{commutator_block, paraproduct, remainder, CommutatorKernel};
pub use calculus::{curl, divergence, leray_project, partial, spectral_gradient, Curl};
pub use field::{Field, VectorField};
pub use grid::{make_grid, Grid};
pub use norms::{besov_norm, besov_norm_multi, lp_norm, lp_norm_multi, BesovSpec};
pub use partition::{build_partition, dyadic_block, low_cutoff, DyadicPartition, PartitionReport};
