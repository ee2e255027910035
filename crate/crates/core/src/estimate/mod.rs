//! Numerical checks of the energy, commutator, decay and stability
//! estimates along simulated trajectories.

pub mod budget;
pub mod commutator;
pub mod decay;
pub mod diagnostics;
pub mod gns;
pub mod monotonicity;
pub mod riccati;
pub mod stability;

pub use budget::{block_energy_budget, budget_all_blocks, BlockBudget, BudgetReport};
pub use commutator::{commutator_scan, scan_all, CommutatorScanReport, CommutatorVariant, Family, ScanFields};
pub use decay::{fit_decay_rate, grad_m_decay_check, vorticity_decay_check, DecayFit, GradMReport, VorticityReport};
pub use diagnostics::{
    dissipation_functional, energy_functional, time_derivative_state, Diagnostics, DiagnosticsRecord, Indices,
};
pub use gns::{gns_check, gns_scan, GnsScanReport};
pub use monotonicity::{check_energy_monotonicity, MonotonicityReport};
pub use riccati::{fit_riccati_constant, local_time_bound, riccati_check, riccati_envelope, RiccatiReport};
pub use stability::{stability_divergence, StabilityReport};
