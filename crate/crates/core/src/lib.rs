//! Inverse quantum annealing of Kitaev-chain ground states.
//!
//! The crate integrates the coupling flow `dh/dt = K⁽ˡ⁾(λ(t)) h` that drags an
//! l-local parent Hamiltonian along a path of free-fermion ground states,
//! and evaluates the resulting Hamiltonians against the exact path.
//!
//! - [`model`]: momentum grid, operator basis and the target path.
//! - [`commutator`]: the commutator matrix that generates the flow.
//! - [`annealer`]: fixed-step RK4 integration of the flow.
//! - [`spectra`]: pseudospin fields, ground states and fidelities.
//! - [`metrics`]: adiabaticity, range and locality diagnostics.
//! - [`oracle`]: dense Fock-space reference for small chains.
//! - [`experiments`]: config-driven sweeps writing CSV tables.

pub mod annealer;
pub mod commutator;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod spectra;

pub use annealer::{anneal, anneal_pair, anneal_run, RunParams, Schedule, Trajectory};
pub use commutator::{commutator_matrix, CommutatorMatrix};
pub use error::{Error, Result};
pub use metrics::{l_epsilon, max_r, r_avg_h, r_avg_k, range_profile, relative_distance};
pub use model::{
    basis_descriptor, kitaev_couplings, momentum_grid, target_bloch, Axis, BasisDescriptor,
    CouplingVector, MomentumGrid, TargetBloch, CRITICAL_LAMBDA,
};
pub use spectra::{energy, fidelity, field_of, BlochField, FidelityReport};
