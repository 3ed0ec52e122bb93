//! Grid operators for the quantum potential and self-gravity, their ensemble
//! averages and the width at which the two balance.

mod averages;
mod balance;
mod poisson;
mod profile;
mod quantum;

pub use averages::{
    mean_quantum_potential, mean_quantum_potential_3d, mean_self_gravity, packet_profile, pair_energy, Averages,
};
pub use balance::{critical_width, energy_functional, model_mean_quantum_potential, model_self_gravity, BalanceReport};
pub(crate) use poisson::solve_radial;
pub use poisson::{poisson_radial, poisson_radial_with, DensityConvention};
pub use profile::{gradient, laplacian, laplacian4, Geometry, RadialProfile};
pub use quantum::{quantum_force_grid, quantum_force_of, quantum_potential_grid, quantum_potential_masked};
