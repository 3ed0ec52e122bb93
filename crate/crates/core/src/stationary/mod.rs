//! Stationary self-gravitating ground states.
//!
//! Two solvers target the normalised Schrödinger–Newton ground state on the
//! same discrete operator, so they serve as oracles for each other. A third
//! integrates the fourth-order curvature balance at fixed central density.

mod hamiltonian;
mod literal;
mod relaxation;
mod residual;
mod shooting;

pub(crate) use hamiltonian::RadialHamiltonian;
pub use literal::{solve_eq33_literal, LiteralOptions};
pub use relaxation::{relax_sn_ground_state, relax_with_history, RelaxationOptions, RelaxationStep};
pub use residual::{eq33_residual, eq33_residual_field, hj_residual, virial_ratio, Eq33Mode};
pub use shooting::{solve_sn_ground_state, ShootingOptions};

use crate::error::{Error, Result};
use crate::fields::RadialProfile;

/// Radial grid r_i = (i+1)·r_max/nodes.
///
/// The Schrödinger–Newton solvers read `r_max` in units of the gravitational
/// length ħ²/Gm³; the fixed-density solver reads it in the length unit of the
/// constants it is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub r_max: f64,
    pub nodes: usize,
}

impl GridConfig {
    pub fn new(r_max: f64, nodes: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::domain(
                "r_max",
                format!("must be positive and finite, got {r_max}"),
            ));
        }
        if nodes < 16 {
            return Err(Error::domain("nodes", format!("need at least 16 nodes, got {nodes}")));
        }
        Ok(Self { r_max, nodes })
    }

    pub fn step(&self) -> f64 {
        self.r_max / self.nodes as f64
    }

    pub(crate) fn check_resolution(&self) -> Result<()> {
        let per_unit = self.nodes as f64 / self.r_max;
        if per_unit < 10.0 {
            return Err(Error::domain(
                "nodes",
                format!("grid has {per_unit:.2} points per unit length, need at least 10"),
            ));
        }
        Ok(())
    }
}

impl Default for GridConfig {
    /// 30 gravitational lengths at h = 0.01.
    fn default() -> Self {
        Self {
            r_max: 30.0,
            nodes: 3000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverId {
    Shooting,
    Relaxation,
    /// Outward initial-value integration at fixed central density.
    InitialValue,
}

impl SolverId {
    pub fn name(self) -> &'static str {
        match self {
            SolverId::Shooting => "shooting",
            SolverId::Relaxation => "relaxation",
            SolverId::InitialValue => "initial_value",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StationarySolution {
    pub profile: RadialProfile,
    /// E in Q + mφ = E; absent for the fixed-density solver, which has no eigenvalue.
    pub eigenvalue: Option<f64>,
    /// Gravitational potential per unit mass on the profile's grid.
    pub phi: Vec<f64>,
    /// max |Q + mφ − E| over the interior in units of the energy scale.
    pub residual_hj: Option<f64>,
    /// Max-norm of the fourth-order balance relative to its source scale 4πG·ρ₀ (times m² in physical mode).
    pub residual_eq33: f64,
    pub solver: SolverId,
    pub iterations: usize,
}

impl StationarySolution {
    /// Radius at which ρ falls to half its central value.
    pub fn half_width(&self) -> Option<f64> {
        self.profile.half_width()
    }
}

/// Central density from the first nodes, assuming an even profile.
pub(crate) fn central_density(amp: &[f64]) -> f64 {
    ((4.0 * amp[0] - amp[1]) / 3.0).powi(2)
}
