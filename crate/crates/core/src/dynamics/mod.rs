//! Time-dependent propagation, Bohmian trajectories, the free-fall phase
//! transform and the local force balance.

mod balance;
mod equivalence;
mod free;
mod sn;
pub mod spectral;
mod trajectories;

pub use balance::{force_balance_over_time, force_balance_scan, BalanceWindow, ForceBalance, ForceBalanceFrame};
pub use equivalence::{equivalence_transform, free_equation_residual, free_frame_on_grid, Direction, ShiftedField};
pub use free::{evolve_free, FreeParams};
pub use sn::{evolve_sn, Kinetic, SnParams};
pub use trajectories::{bohmian_trajectories, l1_distance, stratified_seeds, TrajectoryEnsemble, NODE_FLOOR};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::RadialProfile;
use crate::packet::{Packet1d, Packet3d};

/// Uniform sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grid {
    /// x_j = x0 + j·h, periodic with period n·h.
    Line { x0: f64, h: f64, n: usize },
    /// r_i = (i+1)·h with ψ = 0 at the origin and at (n+1)·h.
    Radial { h: f64, n: usize },
}

impl Grid {
    pub fn line(x0: f64, h: f64, n: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && x0.is_finite()) {
            return Err(Error::domain("h", format!("grid step must be positive, got {h}")));
        }
        if n < 8 {
            return Err(Error::domain("n", format!("need at least 8 grid points, got {n}")));
        }
        Ok(Grid::Line { x0, h, n })
    }

    /// Symmetric line grid covering [−half_width, half_width).
    pub fn centered_line(half_width: f64, n: usize) -> Result<Self> {
        Grid::line(-half_width, 2.0 * half_width / n as f64, n)
    }

    pub fn radial(h: f64, n: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::domain("h", format!("grid step must be positive, got {h}")));
        }
        if n < 8 {
            return Err(Error::domain("n", format!("need at least 8 grid points, got {n}")));
        }
        Ok(Grid::Radial { h, n })
    }

    pub fn len(&self) -> usize {
        match *self {
            Grid::Line { n, .. } | Grid::Radial { n, .. } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn step(&self) -> f64 {
        match *self {
            Grid::Line { h, .. } | Grid::Radial { h, .. } => h,
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match *self {
            Grid::Line { x0, h, n } => (0..n).map(|j| x0 + j as f64 * h).collect(),
            Grid::Radial { h, n } => (1..=n).map(|i| i as f64 * h).collect(),
        }
    }

    /// Quadrature weight of node `i` (periodic sum on a line, 4πr²h radially).
    pub fn weight(&self, i: usize) -> f64 {
        match *self {
            Grid::Line { h, .. } => h,
            Grid::Radial { h, .. } => {
                let r = (i + 1) as f64 * h;
                4.0 * PI * r * r * h
            }
        }
    }

    /// Probability in the outer band of the grid (both ends on a line), used
    /// to detect a packet reaching the boundary.
    pub fn edge_probability(&self, psi: &[Complex64]) -> f64 {
        let n = self.len();
        let band = (n / 20).max(2);
        let idx: Box<dyn Iterator<Item = usize>> = match self {
            Grid::Line { .. } => Box::new((0..band).chain(n - band..n)),
            Grid::Radial { .. } => Box::new(n - band..n),
        };
        idx.map(|i| self.weight(i) * psi[i].norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub t: f64,
    pub grid: Grid,
    pub psi: Vec<Complex64>,
    pub norm: f64,
    /// Kinetic plus potential energy; the self-gravity enters as the pair energy ½⟨mφ⟩.
    pub energy: f64,
}

impl EvolutionState {
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn coords(&self) -> Vec<f64> {
        self.grid.coords()
    }

    /// ⟨x⟩ on a line, ⟨r⟩ radially.
    pub fn mean_position(&self) -> f64 {
        let x = self.coords();
        self.psi
            .iter()
            .enumerate()
            .map(|(i, z)| self.grid.weight(i) * z.norm_sqr() * x[i])
            .sum::<f64>()
            / self.norm
    }

    /// R.m.s. width per axis: √(⟨x²⟩ − ⟨x⟩²) on a line, √(⟨r²⟩/3) radially.
    pub fn width(&self) -> f64 {
        let x = self.coords();
        let second = |p: u32| -> f64 {
            self.psi
                .iter()
                .enumerate()
                .map(|(i, z)| self.grid.weight(i) * z.norm_sqr() * x[i].powi(p as i32))
                .sum::<f64>()
                / self.norm
        };
        match self.grid {
            Grid::Line { .. } => (second(2) - second(1).powi(2)).sqrt(),
            Grid::Radial { .. } => (second(2) / 3.0).sqrt(),
        }
    }

    /// |ψ| as a profile on the state's grid.
    pub fn profile(&self) -> Result<RadialProfile> {
        let amp: Vec<f64> = self.psi.iter().map(|z| z.norm()).collect();
        match self.grid {
            Grid::Line { x0, h, .. } => RadialProfile::line(x0, h, amp),
            Grid::Radial { h, .. } => RadialProfile::radial(h, amp),
        }
    }
}

/// Stored frames of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub frames: Vec<EvolutionState>,
}

impl Evolution {
    pub fn last(&self) -> &EvolutionState {
        self.frames
            .last()
            .expect("an evolution stores at least the initial frame")
    }

    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }
}

/// Samples a 1D packet at t = 0 on a line grid.
pub fn sample_packet_line(p: &Packet1d, grid: &Grid) -> Result<Vec<Complex64>> {
    match grid {
        Grid::Line { .. } => grid.coords().iter().map(|&x| p.psi(&[x], 0.0)).collect(),
        Grid::Radial { .. } => Err(Error::UnsupportedGeometry {
            geometry: "radial3d",
            reason: "a one-dimensional packet needs a line grid".into(),
        }),
    }
}

/// Samples a 3D packet centred at the origin at t = 0 on a radial grid.
pub fn sample_packet_radial(p: &Packet3d, grid: &Grid) -> Result<Vec<Complex64>> {
    match grid {
        Grid::Radial { .. } => grid.coords().iter().map(|&r| p.psi(&[r, 0.0, 0.0], 0.0)).collect(),
        Grid::Line { .. } => Err(Error::UnsupportedGeometry {
            geometry: "line1d",
            reason: "a spherical packet needs a radial grid".into(),
        }),
    }
}

pub(crate) fn check_run(dt: f64, steps: usize, store_every: usize) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::domain("dt", format!("time step must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::domain("steps", "need at least one step"));
    }
    if store_every == 0 {
        return Err(Error::domain("store_every", "must be at least 1"));
    }
    Ok(())
}

pub(crate) fn norm_of(grid: &Grid, psi: &[Complex64]) -> f64 {
    psi.iter().enumerate().map(|(i, z)| grid.weight(i) * z.norm_sqr()).sum()
}
