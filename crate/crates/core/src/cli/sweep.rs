use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::quadrature::linear_fit;
use crate::stationary::{
    central_density, solve_eq33_literal, solve_sn_ground_state, GridConfig, LiteralOptions, ShootingOptions,
    StationarySolution,
};
use crate::units::gravitational_scales;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// Fourth-order density equation at a fixed central density.
    LiteralFig2,
    /// Normalised Schrödinger–Newton ground states.
    Physical,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::LiteralFig2 => "literal_fig2",
            SweepMode::Physical => "physical",
        }
    }
}

impl std::str::FromStr for SweepMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal_fig2" | "literal" => Ok(SweepMode::LiteralFig2),
            "physical" => Ok(SweepMode::Physical),
            other => Err(Error::Config(format!(
                "unknown sweep mode `{other}` (expected literal_fig2 or physical)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub hbar: f64,
    pub g: f64,
    /// Central density for the literal mode.
    pub rho0: f64,
    /// Literal mode: in the constants' length unit, default 8ℓ at the
    /// lightest mass. Physical mode: in gravitational lengths, default 30.
    pub r_max: Option<f64>,
    pub nodes: Option<usize>,
    /// Solver tolerance; the solver's default when absent.
    pub tol: Option<f64>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            g: 1.0,
            rho0: 1.0,
            r_max: None,
            nodes: None,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub mass: f64,
    pub half_width: f64,
    pub central_density: f64,
    pub residual_eq33: f64,
    pub eigenvalue: Option<f64>,
    pub residual_hj: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub mode: SweepMode,
    /// Sorted by mass.
    pub rows: Vec<SweepRow>,
    pub solutions: Vec<StationarySolution>,
    /// Least-squares slope of log(half-width) against log(m).
    pub slope: f64,
    pub intercept: f64,
    pub fit_residual: f64,
}

fn bulk_scale(s: &SweepSettings, m: f64) -> f64 {
    (8.0 * PI * s.g * m * m / (s.hbar * s.hbar) * s.rho0).powf(-0.25)
}

fn solve_one(mode: SweepMode, s: &SweepSettings, m: f64, lightest: f64) -> Result<StationarySolution> {
    let scales = gravitational_scales(m, s.hbar, s.g)?;
    match mode {
        SweepMode::LiteralFig2 => {
            let r_max = s.r_max.unwrap_or_else(|| 8.0 * bulk_scale(s, lightest));
            let grid = GridConfig::new(r_max, s.nodes.unwrap_or(1600))?;
            let opts = LiteralOptions {
                tol: s.tol.unwrap_or(LiteralOptions::default().tol),
                ..Default::default()
            };
            solve_eq33_literal(&scales, s.rho0, &grid, &opts)
        }
        SweepMode::Physical => {
            let grid = GridConfig::new(s.r_max.unwrap_or(30.0), s.nodes.unwrap_or(3000))?;
            let opts = ShootingOptions {
                tol: s.tol.unwrap_or(ShootingOptions::default().tol),
                ..Default::default()
            };
            solve_sn_ground_state(&scales, &grid, &opts)
        }
    }
}

/// Solves every mass and fits the half-width power law.
pub fn run_sweep(masses: &[f64], mode: SweepMode, settings: &SweepSettings, exec: Execution) -> Result<SweepResult> {
    if masses.len() < 4 {
        return Err(Error::domain(
            "mass_list",
            format!("need ≥ 4 masses, got {}", masses.len()),
        ));
    }
    if masses.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
        return Err(Error::domain("mass_list", "masses must be positive and finite"));
    }
    let mut sorted = masses.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (lightest, heaviest) = (sorted[0], sorted[sorted.len() - 1]);
    if heaviest < 4.0 * lightest {
        return Err(Error::domain(
            "mass_list",
            format!("masses must span at least a factor of 4, got {lightest} to {heaviest}"),
        ));
    }
    let results = par::map(exec, &sorted, |&m| solve_one(mode, settings, m, lightest));
    let mut rows = Vec::with_capacity(sorted.len());
    let mut solutions = Vec::with_capacity(sorted.len());
    for (&m, res) in sorted.iter().zip(results) {
        let sol = res.map_err(|e| Error::Sweep {
            mass: m,
            source: Box::new(e),
        })?;
        let rho0 = central_density(sol.profile.amp());
        let half_width = sol.half_width().ok_or_else(|| Error::Sweep {
            mass: m,
            source: Box::new(Error::domain(
                "r_max",
                "density never falls to half its central value on the grid",
            )),
        })?;
        rows.push(SweepRow {
            mass: m,
            half_width,
            central_density: rho0,
            residual_eq33: sol.residual_eq33,
            eigenvalue: sol.eigenvalue,
            residual_hj: sol.residual_hj,
        });
        solutions.push(sol);
    }
    let x: Vec<f64> = rows.iter().map(|r| r.mass.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.half_width.ln()).collect();
    let (slope, intercept, fit_residual) = linear_fit(&x, &y);
    Ok(SweepResult {
        mode,
        rows,
        solutions,
        slope,
        intercept,
        fit_residual,
    })
}
