use super::shooting::{check_options, finish, RadialGrid};
use super::{hj_residual, GridConfig, RadialHamiltonian, SolverId, StationarySolution};
use crate::error::{Error, Result};
use crate::fields::RadialProfile;
use crate::units::PhysicalScales;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationOptions {
    /// Bound on residual_hj and on the eigenvalue drift per unit imaginary
    /// time, both in gravitational units.
    pub tol: f64,
    pub max_steps: usize,
    /// Imaginary time step in units of the gravitational time ħ³/G²m⁵.
    pub dtau: f64,
}

impl Default for RelaxationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_steps: 20_000,
            dtau: 10.0,
        }
    }
}

/// Per-step record of an imaginary-time run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationStep {
    pub tau: f64,
    pub eigenvalue: f64,
    /// Kinetic plus half the gravitational pair energy.
    pub energy: f64,
    pub norm: f64,
}

/// Normalised ground state by imaginary-time flow with a refreshed potential.
///
/// Each step solves (1 + dτ(H[φ] − E)/ħ)ψ′ = ψ with the current Rayleigh
/// quotient E as shift, then renormalises and recomputes φ. The step is
/// halved whenever the shifted operator stops being positive definite.
pub fn relax_sn_ground_state(
    scales: &PhysicalScales,
    grid: &GridConfig,
    opts: &RelaxationOptions,
) -> Result<StationarySolution> {
    relax_with_history(scales, grid, opts).map(|(s, _)| s)
}

pub fn relax_with_history(
    scales: &PhysicalScales,
    grid: &GridConfig,
    opts: &RelaxationOptions,
) -> Result<(StationarySolution, Vec<RelaxationStep>)> {
    check_options(opts.tol, opts.max_steps)?;
    if !(opts.dtau > 0.0) {
        return Err(Error::domain("dtau", format!("must be positive, got {}", opts.dtau)));
    }
    let g = RadialGrid::physical(grid, scales)?;
    let (m, hbar) = (scales.m, scales.hbar);
    let mut v: Vec<f64> = g
        .initial_density(scales)
        .iter()
        .zip(&g.r)
        .map(|(rho, r)| rho.sqrt() * r)
        .collect();
    let mut dtau = opts.dtau * scales.time_scale;
    let mut tau = 0.0;
    let mut history = Vec::new();
    let mut previous: Option<f64> = None;
    let mut drift_signs = 0usize;
    let mut last_drift = 0.0f64;

    for step in 1..=opts.max_steps {
        let amp = g.amplitude(&v);
        let phi = g.potential(&amp, scales);
        let ham = RadialHamiltonian::new(hbar, m, g.h, phi.iter().map(|p| m * p));
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let hv = ham.apply(&v);
        let eigenvalue = v.iter().zip(&hv).map(|(a, b)| a * b).sum::<f64>() / vv;
        let potential_part = v.iter().zip(&phi).map(|(a, p)| a * a * m * p).sum::<f64>() / vv;
        let energy = eigenvalue - 0.5 * potential_part;
        let norm = amp
            .iter()
            .zip(&g.r)
            .map(|(a, r)| 4.0 * std::f64::consts::PI * g.h * (a * r).powi(2))
            .sum();
        history.push(RelaxationStep {
            tau,
            eigenvalue,
            energy,
            norm,
        });

        if let Some(prev) = previous {
            let drift = (eigenvalue - prev) / dtau * scales.time_scale / scales.energy_scale;
            if drift.abs() < opts.tol {
                let profile = RadialProfile::radial(g.h, amp.clone())?;
                let residual = hj_residual(&profile, &phi, eigenvalue, scales)?;
                if residual <= opts.tol {
                    return finish(scales, &g, amp, phi, eigenvalue, residual, SolverId::Relaxation, step)
                        .map(|s| (s, history));
                }
            }
            // An imaginary-time flow settles monotonically; persistent sign
            // flips without shrinking amplitude mean it is oscillating.
            if drift.signum() != last_drift.signum() && drift.abs() >= last_drift.abs() && step > 50 {
                drift_signs += 1;
                if drift_signs > 20 {
                    return Err(Error::NonConvergence {
                        iterations: step,
                        detail: format!("eigenvalue oscillates: drift {drift:.3e} per unit imaginary time"),
                    });
                }
            }
            last_drift = drift;
        }
        previous = Some(eigenvalue);

        let next = loop {
            match ham.solve_shifted(dtau / hbar, eigenvalue, &v) {
                Some(x) => break x,
                None => {
                    dtau *= 0.5;
                    if dtau < 1e-12 * scales.time_scale {
                        return Err(Error::NonConvergence {
                            iterations: step,
                            detail: "imaginary time step collapsed".into(),
                        });
                    }
                }
            }
        };
        let scale = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        v = next.into_iter().map(|x| x / scale).collect();
        tau += dtau;
    }
    Err(Error::NonConvergence {
        iterations: opts.max_steps,
        detail: format!(
            "eigenvalue drift {last_drift:.3e} per unit imaginary time after {} steps",
            opts.max_steps
        ),
    })
}
