use num_complex::Complex64;
use std::f64::consts::PI;

use super::spectral::SineTransform;
use super::{check_run, norm_of, Evolution, EvolutionState, Grid};
use crate::error::{Error, Result};
use crate::fields::solve_radial;
use crate::units::PhysicalScales;

/// How the radial kinetic step is diagonalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Kinetic {
    /// Exact −(ħ²/2m)∂²_r on the sine basis: ħ²k²/2m.
    #[default]
    Spectral,
    /// Eigenvalues of the three-point stencil, (2ħ²/mh²) sin²(πj/2(N+1)).
    /// A ground state from the stationary solvers is then an exact
    /// stationary state of the propagator.
    FiniteDifference,
}

impl std::str::FromStr for Kinetic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Kinetic::Spectral),
            "fd" | "finite-difference" => Ok(Kinetic::FiniteDifference),
            other => Err(Error::Config(format!(
                "unknown kinetic operator `{other}` (expected spectral or fd)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnParams {
    pub scales: PhysicalScales,
    pub dt: f64,
    pub steps: usize,
    pub store_every: usize,
    pub kinetic: Kinetic,
    pub leak_threshold: f64,
}

impl SnParams {
    pub fn new(scales: PhysicalScales, dt: f64, steps: usize) -> Self {
        Self {
            scales,
            dt,
            steps,
            store_every: 1,
            kinetic: Kinetic::Spectral,
            leak_threshold: 1e-10,
        }
    }
}

/// Radial Schrödinger–Newton propagation by Strang splitting on v = r·ψ.
///
/// The potential half-steps use φ sourced by the current density; since a
/// potential kick leaves |ψ| unchanged, the closing half-step of one step
/// and the opening half-step of the next share the same φ.
pub fn evolve_sn(psi0: &[Complex64], grid: &Grid, params: &SnParams) -> Result<Evolution> {
    check_run(params.dt, params.steps, params.store_every)?;
    let Grid::Radial { h, n } = *grid else {
        return Err(Error::UnsupportedGeometry {
            geometry: "line1d",
            reason: "the self-gravitating propagator needs a radial grid".into(),
        });
    };
    if psi0.len() != n {
        return Err(Error::domain(
            "psi0",
            format!("expected {n} samples, got {}", psi0.len()),
        ));
    }
    let s = &params.scales;
    let (m, hbar, dt) = (s.m, s.hbar, params.dt);
    let r = grid.coords();
    let dst = SineTransform::new(n);
    let kinetic: Vec<f64> = match params.kinetic {
        Kinetic::Spectral => dst
            .wavenumbers(h)
            .iter()
            .map(|k| hbar * hbar * k * k / (2.0 * m))
            .collect(),
        Kinetic::FiniteDifference => (1..=n)
            .map(|j| 2.0 * hbar * hbar / (m * h * h) * (PI * j as f64 / (2.0 * (n + 1) as f64)).sin().powi(2))
            .collect(),
    };
    let kick: Vec<Complex64> = kinetic
        .iter()
        .map(|w| Complex64::from_polar(1.0, -w * dt / hbar))
        .collect();
    let coupling = 4.0 * PI * s.g * m;
    let mut scratch = Vec::new();

    let potential = |psi: &[Complex64], step: usize| -> Result<Vec<f64>> {
        let rho: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let phi = solve_radial(&r, h, &rho, coupling);
        match phi.iter().position(|p| !p.is_finite()) {
            Some(i) => Err(Error::Numeric {
                detail: format!("Poisson solve at step {step} produced a non-finite potential at node {i}"),
                estimate: f64::NAN,
            }),
            None => Ok(phi),
        }
    };

    let energy = |psi: &[Complex64], phi: &[f64], scratch: &mut Vec<Complex64>| -> f64 {
        let v: Vec<Complex64> = psi.iter().zip(&r).map(|(z, r)| z * r).collect();
        let spec = dst.apply(&v, scratch);
        // Σ|v|² = 2/(N+1) Σ|X|² for the sine transform.
        let kin =
            4.0 * PI * h * 2.0 / (n + 1) as f64 * spec.iter().zip(&kinetic).map(|(z, w)| z.norm_sqr() * w).sum::<f64>();
        let pair: f64 = psi
            .iter()
            .enumerate()
            .map(|(i, z)| 0.5 * grid.weight(i) * z.norm_sqr() * m * phi[i])
            .sum();
        (kin + pair) / norm_of(grid, psi)
    };

    let mut psi = psi0.to_vec();
    let mut phi = potential(&psi, 0)?;
    let mut frames = vec![EvolutionState {
        t: 0.0,
        grid: *grid,
        norm: norm_of(grid, &psi),
        energy: energy(&psi, &phi, &mut scratch),
        psi: psi.clone(),
    }];
    for step in 1..=params.steps {
        half_kick(&mut psi, &phi, m * dt / (2.0 * hbar));
        let mut v: Vec<Complex64> = psi.iter().zip(&r).map(|(z, r)| z * r).collect();
        v = dst.apply(&v, &mut scratch);
        v.iter_mut().zip(&kick).for_each(|(z, k)| *z *= k);
        v = dst.inverse(&v, &mut scratch);
        psi.iter_mut().zip(v.iter().zip(&r)).for_each(|(z, (v, r))| *z = v / r);
        phi = potential(&psi, step)?;
        half_kick(&mut psi, &phi, m * dt / (2.0 * hbar));

        let edge = grid.edge_probability(&psi);
        if edge > params.leak_threshold {
            return Err(Error::Leakage { step, edge_mass: edge });
        }
        if step % params.store_every == 0 || step == params.steps {
            frames.push(EvolutionState {
                t: step as f64 * dt,
                grid: *grid,
                norm: norm_of(grid, &psi),
                energy: energy(&psi, &phi, &mut scratch),
                psi: psi.clone(),
            });
        }
    }
    Ok(Evolution { frames })
}

fn half_kick(psi: &mut [Complex64], phi: &[f64], c: f64) {
    psi.iter_mut()
        .zip(phi)
        .for_each(|(z, p)| *z *= Complex64::from_polar(1.0, -c * p));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::sample_packet_radial;
    use crate::packet::Packet3d;

    #[test]
    fn decoupled_limit_spreads_like_a_free_packet() {
        let s = PhysicalScales::dimensionless().without_gravity();
        let p = Packet3d::at_rest(1.0, 1.0, 1.0).unwrap();
        let grid = Grid::radial(0.05, 800).unwrap();
        let psi0 = sample_packet_radial(&p, &grid).unwrap();
        let ev = evolve_sn(
            &psi0,
            &grid,
            &SnParams {
                store_every: 20,
                ..SnParams::new(s, 0.01, 200)
            },
        )
        .unwrap();
        for f in &ev.frames {
            assert!((f.width() / p.width(f.t).unwrap() - 1.0).abs() < 1e-6, "t = {}", f.t);
            assert!((f.norm - 1.0).abs() < 1e-8);
        }
        // Free 3D Gaussian: ⟨T⟩ = 3ħ²/8mσ₀².
        assert!((ev.frames[0].energy - 0.375).abs() < 1e-8);
        assert!((ev.last().energy - 0.375).abs() < 1e-8);
    }

    #[test]
    fn energy_and_norm_are_conserved_with_gravity() {
        let s = PhysicalScales::dimensionless();
        let p = Packet3d::at_rest(2.0, 1.0, 1.0).unwrap();
        let grid = Grid::radial(0.05, 1200).unwrap();
        let psi0 = sample_packet_radial(&p, &grid).unwrap();
        let ev = evolve_sn(
            &psi0,
            &grid,
            &SnParams {
                store_every: 100,
                ..SnParams::new(s, 0.01, 1000)
            },
        )
        .unwrap();
        let e0 = ev.frames[0].energy;
        for f in &ev.frames {
            assert!((f.norm - 1.0).abs() < 1e-8);
            assert!(
                (f.energy / e0 - 1.0).abs() < 1e-4,
                "t = {}: {} vs {}",
                f.t,
                f.energy,
                e0
            );
        }
    }

    #[test]
    fn rejects_line_grids() {
        let grid = Grid::centered_line(5.0, 64).unwrap();
        let psi = vec![Complex64::new(0.0, 0.0); 64];
        assert!(matches!(
            evolve_sn(&psi, &grid, &SnParams::new(PhysicalScales::dimensionless(), 0.1, 1)),
            Err(Error::UnsupportedGeometry { .. })
        ));
        assert!("spectral".parse::<Kinetic>().is_ok() && "leapfrog".parse::<Kinetic>().is_err());
    }
}
