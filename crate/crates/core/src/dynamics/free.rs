use num_complex::Complex64;

use super::spectral::Fourier;
use super::{check_run, norm_of, Evolution, EvolutionState, Grid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParams {
    pub m: f64,
    pub hbar: f64,
    /// Uniform field strength; the potential is −m·g·x.
    pub g: f64,
    pub dt: f64,
    pub steps: usize,
    pub store_every: usize,
    /// Abort when the probability in the outer bands exceeds this.
    pub leak_threshold: f64,
}

impl FreeParams {
    pub fn new(m: f64, hbar: f64, dt: f64, steps: usize) -> Self {
        Self {
            m,
            hbar,
            g: 0.0,
            dt,
            steps,
            store_every: 1,
            leak_threshold: 1e-10,
        }
    }
}

/// Strang split-step Fourier propagation on a periodic line grid.
pub fn evolve_free(psi0: &[Complex64], grid: &Grid, params: &FreeParams) -> Result<Evolution> {
    check_run(params.dt, params.steps, params.store_every)?;
    let Grid::Line { h, n, .. } = *grid else {
        return Err(Error::UnsupportedGeometry {
            geometry: "radial3d",
            reason: "the Fourier propagator needs a line grid".into(),
        });
    };
    if psi0.len() != n {
        return Err(Error::domain(
            "psi0",
            format!("expected {n} samples, got {}", psi0.len()),
        ));
    }
    let (m, hbar, dt) = (params.m, params.hbar, params.dt);
    let fft = Fourier::new(n);
    let k = fft.wavenumbers(h);
    let kinetic: Vec<f64> = k.iter().map(|k| hbar * k * k / (2.0 * m)).collect();
    let kick: Vec<Complex64> = kinetic.iter().map(|w| Complex64::from_polar(1.0, -w * dt)).collect();
    let x = grid.coords();
    let potential: Vec<f64> = x.iter().map(|x| -m * params.g * x).collect();
    let half: Vec<Complex64> = potential
        .iter()
        .map(|v| Complex64::from_polar(1.0, -v * dt / (2.0 * hbar)))
        .collect();

    let energy = |psi: &[Complex64]| -> f64 {
        let mut spec = psi.to_vec();
        fft.forward(&mut spec);
        let total: f64 = spec.iter().map(|z| z.norm_sqr()).sum();
        let kin = hbar * spec.iter().zip(&kinetic).map(|(z, w)| z.norm_sqr() * w).sum::<f64>() / total;
        let norm = norm_of(grid, psi);
        let pot = psi
            .iter()
            .zip(&potential)
            .map(|(z, v)| h * z.norm_sqr() * v)
            .sum::<f64>()
            / norm;
        kin + pot
    };

    let state = |t: f64, psi: &[Complex64]| EvolutionState {
        t,
        grid: *grid,
        psi: psi.to_vec(),
        norm: norm_of(grid, psi),
        energy: energy(psi),
    };

    let mut psi = psi0.to_vec();
    let mut frames = vec![state(0.0, &psi)];
    for step in 1..=params.steps {
        psi.iter_mut().zip(&half).for_each(|(z, p)| *z *= p);
        fft.forward(&mut psi);
        psi.iter_mut().zip(&kick).for_each(|(z, p)| *z *= p);
        fft.inverse(&mut psi);
        psi.iter_mut().zip(&half).for_each(|(z, p)| *z *= p);
        let edge = grid.edge_probability(&psi);
        if edge > params.leak_threshold {
            return Err(Error::Leakage { step, edge_mass: edge });
        }
        if step % params.store_every == 0 || step == params.steps {
            frames.push(state(step as f64 * dt, &psi));
        }
    }
    Ok(Evolution { frames })
}
