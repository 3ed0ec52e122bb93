use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spectral::Fourier;
use super::{Evolution, Grid};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Seeds whose |ψ| drops below this fraction of max|ψ| are excluded.
pub const NODE_FLOOR: f64 = 1e-8;

const SUBSTEPS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    /// Initial positions, increasing.
    pub seeds: Vec<f64>,
    pub times: Vec<f64>,
    /// paths[i][k] is seed i at times[k]; NaN after the seed was excluded.
    pub paths: Vec<Vec<f64>>,
    pub sampler_rng_seed: u64,
    /// Indices of seeds that hit a node or left the grid.
    pub excluded: Vec<usize>,
}

impl TrajectoryEnsemble {
    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    /// Positions of the retained seeds at stored frame `k`.
    pub fn positions_at(&self, k: usize) -> Vec<f64> {
        self.paths
            .iter()
            .enumerate()
            .filter(|(i, _)| self.excluded.binary_search(i).is_err())
            .map(|(_, p)| p[k])
            .collect()
    }

    /// True if the retained paths keep their initial order at every frame.
    pub fn is_ordered(&self) -> bool {
        (0..self.times.len()).all(|k| self.positions_at(k).windows(2).all(|w| w[0] <= w[1]))
    }
}

/// Piecewise-linear density through the node values, with its exact CDF.
struct LinearDensity<'a> {
    x: &'a [f64],
    rho: &'a [f64],
    cum: Vec<f64>,
}

impl<'a> LinearDensity<'a> {
    fn new(x: &'a [f64], rho: &'a [f64]) -> Self {
        let mut cum = vec![0.0; x.len()];
        for j in 1..x.len() {
            cum[j] = cum[j - 1] + 0.5 * (x[j] - x[j - 1]) * (rho[j - 1] + rho[j]);
        }
        Self { x, rho, cum }
    }

    fn total(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    fn cdf(&self, at: f64) -> f64 {
        let n = self.x.len();
        if at <= self.x[0] {
            return 0.0;
        }
        if at >= self.x[n - 1] {
            return 1.0;
        }
        let j = self.x.partition_point(|&v| v <= at) - 1;
        let h = self.x[j + 1] - self.x[j];
        let s = at - self.x[j];
        let slope = (self.rho[j + 1] - self.rho[j]) / h;
        (self.cum[j] + self.rho[j] * s + 0.5 * slope * s * s) / self.total()
    }

    fn quantile(&self, u: f64) -> f64 {
        let target = u * self.total();
        let j = self.cum.partition_point(|&c| c <= target).clamp(1, self.x.len() - 1) - 1;
        let h = self.x[j + 1] - self.x[j];
        let need = target - self.cum[j];
        let (a, slope) = (self.rho[j], (self.rho[j + 1] - self.rho[j]) / h);
        // a·s + ½·slope·s² = need, taking the root in [0, h].
        let s = if slope.abs() * h < 1e-12 * a.max(f64::MIN_POSITIVE) {
            need / a
        } else {
            let disc = (a * a + 2.0 * slope * need).max(0.0);
            2.0 * need / (a + disc.sqrt())
        };
        self.x[j] + s.clamp(0.0, h)
    }
}

/// n positions from the density on `x`, one uniformly placed inside each
/// of n equal-probability strata.
pub fn stratified_seeds(x: &[f64], density: &[f64], n: usize, rng_seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("n_seeds", "need at least one seed"));
    }
    if x.len() != density.len() || x.len() < 2 {
        return Err(Error::domain(
            "density",
            "needs matching coordinates and at least two nodes",
        ));
    }
    let d = LinearDensity::new(x, density);
    if !(d.total() > 0.0) {
        return Err(Error::domain("density", "total probability must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok((0..n)
        .map(|i| d.quantile((i as f64 + rng.random::<f64>()) / n as f64))
        .collect())
}

/// L1 distance between the empirical distribution of `positions` and the
/// piecewise-linear density on `x`. The bins split the central 99.9 % of the
/// density into `bins` equal widths, plus one bin for each tail.
pub fn l1_distance(positions: &[f64], x: &[f64], density: &[f64], bins: usize) -> f64 {
    let d = LinearDensity::new(x, density);
    let (lo, hi) = (d.quantile(5e-4), d.quantile(1.0 - 5e-4));
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|b| lo + b as f64 * width).collect();
    edges.insert(0, f64::NEG_INFINITY);
    edges.push(f64::INFINITY);
    let last = edges.len() - 2;
    let mut counts = vec![0usize; last + 1];
    for &p in positions {
        counts[(edges.partition_point(|&e| e <= p) - 1).min(last)] += 1;
    }
    let n = positions.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(b, &c)| (c as f64 / n - (d.cdf(edges[b + 1]) - d.cdf(edges[b]))).abs())
        .sum()
}

struct Frame {
    velocity: Vec<f64>,
    amp: Vec<f64>,
    floor: f64,
}

/// Guidance velocity (ħ/m)·Im(ψ′/ψ) at every node.
fn guidance(psi: &[Complex64], fft: &Fourier, h: f64, m: f64, hbar: f64) -> Frame {
    let d = fft.derivative(psi, h);
    let amp: Vec<f64> = psi.iter().map(|z| z.norm()).collect();
    let max = amp.iter().cloned().fold(0.0, f64::max);
    let velocity = psi
        .iter()
        .zip(&d)
        .map(|(z, dz)| {
            if z.norm_sqr() > 0.0 {
                hbar / m * (dz / z).im
            } else {
                0.0
            }
        })
        .collect();
    Frame {
        velocity,
        amp,
        floor: NODE_FLOOR * max,
    }
}

/// Bohmian paths through stored frames of a line evolution.
///
/// Seeds are drawn from |ψ(·, t₀)|² by [`stratified_seeds`]. Between frames
/// the velocity field is interpolated linearly in time and space and
/// integrated by RK4 with four substeps per frame interval.
pub fn bohmian_trajectories(
    ev: &Evolution,
    m: f64,
    hbar: f64,
    n_seeds: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<TrajectoryEnsemble> {
    let first = &ev.frames[0];
    let Grid::Line { x0, h, n } = first.grid else {
        return Err(Error::UnsupportedGeometry {
            geometry: "radial3d",
            reason: "trajectory ensembles are integrated on a line grid".into(),
        });
    };
    if ev.frames.len() < 2 {
        return Err(Error::domain("states", "need at least two stored frames"));
    }
    let x = first.grid.coords();
    let seeds = stratified_seeds(&x, &first.density(), n_seeds, rng_seed)?;
    let fft = Fourier::new(n);
    let frames: Vec<Frame> = par::map(exec, &ev.frames, |f| guidance(&f.psi, &fft, h, m, hbar));
    let times = ev.times();
    let x_end = x0 + (n - 1) as f64 * h;

    // Linear interpolation of a nodal field, or None off the grid.
    let sample = |field: &[f64], at: f64| -> Option<f64> {
        if !(at >= x0 && at <= x_end) {
            return None;
        }
        let s = (at - x0) / h;
        let j = (s.floor() as usize).min(n - 2);
        let w = s - j as f64;
        Some(field[j] * (1.0 - w) + field[j + 1] * w)
    };
    let velocity = |k: usize, w: f64, at: f64| -> Option<f64> {
        let a = sample(&frames[k].velocity, at)?;
        let b = sample(&frames[k + 1].velocity, at)?;
        Some(a * (1.0 - w) + b * w)
    };

    let paths: Vec<Vec<f64>> = par::map(exec, &seeds, |&start| {
        let mut path = vec![f64::NAN; times.len()];
        path[0] = start;
        let mut pos = start;
        for k in 0..times.len() - 1 {
            let dt = (times[k + 1] - times[k]) / SUBSTEPS as f64;
            let step = || -> Option<f64> {
                let mut p = pos;
                for sub in 0..SUBSTEPS {
                    let w0 = sub as f64 / SUBSTEPS as f64;
                    let wh = (sub as f64 + 0.5) / SUBSTEPS as f64;
                    let w1 = (sub + 1) as f64 / SUBSTEPS as f64;
                    let k1 = velocity(k, w0, p)?;
                    let k2 = velocity(k, wh, p + 0.5 * dt * k1)?;
                    let k3 = velocity(k, wh, p + 0.5 * dt * k2)?;
                    let k4 = velocity(k, w1, p + dt * k3)?;
                    p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
                Some(p)
            };
            match step() {
                Some(p) if sample(&frames[k + 1].amp, p).is_some_and(|a| a >= frames[k + 1].floor) => {
                    pos = p;
                    path[k + 1] = p;
                }
                _ => break,
            }
        }
        path
    });
    let excluded = paths
        .iter()
        .enumerate()
        .filter(|(_, p)| p.iter().any(|v| v.is_nan()))
        .map(|(i, _)| i)
        .collect();
    Ok(TrajectoryEnsemble {
        seeds,
        times,
        paths,
        sampler_rng_seed: rng_seed,
        excluded,
    })
}
