//! Closed-form free Gaussian packet in polar form ψ = R e^{iS/ħ}.
//!
//! The packet is parameterised by its initial r.m.s. width σ₀ and group
//! velocity u. Internally it uses the complex width
//! s_t = σ₀(1 + iħt/2mσ₀²), whose modulus is the spreading width σ(t).

use num_complex::Complex64;
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::par::{self, Execution};

pub type Point<const D: usize> = [f64; D];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket<const D: usize> {
    pub sigma0: f64,
    pub u: Point<D>,
    pub m: f64,
    pub hbar: f64,
}

pub type Packet1d = GaussianPacket<1>;
pub type Packet3d = GaussianPacket<3>;

/// Result of the spreading test ħt/2mσ₀² < ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalLimit {
    pub ratio: f64,
    pub holds: bool,
}

fn check_time(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::domain("t", format!("time must be finite and >= 0, got {t}")))
    }
}

fn sub<const D: usize>(a: &Point<D>, b: &Point<D>) -> Point<D> {
    std::array::from_fn(|i| a[i] - b[i])
}

fn norm2<const D: usize>(a: &Point<D>) -> f64 {
    a.iter().map(|v| v * v).sum()
}

impl<const D: usize> GaussianPacket<D> {
    pub fn new(sigma0: f64, u: Point<D>, m: f64, hbar: f64) -> Result<Self> {
        if D != 1 && D != 3 {
            return Err(Error::domain("dim", format!("dimension must be 1 or 3, got {D}")));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("u", "group velocity must be finite"));
        }
        Ok(Self {
            sigma0: ensure_positive("sigma0", sigma0)?,
            u,
            m: ensure_positive("mass", m)?,
            hbar: ensure_positive("hbar", hbar)?,
        })
    }

    /// Packet at rest.
    pub fn at_rest(sigma0: f64, m: f64, hbar: f64) -> Result<Self> {
        Self::new(sigma0, [0.0; D], m, hbar)
    }

    pub fn dim(&self) -> usize {
        D
    }

    /// ħt/2mσ₀².
    pub fn spreading_ratio(&self, t: f64) -> f64 {
        self.hbar * t / (2.0 * self.m * self.sigma0 * self.sigma0)
    }

    pub fn complex_width(&self, t: f64) -> Complex64 {
        Complex64::new(self.sigma0, self.sigma0 * self.spreading_ratio(t))
    }

    fn width_unchecked(&self, t: f64) -> f64 {
        self.sigma0 * self.spreading_ratio(t).hypot(1.0)
    }

    /// σ(t) = σ₀ (1 + (ħt/2mσ₀²)²)^{1/2}.
    pub fn width(&self, t: f64) -> Result<f64> {
        Ok(self.width_unchecked(check_time(t)?))
    }

    pub fn center(&self, t: f64) -> Point<D> {
        std::array::from_fn(|i| self.u[i] * t)
    }

    /// Amplitude R and phase S at (x, t).
    pub fn amplitude_phase(&self, x: &Point<D>, t: f64) -> Result<(f64, f64)> {
        let t = check_time(t)?;
        let sigma = self.width_unchecked(t);
        let d2 = norm2(&sub(x, &self.center(t)));
        let dim = D as f64;
        let r = (2.0 * PI * sigma * sigma).powf(-dim / 4.0) * (-d2 / (4.0 * sigma * sigma)).exp();
        let drift: f64 = (0..D).map(|i| self.u[i] * (x[i] - 0.5 * self.u[i] * t)).sum();
        let s = -(dim * self.hbar / 2.0) * self.spreading_ratio(t).atan()
            + self.m * drift
            + self.hbar * self.hbar * t * d2 / (8.0 * self.m * self.sigma0 * self.sigma0 * sigma * sigma);
        Ok((r, s))
    }

    /// ψ = R e^{iS/ħ}.
    pub fn psi(&self, x: &Point<D>, t: f64) -> Result<Complex64> {
        let (r, s) = self.amplitude_phase(x, t)?;
        Ok(Complex64::from_polar(r, s / self.hbar))
    }

    /// ψ from the complex-width form (2πs_t²)^{-D/4} exp(ik·(x − ut/2) − (x−ut)²/4s_tσ₀).
    pub fn psi_complex_width(&self, x: &Point<D>, t: f64) -> Result<Complex64> {
        let t = check_time(t)?;
        let st = self.complex_width(t);
        let d2 = norm2(&sub(x, &self.center(t)));
        let kx: f64 = (0..D)
            .map(|i| self.m * self.u[i] / self.hbar * (x[i] - 0.5 * self.u[i] * t))
            .sum();
        let pre = (2.0 * PI * st * st).powf(-(D as f64) / 4.0);
        Ok(pre * (Complex64::i() * kx - d2 / (4.0 * st * self.sigma0)).exp())
    }

    /// Q = (ħ²/4mσ²)(D − |x−ut|²/2σ²).
    pub fn quantum_potential(&self, x: &Point<D>, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        let sigma2 = self.width_unchecked(t).powi(2);
        let d2 = norm2(&sub(x, &self.center(t)));
        Ok(self.hbar * self.hbar / (4.0 * self.m * sigma2) * (D as f64 - d2 / (2.0 * sigma2)))
    }

    /// f = −∇Q = (ħ²/4mσ⁴)(x − ut), directed away from the centre.
    pub fn quantum_force(&self, x: &Point<D>, t: f64) -> Result<Point<D>> {
        let t = check_time(t)?;
        let sigma2 = self.width_unchecked(t).powi(2);
        let k = self.hbar * self.hbar / (4.0 * self.m * sigma2 * sigma2);
        let c = self.center(t);
        Ok(std::array::from_fn(|i| k * (x[i] - c[i])))
    }

    /// Guidance velocity ∇S/m.
    pub fn velocity(&self, x: &Point<D>, t: f64) -> Point<D> {
        let sigma2 = self.width_unchecked(t).powi(2);
        let k = self.hbar * self.hbar * t / (4.0 * self.m * self.m * self.sigma0 * self.sigma0 * sigma2);
        std::array::from_fn(|i| self.u[i] + k * (x[i] - self.u[i] * t))
    }

    /// x(t) = ut + x₀ σ(t)/σ₀.
    pub fn trajectory_closed_form(&self, x0: &Point<D>, t: f64) -> Point<D> {
        let stretch = self.width_unchecked(t) / self.sigma0;
        std::array::from_fn(|i| self.u[i] * t + x0[i] * stretch)
    }

    fn rk4(&self, x0: &Point<D>, t: f64, steps: usize) -> Point<D> {
        let dt = t / steps as f64;
        let mut x = *x0;
        let axpy = |x: &Point<D>, a: f64, k: &Point<D>| -> Point<D> { std::array::from_fn(|i| x[i] + a * k[i]) };
        for n in 0..steps {
            let tn = n as f64 * dt;
            let k1 = self.velocity(&x, tn);
            let k2 = self.velocity(&axpy(&x, 0.5 * dt, &k1), tn + 0.5 * dt);
            let k3 = self.velocity(&axpy(&x, 0.5 * dt, &k2), tn + 0.5 * dt);
            let k4 = self.velocity(&axpy(&x, dt, &k3), tn + dt);
            x = std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        }
        x
    }

    /// Integrates the guidance equation from x₀ at t = 0 with fixed-step RK4.
    ///
    /// Runs with 1000 and 2000 steps; the Richardson estimate |x₂ − x₁|/15
    /// must stay below `tol·(1 + |x|)`.
    pub fn trajectory_with_tolerance(&self, x0: &Point<D>, t: f64, tol: f64) -> Result<Point<D>> {
        let t = check_time(t)?;
        if t == 0.0 {
            return Ok(*x0);
        }
        const STEPS: usize = 1000;
        let coarse = self.rk4(x0, t, STEPS);
        let fine = self.rk4(x0, t, 2 * STEPS);
        let estimate = norm2(&sub(&fine, &coarse)).sqrt() / 15.0;
        let scale = 1.0 + norm2(&fine).sqrt();
        if estimate > tol * scale {
            return Err(Error::Numeric {
                detail: format!("trajectory from {x0:?} to t = {t} missed tolerance {tol:e}"),
                estimate,
            });
        }
        Ok(fine)
    }

    pub fn trajectory(&self, x0: &Point<D>, t: f64) -> Result<Point<D>> {
        self.trajectory_with_tolerance(x0, t, 1e-10)
    }

    /// Integrates every seed to time `t`.
    pub fn trajectory_fan(&self, seeds: &[Point<D>], t: f64, exec: Execution) -> Result<Vec<Point<D>>> {
        par::map(exec, seeds, |x0| self.trajectory(x0, t)).into_iter().collect()
    }

    pub fn classical_limit_check(&self, t: f64, eps: f64) -> Result<ClassicalLimit> {
        let t = check_time(t)?;
        let eps = ensure_positive("eps", eps)?;
        let ratio = self.spreading_ratio(t);
        Ok(ClassicalLimit {
            ratio,
            holds: ratio < eps,
        })
    }

    /// The non-spreading packet R₀(x) e^{iEt/ħ} with this packet's σ₀.
    pub fn stationary(&self, energy: f64) -> StationaryPacket<D> {
        StationaryPacket {
            sigma0: self.sigma0,
            energy,
            m: self.m,
            hbar: self.hbar,
        }
    }
}

impl Packet1d {
    /// Seeds at the mid-quantiles (i + ½)/n of R₀² = N(0, σ₀²).
    pub fn quantile_seeds(&self, n: usize) -> Vec<f64> {
        let normal = Normal::new(0.0, self.sigma0).expect("sigma0 validated positive");
        (0..n)
            .map(|i| normal.inverse_cdf((i as f64 + 0.5) / n as f64))
            .collect()
    }
}

/// ψ = R₀(x) e^{iEt/ħ}; the phase carries no spatial dependence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPacket<const D: usize> {
    pub sigma0: f64,
    pub energy: f64,
    pub m: f64,
    pub hbar: f64,
}

impl<const D: usize> StationaryPacket<D> {
    pub fn new(sigma0: f64, energy: f64, m: f64, hbar: f64) -> Result<Self> {
        if D != 1 && D != 3 {
            return Err(Error::domain("dim", format!("dimension must be 1 or 3, got {D}")));
        }
        Ok(Self {
            sigma0: ensure_positive("sigma0", sigma0)?,
            energy,
            m: ensure_positive("mass", m)?,
            hbar: ensure_positive("hbar", hbar)?,
        })
    }

    pub fn amplitude(&self, x: &Point<D>) -> f64 {
        let s2 = self.sigma0 * self.sigma0;
        (2.0 * PI * s2).powf(-(D as f64) / 4.0) * (-norm2(x) / (4.0 * s2)).exp()
    }

    pub fn psi(&self, x: &Point<D>, t: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude(x), self.energy * t / self.hbar)
    }

    pub fn phase_gradient(&self, _x: &Point<D>) -> Point<D> {
        [0.0; D]
    }

    /// −(ħ²/2m)∇²R₀/R₀ from the Gaussian's first and second log-derivatives.
    pub fn quantum_potential(&self, x: &Point<D>) -> f64 {
        // ∇ ln R₀ = −x/2σ₀², ∇² ln R₀ = −D/2σ₀², ∇²R/R = ∇² ln R + |∇ ln R|².
        let s2 = self.sigma0 * self.sigma0;
        let grad_ln2 = norm2(x) / (4.0 * s2 * s2);
        let lap_ln = -(D as f64) / (2.0 * s2);
        -self.hbar * self.hbar / (2.0 * self.m) * (lap_ln + grad_ln2)
    }
}
