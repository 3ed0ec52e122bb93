//! The order-of-magnitude energy balance between quantum pressure and self-gravity.

use std::ops::{Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::PhysicalScales;

/// Width at which the model energy is stationary, with the energies there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub sigma_star: f64,
    /// Minimiser found numerically, independent of the closed form.
    pub sigma_numeric: f64,
    pub e_at_min: f64,
    /// Model value ħ²/2mσ*².
    pub mean_q_at_min: f64,
    /// Exact 3D Gaussian value 3ħ²/8mσ*² at the same width.
    pub gaussian_mean_q_at_min: f64,
}

/// ħ²/2mσ², the model average quantum potential.
pub fn model_mean_quantum_potential(sigma0: f64, scales: &PhysicalScales) -> f64 {
    scales.hbar * scales.hbar / (2.0 * scales.m * sigma0 * sigma0)
}

/// −Gm²/σ, the model average self-gravity.
pub fn model_self_gravity(sigma0: f64, scales: &PhysicalScales) -> f64 {
    -scales.g * scales.m * scales.m / sigma0
}

/// E(σ₀) = ħ²/2mσ₀² − Gm²/σ₀.
pub fn energy_functional(sigma0: f64, scales: &PhysicalScales) -> Result<f64> {
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::domain(
            "sigma0",
            format!("must be positive and finite, got {sigma0}"),
        ));
    }
    Ok(functional(sigma0, scales))
}

fn functional<T>(sigma: T, scales: &PhysicalScales) -> T
where
    T: Copy + Mul<Output = T> + Sub<Output = T>,
    f64: Div<T, Output = T>,
{
    let (a, b) = coefficients(scales);
    a / (sigma * sigma) - b / sigma
}

fn coefficients(scales: &PhysicalScales) -> (f64, f64) {
    (
        scales.hbar * scales.hbar / (2.0 * scales.m),
        scales.g * scales.m * scales.m,
    )
}

/// dE/dσ by the complex step, free of cancellation at any scale.
fn derivative(sigma: f64, scales: &PhysicalScales) -> f64 {
    let h = sigma * 1e-30;
    functional(Complex64::new(sigma, h), scales).im / h
}

/// Root of dE/dσ by bisection in log σ after geometric bracketing around `guess`.
fn minimise(guess: f64, scales: &PhysicalScales) -> Result<f64> {
    let (mut lo, mut hi) = (guess, guess);
    let mut expansions = 0;
    while derivative(lo, scales) >= 0.0 {
        lo /= 4.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::BracketNotFound {
                lo,
                hi,
                reason: "energy never decreases".into(),
            });
        }
    }
    while derivative(hi, scales) <= 0.0 {
        hi *= 4.0;
        expansions += 1;
        if expansions > 400 {
            return Err(Error::BracketNotFound {
                lo,
                hi,
                reason: "energy never increases".into(),
            });
        }
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if derivative(mid.exp(), scales) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

/// σ* = ħ²/Gm³, checked against a numerical minimisation of [`energy_functional`].
pub fn critical_width(scales: &PhysicalScales) -> Result<BalanceReport> {
    if !(scales.g > 0.0) {
        return Err(Error::domain("g", "a critical width needs G > 0"));
    }
    let (hbar, g, m) = (scales.hbar, scales.g, scales.m);
    let sigma_star = hbar / (g * m * m) * (hbar / m);
    // Start well away from the answer so the check is not trivially satisfied.
    let sigma_numeric = minimise(sigma_star * 37.0, scales)?;
    let rel = (sigma_numeric / sigma_star - 1.0).abs();
    if rel > 1e-10 {
        return Err(Error::Numeric {
            detail: "numerical minimiser disagrees with the closed-form critical width".into(),
            estimate: rel,
        });
    }
    Ok(BalanceReport {
        sigma_star,
        sigma_numeric,
        e_at_min: functional(sigma_star, scales),
        mean_q_at_min: model_mean_quantum_potential(sigma_star, scales),
        gaussian_mean_q_at_min: 0.75 * model_mean_quantum_potential(sigma_star, scales),
    })
}
