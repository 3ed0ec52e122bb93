use super::{eq33_residual, Eq33Mode, GridConfig, SolverId, StationarySolution};
use crate::error::{Error, Result};
use crate::fields::{poisson_radial_with, DensityConvention, RadialProfile};
use crate::units::PhysicalScales;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiteralOptions {
    /// Central curvature (∇²√ρ/√ρ)(0) in units of ℓ⁻², ℓ = (κρ₀)^(-1/4),
    /// κ = 8πGm²/ħ². Must be negative for the profile to close.
    pub p0: f64,
    /// RK4 substeps per grid interval.
    pub substeps: usize,
    /// Bound on the relative fourth-order residual over the bulk.
    pub tol: f64,
    /// Nodes with √ρ below this fraction of √ρ₀ are outside the bulk on
    /// which the residual is measured.
    pub bulk_floor: f64,
}

impl Default for LiteralOptions {
    fn default() -> Self {
        Self {
            p0: -1.0,
            substeps: 8,
            tol: 1e-5,
            bulk_floor: 1e-2,
        }
    }
}

/// (A, A′, P, P′) with A = √ρ and P = ∇²A/A.
type State = [f64; 4];

fn rhs(r: f64, y: &State, kappa: f64) -> State {
    let (a, da, p, dp) = (y[0], y[1], y[2], y[3]);
    if r == 0.0 {
        // Regular limits: f″ + 2f′/r → 3f″(0).
        [da, p * a / 3.0, dp, -kappa * a * a / 3.0]
    } else {
        [da, p * a - 2.0 * da / r, dp, -kappa * a * a - 2.0 * dp / r]
    }
}

fn rk4(r: f64, y: &State, dr: f64, kappa: f64) -> State {
    let add = |y: &State, k: &State, s: f64| -> State { std::array::from_fn(|i| y[i] + s * k[i]) };
    let k1 = rhs(r, y, kappa);
    let k2 = rhs(r + 0.5 * dr, &add(y, &k1, 0.5 * dr), kappa);
    let k3 = rhs(r + 0.5 * dr, &add(y, &k2, 0.5 * dr), kappa);
    let k4 = rhs(r + dr, &add(y, &k3, dr), kappa);
    std::array::from_fn(|i| y[i] + dr / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Spherical solution of (ħ²/2m²)∇²(∇²√ρ/√ρ) = −4πGρ with ρ(0) = `rho0`.
///
/// Integrates the equivalent pair ∇²A = P·A, ∇²P = −κA² outward from the
/// origin with A′(0) = P′(0) = 0. With P(0) < 0 the amplitude decreases
/// monotonically to a first zero, which bounds a compact bulk; the profile
/// is set to zero beyond it.
pub fn solve_eq33_literal(
    scales: &PhysicalScales,
    rho0: f64,
    grid: &GridConfig,
    opts: &LiteralOptions,
) -> Result<StationarySolution> {
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::domain(
            "rho0",
            format!("central density must be positive, got {rho0}"),
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {}", opts.tol)));
    }
    if opts.substeps == 0 {
        return Err(Error::domain("substeps", "must be at least 1"));
    }
    let kappa = 8.0 * PI * scales.g * scales.m * scales.m / (scales.hbar * scales.hbar);
    let ell = (kappa * rho0).powf(-0.25);
    let h = grid.step();
    let n = grid.nodes;
    let dr = h / opts.substeps as f64;

    let mut y: State = [rho0.sqrt(), 0.0, opts.p0 / (ell * ell), 0.0];
    let mut amp = vec![0.0; n];
    let mut surface = None;
    let mut r = 0.0;
    for (i, slot) in amp.iter_mut().enumerate() {
        for _ in 0..opts.substeps {
            y = rk4(r, &y, dr, kappa);
            r += dr;
        }
        r = (i + 1) as f64 * h;
        if y[0] <= 0.0 {
            surface = Some(i);
            break;
        }
        if y[1] >= 0.0 {
            return Err(Error::domain(
                "p0",
                format!("amplitude stops decreasing at r = {r:.6e}; the central curvature must be negative"),
            ));
        }
        *slot = y[0];
    }
    let Some(surface) = surface else {
        return Err(Error::domain(
            "r_max",
            format!(
                "solution is not localized: sqrt(rho) has not reached zero by r_max = {:.6e} \
                 (bulk scale {:.6e}); increase r_max or choose a larger rho0",
                grid.r_max, ell
            ),
        ));
    };
    if surface < 9 {
        return Err(Error::domain(
            "nodes",
            format!("bulk spans only {surface} nodes; refine the grid"),
        ));
    }

    let bulk_len = amp.iter().take_while(|&&a| a >= opts.bulk_floor * amp[0]).count();
    let bulk = RadialProfile::radial(h, amp[..bulk_len].to_vec())?;
    let source = 4.0 * PI * scales.g * rho0;
    let residual_eq33 = eq33_residual(&bulk, scales, Eq33Mode::Literal)? / source;
    if residual_eq33 > opts.tol {
        return Err(Error::Numeric {
            detail: format!(
                "fourth-order residual over the bulk exceeds tol {:.1e}; refine the grid",
                opts.tol
            ),
            estimate: residual_eq33,
        });
    }
    let profile = RadialProfile::radial(h, amp)?;
    let phi = poisson_radial_with(&profile, scales, DensityConvention::PaperLiteral)?;
    Ok(StationarySolution {
        profile,
        eigenvalue: None,
        phi,
        residual_hj: None,
        residual_eq33,
        solver: SolverId::InitialValue,
        iterations: n.min(surface + 1) * opts.substeps,
    })
}
