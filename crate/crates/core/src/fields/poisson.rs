use super::profile::{Geometry, RadialProfile};
use crate::error::{Error, Result};
use crate::units::PhysicalScales;

/// What sources the gravitational potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DensityConvention {
    /// ∇²φ = 4πG m ρ: the mass density of the particle.
    #[default]
    Mass,
    /// ∇²φ = 4πG ρ with the bare probability density.
    PaperLiteral,
}

/// Fraction of the norm allowed in the outer tenth of the grid.
const TAIL_LIMIT: f64 = 1e-3;

/// Gravitational potential per unit mass of a spherically symmetric density.
///
/// Solves the three-point discretisation of (1/r)(rφ)'' = 4πG·ρ_source with
/// rφ = 0 at the origin and d(rφ)/dr = 0 past the last node, which is the
/// exterior solution φ = −G M/r with φ(∞) = 0. The sweep is exact for the
/// discrete system: a thin shell gives −G M/r outside and a constant inside.
pub fn poisson_radial(p: &RadialProfile, scales: &PhysicalScales) -> Result<Vec<f64>> {
    poisson_radial_with(p, scales, DensityConvention::Mass)
}

pub fn poisson_radial_with(
    p: &RadialProfile,
    scales: &PhysicalScales,
    convention: DensityConvention,
) -> Result<Vec<f64>> {
    if p.geometry() != Geometry::Radial3d {
        return Err(Error::UnsupportedGeometry {
            geometry: p.geometry().name(),
            reason: "the radial Poisson solver needs spherical symmetry".into(),
        });
    }
    check_normalizable(p)?;
    let charge = match convention {
        DensityConvention::Mass => scales.m,
        DensityConvention::PaperLiteral => 1.0,
    };
    let density: Vec<f64> = p.amp().iter().map(|a| a * a).collect();
    Ok(solve_radial(
        p.r(),
        p.step(),
        &density,
        4.0 * std::f64::consts::PI * scales.g * charge,
    ))
}

/// φ for an arbitrary source density on rᵢ = (i+1)h, with ∇²φ = coupling·density.
pub(crate) fn solve_radial(r: &[f64], h: f64, density: &[f64], coupling: f64) -> Vec<f64> {
    let n = r.len();
    // D_i = w_i − w_{i−1} with w = rφ; D_n = 0 and D_{i+1} − D_i = h² r_i s_i.
    let mut slopes = vec![0.0; n];
    let mut acc = 0.0;
    for i in (0..n).rev() {
        acc -= h * h * r[i] * coupling * density[i];
        slopes[i] = acc;
    }
    let mut w = 0.0;
    slopes
        .iter()
        .zip(r)
        .map(|(d, ri)| {
            w += d;
            w / ri
        })
        .collect()
}

fn check_normalizable(p: &RadialProfile) -> Result<()> {
    let n = p.len();
    let tail_start = n - (n / 10).max(1);
    let tail: f64 = (tail_start..n).map(|i| p.weight(i) * p.amp()[i].powi(2)).sum();
    let total = p.total_norm();
    if !(total > 0.0) || tail > TAIL_LIMIT * total {
        return Err(Error::domain(
            "amp",
            format!(
                "profile is not normalizable on r <= {}: outer tenth of the grid holds {:.3e} of the norm",
                p.r_max(),
                if total > 0.0 { tail / total } else { f64::INFINITY }
            ),
        ));
    }
    Ok(())
}
