use crate::error::{Error, Result};
use crate::fields::{laplacian4, pair_energy, quantum_potential_grid, Averages, Geometry, RadialProfile};
use crate::units::PhysicalScales;

/// Which form of the fourth-order stationary condition to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eq33Mode {
    /// (ħ²/2m²)∇²(∇²√ρ/√ρ) + 4πGρ, as written with the probability density.
    Literal,
    /// ∇²Q + 4πG m²ρ, the Laplacian of Q + mφ = E.
    Physical,
}

impl std::fmt::Display for Eq33Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Physical => "physical",
        })
    }
}

impl std::str::FromStr for Eq33Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "physical" => Ok(Self::Physical),
            other => Err(Error::Config(format!(
                "unknown mode '{other}' (expected literal or physical)"
            ))),
        }
    }
}

/// Pointwise residual with fourth-order stencils; NaN where the stencils do
/// not fit (the outer four nodes, or both ends on a line).
pub fn eq33_residual_field(p: &RadialProfile, scales: &PhysicalScales, mode: Eq33Mode) -> Result<Vec<f64>> {
    if p.len() < 9 {
        return Err(Error::domain(
            "r",
            format!("residual needs at least 9 grid nodes, got {}", p.len()),
        ));
    }
    if let Some(node) = p.amp().iter().position(|&a| a <= 0.0) {
        return Err(Error::Singularity { node, r: p.r()[node] });
    }
    let (h, r, g) = (p.step(), p.r(), p.geometry());
    let curvature: Vec<f64> = laplacian4(p.amp(), h, r, g)
        .iter()
        .zip(p.amp())
        .map(|(l, a)| l / a)
        .collect();
    let outer = laplacian4(&curvature, h, r, g);
    let (hbar, m, big_g) = (scales.hbar, scales.m, scales.g);
    let pi4 = 4.0 * std::f64::consts::PI;
    Ok(outer
        .iter()
        .zip(p.amp())
        .map(|(l, a)| match mode {
            Eq33Mode::Literal => hbar * hbar / (2.0 * m * m) * l + pi4 * big_g * a * a,
            Eq33Mode::Physical => -hbar * hbar / (2.0 * m) * l + pi4 * big_g * m * m * a * a,
        })
        .collect())
}

/// Max-norm of [`eq33_residual_field`] over the nodes where it is defined.
pub fn eq33_residual(p: &RadialProfile, scales: &PhysicalScales, mode: Eq33Mode) -> Result<f64> {
    Ok(eq33_residual_field(p, scales, mode)?
        .into_iter()
        .filter(|v| !v.is_nan())
        .map(f64::abs)
        .fold(0.0, f64::max))
}

/// max |Q + mφ − E| over the interior nodes, in units of the energy scale.
pub fn hj_residual(p: &RadialProfile, phi: &[f64], energy: f64, scales: &PhysicalScales) -> Result<f64> {
    let q = quantum_potential_grid(p, scales)?;
    let n = q.len();
    Ok((1..n - 1)
        .map(|i| (q[i] + scales.m * phi[i] - energy).abs())
        .fold(0.0, f64::max)
        / scales.energy_scale)
}

/// |2⟨Q⟩ + E_pair| / |E_pair| with E_pair = ½∫(mρ)φ.
pub fn virial_ratio(p: &RadialProfile, scales: &PhysicalScales) -> Result<f64> {
    if p.geometry() != Geometry::Radial3d {
        return Err(Error::UnsupportedGeometry {
            geometry: p.geometry().name(),
            reason: "the virial check uses the radial Poisson solver".into(),
        });
    }
    let q = p.mean_quantum_potential(scales)?;
    let pair = pair_energy(p, scales)?;
    Ok((2.0 * q + pair).abs() / pair.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gaussian(sigma: f64, h: f64) -> RadialProfile {
        RadialProfile::radial_from_fn(h, (6.0 * sigma / h) as usize, |r| {
            (2.0 * PI * sigma * sigma).powf(-0.75) * (-r * r / (4.0 * sigma * sigma)).exp()
        })
        .unwrap()
    }

    #[test]
    fn gaussian_biharmonic_term() {
        // ∇²(∇²A/A) = 3/(2σ⁴) for A ∝ exp(−r²/4σ²).
        let sigma = 0.8;
        let p = gaussian(sigma, 0.01);
        let free = PhysicalScales::natural(1.3).unwrap().without_gravity();
        let lit = eq33_residual_field(&p, &free, Eq33Mode::Literal).unwrap();
        let phys = eq33_residual_field(&p, &free, Eq33Mode::Physical).unwrap();
        let m = 1.3;
        let lit_exact = 3.0 / (4.0 * m * m * sigma.powi(4));
        let phys_exact = -3.0 / (4.0 * m * sigma.powi(4));
        for (i, (a, b)) in lit.iter().zip(&phys).enumerate() {
            if i + 4 >= p.len() {
                assert!(a.is_nan() && b.is_nan());
            } else {
                assert!((a / lit_exact - 1.0).abs() < 1e-5, "{i}: {a}");
                assert!((b / phys_exact - 1.0).abs() < 1e-5, "{i}: {b}");
            }
        }
        // With gravity the source term is added pointwise.
        let s = PhysicalScales::natural(1.3).unwrap();
        let with_g = eq33_residual_field(&p, &s, Eq33Mode::Literal).unwrap();
        for (v, a) in with_g.iter().zip(p.amp()).take(p.len() - 4) {
            let expected = lit_exact + 4.0 * PI * a.powi(2);
            assert!((v / expected - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn residual_needs_nine_nodes() {
        let p = RadialProfile::radial(0.1, vec![1.0; 8]).unwrap();
        let s = PhysicalScales::dimensionless();
        assert!(matches!(
            eq33_residual(&p, &s, Eq33Mode::Physical),
            Err(Error::Domain { .. })
        ));
        assert!("sideways".parse::<Eq33Mode>().is_err());
    }
}
