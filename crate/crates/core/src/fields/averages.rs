//! Ensemble averages of the quantum potential and of the self-gravity energy.

use super::poisson::poisson_radial;
use super::profile::{Geometry, RadialProfile};
use super::quantum::quantum_potential_grid;
use crate::error::{Error, Result};
use crate::packet::{Packet1d, Packet3d};
use crate::par::{self, Execution};
use crate::quadrature::GaussHermite;
use crate::units::PhysicalScales;

const NORM_TOLERANCE: f64 = 1e-6;
const HERMITE_NODES: usize = 64;

/// Sources of a probability density that can be averaged over.
pub trait Averages {
    /// ⟨Q⟩ = ∫ ρ Q.
    fn mean_quantum_potential(&self, scales: &PhysicalScales) -> Result<f64>;

    /// ⟨U_g⟩ = −G m² ∬ ρ(x) ρ(x′)/|x − x′|, with no ½ for double counting.
    fn mean_self_gravity(&self, scales: &PhysicalScales) -> Result<f64>;
}

pub fn mean_quantum_potential<A: Averages + ?Sized>(a: &A, scales: &PhysicalScales) -> Result<f64> {
    a.mean_quantum_potential(scales)
}

pub fn mean_self_gravity<A: Averages + ?Sized>(a: &A, scales: &PhysicalScales) -> Result<f64> {
    a.mean_self_gravity(scales)
}

/// Pairwise gravitational energy ½ ∫ (mρ) φ, the quantity entering the virial relation.
pub fn pair_energy(p: &RadialProfile, scales: &PhysicalScales) -> Result<f64> {
    Ok(0.5 * p.mean_self_gravity(scales)?)
}

fn check_normalized(p: &RadialProfile) -> Result<()> {
    let norm = p.total_norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::domain(
            "amp",
            format!("average needs a normalised profile, measured norm {norm}"),
        ));
    }
    Ok(())
}

impl Averages for RadialProfile {
    fn mean_quantum_potential(&self, scales: &PhysicalScales) -> Result<f64> {
        check_normalized(self)?;
        let q = quantum_potential_grid(self, scales)?;
        Ok(self.expectation(&q))
    }

    fn mean_self_gravity(&self, scales: &PhysicalScales) -> Result<f64> {
        if self.geometry() != Geometry::Radial3d {
            return Err(Error::UnsupportedGeometry {
                geometry: self.geometry().name(),
                reason: "the 1/|x - x'| kernel diverges logarithmically in one dimension".into(),
            });
        }
        check_normalized(self)?;
        let phi = poisson_radial(self, scales)?;
        Ok(scales.m * self.expectation(&phi))
    }
}

/// Samples a 3D packet at rest onto a radial grid fine enough for the
/// second-order Poisson solve (h = σ₀/400, r_max = 12σ₀).
pub fn packet_profile(p: &Packet3d) -> Result<RadialProfile> {
    let h = p.sigma0 / 400.0;
    RadialProfile::radial_from_fn(h, 4800, |r| {
        p.amplitude_phase(&[r, 0.0, 0.0], 0.0).map(|v| v.0).unwrap_or(0.0)
    })
}

impl Averages for Packet1d {
    /// Gauss–Hermite quadrature over R₀² = N(ut, σ²); uses the packet's own ħ and m.
    fn mean_quantum_potential(&self, _scales: &PhysicalScales) -> Result<f64> {
        let gh = GaussHermite::new(HERMITE_NODES);
        gh.normal_expectation(0.0, self.sigma0, |x| {
            self.quantum_potential(&[x], 0.0).unwrap_or(f64::NAN)
        })
        .pipe_finite()
    }

    fn mean_self_gravity(&self, _scales: &PhysicalScales) -> Result<f64> {
        Err(Error::UnsupportedGeometry {
            geometry: "line1d",
            reason: "the 1/|x - x'| kernel diverges logarithmically in one dimension".into(),
        })
    }
}

impl Averages for Packet3d {
    /// Tensor-product Gauss–Hermite quadrature, 64 nodes per axis.
    fn mean_quantum_potential(&self, _scales: &PhysicalScales) -> Result<f64> {
        mean_quantum_potential_3d(self, Execution::default())
    }

    /// G from `scales`, the mass from the packet; evaluated through the radial
    /// Poisson solver on [`packet_profile`].
    fn mean_self_gravity(&self, scales: &PhysicalScales) -> Result<f64> {
        let profile = packet_profile(self)?.normalized()?;
        let s = scales.with_mass(self.m)?;
        profile.mean_self_gravity(&s)
    }
}

/// The 3D Gauss–Hermite average with an explicit execution strategy.
pub fn mean_quantum_potential_3d(p: &Packet3d, exec: Execution) -> Result<f64> {
    let gh = GaussHermite::new(HERMITE_NODES);
    let n = gh.nodes.len();
    let scale = std::f64::consts::SQRT_2 * p.sigma0;
    let norm = std::f64::consts::PI.powf(1.5);
    let planes = par::map_range(exec, n, |i| {
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                let x = [scale * gh.nodes[i], scale * gh.nodes[j], scale * gh.nodes[k]];
                let w = gh.weights[i] * gh.weights[j] * gh.weights[k];
                acc += w * p.quantum_potential(&x, 0.0).unwrap_or(f64::NAN);
            }
        }
        acc
    });
    (planes.iter().sum::<f64>() / norm).pipe_finite()
}

trait PipeFinite {
    fn pipe_finite(self) -> Result<f64>;
}

impl PipeFinite for f64 {
    fn pipe_finite(self) -> Result<f64> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Numeric {
                detail: "quadrature produced a non-finite value".into(),
                estimate: f64::INFINITY,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::linear_fit;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_quantum_potential_averages() {
        let s = PhysicalScales::dimensionless();
        let p1 = Packet1d::at_rest(1.3, 0.7, 1.1).unwrap();
        let exact1 = p1.hbar.powi(2) / (8.0 * p1.m * p1.sigma0.powi(2));
        assert!((p1.mean_quantum_potential(&s).unwrap() / exact1 - 1.0).abs() < 1e-12);
        let p3 = Packet3d::at_rest(1.3, 0.7, 1.1).unwrap();
        let exact3 = 3.0 * p3.hbar.powi(2) / (8.0 * p3.m * p3.sigma0.powi(2));
        assert!((p3.mean_quantum_potential(&s).unwrap() / exact3 - 1.0).abs() < 1e-12);
        // Order-of-magnitude form ħ²/2mσ₀² is within a factor 4.
        let rough = p1.hbar.powi(2) / (2.0 * p1.m * p1.sigma0.powi(2));
        assert!(rough / p1.mean_quantum_potential(&s).unwrap() <= 4.0 + 1e-12);
    }

    #[test]
    fn grid_average_matches_quadrature() {
        let s = PhysicalScales::dimensionless();
        let p3 = Packet3d::at_rest(1.0, 1.0, 1.0).unwrap();
        let prof = packet_profile(&p3).unwrap().normalized().unwrap();
        let grid = prof.mean_quantum_potential(&s).unwrap();
        assert!((grid / 0.375 - 1.0).abs() < 1e-4, "{grid}");
    }

    #[test]
    fn dilation_slopes() {
        let s = PhysicalScales::dimensionless();
        let base = RadialProfile::radial_from_fn(0.01, 1500, |r| (-r).exp() * (1.0 + r))
            .unwrap()
            .normalized()
            .unwrap();
        let lambdas = [0.5, 0.8, 1.0, 1.6, 2.5];
        let (mut lx, mut lq, mut lu) = (vec![], vec![], vec![]);
        for &l in &lambdas {
            let p = base.dilated(l).unwrap();
            lx.push(l.ln());
            lq.push(p.mean_quantum_potential(&s).unwrap().ln());
            lu.push((-p.mean_self_gravity(&s).unwrap()).ln());
        }
        let (sq, _, _) = linear_fit(&lx, &lq);
        let (su, _, _) = linear_fit(&lx, &lu);
        assert!((sq + 2.0).abs() < 1e-3, "{sq}");
        assert!((su + 1.0).abs() < 1e-3, "{su}");
    }

    #[test]
    fn gaussian_self_gravity() {
        let s = PhysicalScales::dimensionless();
        for sigma in [0.5, 1.0, 2.0] {
            let p = Packet3d::at_rest(sigma, 1.0, 1.0).unwrap();
            let u = p.mean_self_gravity(&s).unwrap();
            let exact = -1.0 / (PI.sqrt() * sigma);
            assert!((u / exact - 1.0).abs() < 1e-5, "{u} vs {exact}");
        }
    }

    #[test]
    fn two_shells() {
        // Shells of weight w_a, w_b at radii a < b; the cross term of the
        // double integral is 2 × (−G m² w_a w_b / b).
        let s = PhysicalScales::natural(1.4).unwrap();
        let h = 0.01;
        let (ka, kb) = (100, 400);
        let (wa, wb) = (0.3, 0.7);
        let shell = |k: usize, w: f64| {
            let mut amp = vec![0.0; 1000];
            amp[k] = (w / (4.0 * PI * ((k + 1) as f64 * h).powi(2) * h)).sqrt();
            amp
        };
        let a = shell(ka, wa);
        let b = shell(kb, wb);
        let both: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x * x + y * y).sqrt()).collect();
        let ug = |amp: Vec<f64>| {
            let p = RadialProfile::radial(h, amp).unwrap();
            let phi = poisson_radial(&p, &s).unwrap();
            s.m * p.expectation(&phi)
        };
        let cross = ug(both) - ug(a) - ug(b);
        let rb = (kb + 1) as f64 * h;
        let expected = 2.0 * (-s.g * s.m * s.m * wa * wb / rb);
        assert!((cross / expected - 1.0).abs() < 1e-12, "{cross} vs {expected}");
    }

    #[test]
    fn errors() {
        let s = PhysicalScales::dimensionless();
        let line = RadialProfile::line_from_fn(-5.0, 0.05, 201, |x| (-x * x).exp()).unwrap();
        assert!(matches!(
            line.mean_self_gravity(&s),
            Err(Error::UnsupportedGeometry { .. })
        ));
        assert!(Packet1d::at_rest(1.0, 1.0, 1.0).unwrap().mean_self_gravity(&s).is_err());
        let unnorm = RadialProfile::radial_from_fn(0.05, 300, |r| (-r).exp()).unwrap();
        match unnorm.mean_quantum_potential(&s) {
            Err(Error::Domain { reason, .. }) => assert!(reason.contains("measured norm")),
            other => panic!("{other:?}"),
        }
    }
}
