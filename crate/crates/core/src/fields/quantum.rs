use super::profile::{gradient, laplacian, RadialProfile};
use crate::error::{Error, Result};
use crate::units::PhysicalScales;

/// Q = −(ħ²/2m) ∇²R / R on the profile's grid.
///
/// Fails on the first node where the amplitude vanishes.
pub fn quantum_potential_grid(p: &RadialProfile, scales: &PhysicalScales) -> Result<Vec<f64>> {
    if p.len() < 5 {
        return Err(Error::domain("r", "quantum potential needs at least 5 grid nodes"));
    }
    if let Some(node) = p.amp().iter().position(|&a| a <= 0.0) {
        return Err(Error::Singularity { node, r: p.r()[node] });
    }
    let lap = laplacian(p.amp(), p.step(), p.r(), p.geometry());
    let k = -scales.hbar * scales.hbar / (2.0 * scales.m);
    Ok(lap.iter().zip(p.amp()).map(|(l, a)| k * l / a).collect())
}

/// Like [`quantum_potential_grid`] but yields NaN wherever the amplitude is
/// below `floor · max(amp)` instead of failing.
pub fn quantum_potential_masked(p: &RadialProfile, scales: &PhysicalScales, floor: f64) -> Vec<f64> {
    let max = p.amp().iter().cloned().fold(0.0, f64::max);
    let lap = laplacian(p.amp(), p.step(), p.r(), p.geometry());
    let k = -scales.hbar * scales.hbar / (2.0 * scales.m);
    lap.iter()
        .zip(p.amp())
        .map(|(l, &a)| {
            if a > floor * max && a > 0.0 {
                k * l / a
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// f = −dQ/dr (or −dQ/dx on a line).
pub fn quantum_force_grid(q: &[f64], h: f64) -> Result<Vec<f64>> {
    if q.len() < 5 {
        return Err(Error::domain("q", "quantum force needs at least 5 grid nodes"));
    }
    Ok(gradient(q, h).into_iter().map(|g| -g).collect())
}

/// Convenience: the force on the profile's own grid.
pub fn quantum_force_of(p: &RadialProfile, scales: &PhysicalScales) -> Result<Vec<f64>> {
    let q = quantum_potential_grid(p, scales)?;
    quantum_force_grid(&q, p.step())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::Packet3d;

    #[test]
    fn constant_amplitude_has_no_quantum_potential() {
        let s = PhysicalScales::dimensionless();
        let p = RadialProfile::radial(0.1, vec![0.3; 50]).unwrap();
        let q = quantum_potential_grid(&p, &s).unwrap();
        assert!(q.iter().all(|v| v.abs() < 1e-12));
        let l = RadialProfile::line(-1.0, 0.1, vec![0.3; 21]).unwrap();
        assert!(quantum_potential_grid(&l, &s).unwrap().iter().all(|v| v.abs() < 1e-12));
        assert!(quantum_force_grid(&[2.0; 9], 0.1)
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn exponential_profile() {
        // u = e^{-r}: ∇²u/u = 1 − 2/r. The cusp at the origin makes the error
        // first order within a few nodes of it, so compare on r ≥ 0.5.
        let s = PhysicalScales::natural(1.5).unwrap();
        let max_err = |h: f64| {
            let p = RadialProfile::radial_from_fn(h, (10.0 / h) as usize, |r| (-r).exp()).unwrap();
            let q = quantum_potential_grid(&p, &s).unwrap();
            p.r()
                .iter()
                .zip(&q)
                .filter(|(&r, _)| r >= 0.5)
                .map(|(&r, &v)| (v + 1.0 / (2.0 * 1.5) * (1.0 - 2.0 / r)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (max_err(0.01), max_err(0.005));
        assert!(e1 < 1e-3, "{e1}");
        assert!((e1 / e2).log2() > 1.9, "{e1} {e2}");
    }

    #[test]
    fn scale_invariance() {
        let s = PhysicalScales::dimensionless();
        let p = RadialProfile::radial_from_fn(0.05, 200, |r| (-r * r / 3.0).exp() * (1.0 + 0.2 * r)).unwrap();
        let q1 = quantum_potential_grid(&p, &s).unwrap();
        let q2 = quantum_potential_grid(&p.scaled(37.5).unwrap(), &s).unwrap();
        for (a, b) in q1.iter().zip(&q2) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn singular_node_is_reported() {
        let s = PhysicalScales::dimensionless();
        let mut amp = vec![1.0; 20];
        amp[7] = 0.0;
        let p = RadialProfile::radial(0.1, amp).unwrap();
        match quantum_potential_grid(&p, &s) {
            Err(Error::Singularity { node, .. }) => assert_eq!(node, 7),
            other => panic!("expected singularity, got {other:?}"),
        }
        let masked = quantum_potential_masked(&p, &s, 1e-8);
        assert!(masked[7].is_nan() && masked[2].is_finite());
    }

    #[test]
    fn gaussian_force_matches_closed_form() {
        let s = PhysicalScales::dimensionless();
        let pk = Packet3d::at_rest(1.0, 1.0, 1.0).unwrap();
        let err = |h: f64| {
            let p = RadialProfile::radial_from_fn(h, (7.0 / h) as usize, |r| {
                pk.amplitude_phase(&[r, 0.0, 0.0], 0.0).unwrap().0
            })
            .unwrap();
            let f = quantum_force_of(&p, &s).unwrap();
            p.r()
                .iter()
                .zip(&f)
                .map(|(&r, &v)| (v - pk.quantum_force(&[r, 0.0, 0.0], 0.0).unwrap()[0]).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.02), err(0.01));
        assert!((e1 / e2).log2() > 1.9, "{e1} {e2}");
    }

    #[test]
    fn force_is_odd_on_symmetric_line_profile() {
        let s = PhysicalScales::dimensionless();
        let p = RadialProfile::line_from_fn(-5.0, 0.05, 201, |x| (-x * x / 2.0).exp()).unwrap();
        let f = quantum_force_of(&p, &s).unwrap();
        let n = f.len();
        for i in 0..n {
            assert!((f[i] + f[n - 1 - i]).abs() < 1e-9 * (1.0 + f[i].abs()));
        }
    }
}
