use num_complex::Complex64;

use super::spectral::Fourier;
use super::Grid;
use crate::error::{Error, Result};

/// Frame change between a uniform field g (potential −m·g·x) and free fall,
/// with the free-fall coordinate X = x − ½gt².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// ψ(x) → Ψ(X) = exp[(im/ħ)(g²t³/6 − x·g·t)] ψ(x).
    ToFree,
    /// Ψ(X) → ψ(x) = exp[(im/ħ)(g²t³/3 + X·g·t)] Ψ(X).
    ToField,
}

/// Field samples together with the coordinates they now belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedField {
    pub coords: Vec<f64>,
    pub psi: Vec<Complex64>,
}

/// Applies the frame-change phase pointwise. `coords` are x for
/// [`Direction::ToFree`] and X for [`Direction::ToField`]; the returned
/// coordinates are in the other frame.
pub fn equivalence_transform(
    psi: &[Complex64],
    coords: &[f64],
    g: f64,
    t: f64,
    m: f64,
    hbar: f64,
    direction: Direction,
) -> ShiftedField {
    let k = m / hbar;
    let drop = 0.5 * g * t * t;
    let (phase, shift): (Box<dyn Fn(f64) -> f64>, f64) = match direction {
        Direction::ToFree => (Box::new(|x| k * (g * g * t.powi(3) / 6.0 - x * g * t)), -drop),
        Direction::ToField => (Box::new(|x| k * (g * g * t.powi(3) / 3.0 + x * g * t)), drop),
    };
    ShiftedField {
        coords: coords.iter().map(|x| x + shift).collect(),
        psi: psi
            .iter()
            .zip(coords)
            .map(|(z, &x)| z * Complex64::from_polar(1.0, phase(x)))
            .collect(),
    }
}

/// Ψ(X, t) on the nodes of `grid` (read as X) from the field-frame ψ(·, t)
/// on the same grid. ψ is needed at x = X + ½gt², which falls between nodes,
/// so it is shifted with band-limited interpolation first.
pub fn free_frame_on_grid(psi: &[Complex64], grid: &Grid, g: f64, t: f64, m: f64, hbar: f64) -> Result<Vec<Complex64>> {
    let Grid::Line { h, n, .. } = *grid else {
        return Err(Error::UnsupportedGeometry {
            geometry: "radial3d",
            reason: "the frame change acts along a line".into(),
        });
    };
    let shifted = Fourier::new(n).shift(psi, h, 0.5 * g * t * t);
    let x: Vec<f64> = grid.coords().iter().map(|&big| big + 0.5 * g * t * t).collect();
    Ok(equivalence_transform(&shifted, &x, g, t, m, hbar, Direction::ToFree).psi)
}

/// |iħ∂ₜΨ + (ħ²/2m)∂²_XΨ| at interior nodes, from three time levels
/// t − δ, t, t + δ, with second-order central differences in X and t.
/// The two nodes at each end are left at zero.
pub fn free_equation_residual(
    before: &[Complex64],
    at: &[Complex64],
    after: &[Complex64],
    h: f64,
    delta: f64,
    m: f64,
    hbar: f64,
) -> Vec<f64> {
    let n = at.len();
    let mut out = vec![0.0; n];
    for j in 2..n.saturating_sub(2) {
        let dt = (after[j] - before[j]) / (2.0 * delta);
        let dxx = (at[j + 1] - 2.0 * at[j] + at[j - 1]) / (h * h);
        out[j] = (Complex64::new(0.0, hbar) * dt + hbar * hbar / (2.0 * m) * dxx).norm();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Vec<f64>, Vec<Complex64>) {
        let x: Vec<f64> = (0..64).map(|i| -4.0 + i as f64 * 0.125).collect();
        let psi = x.iter().map(|x| Complex64::new((-x * x).exp(), 0.3 * x)).collect();
        (x, psi)
    }

    #[test]
    fn zero_field_is_identity() {
        let (x, psi) = sample();
        let out = equivalence_transform(&psi, &x, 0.0, 1.7, 1.0, 1.0, Direction::ToFree);
        assert_eq!(out.psi, psi);
        assert_eq!(out.coords, x);
    }

    #[test]
    fn pure_phase_and_round_trip() {
        let (x, psi) = sample();
        let free = equivalence_transform(&psi, &x, 2.3, 1.1, 0.7, 1.3, Direction::ToFree);
        for (a, b) in free.psi.iter().zip(&psi) {
            assert!((a.norm() - b.norm()).abs() <= 4.0 * f64::EPSILON * b.norm());
        }
        let back = equivalence_transform(&free.psi, &free.coords, 2.3, 1.1, 0.7, 1.3, Direction::ToField);
        for ((a, b), (xa, xb)) in back.psi.iter().zip(&psi).zip(back.coords.iter().zip(&x)) {
            assert!((a - b).norm() < 1e-13);
            assert!((xa - xb).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_vanishes_on_a_plane_wave() {
        // Ψ = exp(i(kX − ħk²t/2m)) solves the free equation exactly; the
        // discrete residual is the known stencil error.
        let (k, m, hbar, h, d) = (1.3, 2.0, 1.0, 0.01, 1e-3);
        let w = hbar * k * k / (2.0 * m);
        let wave = |t: f64| -> Vec<Complex64> {
            (0..50)
                .map(|j| Complex64::from_polar(1.0, k * j as f64 * h - w * t))
                .collect()
        };
        let r = free_equation_residual(&wave(-d), &wave(0.0), &wave(d), h, d, m, hbar);
        let expected = (hbar * ((w * d).sin() / d - w)
            + hbar * hbar / (2.0 * m) * (k * k - (2.0 - 2.0 * (k * h).cos()) / (h * h)))
            .abs();
        for v in &r[2..48] {
            assert!((v - expected).abs() < 1e-9);
        }
    }
}
