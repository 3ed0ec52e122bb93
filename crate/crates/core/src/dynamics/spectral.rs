//! Fourier and sine transforms on uniform grids.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse FFT pair of a fixed length, normalised so that
/// `inverse(forward(x)) == x`.
#[derive(Clone)]
pub struct Fourier {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    n: usize,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("n", &self.n).finish()
    }
}

impl Fourier {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let s = 1.0 / self.n as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    /// Angular wavenumbers in FFT order for grid spacing `h`.
    pub fn wavenumbers(&self, h: f64) -> Vec<f64> {
        let n = self.n;
        let dk = 2.0 * PI / (n as f64 * h);
        (0..n).map(|j| if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 } * dk).collect()
    }

    /// d/dx of a periodic sample set.
    pub fn derivative(&self, values: &[Complex64], h: f64) -> Vec<Complex64> {
        let mut data = values.to_vec();
        self.forward(&mut data);
        let k = self.wavenumbers(h);
        let n = self.n;
        for (j, (z, kj)) in data.iter_mut().zip(&k).enumerate() {
            // The Nyquist mode has no odd partner; drop it.
            *z *= if n.is_multiple_of(2) && j == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, *kj)
            };
        }
        self.inverse(&mut data);
        data
    }

    /// Band-limited interpolation: samples of f(x + s) from samples of f(x).
    pub fn shift(&self, values: &[Complex64], h: f64, s: f64) -> Vec<Complex64> {
        let mut data = values.to_vec();
        self.forward(&mut data);
        let k = self.wavenumbers(h);
        let n = self.n;
        for (j, (z, kj)) in data.iter_mut().zip(&k).enumerate() {
            if n.is_multiple_of(2) && j == n / 2 {
                *z *= (kj * s).cos();
            } else {
                *z *= Complex64::from_polar(1.0, kj * s);
            }
        }
        self.inverse(&mut data);
        data
    }
}

/// Type-I discrete sine transform X_k = Σ_{n=1}^{N} v_n sin(πkn/(N+1)),
/// computed from an FFT of the odd extension of length 2(N+1).
#[derive(Clone, Debug)]
pub struct SineTransform {
    fourier: Fourier,
    n: usize,
}

impl SineTransform {
    pub fn new(n: usize) -> Self {
        Self {
            fourier: Fourier::new(2 * (n + 1)),
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalised transform; applying it twice multiplies by (N+1)/2.
    pub fn apply(&self, v: &[Complex64], scratch: &mut Vec<Complex64>) -> Vec<Complex64> {
        let n = self.n;
        let m = 2 * (n + 1);
        scratch.clear();
        scratch.resize(m, Complex64::new(0.0, 0.0));
        for (i, z) in v.iter().enumerate() {
            scratch[i + 1] = *z;
            scratch[m - 1 - i] = -*z;
        }
        self.fourier.forward.process(scratch);
        scratch[1..=n].iter().map(|y| Complex64::new(0.0, 0.5) * y).collect()
    }

    pub fn inverse(&self, x: &[Complex64], scratch: &mut Vec<Complex64>) -> Vec<Complex64> {
        let s = 2.0 / (self.n + 1) as f64;
        self.apply(x, scratch).into_iter().map(|z| z * s).collect()
    }

    /// Mode wavenumbers πk/((N+1)h), k = 1..N.
    pub fn wavenumbers(&self, h: f64) -> Vec<f64> {
        let l = (self.n + 1) as f64 * h;
        (1..=self.n).map(|k| PI * k as f64 / l).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sine_transform_matches_definition() {
        let n = 13;
        let v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64).sin(), 0.3 * i as f64))
            .collect();
        let dst = SineTransform::new(n);
        let mut scratch = Vec::new();
        let x = dst.apply(&v, &mut scratch);
        for k in 1..=n {
            let direct: Complex64 = (1..=n)
                .map(|j| v[j - 1] * (PI * (k * j) as f64 / (n + 1) as f64).sin())
                .sum();
            assert!((x[k - 1] - direct).norm() < 1e-12);
        }
        let back = dst.inverse(&x, &mut scratch);
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn spectral_derivative_and_shift() {
        let n = 64;
        let h = 2.0 * PI / n as f64;
        let f = Fourier::new(n);
        let v: Vec<Complex64> = (0..n).map(|j| c((3.0 * j as f64 * h).sin())).collect();
        let d = f.derivative(&v, h);
        for (j, z) in d.iter().enumerate() {
            assert!((z.re - 3.0 * (3.0 * j as f64 * h).cos()).abs() < 1e-12);
        }
        let s = f.shift(&v, h, 0.37);
        for (j, z) in s.iter().enumerate() {
            assert!((z.re - (3.0 * (j as f64 * h + 0.37)).sin()).abs() < 1e-12);
        }
        assert_eq!(f.wavenumbers(h)[n - 1], -1.0);
    }
}
