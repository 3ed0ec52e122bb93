#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Monte Carlo estimate of −Gm²⟨1/|x − x′|⟩ for two independent draws from
/// an isotropic normal of standard deviation `sigma` in 3D. Returns the
/// mean and its standard error.
pub fn mc_self_gravity(sigma: f64, m: f64, g: f64, pairs: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).unwrap();
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..pairs {
        let d: [f64; 3] = std::array::from_fn(|_| normal.sample(&mut rng) - normal.sample(&mut rng));
        let u = -g * m * m / (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        sum += u;
        sum2 += u * u;
    }
    let n = pairs as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean) * n / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Q(r) = (ħ²/4mσ²)(3 − r²/2σ²) for the 3D Gaussian with |ψ|² ∝ exp(−r²/2σ²).
pub fn gaussian_q_3d(r: f64, sigma: f64, m: f64, hbar: f64) -> f64 {
    hbar * hbar / (4.0 * m * sigma * sigma) * (3.0 - r * r / (2.0 * sigma * sigma))
}

/// Log₂ ratios of successive errors under halving.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:2} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

pub fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn fixed(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", parts.join(", "))
}
