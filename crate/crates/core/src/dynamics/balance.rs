use std::f64::consts::PI;

use super::Evolution;
use crate::error::{Error, Result};
use crate::fields::{laplacian4, solve_radial, Geometry, RadialProfile};
use crate::units::PhysicalScales;

/// Nodes with amp below this fraction of the maximum are left out.
const FLOOR: f64 = 1e-3;
/// A window is the run of nodes around the best one whose imbalance stays
/// below this fraction of the larger force.
const WINDOW_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceWindow {
    /// Radius with the smallest imbalance relative to the larger force.
    pub best_r: f64,
    pub best_ratio: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceBalance {
    pub r: Vec<f64>,
    /// −dQ/dr, NaN where not evaluated.
    pub f_q: Vec<f64>,
    /// −m dφ/dr.
    pub f_g: Vec<f64>,
    /// f_q + f_g.
    pub physical: Vec<f64>,
    /// f_q − f_g.
    pub literal: Vec<f64>,
    pub max_physical: f64,
    pub max_literal: f64,
    /// Σρ|imbalance| / Σρ·max(|f_q|, |f_g|) over the evaluated nodes.
    pub weighted_physical: f64,
    pub weighted_literal: f64,
    pub physical_window: BalanceWindow,
    pub literal_window: BalanceWindow,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBalanceFrame {
    pub t: f64,
    pub weighted_physical: f64,
    pub weighted_literal: f64,
    pub physical_window: BalanceWindow,
    pub literal_window: BalanceWindow,
}

/// Fourth-order central first derivative; NaN within two nodes of an end
/// or next to a NaN.
fn gradient4(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![f64::NAN; n];
    for i in 2..n.saturating_sub(2) {
        out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    }
    out
}

fn window(r: &[f64], imbalance: &[f64], scale: &[f64]) -> BalanceWindow {
    let ratio: Vec<f64> = imbalance.iter().zip(scale).map(|(a, s)| a.abs() / s).collect();
    let best = (0..r.len())
        .filter(|&i| ratio[i].is_finite())
        .min_by(|&a, &b| ratio[a].total_cmp(&ratio[b]));
    let Some(best) = best else {
        return BalanceWindow {
            best_r: f64::NAN,
            best_ratio: f64::NAN,
            lo: f64::NAN,
            hi: f64::NAN,
        };
    };
    let inside = |i: usize| ratio[i] <= WINDOW_RATIO.max(ratio[best]);
    let mut lo = best;
    while lo > 0 && inside(lo - 1) {
        lo -= 1;
    }
    let mut hi = best;
    while hi + 1 < r.len() && inside(hi + 1) {
        hi += 1;
    }
    BalanceWindow {
        best_r: r[best],
        best_ratio: ratio[best],
        lo: r[lo],
        hi: r[hi],
    }
}

/// Quantum and gravitational forces on a spherically symmetric amplitude.
///
/// Q uses the fourth-order Laplacian and both forces the fourth-order
/// gradient, so the reported imbalance of a discrete solution measures its
/// distance from the continuum balance rather than the solver's own stencil.
pub fn force_balance_scan(p: &RadialProfile, scales: &PhysicalScales) -> Result<ForceBalance> {
    if p.geometry() != Geometry::Radial3d {
        return Err(Error::UnsupportedGeometry {
            geometry: p.geometry().name(),
            reason: "the force balance is evaluated radially".into(),
        });
    }
    if p.len() < 9 {
        return Err(Error::domain("r", "force balance needs at least 9 nodes"));
    }
    let (r, h, amp) = (p.r(), p.step(), p.amp());
    let max = amp.iter().cloned().fold(0.0, f64::max);
    let lap = laplacian4(amp, h, r, Geometry::Radial3d);
    let k = -scales.hbar * scales.hbar / (2.0 * scales.m);
    let q: Vec<f64> = lap
        .iter()
        .zip(amp)
        .map(|(l, &a)| if a > FLOOR * max { k * l / a } else { f64::NAN })
        .collect();
    let rho: Vec<f64> = amp.iter().map(|a| a * a).collect();
    let phi = solve_radial(r, h, &rho, 4.0 * PI * scales.g * scales.m);
    let f_q: Vec<f64> = gradient4(&q, h).into_iter().map(|g| -g).collect();
    let f_g: Vec<f64> = gradient4(&phi, h)
        .into_iter()
        .zip(&f_q)
        .map(|(g, fq)| if fq.is_nan() { f64::NAN } else { -scales.m * g })
        .collect();
    let physical: Vec<f64> = f_q.iter().zip(&f_g).map(|(a, b)| a + b).collect();
    let literal: Vec<f64> = f_q.iter().zip(&f_g).map(|(a, b)| a - b).collect();
    let scale: Vec<f64> = f_q.iter().zip(&f_g).map(|(a, b)| a.abs().max(b.abs())).collect();

    let max_abs = |v: &[f64]| v.iter().filter(|x| x.is_finite()).fold(0.0, |m: f64, x| m.max(x.abs()));
    let weighted = |v: &[f64]| {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..v.len() {
            if v[i].is_finite() {
                num += p.weight(i) * rho[i] * v[i].abs();
                den += p.weight(i) * rho[i] * scale[i];
            }
        }
        num / den
    };
    Ok(ForceBalance {
        r: r.to_vec(),
        max_physical: max_abs(&physical),
        max_literal: max_abs(&literal),
        weighted_physical: weighted(&physical),
        weighted_literal: weighted(&literal),
        physical_window: window(r, &physical, &scale),
        literal_window: window(r, &literal, &scale),
        f_q,
        f_g,
        physical,
        literal,
    })
}

/// [`force_balance_scan`] on every stored frame of a radial evolution.
pub fn force_balance_over_time(ev: &Evolution, scales: &PhysicalScales) -> Result<Vec<ForceBalanceFrame>> {
    ev.frames
        .iter()
        .map(|f| {
            let b = force_balance_scan(&f.profile()?, scales)?;
            Ok(ForceBalanceFrame {
                t: f.t,
                weighted_physical: b.weighted_physical,
                weighted_literal: b.weighted_literal,
                physical_window: b.physical_window,
                literal_window: b.literal_window,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_gaussian_has_no_gravity() {
        let s = PhysicalScales::dimensionless().without_gravity();
        let p = RadialProfile::radial_from_fn(0.02, 400, |r| (-r * r / 4.0).exp()).unwrap();
        let b = force_balance_scan(&p, &s).unwrap();
        for i in 0..p.len() {
            if b.f_q[i].is_finite() {
                assert_eq!(b.f_g[i], 0.0);
                assert_eq!(b.physical[i].abs(), b.f_q[i].abs());
                // f_q = ħ² r / 4mσ⁴ for a Gaussian of width σ.
                assert!((b.f_q[i] - b.r[i] / 4.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn gaussian_at_unit_width_is_nearly_balanced_at_its_core() {
        // f_q = r/4 exactly; f_g = −M(r)/r² with the enclosed mass of a unit Gaussian.
        let s = PhysicalScales::dimensionless();
        let norm = (2.0 * PI).powf(-0.75);
        let p = RadialProfile::radial_from_fn(0.01, 1500, |r| norm * (-r * r / 4.0).exp()).unwrap();
        let b = force_balance_scan(&p, &s).unwrap();
        let enclosed = |r: f64| {
            let rho0 = (2.0 * PI).powf(-1.5);
            4.0 * PI
                * rho0
                * ((PI / 2.0).sqrt() * statrs::function::erf::erf(r / 2f64.sqrt()) - r * (-r * r / 2.0).exp())
        };
        for i in [2, 9, 49, 99, 199] {
            let r = b.r[i];
            assert!(
                (b.physical[i] - (r / 4.0 - enclosed(r) / (r * r))).abs() < 1e-5 * r,
                "r = {r}: {} vs {}",
                b.physical[i],
                r / 4.0 - enclosed(r) / (r * r)
            );
        }
        assert!(b.physical_window.best_r < 0.5);
        assert!(b.weighted_literal > 1.0);
    }
}
