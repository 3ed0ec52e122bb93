//! Three-point radial Hamiltonian acting on v = r·u with v = 0 at the origin
//! and one step past the last node.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct RadialHamiltonian {
    /// ħ²/2mh², the magnitude of the off-diagonal.
    pub kin: f64,
    /// 2·kin + V_i.
    pub diag: Vec<f64>,
}

impl RadialHamiltonian {
    pub fn new(hbar: f64, m: f64, h: f64, potential: impl IntoIterator<Item = f64>) -> Self {
        let kin = hbar * hbar / (2.0 * m * h * h);
        Self {
            kin,
            diag: potential.into_iter().map(|v| 2.0 * kin + v).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `e`, from the signs of the LDLᵀ pivots.
    pub fn count_below(&self, e: f64) -> usize {
        let k2 = self.kin * self.kin;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - e } else { d - e - k2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * self.kin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// A window guaranteed to contain the whole spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * self.kin;
        let hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * self.kin;
        (lo, hi)
    }

    /// Lowest eigenvalue by bisection on the eigenvalue count inside `window`.
    pub fn ground_energy(&self, window: (f64, f64)) -> Result<f64> {
        let (mut lo, mut hi) = window;
        if !(lo < hi) || self.count_below(lo) != 0 || self.count_below(hi) == 0 {
            return Err(Error::BracketNotFound {
                lo,
                hi,
                reason: format!(
                    "window must hold no eigenvalue at its lower end and at least one below its upper end \
                     (found {} and {})",
                    self.count_below(lo),
                    self.count_below(hi)
                ),
            });
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) == 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Outer turning point for energy `e`: first node past the potential
    /// minimum where the potential exceeds `e`.
    fn turning_point(&self, e: f64) -> usize {
        let n = self.len();
        let bottom = (0..n)
            .min_by(|&a, &b| self.diag[a].total_cmp(&self.diag[b]))
            .unwrap_or(0);
        (bottom..n)
            .find(|&i| self.diag[i] - 2.0 * self.kin > e)
            .unwrap_or(n - 1)
            .clamp(1, n.saturating_sub(2).max(1))
    }

    /// Outward recurrence from the origin up to `turning`, inward recurrence
    /// from the outer wall down to it, joined there. Also returns the
    /// mismatch of the row equation at the joint relative to the joint value.
    fn shoot_at(&self, e: f64, turning: usize) -> (Vec<f64>, f64) {
        let n = self.len();
        let k = self.kin;
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        let mut prev = 0.0;
        for i in 0..turning {
            let next = ((self.diag[i] - e) * v[i] - k * prev) / k;
            prev = v[i];
            v[i + 1] = next;
        }
        let outward_next = ((self.diag[turning] - e) * v[turning] - k * v[turning - 1]) / k;

        let mut w = vec![0.0; n];
        w[n - 1] = 1.0;
        let mut after = 0.0;
        for i in (turning + 1..n).rev() {
            let next = ((self.diag[i] - e) * w[i] - k * after) / k;
            after = w[i];
            w[i - 1] = next;
            // Keep the growing inward solution representable.
            if w[i - 1].abs() > 1e250 {
                for x in &mut w[i - 1..] {
                    *x *= 1e-250;
                }
                after *= 1e-250;
            }
        }
        let scale = v[turning] / w[turning];
        for i in turning + 1..n {
            v[i] = w[i] * scale;
        }
        let mismatch = (outward_next - v[turning + 1]) / v[turning];
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        (v, mismatch)
    }

    /// Eigenpair near `e0` by shooting: the energy is refined by secant steps
    /// until the outward and inward solutions join smoothly.
    pub fn shoot(&self, e0: f64) -> (f64, Vec<f64>) {
        let turning = self.turning_point(e0);
        let (mut best_e, (mut best_v, mut best_d)) = (e0, self.shoot_at(e0, turning));
        let mut e_prev = e0;
        let mut d_prev = best_d;
        let mut e = e0 + (1e-9 * e0.abs()).max(1e-13 * self.kin);
        for _ in 0..30 {
            let (v, d) = self.shoot_at(e, turning);
            if d.abs() < best_d.abs() {
                (best_e, best_v, best_d) = (e, v, d);
            }
            if d == d_prev || d == 0.0 {
                break;
            }
            let next = e - d * (e - e_prev) / (d - d_prev);
            if !next.is_finite() || next == e {
                break;
            }
            (e_prev, d_prev, e) = (e, d, next);
        }
        (best_e, self.polish(best_e, &best_v))
    }

    /// One inverse-iteration sweep (H − e)x = v. The joint of the two
    /// recurrences carries a rounding-level kink; the sweep replaces it by a
    /// backward-stable vector with the same eigenvalue.
    fn polish(&self, e: f64, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let off = -self.kin;
        let tiny = f64::EPSILON * self.kin;
        let mut pivots = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n {
            let d = self.diag[i] - e;
            let (mut p, rhs) = if i == 0 {
                (d, v[0])
            } else {
                (d - off * off / pivots[i - 1], v[i] - off / pivots[i - 1] * y[i - 1])
            };
            if p.abs() < tiny {
                p = tiny;
            }
            pivots[i] = p;
            y[i] = rhs;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let right = if i + 1 < n { x[i + 1] } else { 0.0 };
            x[i] = (y[i] - off * right) / pivots[i];
        }
        let scale = x.iter().map(|a| a.abs()).fold(0.0, f64::max) * x[0].signum();
        x.into_iter().map(|a| a / scale).collect()
    }

    /// H·v.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { v[i - 1] } else { 0.0 };
                let right = if i + 1 < n { v[i + 1] } else { 0.0 };
                self.diag[i] * v[i] - self.kin * (left + right)
            })
            .collect()
    }

    /// Solves (I + c(H − s))x = b by the Thomas algorithm. Returns `None` if a
    /// pivot is not positive, i.e. the shifted operator is not positive definite.
    pub fn solve_shifted(&self, c: f64, s: f64, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let off = -c * self.kin;
        let mut pivots = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n {
            let d = 1.0 + c * (self.diag[i] - s);
            let (p, rhs) = if i == 0 {
                (d, b[0])
            } else {
                let l = off / pivots[i - 1];
                (d - l * off, b[i] - l * y[i - 1])
            };
            if !(p > 0.0) {
                return None;
            }
            pivots[i] = p;
            y[i] = rhs;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let right = if i + 1 < n { x[i + 1] } else { 0.0 };
            x[i] = (y[i] - off * right) / pivots[i];
        }
        Some(x)
    }
}
