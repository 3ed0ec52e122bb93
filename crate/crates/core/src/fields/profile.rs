use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Spherically symmetric; nodes at rᵢ = (i + 1)·h so the grid is anchored at the origin.
    Radial3d,
    /// Uniform line grid, any origin.
    Line1d,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Radial3d => "radial3d",
            Geometry::Line1d => "line1d",
        }
    }
}

/// Amplitude √ρ sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    r: Vec<f64>,
    amp: Vec<f64>,
    h: f64,
    total_norm: f64,
    geometry: Geometry,
}

impl RadialProfile {
    /// Radial profile on rᵢ = (i + 1)·h.
    pub fn radial(h: f64, amp: Vec<f64>) -> Result<Self> {
        let r = (0..amp.len()).map(|i| (i + 1) as f64 * h).collect();
        Self::build(r, amp, h, Geometry::Radial3d)
    }

    pub fn radial_from_fn(h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let amp = (1..=n).map(|i| f(i as f64 * h)).collect();
        Self::radial(h, amp)
    }

    /// Line profile on xᵢ = x0 + i·h.
    pub fn line(x0: f64, h: f64, amp: Vec<f64>) -> Result<Self> {
        let r = (0..amp.len()).map(|i| x0 + i as f64 * h).collect();
        Self::build(r, amp, h, Geometry::Line1d)
    }

    pub fn line_from_fn(x0: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let amp = (0..n).map(|i| f(x0 + i as f64 * h)).collect();
        Self::line(x0, h, amp)
    }

    /// Validates an externally supplied grid.
    pub fn from_samples(r: Vec<f64>, amp: Vec<f64>, geometry: Geometry) -> Result<Self> {
        if r.len() < 2 {
            return Err(Error::domain("r", "need at least two grid nodes"));
        }
        let h = r[1] - r[0];
        if !(h > 0.0) {
            return Err(Error::domain("r", "grid must be strictly increasing"));
        }
        for (i, w) in r.windows(2).enumerate() {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(w[1].abs()) {
                return Err(Error::domain("r", format!("grid spacing not uniform at node {i}")));
            }
        }
        if geometry == Geometry::Radial3d && (r[0] - h).abs() > 1e-9 * h {
            return Err(Error::domain(
                "r",
                format!("radial grid must start at r1 = h = {h}, got {}", r[0]),
            ));
        }
        Self::build(r, amp, h, geometry)
    }

    fn build(r: Vec<f64>, amp: Vec<f64>, h: f64, geometry: Geometry) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain("h", format!("grid step must be positive, got {h}")));
        }
        if amp.len() != r.len() || amp.len() < 2 {
            return Err(Error::domain("amp", "need one amplitude per node and >= 2 nodes"));
        }
        if let Some(i) = amp.iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
            return Err(Error::domain(
                "amp",
                format!("amplitude must be finite and >= 0 at node {i}"),
            ));
        }
        let mut p = Self {
            r,
            amp,
            h,
            total_norm: 0.0,
            geometry,
        };
        p.total_norm = p.integrate(|i| p.amp[i] * p.amp[i]);
        if !p.total_norm.is_finite() {
            return Err(Error::domain("amp", "total norm is not finite"));
        }
        Ok(p)
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }
    pub fn amp(&self) -> &[f64] {
        &self.amp
    }
    pub fn step(&self) -> f64 {
        self.h
    }
    pub fn len(&self) -> usize {
        self.r.len()
    }
    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
    pub fn geometry(&self) -> Geometry {
        self.geometry
    }
    pub fn total_norm(&self) -> f64 {
        self.total_norm
    }
    pub fn r_max(&self) -> f64 {
        *self.r.last().expect("profile has >= 2 nodes")
    }

    pub fn density(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a * a).collect()
    }

    /// Quadrature weight of node `i`: 4πr²h radially (the origin contributes
    /// nothing), trapezoid on a line.
    pub fn weight(&self, i: usize) -> f64 {
        match self.geometry {
            Geometry::Radial3d => 4.0 * PI * self.r[i] * self.r[i] * self.h,
            Geometry::Line1d if i == 0 || i + 1 == self.len() => 0.5 * self.h,
            Geometry::Line1d => self.h,
        }
    }

    /// ∫ f dV with f given per node.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.len()).map(|i| self.weight(i) * f(i)).sum()
    }

    /// ∫ ρ f dV.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.integrate(|i| self.amp[i] * self.amp[i] * values[i])
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let amp = self.amp.iter().map(|a| a * c).collect();
        Self::build(self.r.clone(), amp, self.h, self.geometry)
    }

    pub fn normalized(&self) -> Result<Self> {
        if !(self.total_norm > 0.0) {
            return Err(Error::domain("amp", "cannot normalise a profile with zero norm"));
        }
        self.scaled(self.total_norm.sqrt().recip())
    }

    /// Norm-preserving dilation r → λr.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        let dim = match self.geometry {
            Geometry::Radial3d => 3,
            Geometry::Line1d => 1,
        };
        let c = lambda.powf(-(dim as f64) / 2.0);
        let amp = self.amp.iter().map(|a| a * c).collect();
        let r = self.r.iter().map(|r| r * lambda).collect();
        Self::build(r, amp, self.h * lambda, self.geometry)
    }

    /// Radius where ρ first drops to half its central value; the central
    /// value is extrapolated from the first two nodes for radial grids.
    pub fn half_width(&self) -> Option<f64> {
        let rho = self.density();
        let rho0 = match self.geometry {
            // u(r) ≈ a + b r² through r = h, 2h
            Geometry::Radial3d => ((4.0 * self.amp[0] - self.amp[1]) / 3.0).powi(2),
            Geometry::Line1d => rho.iter().cloned().fold(0.0, f64::max),
        };
        self.half_width_from(rho0)
    }

    /// Radius where ρ first falls below `rho0 / 2`, linearly interpolated.
    pub fn half_width_from(&self, rho0: f64) -> Option<f64> {
        let target = 0.5 * rho0;
        let rho = self.density();
        let start = match self.geometry {
            Geometry::Radial3d => 0,
            Geometry::Line1d => rho
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)?,
        };
        if self.geometry == Geometry::Radial3d && rho[0] < target {
            // The half-density point lies between the origin and r₁.
            return Some(self.r[0] * (rho0 - target) / (rho0 - rho[0]));
        }
        let origin = match self.geometry {
            Geometry::Radial3d => 0.0,
            Geometry::Line1d => self.r[start],
        };
        (start..self.len() - 1).find_map(|i| {
            (rho[i] >= target && rho[i + 1] < target).then(|| {
                let f = (rho[i] - target) / (rho[i] - rho[i + 1]);
                self.r[i] + f * self.h - origin
            })
        })
    }
}

/// First derivative with central differences and second-order one-sided ends.
pub fn gradient(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "gradient needs at least three nodes");
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    out
}

/// Laplacian for the given geometry.
///
/// Radially the interior stencil is f'' + (2/r) f' with central differences,
/// which equals (1/r)(r f)'' on the same nodes. The first radial node uses
/// r·f = 0 at the origin. The outer end (and both line ends) are quadratic
/// extrapolations of the interior result: this is a one-sided stencil whose
/// error continues the interior O(h²) error smoothly, so differencing the
/// output again stays second order up to the boundary.
pub fn laplacian(values: &[f64], h: f64, r: &[f64], geometry: Geometry) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "laplacian needs at least five nodes");
    let h2 = h * h;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let d2 = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h2;
        out[i] = match geometry {
            Geometry::Line1d => d2,
            Geometry::Radial3d => d2 + (values[i + 1] - values[i - 1]) / (h * r[i]),
        };
    }
    let last = n - 1;
    out[last] = 3.0 * out[last - 1] - 3.0 * out[last - 2] + out[last - 3];
    out[0] = match geometry {
        Geometry::Line1d => 3.0 * out[1] - 3.0 * out[2] + out[3],
        Geometry::Radial3d => 2.0 * (values[1] - values[0]) / h2,
    };
    out
}

/// Fourth-order Laplacian on nodes with two neighbours each side; the two
/// outermost nodes at each end are left as NaN. Radially the origin is
/// handled by even reflection, so every node from r₁ on is filled.
pub fn laplacian4(values: &[f64], h: f64, r: &[f64], geometry: Geometry) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![f64::NAN; n];
    let at = |i: isize| -> Option<f64> {
        if i >= 0 {
            values.get(i as usize).copied()
        } else if geometry == Geometry::Radial3d {
            // f(-r) = f(r); node index -1 is the origin itself.
            match i {
                -1 => None,
                _ => values.get((-i - 2) as usize).copied(),
            }
        } else {
            None
        }
    };
    // Central value at the origin is needed for the first two radial nodes.
    let origin = if geometry == Geometry::Radial3d && n >= 3 {
        // even quartic through r = h, 2h, 3h
        Some((15.0 * values[0] - 6.0 * values[1] + values[2]) / 10.0)
    } else {
        None
    };
    let sample = |i: isize| -> Option<f64> {
        if i == -1 {
            origin
        } else {
            at(i)
        }
    };
    for i in 0..n as isize {
        let (Some(m2), Some(m1), Some(c), Some(p1), Some(p2)) =
            (sample(i - 2), sample(i - 1), sample(i), sample(i + 1), sample(i + 2))
        else {
            continue;
        };
        let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
        out[i as usize] = match geometry {
            Geometry::Line1d => d2,
            Geometry::Radial3d => {
                let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
                d2 + 2.0 * d1 / r[i as usize]
            }
        };
    }
    out
}
