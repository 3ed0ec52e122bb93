//! Physical constants and the gravitational scales built from ħ, G and m.
//!
//! Solvers work in natural units where the relevant constants are of order
//! one; SI values only appear when reading or writing files.

use crate::error::{ensure_positive, Error, Result};

/// Reduced Planck constant, CODATA 2018 (J s).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Newtonian constant of gravitation, CODATA 2018 (m³ kg⁻¹ s⁻²).
pub const G_SI: f64 = 6.674_30e-11;
/// Proton mass, CODATA 2018 (kg).
pub const PROTON_MASS_SI: f64 = 1.672_621_923_69e-27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnitSystem {
    Si,
    #[default]
    Natural,
}

impl std::str::FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "si" => Ok(UnitSystem::Si),
            "natural" => Ok(UnitSystem::Natural),
            other => Err(Error::domain(
                "unit_system",
                format!("expected `si` or `natural`, got `{other}`"),
            )),
        }
    }
}

impl std::fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UnitSystem::Si => "si",
            UnitSystem::Natural => "natural",
        })
    }
}

/// The constants (ħ, G, m) together with the derived gravitational scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    pub hbar: f64,
    pub g: f64,
    pub m: f64,
    /// ħ²/(G m³), the critical self-localisation width.
    pub length_scale: f64,
    /// G² m⁵/ħ².
    pub energy_scale: f64,
    /// ħ³/(G² m⁵).
    pub time_scale: f64,
}

/// Builds the scales for a particle of mass `m`.
pub fn gravitational_scales(m: f64, hbar: f64, g: f64) -> Result<PhysicalScales> {
    let m = ensure_positive("mass", m)?;
    let hbar = ensure_positive("hbar", hbar)?;
    let g = ensure_positive("G", g)?;
    // Grouped to stay inside the f64 exponent range for SI inputs.
    let gm2_over_hbar = g * m * m / hbar;
    let length_scale = (hbar / (g * m * m)) * (hbar / m);
    let energy_scale = gm2_over_hbar * gm2_over_hbar * m;
    let time_scale = hbar / energy_scale;
    Ok(PhysicalScales {
        hbar,
        g,
        m,
        length_scale,
        energy_scale,
        time_scale,
    })
}

impl PhysicalScales {
    /// ħ = G = m = 1.
    pub fn dimensionless() -> Self {
        gravitational_scales(1.0, 1.0, 1.0).expect("unit constants are valid")
    }

    /// ħ = G = 1 with the given mass.
    pub fn natural(m: f64) -> Result<Self> {
        gravitational_scales(m, 1.0, 1.0)
    }

    /// CODATA ħ and G with the given mass in kilograms.
    pub fn si(m: f64) -> Result<Self> {
        gravitational_scales(m, HBAR_SI, G_SI)
    }

    pub fn with_mass(&self, m: f64) -> Result<Self> {
        gravitational_scales(m, self.hbar, self.g)
    }

    /// Same ħ and m with gravity switched off. Derived scales are infinite.
    pub fn without_gravity(&self) -> Self {
        Self {
            g: 0.0,
            length_scale: f64::INFINITY,
            energy_scale: 0.0,
            time_scale: f64::INFINITY,
            ..*self
        }
    }

    pub fn to_dimensionless_length(&self, x: f64) -> f64 {
        x / self.length_scale
    }
    pub fn from_dimensionless_length(&self, x: f64) -> f64 {
        x * self.length_scale
    }
    pub fn to_dimensionless_energy(&self, e: f64) -> f64 {
        e / self.energy_scale
    }
    pub fn from_dimensionless_energy(&self, e: f64) -> f64 {
        e * self.energy_scale
    }
    pub fn to_dimensionless_time(&self, t: f64) -> f64 {
        t / self.time_scale
    }
    pub fn from_dimensionless_time(&self, t: f64) -> f64 {
        t * self.time_scale
    }
    /// Densities (probability per volume) scale as length⁻³.
    pub fn to_dimensionless_density(&self, rho: f64) -> f64 {
        rho * self.length_scale.powi(3)
    }
    pub fn from_dimensionless_density(&self, rho: f64) -> f64 {
        rho / self.length_scale.powi(3)
    }
    /// Velocities scale as length / time.
    pub fn to_dimensionless_velocity(&self, v: f64) -> f64 {
        v * self.time_scale / self.length_scale
    }
    pub fn from_dimensionless_velocity(&self, v: f64) -> f64 {
        v * self.length_scale / self.time_scale
    }
    /// Forces scale as energy / length.
    pub fn from_dimensionless_force(&self, f: f64) -> f64 {
        f * self.energy_scale / self.length_scale
    }
    /// Gravitational potential per unit mass scales as energy / mass.
    pub fn from_dimensionless_potential(&self, phi: f64) -> f64 {
        phi * self.energy_scale / self.m
    }
}
