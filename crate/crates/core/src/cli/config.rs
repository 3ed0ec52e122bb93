use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::units::{gravitational_scales, PhysicalScales, UnitSystem, G_SI, HBAR_SI};

/// Every key a config file or flag may set.
pub const KEYS: &[&str] = &[
    "unit_system",
    "hbar",
    "G",
    "mass",
    "mass_list",
    "sigma0",
    "dim",
    "t_max",
    "steps",
    "dt",
    "store_every",
    "g",
    "seeds",
    "rng_seed",
    "r_max",
    "nodes",
    "rho0",
    "tol",
    "max_iterations",
    "mode",
    "kinetic",
    "out",
];

/// Effective settings of one run: config-file values overridden by flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<&'static str, String>,
}

fn known(key: &str) -> Result<&'static str> {
    KEYS.iter()
        .find(|k| **k == key)
        .copied()
        .ok_or_else(|| Error::Config(format!("unknown config key `{key}`")))
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            values: BTreeMap::new(),
        }
    }

    /// Parses `key = value` lines. Blank lines and lines starting with `#`
    /// are skipped.
    pub fn parse(command: &str, text: &str) -> Result<Self> {
        let mut cfg = Self::new(command);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    n + 1
                )));
            };
            let key = key.trim();
            let key = known(key).map_err(|_| Error::Config(format!("unknown config key `{key}` on line {}", n + 1)))?;
            cfg.values.insert(key, value.trim().to_string());
        }
        Ok(cfg)
    }

    pub fn from_file(command: &str, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(command, &text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        self.values.insert(known(key)?, value.into());
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::Config(format!("invalid value `{v}` for `{key}`: {e}")))
            })
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &'static str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// A strictly positive, finite number.
    pub fn positive(&self, key: &'static str, default: f64) -> Result<f64> {
        let v = self.get_or(key, default)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Config(format!("`{key}` must be positive and finite, got {v}")))
        }
    }

    pub fn count(&self, key: &'static str, default: usize) -> Result<usize> {
        let v = self.get_or(key, default)?;
        if v == 0 {
            return Err(Error::Config(format!("`{key}` must be at least 1")));
        }
        Ok(v)
    }

    /// Comma-separated list of positive numbers.
    pub fn list(&self, key: &'static str) -> Result<Vec<f64>> {
        let Some(raw) = self.raw(key) else {
            return Err(Error::Config(format!("`{key}` is required")));
        };
        raw.split(',')
            .map(|s| {
                let s = s.trim();
                match s.parse::<f64>() {
                    Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                    _ => Err(Error::Config(format!(
                        "invalid entry `{s}` in `{key}`: expected a positive number"
                    ))),
                }
            })
            .collect()
    }

    pub fn unit_system(&self) -> Result<UnitSystem> {
        self.get_or("unit_system", UnitSystem::Natural)
    }

    /// ħ and G for the chosen unit system, each overridable.
    pub fn constants(&self) -> Result<(f64, f64)> {
        let (hbar, g) = match self.unit_system()? {
            UnitSystem::Si => (HBAR_SI, G_SI),
            UnitSystem::Natural => (1.0, 1.0),
        };
        Ok((self.positive("hbar", hbar)?, self.positive("G", g)?))
    }

    pub fn scales(&self) -> Result<PhysicalScales> {
        self.scales_for(self.positive("mass", 1.0)?)
    }

    pub fn scales_for(&self, mass: f64) -> Result<PhysicalScales> {
        let (hbar, g) = self.constants()?;
        gravitational_scales(mass, hbar, g)
    }

    pub fn out_dir(&self) -> Option<PathBuf> {
        self.raw("out").map(PathBuf::from)
    }

    /// Canonical text of the run: command plus sorted settings. The output
    /// directory is left out so that the same run written to two places
    /// produces identical files.
    pub fn canonical(&self) -> String {
        let mut s = format!("command={}\n", self.command);
        for (k, v) in self.values.iter().filter(|(k, _)| **k != "out") {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let cfg = RunConfig::parse("packet", "# comment\nmass = 2\n\nsigma0=0.5\n").unwrap();
        assert_eq!(cfg.positive("mass", 1.0).unwrap(), 2.0);
        assert_eq!(cfg.positive("sigma0", 1.0).unwrap(), 0.5);
        assert_eq!(cfg.positive("dt", 0.25).unwrap(), 0.25);
        let err = RunConfig::parse("packet", "mass = 1\nmas = 2\n").unwrap_err();
        assert!(err.to_string().contains("`mas`"), "{err}");
        assert_eq!(err.exit_code(), 2);
        assert!(RunConfig::parse("packet", "mass 2").is_err());
    }

    #[test]
    fn typed_access_validates() {
        let mut cfg = RunConfig::new("critical");
        cfg.set("tol", "-1").unwrap();
        assert!(cfg.positive("tol", 1e-8).is_err());
        cfg.set("mass_list", "1, 2,4").unwrap();
        assert_eq!(cfg.list("mass_list").unwrap(), vec![1.0, 2.0, 4.0]);
        cfg.set("mass_list", "1,x").unwrap();
        assert!(cfg.list("mass_list").is_err());
        cfg.set("unit_system", "si").unwrap();
        assert_eq!(cfg.constants().unwrap(), (HBAR_SI, G_SI));
        assert!(cfg.set("bogus", "1").is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let mut a = RunConfig::parse("sweep", "mass_list = 1,2,4,8").unwrap();
        let b = a.clone();
        a.set("out", "/tmp/x").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
        a.set("mode", "physical").unwrap();
        assert_ne!(a.hash(), b.hash());
    }
}
