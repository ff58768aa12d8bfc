use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{make_oscillating_bm, make_skew_bessel, make_skew_bm, make_sticky_bm, Diffusion, DiffusionSpec};
use crate::error::{Error, Result};

/// Name plus parameter map, as read from a config document.
///
/// Recognized names and keys:
/// `bm` (none), `skew-bm` (`beta`), `bessel` / `skew-bessel` (`nu`, `beta`),
/// `oscillating` / `oscillating-bm` (`sigma_plus`, `sigma_minus`),
/// `sticky` / `sticky-bm` (`gamma`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl DiffusionConfig {
    pub fn new(name: &str) -> Self {
        DiffusionConfig { name: name.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn from_spec<D: Diffusion + ?Sized>(d: &D) -> Self {
        let mut c = DiffusionConfig::new(d.name());
        for (k, v) in d.params() {
            c.params.insert(k.to_string(), v);
        }
        c
    }

    fn get(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Config(format!("diffusion '{}' needs parameter '{key}'", self.name)))
    }

    pub fn to_spec(&self) -> Result<DiffusionSpec> {
        let allowed: &[&str] = match self.name.as_str() {
            "bm" => &[],
            "skew-bm" => &["beta"],
            "bessel" | "skew-bessel" => &["nu", "beta"],
            "oscillating" | "oscillating-bm" => &["sigma_plus", "sigma_minus"],
            "sticky" | "sticky-bm" => &["gamma"],
            other => return Err(Error::Config(format!("unknown diffusion '{other}'"))),
        };
        if let Some(extra) = self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Config(format!("diffusion '{}' does not take parameter '{extra}'", self.name)));
        }
        match self.name.as_str() {
            "bm" => make_skew_bm(0.5),
            "skew-bm" => make_skew_bm(self.get("beta")?),
            "bessel" | "skew-bessel" => make_skew_bessel(self.get("nu")?, self.get("beta")?),
            "oscillating" | "oscillating-bm" => make_oscillating_bm(self.get("sigma_plus")?, self.get("sigma_minus")?),
            _ => make_sticky_bm(self.get("gamma")?),
        }
    }
}
