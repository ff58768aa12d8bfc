//! Path simulators producing occupation-time samples.
//!
//! Every path draws from its own ChaCha8 stream keyed by `(seed, path)`, and
//! paths are collected in index order, so a configuration always yields the
//! same samples whatever the size of the rayon pool.

mod chain;
mod stats;
mod walk;

pub use stats::{
    estimate_moments, kac_raw_moment_mc_check, ks_test, sample_moment, KacCheck, KsResult, SampleMoment,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Geometric;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffusion_models::{make_skew_bessel, DiffusionConfig, DiffusionSpec};
use crate::error::{check_open, check_positive, Error, Result};

use chain::{geometric_grid, BirthDeathChain};
use walk::{EulerScheme, ExcursionWalk, Labels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Skew random walk with steps ±√h; `step` is the time step h.
    SkewWalk,
    /// Birth–death chain on a geometric grid; `step` is the innermost grid point.
    ChainApprox,
    /// Euler steps of `dX = σ(X) dW` (oscillating BM only); `step` is h.
    Euler,
    /// Lattice walk with geometric holds at 0; `step` is the time step δ².
    StickyWalk,
}

/// What to simulate. Parameters follow the diffusion descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum SimTarget {
    SkewBm { beta: f64 },
    SkewBessel { nu: f64, beta: f64 },
    OscillatingBm { sigma_plus: f64, sigma_minus: f64 },
    StickyBm { gamma: f64 },
    /// Rays are 1-based; occupation counts time on the listed rays.
    Spider { p: Vec<f64>, rays: Vec<usize> },
}

impl SimTarget {
    pub fn from_diffusion_config(c: &DiffusionConfig) -> Result<Self> {
        Ok(Self::from_spec(&c.to_spec()?))
    }

    pub fn from_spec(d: &DiffusionSpec) -> Self {
        match d {
            DiffusionSpec::SkewBm(s) => SimTarget::SkewBm { beta: s.beta() },
            DiffusionSpec::SkewBessel(s) => SimTarget::SkewBessel { nu: s.nu(), beta: s.beta() },
            DiffusionSpec::OscillatingBm(s) => {
                SimTarget::OscillatingBm { sigma_plus: s.sigma_plus(), sigma_minus: s.sigma_minus() }
            }
            DiffusionSpec::StickyBm(s) => SimTarget::StickyBm { gamma: s.gamma() },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SimTarget::SkewBm { .. } => "skew-bm",
            SimTarget::SkewBessel { .. } => "skew-bessel",
            SimTarget::OscillatingBm { .. } => "oscillating-bm",
            SimTarget::StickyBm { .. } => "sticky-bm",
            SimTarget::Spider { .. } => "spider",
        }
    }

    pub fn params(&self) -> Vec<(String, f64)> {
        match self {
            SimTarget::SkewBm { beta } => vec![("beta".into(), *beta)],
            SimTarget::SkewBessel { nu, beta } => vec![("nu".into(), *nu), ("beta".into(), *beta)],
            SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
                vec![("sigma_plus".into(), *sigma_plus), ("sigma_minus".into(), *sigma_minus)]
            }
            SimTarget::StickyBm { gamma } => vec![("gamma".into(), *gamma)],
            SimTarget::Spider { p, .. } => p.iter().enumerate().map(|(i, v)| (format!("p{}", i + 1), *v)).collect(),
        }
    }

    pub fn default_scheme(&self) -> Scheme {
        match self {
            SimTarget::SkewBessel { .. } => Scheme::ChainApprox,
            SimTarget::StickyBm { .. } => Scheme::StickyWalk,
            _ => Scheme::SkewWalk,
        }
    }

    /// Step used when none is given: h = 1e-6 t for walks, 1e-4 t for Euler,
    /// innermost grid point 3e-4 sqrt(t) for the chain; the sticky walk also
    /// keeps at least one holding slot per visit to 0.
    pub fn default_step(&self, scheme: Scheme, horizon: f64) -> f64 {
        match (scheme, self) {
            // The chain resolves time near 0 only to about x1^2, which shows
            // up in the law of A_t near 0 and t; 3e-4 keeps that below KS
            // resolution at 10^5 paths.
            (Scheme::ChainApprox, _) => 3e-4 * horizon.sqrt(),
            (Scheme::Euler, _) => 1e-4 * horizon,
            (Scheme::StickyWalk, SimTarget::StickyBm { gamma }) => (1e-6 * horizon).min(gamma * gamma),
            _ => 1e-6 * horizon,
        }
    }

    /// Skewness of the equivalent skew BM for the walk-based targets.
    fn walk_beta(&self) -> Option<f64> {
        match self {
            SimTarget::SkewBm { beta } => Some(*beta),
            SimTarget::OscillatingBm { sigma_plus, sigma_minus } => Some(sigma_minus / (sigma_plus + sigma_minus)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SimTarget::SkewBm { beta } => check_open("beta", *beta, 0.0, 1.0, "(0, 1)"),
            SimTarget::SkewBessel { nu, beta } => make_skew_bessel(*nu, *beta).map(|_| ()),
            SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
                check_positive("sigma_plus", *sigma_plus)?;
                check_positive("sigma_minus", *sigma_minus)
            }
            SimTarget::StickyBm { gamma } => check_positive("gamma", *gamma),
            SimTarget::Spider { p, rays } => {
                let params: Vec<crate::moments::Param> = p.iter().map(|&v| v.into()).collect();
                crate::moments::spider_beta(&params, rays).map(|_| ())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub target: SimTarget,
    pub horizon: f64,
    pub step: f64,
    pub paths: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SimConfig {
    /// Default scheme and step for the target.
    pub fn new(target: SimTarget, horizon: f64, paths: usize, seed: u64) -> Self {
        let scheme = target.default_scheme();
        let step = target.default_step(scheme, horizon);
        SimConfig { target, horizon, step, paths, seed, scheme }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Switches scheme and resets the step to that scheme's default, since
    /// the step means different things to different schemes.
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self.step = self.target.default_step(scheme, self.horizon);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.target.validate()?;
        check_positive("horizon", self.horizon)?;
        check_positive("step", self.step)?;
        if self.step > self.horizon {
            return Err(Error::Config(format!("step {} exceeds horizon {}", self.step, self.horizon)));
        }
        if self.paths == 0 {
            return Err(Error::Config("paths must be at least 1".into()));
        }
        let ok = matches!(
            (self.scheme, &self.target),
            (Scheme::SkewWalk, SimTarget::SkewBm { .. } | SimTarget::OscillatingBm { .. } | SimTarget::Spider { .. })
                | (Scheme::ChainApprox, SimTarget::SkewBessel { .. } | SimTarget::SkewBm { .. } | SimTarget::OscillatingBm { .. })
                | (Scheme::Euler, SimTarget::OscillatingBm { .. })
                | (Scheme::StickyWalk, SimTarget::StickyBm { .. })
        ) || matches!((self.scheme, &self.target), (Scheme::Euler, SimTarget::SkewBm { beta }) if *beta == 0.5);
        if !ok {
            return Err(Error::Config(format!("scheme {:?} does not apply to {}", self.scheme, self.target.name())));
        }
        Ok(())
    }
}

/// One path's occupation times up to the horizon `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupationSample {
    /// Time in `[0, ∞)`.
    pub a_t: f64,
    /// Time in `(0, ∞)`.
    pub b_t: f64,
    /// `a_t - b_t`, time at 0.
    pub zero_time: f64,
    /// Position at the horizon. Spider paths report the distance from 0,
    /// positive on queried rays and negative otherwise.
    pub terminal: f64,
}

enum Prepared {
    Walk(ExcursionWalk, Option<(f64, f64)>),
    Chain(BirthDeathChain),
    Euler(EulerScheme),
}

fn prepare(cfg: &SimConfig) -> Result<Prepared> {
    cfg.validate()?;
    let steps = || -> Result<u64> {
        let n = (cfg.horizon / cfg.step).round();
        if n > 1e15 {
            return Err(Error::Config(format!("{n:e} steps is too many")));
        }
        Ok((n as u64).max(1))
    };
    Ok(match cfg.scheme {
        Scheme::SkewWalk => {
            let steps = steps()?;
            let h = cfg.horizon / steps as f64;
            let (labels, map) = match &cfg.target {
                SimTarget::Spider { p, rays } => {
                    let mut acc = 0.0;
                    let cumulative = p.iter().map(|v| {
                        acc += v;
                        acc
                    });
                    let query = (1..=p.len()).map(|i| rays.contains(&i)).collect();
                    (Labels::Spider { cumulative: cumulative.collect(), query }, None)
                }
                SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
                    (Labels::Skew { beta: cfg.target.walk_beta().unwrap() }, Some((*sigma_plus, *sigma_minus)))
                }
                t => (Labels::Skew { beta: t.walk_beta().unwrap() }, None),
            };
            Prepared::Walk(ExcursionWalk { steps, h, labels, hold: None }, map)
        }
        Scheme::StickyWalk => {
            let SimTarget::StickyBm { gamma } = cfg.target else { unreachable!("validated") };
            let steps = steps()?;
            let h = cfg.horizon / steps as f64;
            // Mean hold γ/δ slots makes the time at 0 per visit γδ.
            let mean_slots = gamma / h.sqrt();
            if mean_slots < 1.0 {
                return Err(Error::Config(format!(
                    "sticky walk step {h:e} too coarse for gamma {gamma}: mean hold {mean_slots:.3} < 1 slot"
                )));
            }
            let hold = Geometric::new(1.0 / (mean_slots + 1.0)).map_err(|e| Error::Config(e.to_string()))?;
            Prepared::Walk(ExcursionWalk { steps, h, labels: Labels::Skew { beta: 0.5 }, hold: Some(hold) }, None)
        }
        Scheme::Euler => {
            let steps = steps()?;
            let (sigma_plus, sigma_minus) = match cfg.target {
                SimTarget::OscillatingBm { sigma_plus, sigma_minus } => (sigma_plus, sigma_minus),
                _ => (1.0, 1.0),
            };
            Prepared::Euler(EulerScheme { steps, h: cfg.horizon / steps as f64, sigma_plus, sigma_minus })
        }
        Scheme::ChainApprox => {
            let spec = match &cfg.target {
                SimTarget::SkewBessel { nu, beta } => make_skew_bessel(*nu, *beta)?,
                SimTarget::SkewBm { beta } => crate::diffusion_models::make_skew_bm(*beta)?,
                SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
                    crate::diffusion_models::make_oscillating_bm(*sigma_plus, *sigma_minus)?
                }
                _ => unreachable!("validated"),
            };
            // Scale increments between neighbours grow by at most 10%.
            let q = match &cfg.target {
                SimTarget::SkewBessel { nu, .. } => -2.0 * nu,
                _ => 1.0,
            };
            let rho = 1.1f64.powf(1.0 / q).min(1.1);
            let spread = match &cfg.target {
                SimTarget::OscillatingBm { sigma_plus, sigma_minus } => sigma_plus.max(*sigma_minus),
                _ => 1.0,
            };
            let grid = geometric_grid(cfg.step, rho, 10.0 * spread * cfg.horizon.sqrt());
            Prepared::Chain(BirthDeathChain::new(&spec, grid)?)
        }
    })
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// Simulates `cfg.paths` paths on the current rayon pool.
pub fn simulate(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    let prepared = prepare(cfg)?;
    let horizon = cfg.horizon;
    let seed = cfg.seed;
    Ok((0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i);
            match &prepared {
                Prepared::Walk(w, map) => {
                    let (mut s, _) = w.path(&mut rng);
                    if let Some((sp, sm)) = map {
                        s.terminal *= if s.terminal >= 0.0 { sp } else { sm };
                    }
                    s
                }
                Prepared::Chain(c) => c.path(&mut rng, horizon).0,
                Prepared::Euler(e) => e.path(&mut rng),
            }
        })
        .collect())
}

/// Mean number of chain jumps per path, for sizing grids.
pub fn chain_jumps_per_path(cfg: &SimConfig) -> Result<f64> {
    match prepare(cfg)? {
        Prepared::Chain(c) => {
            let total: u64 = (0..cfg.paths as u64).map(|i| c.path(&mut path_rng(cfg.seed, i), cfg.horizon).1).sum();
            Ok(total as f64 / cfg.paths as f64)
        }
        _ => Err(Error::Config("not a chain scheme".into())),
    }
}

fn checked_target(cfg: &SimConfig, want: fn(&SimTarget) -> bool, what: &str) -> Result<()> {
    if want(&cfg.target) {
        Ok(())
    } else {
        Err(Error::Config(format!("expected a {what} target, got {}", cfg.target.name())))
    }
}

pub fn simulate_skew_bm(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    checked_target(cfg, |t| matches!(t, SimTarget::SkewBm { .. }), "skew-bm")?;
    simulate(cfg)
}

pub fn simulate_bessel(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    checked_target(cfg, |t| matches!(t, SimTarget::SkewBessel { .. }), "skew-bessel")?;
    simulate(cfg)
}

pub fn simulate_oscillating(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    checked_target(cfg, |t| matches!(t, SimTarget::OscillatingBm { .. }), "oscillating-bm")?;
    simulate(cfg)
}

pub fn simulate_sticky(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    checked_target(cfg, |t| matches!(t, SimTarget::StickyBm { .. }), "sticky-bm")?;
    simulate(cfg)
}

pub fn simulate_spider(cfg: &SimConfig) -> Result<Vec<OccupationSample>> {
    checked_target(cfg, |t| matches!(t, SimTarget::Spider { .. }), "spider")?;
    simulate(cfg)
}
