//! Birth–death chain approximation of a diffusion on a fixed grid.
//!
//! The embedded jump chain is exact: from `x_i` the diffusion reaches
//! `x_{i+1}` before `x_{i-1}` with probability
//! `(S(x_i) - S(x_{i-1})) / (S(x_{i+1}) - S(x_{i-1}))`. Only the sojourn
//! times are approximated, by exponentials whose means are the exact mean
//! exit times `∫ G m` of the cell `(x_{i-1}, x_{i+1})`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::diffusion_models::Diffusion;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_endpoint_singular, QuadConfig};

use super::OccupationSample;

#[derive(Debug, Clone)]
pub(crate) struct BirthDeathChain {
    x: Vec<f64>,
    zero: usize,
    p_up: Vec<f64>,
    mean_hold: Vec<f64>,
    // Fractions of the mean sojourn spent in (0, ∞) and at the atom at 0.
    frac_pos: Vec<f64>,
    frac_zero: Vec<f64>,
}

/// `0, ±x1, ±x1 ρ, ...` up to the first point beyond `x_max`, plus one
/// outer point on each side that only serves as a neighbour.
pub(crate) fn geometric_grid(x1: f64, rho: f64, x_max: f64) -> Vec<f64> {
    let mut pos = vec![x1];
    while *pos.last().unwrap() < x_max {
        let next = pos.last().unwrap() * rho;
        pos.push(next);
    }
    pos.push(pos.last().unwrap() * rho);
    let mut grid: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    grid.push(0.0);
    grid.extend(pos);
    grid
}

impl BirthDeathChain {
    pub fn new<D: Diffusion + ?Sized>(d: &D, grid: Vec<f64>) -> Result<Self> {
        let zero = grid
            .iter()
            .position(|&v| v == 0.0)
            .ok_or_else(|| Error::Config("chain grid must contain 0".into()))?;
        if grid.len() < 5 || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("chain grid must be increasing with at least two points per side".into()));
        }
        let cfg = QuadConfig::with_tol(1e-14, 1e-10);
        let e = d.speed_exponent_at_zero();
        let len = grid.len();
        let (mut p_up, mut mean_hold, mut frac_pos, mut frac_zero) =
            (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        for i in 1..len - 1 {
            let (a, y, b) = (grid[i - 1], grid[i], grid[i + 1]);
            let (sa, sy, sb) = (d.scale(a), d.scale(y), d.scale(b));
            let width = sb - sa;
            p_up[i] = (sy - sa) / width;
            // ∫_lo^hi of (S(z) - S(a)) m(dz) or (S(b) - S(z)) m(dz); 0 is
            // always an end point of a piece, never interior.
            let piece = |lo: f64, hi: f64, left: bool| -> Result<f64> {
                let (el, er) = (if lo == 0.0 { e } else { 0.0 }, if hi == 0.0 { e } else { 0.0 });
                let r = integrate_endpoint_singular(
                    |p| {
                        let g = if left { d.scale(p.x) - sa } else { sb - d.scale(p.x) };
                        g * d.speed_density(p.x)
                    },
                    lo,
                    hi,
                    el,
                    er,
                    &cfg,
                )?;
                Ok(r.value)
            };
            let lower = (sb - sy) / width * piece(a, y, true)?;
            let upper = (sy - sa) / width * piece(y, b, false)?;
            let atom = if y == 0.0 { (sy - sa) * (sb - sy) / width * d.speed_atom_at_zero() } else { 0.0 };
            let total = lower + upper + atom;
            if !(total.is_finite() && total > 0.0) {
                return Err(Error::Config(format!("chain cell around {y} has no positive mean sojourn")));
            }
            mean_hold[i] = total;
            frac_pos[i] = if y > 0.0 {
                (total - atom) / total
            } else if y == 0.0 {
                upper / total
            } else {
                0.0
            };
            frac_zero[i] = atom / total;
        }
        Ok(BirthDeathChain { x: grid, zero, p_up, mean_hold, frac_pos, frac_zero })
    }

    pub fn path(&self, rng: &mut ChaCha8Rng, horizon: f64) -> (OccupationSample, u64) {
        let last = self.x.len() - 2;
        let (mut i, mut time) = (self.zero, 0.0f64);
        let (mut b, mut z) = (0.0f64, 0.0f64);
        let mut jumps = 0u64;
        loop {
            let e: f64 = rng.sample(Exp1);
            let hold = (e * self.mean_hold[i]).min(horizon - time);
            b += hold * self.frac_pos[i];
            z += hold * self.frac_zero[i];
            time += hold;
            if time >= horizon {
                break;
            }
            let up = rng.random::<f64>() < self.p_up[i];
            // Outer points are reflecting.
            i = match (up, i) {
                (true, j) if j < last => j + 1,
                (false, j) if j > 1 => j - 1,
                (true, j) => j - 1,
                (false, j) => j + 1,
            };
            jumps += 1;
        }
        (OccupationSample { a_t: b + z, b_t: b, zero_time: z, terminal: self.x[i] }, jumps)
    }
}
