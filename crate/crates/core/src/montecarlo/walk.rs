//! Simple-random-walk schemes sampled one excursion at a time.
//!
//! A walk with steps ±√h only changes sign at visits to 0, so the occupation
//! time is the sum of the lengths of the excursions that were sent upward.
//! Excursion lengths are drawn from the exact return-time law of the simple
//! random walk, `P(T > 2k) = C(2k, k) / 4^k`, which gives the same law as
//! stepping the walk at a cost proportional to the number of excursions.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric, StandardNormal};

use super::OccupationSample;

const TABLE_LEN: usize = 4096;

// u[k] = C(2k, k) / 4^k, k = 0..=TABLE_LEN.
fn return_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut u = Vec::with_capacity(TABLE_LEN + 1);
        u.push(1.0);
        for k in 1..=TABLE_LEN {
            let prev = u[k - 1];
            u.push(prev * (2 * k - 1) as f64 / (2 * k) as f64);
        }
        u
    })
}

// ln u_k for k beyond the table, from the expansion of Γ(k+1/2)/Γ(k+1);
// the neglected term is O(k^-5).
fn ln_u(k: u64) -> f64 {
    let k = k as f64;
    -0.5 * (std::f64::consts::PI * k).ln() - 1.0 / (8.0 * k) + 1.0 / (192.0 * k * k * k)
}

/// Half-length `k` of an excursion (`T = 2k`) for a uniform `u ∈ (0, 1]`, or
/// `None` when `T > 2 cap`.
pub(crate) fn sample_return_half(u: f64, cap: u64) -> Option<u64> {
    let table = return_table();
    if cap <= TABLE_LEN as u64 {
        if u <= table[cap as usize] {
            return None;
        }
        return Some(table.partition_point(|&v| v >= u) as u64);
    }
    if u > table[TABLE_LEN] {
        return Some(table.partition_point(|&v| v >= u) as u64);
    }
    let lu = u.ln();
    if lu <= ln_u(cap) {
        return None;
    }
    // u_k ~ 1/sqrt(πk); start from the asymptotic root and walk to the exact one.
    let guess = (1.0 / (std::f64::consts::PI * u * u) - 0.25).floor() as u64;
    let mut k = guess.clamp(TABLE_LEN as u64 + 1, cap);
    let mut l = ln_u(k);
    while l >= lu {
        k += 1;
        l += ((2 * k - 1) as f64 / (2 * k) as f64).ln();
    }
    while k > TABLE_LEN as u64 + 1 {
        let prev = l - ((2 * k - 1) as f64 / (2 * k) as f64).ln();
        if prev < lu {
            k -= 1;
            l = prev;
        } else {
            break;
        }
    }
    Some(k)
}

/// End point of a positive meander of `m` steps: `P(j) ∝ j P(S_m = j)`.
/// Rejection from `|S_m|`, truncated at `8 sqrt(m)` (tail mass below 1e-13).
pub(crate) fn meander_end(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    if m <= 1 {
        return m;
    }
    let cap = (8.0 * (m as f64).sqrt()).ceil() as u64 + 1;
    let bin = Binomial::new(m, 0.5).expect("valid binomial");
    loop {
        let b = bin.sample(rng);
        let j = (2 * b).abs_diff(m);
        if j == 0 || j > cap {
            continue;
        }
        if rng.random::<f64>() * (cap as f64) < j as f64 {
            return j;
        }
    }
}

/// How each excursion from 0 is labelled.
#[derive(Debug, Clone)]
pub(crate) enum Labels {
    /// Upward with probability `beta`.
    Skew { beta: f64 },
    /// Ray `i` with probability `p[i]`; counted when `query[i]`.
    Spider { cumulative: Vec<f64>, query: Vec<bool> },
}

impl Labels {
    fn counted(&self, u: f64) -> bool {
        match self {
            Labels::Skew { beta } => u < *beta,
            Labels::Spider { cumulative, query } => {
                let i = cumulative.partition_point(|&c| c <= u).min(query.len() - 1);
                query[i]
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ExcursionWalk {
    pub steps: u64,
    pub h: f64,
    pub labels: Labels,
    /// Success probability of the geometric hold at 0 (sticky walk only).
    pub hold: Option<Geometric>,
}

impl ExcursionWalk {
    /// Returns the sample and the signed terminal lattice position.
    pub fn path(&self, rng: &mut ChaCha8Rng) -> (OccupationSample, i64) {
        let n = self.steps;
        let (mut elapsed, mut pos, mut zero) = (0u64, 0u64, 0u64);
        let mut terminal = 0i64;
        while elapsed < n {
            if let Some(g) = &self.hold {
                let held = g.sample(rng).min(n - elapsed);
                zero += held;
                elapsed += held;
                if elapsed == n {
                    break;
                }
            }
            let remaining = n - elapsed;
            let up = self.labels.counted(rng.random::<f64>());
            let u = 1.0 - rng.random::<f64>();
            match sample_return_half(u, remaining / 2) {
                Some(k) => {
                    if up {
                        pos += 2 * k;
                    }
                    elapsed += 2 * k;
                }
                None => {
                    if up {
                        pos += remaining;
                    }
                    let j = meander_end(rng, remaining) as i64;
                    terminal = if up { j } else { -j };
                    elapsed = n;
                }
            }
        }
        let h = self.h;
        let sample = OccupationSample {
            a_t: h * (pos + zero) as f64,
            b_t: h * pos as f64,
            zero_time: h * zero as f64,
            terminal: terminal as f64 * h.sqrt(),
        };
        (sample, terminal)
    }
}

/// Euler scheme for `dX = σ(X) dW` with `σ = sigma_plus` on `[0, ∞)` and
/// `sigma_minus` below. Each step's occupation is the time the linear
/// interpolant spends in `[0, ∞)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EulerScheme {
    pub steps: u64,
    pub h: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

impl EulerScheme {
    pub fn path(&self, rng: &mut ChaCha8Rng) -> OccupationSample {
        let sq = self.h.sqrt();
        let (mut x, mut a) = (0.0f64, 0.0f64);
        for _ in 0..self.steps {
            let z: f64 = StandardNormal.sample(rng);
            let s = if x >= 0.0 { self.sigma_plus } else { self.sigma_minus };
            let y = x + s * sq * z;
            a += if x >= 0.0 && y >= 0.0 {
                1.0
            } else if x < 0.0 && y < 0.0 {
                0.0
            } else {
                x.max(y) / (x.abs() + y.abs())
            };
            x = y;
        }
        let a_t = a * self.h;
        OccupationSample { a_t, b_t: a_t, zero_time: 0.0, terminal: x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn return_law_matches_table_and_asymptotics() {
        // P(T > 2k) = u_k: the sampler returns k exactly when u_k < u <= u_{k-1}.
        let table = return_table();
        for k in [1usize, 2, 7, 100, 4000] {
            let u = 0.5 * (table[k] + table[k - 1]);
            assert_eq!(sample_return_half(u, u64::MAX / 4), Some(k as u64));
        }
        for k in [5000u64, 123_456, 10_000_000] {
            if k < 1_000_000 {
                // Direct product; rounding grows like k * eps.
                let exact = (1..=k).fold(1.0f64, |u, j| u * (2 * j - 1) as f64 / (2 * j) as f64);
                assert!((exact - ln_u(k).exp()).abs() < 1e-10 * exact);
            }
            let (lo, hi) = (ln_u(k).exp(), ln_u(k - 1).exp());
            let u = 0.5 * (lo + hi);
            assert_eq!(sample_return_half(u, u64::MAX / 4), Some(k));
        }
        assert_eq!(sample_return_half(0.01, 3), None);
        assert_eq!(sample_return_half(1.0, 0), None);
        assert_eq!(sample_return_half(1.0, 1), Some(1));
    }
}
