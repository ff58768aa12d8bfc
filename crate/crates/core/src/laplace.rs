//! Numerical Laplace inversion by the fixed Talbot contour, and the
//! small-λ limit check for the sticky Brownian transforms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{check_nonnegative, check_positive, Error, Result};
use crate::moments::{u_b, MOMENT_ORDER_CAP};
use crate::special_fn::{binomial_big, central_binomial_ratio, factorial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownSign {
    Positive,
    Unknown,
}

/// A Laplace-domain function `λ ↦ F(λ)`. The inverter evaluates it off the
/// real axis, so it is stored as its analytic continuation to the cut plane.
#[derive(Clone)]
pub struct TransformFn {
    eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub known_sign: KnownSign,
    /// Behaviour as λ → 0 and λ → ∞.
    pub growth_note: String,
}

impl fmt::Debug for TransformFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformFn")
            .field("known_sign", &self.known_sign)
            .field("growth_note", &self.growth_note)
            .finish_non_exhaustive()
    }
}

impl TransformFn {
    pub fn new(
        eval: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        known_sign: KnownSign,
        growth_note: impl Into<String>,
    ) -> Self {
        TransformFn { eval: Arc::new(eval), known_sign, growth_note: growth_note.into() }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        (self.eval)(Complex64::new(lambda, 0.0)).re
    }

    pub fn eval_complex(&self, s: Complex64) -> Complex64 {
        (self.eval)(s)
    }

    /// `n! / λ^{n+1}`, the transform of `t^n`.
    pub fn power(n: usize) -> Self {
        let c = factorial::<f64>(n);
        TransformFn::new(
            move |s: Complex64| c / s.powi(n as i32 + 1),
            KnownSign::Positive,
            format!("pole of order {} at 0; decays like λ^-{}", n + 1, n + 1),
        )
    }

    /// `B̂_n(λ)` for sticky Brownian motion with stickiness `gamma`: the
    /// transform of `E_0(B_t^n)`, with `B_t` the time spent in `(0, ∞)`.
    pub fn sticky_b(gamma: f64, n: usize) -> Result<Self> {
        check_nonnegative("gamma", gamma)?;
        if n == 0 || n > MOMENT_ORDER_CAP {
            return Err(Error::OrderCap { requested: n, cap: MOMENT_ORDER_CAP });
        }
        let coeffs: Vec<f64> = (0..n)
            .map(|k| {
                let c = binomial_big((n - 1 + k) as u64, k as u64).to_f64().unwrap_or(f64::INFINITY);
                c / 2f64.powi((n + k - 1) as i32)
            })
            .collect();
        let nf = factorial::<f64>(n);
        Ok(TransformFn::new(
            move |s: Complex64| {
                let h = 1.0 / (2.0 + gamma * (2.0 * s).sqrt());
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, c) in coeffs.iter().enumerate() {
                    acc += c * h.powi((n - k) as i32);
                }
                nf * acc / s.powi(n as i32 + 1)
            },
            KnownSign::Positive,
            format!("~ n! C(2n,n)/4^n λ^-{} as λ → 0; decays like λ^-{} as λ → ∞", n + 1, n + 1),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotConfig {
    /// Number of contour nodes; the error estimate reruns at `order / 2`.
    pub order: usize,
    /// Inversion fails when the two orders disagree by more than
    /// `rel_tol * |value| + abs_tol`.
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for TalbotConfig {
    fn default() -> Self {
        TalbotConfig { order: 32, rel_tol: 1e-6, abs_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inversion {
    pub t: f64,
    pub value: f64,
    /// `|f_M(t) - f_{M/2}(t)|`.
    pub error_estimate: f64,
    pub order: usize,
}

/// Fixed Talbot sum of order `m` at time `t`.
pub fn talbot(f: &TransformFn, t: f64, m: usize) -> f64 {
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut acc = 0.5 * (r * t).exp() * f.eval(r);
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = 1.0 / theta.tan();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * f.eval_complex(s) * Complex64::new(1.0, sigma);
        acc += term.re;
    }
    r / m as f64 * acc
}

pub fn invert(f: &TransformFn, t: f64) -> Result<Inversion> {
    invert_with(f, t, &TalbotConfig::default())
}

pub fn invert_with(f: &TransformFn, t: f64, cfg: &TalbotConfig) -> Result<Inversion> {
    check_positive("t", t)?;
    if cfg.order < 4 {
        return Err(Error::Config(format!("Talbot order {} is below 4", cfg.order)));
    }
    let value = talbot(f, t, cfg.order);
    let coarse = talbot(f, t, cfg.order / 2);
    let err = (value - coarse).abs();
    if !value.is_finite() || err > cfg.rel_tol * value.abs() + cfg.abs_tol {
        return Err(Error::Inversion { t, disagreement: err });
    }
    Ok(Inversion { t, value, error_estimate: err, order: cfg.order })
}

/// `E_0(B_t^n)` for sticky Brownian motion by inverting `B̂_n`.
pub fn sticky_b_moment(gamma: f64, n: usize, t: f64) -> Result<Inversion> {
    invert(&TransformFn::sticky_b(gamma, n)?, t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauberianRow {
    pub lambda: f64,
    /// `λ^{n+1} B̂_n(λ)`.
    pub scaled: f64,
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauberianReport {
    pub gamma: f64,
    pub n: usize,
    /// `n! C(2n, n) / 4^n`.
    pub limit: f64,
    /// Decreasing λ: decades from 1 down to `lambda_min`.
    pub rows: Vec<TauberianRow>,
    /// Whether the scaled values increase toward the limit as λ decreases.
    pub monotone: bool,
    pub final_gap: f64,
}

/// Tracks `λ^{n+1} B̂_n(λ)` toward its λ → 0 limit. `gamma = 0` is allowed
/// and gives the constant limit.
pub fn tauberian_check(gamma: f64, n: usize, lambda_min: f64) -> Result<TauberianReport> {
    check_nonnegative("gamma", gamma)?;
    check_positive("lambda_min", lambda_min)?;
    if n == 0 || n > MOMENT_ORDER_CAP {
        return Err(Error::OrderCap { requested: n, cap: MOMENT_ORDER_CAP });
    }
    let nf = factorial::<f64>(n);
    let limit = nf * central_binomial_ratio::<f64>(n);
    let mut lambdas = Vec::new();
    let mut l = 1.0f64;
    while l > lambda_min * (1.0 + 1e-12) {
        lambdas.push(l);
        l /= 10.0;
    }
    lambdas.push(lambda_min);
    let rows: Vec<TauberianRow> = lambdas
        .into_iter()
        .map(|lambda| {
            // Positive polynomial in H: no cancellation as λ → 0.
            let scaled = nf * u_b(gamma, lambda, n)[n - 1];
            TauberianRow { lambda, scaled, rel_gap: (scaled - limit).abs() / limit }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].scaled >= w[0].scaled) && rows.iter().all(|r| r.scaled <= limit * (1.0 + 1e-14));
    let final_gap = rows.last().map(|r| r.rel_gap).unwrap_or(f64::NAN);
    Ok(TauberianReport { gamma, n, limit, rows, monotone, final_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_powers() {
        let r = invert(&TransformFn::power(1), 3.0).unwrap();
        assert!((r.value - 3.0).abs() < 1e-8);
        let r = invert(&TransformFn::power(3), 2.0).unwrap();
        assert!((r.value - 8.0).abs() < 1e-6);
    }

    #[test]
    fn complex_and_real_evaluation_agree() {
        let f = TransformFn::sticky_b(1.0, 2).unwrap();
        let v = crate::moments::sticky_bhat(1.0, 0.7, 2).unwrap();
        assert!((f.eval(0.7) - v).abs() < 1e-14 * v);
    }
}
