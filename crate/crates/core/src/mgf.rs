//! Moment generating functions of occupation times at an independent
//! exponential time `T ~ Exp(λ)`.

use serde::Serialize;

use crate::diffusion_models::{green_integral, Diffusion, HalfLine, Side};
use crate::error::{check_nonnegative, check_open, check_positive, Error, Result};
use crate::moments::generic_laplace_moments_with;
use crate::numdiff::central_derivative;
use crate::quadrature::QuadConfig;
use crate::special_fn::factorial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MgfMethod {
    ClosedForm,
    Quadrature,
    TwoSided,
}

/// Which occupation time the threshold point itself is credited to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSide {
    /// `A^+` counts `[α, ∞)`; uses left scale derivatives.
    Plus,
    /// `A^-` counts `(-∞, α]`; uses right scale derivatives.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MgfValue {
    pub value: f64,
    pub lambda: f64,
    pub r: f64,
    pub q: f64,
    /// Starting point.
    pub x: f64,
    pub diffusion: String,
    pub params: Vec<(String, f64)>,
    pub method: MgfMethod,
}

impl MgfValue {
    fn new<D: Diffusion + ?Sized>(d: &D, value: f64, lambda: f64, r: f64, q: f64, x: f64, method: MgfMethod) -> Self {
        MgfValue {
            value,
            lambda,
            r,
            q,
            x,
            diffusion: d.name().to_string(),
            params: d.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            method,
        }
    }
}

/// `E_x exp(-r A_T)` by quadrature of the Green-kernel integrals.
pub fn mgf_exp_time<D: Diffusion + ?Sized>(d: &D, lambda: f64, r: f64, x: f64) -> Result<MgfValue> {
    mgf_exp_time_with(d, lambda, r, x, true, &QuadConfig::default())
}

/// As [`mgf_exp_time`]. With `include_atom = false` a speed-measure atom at 0
/// is left out, which gives the transform of the time spent in `(0, ∞)`.
pub fn mgf_exp_time_with<D: Diffusion + ?Sized>(
    d: &D,
    lambda: f64,
    r: f64,
    x: f64,
    include_atom: bool,
    cfg: &QuadConfig,
) -> Result<MgfValue> {
    check_positive("lambda", lambda)?;
    check_nonnegative("r", r)?;
    if !x.is_finite() {
        return Err(Error::Domain { name: "x", value: x, range: "finite reals" });
    }
    let at0 = mgf_at_origin(d, lambda, r, include_atom, cfg)?;
    let value = if x > 0.0 {
        let p = lambda / (lambda + r);
        p - (p - at0) * d.hitting_transform(x, lambda + r)
    } else if x < 0.0 {
        // No occupation accrues before the first visit to 0.
        let f = d.hitting_transform(x, lambda);
        1.0 - f + f * at0
    } else {
        at0
    };
    Ok(MgfValue::new(d, value, lambda, r, 0.0, x, MgfMethod::Quadrature))
}

// r may be slightly negative (r > -λ) for finite differences around r = 0.
fn mgf_at_origin<D: Diffusion + ?Sized>(d: &D, lambda: f64, r: f64, include_atom: bool, cfg: &QuadConfig) -> Result<f64> {
    if r == 0.0 {
        return Ok(1.0);
    }
    let delta1 = green_integral(d, lambda, |_| 1.0, HalfLine::Positive, include_atom, cfg)?;
    let delta2 = green_integral(d, lambda, |y| d.hitting_transform(y, lambda + r), HalfLine::Positive, include_atom, cfg)?;
    Ok((lambda + r * (1.0 - lambda * delta1) / (1.0 + r * delta2)) / (lambda + r))
}

/// Closed form for the skew two-sided Bessel process:
/// `(β λ^{ν+1} + (1-β)(λ+r)^{ν+1}) / (β (λ+r) λ^ν + (1-β)(λ+r)^{ν+1})`.
pub fn mgf_bessel_closed(nu: f64, beta: f64, lambda: f64, r: f64) -> Result<f64> {
    check_open("nu", nu, -1.0, 0.0, "(-1, 0)")?;
    check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
    check_positive("lambda", lambda)?;
    check_nonnegative("r", r)?;
    let lr = lambda + r;
    let num = beta * lambda.powf(nu + 1.0) + (1.0 - beta) * lr.powf(nu + 1.0);
    let den = beta * lr * lambda.powf(nu) + (1.0 - beta) * lr.powf(nu + 1.0);
    Ok(num / den)
}

/// `E_α exp(-r A^+_T - q A^-_T)` from the fundamental solutions and their
/// one-sided scale derivatives at the threshold `alpha`.
pub fn mgf_two_sided<D: Diffusion + ?Sized>(
    d: &D,
    lambda: f64,
    r: f64,
    q: f64,
    zero_side: ZeroSide,
    alpha: f64,
) -> Result<MgfValue> {
    check_positive("lambda", lambda)?;
    check_nonnegative("r", r)?;
    check_nonnegative("q", q)?;
    let side = match zero_side {
        ZeroSide::Plus => Side::Left,
        ZeroSide::Minus => Side::Right,
    };
    let (lr, lq) = (lambda + r, lambda + q);
    let phi = d.phi(lr, alpha);
    let psi = d.psi(lq, alpha);
    let dphi = d.phi_scale_deriv(lr, alpha, side);
    let dpsi = d.psi_scale_deriv(lq, alpha, side);
    let den = phi * dpsi - psi * dphi;
    if !(den.is_finite() && den != 0.0) {
        return Err(Error::Singular("two-sided transform denominator"));
    }
    let value = (lambda / lq * phi * dpsi - lambda / lr * psi * dphi) / den;
    Ok(MgfValue::new(d, value, lambda, r, q, alpha, MgfMethod::TwoSided))
}

/// One row of [`mgf_moment_consistency`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n: usize,
    /// n-th finite-difference derivative of `r ↦ E_0 exp(-r A_T)` at 0.
    pub finite_difference: f64,
    /// `(-1)^n n! / λ^n · E_0(A_1^n)`.
    pub from_moments: f64,
    pub rel_error: f64,
}

/// Compares r-derivatives of the transform at `r = 0` with the moments from
/// the Laplace-domain recursion, `n = 1..=n_max` (`n_max <= 4`).
pub fn mgf_moment_consistency<D: Diffusion + ?Sized>(d: &D, lambda: f64, n_max: usize) -> Result<Vec<ConsistencyRow>> {
    check_positive("lambda", lambda)?;
    if !d.is_self_similar() {
        return Err(Error::Config(format!("{} is not self-similar", d.name())));
    }
    if n_max == 0 || n_max > 4 {
        return Err(Error::OrderCap { requested: n_max, cap: 4 });
    }
    let cfg = QuadConfig::default();
    let moments = generic_laplace_moments_with(d, lambda, n_max, true, &cfg)?.table.values_f64();
    let h = 1e-3 * lambda;
    let failed = std::cell::Cell::new(None);
    let f = |r: f64| match mgf_at_origin(d, lambda, r, true, &cfg) {
        Ok(v) => v,
        Err(e) => {
            failed.set(Some(e.to_string()));
            f64::NAN
        }
    };
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let fd = central_derivative(f, 0.0, h, n);
        if let Some(msg) = failed.take() {
            return Err(Error::Config(msg));
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want = sign * factorial::<f64>(n) / lambda.powi(n as i32) * moments[n - 1];
        rows.push(ConsistencyRow { n, finite_difference: fd, from_moments: want, rel_error: (fd - want).abs() / want.abs() });
    }
    Ok(rows)
}
