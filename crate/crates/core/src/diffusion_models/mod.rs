//! One-dimensional diffusion descriptors: speed measure, scale function,
//! fundamental solutions, Wronskian, Green kernel and the Laplace transform
//! of the first hitting time of 0 together with its λ-derivatives.
//!
//! Built-in models implement [`Diffusion`] with closed forms. A user-supplied
//! diffusion only needs the speed measure, scale function, fundamental pair
//! and Wronskian; scale derivatives and hitting-transform derivatives then
//! fall back to finite differences.

mod config;
mod oscillating;
mod skew_bessel;
mod skew_bm;
mod sticky;

pub use config::DiffusionConfig;
pub use oscillating::OscillatingBm;
pub use skew_bessel::{bessel_hitting_coefficients, SkewBessel, BESSEL_HITTING_ORDER_MAX};
pub use skew_bm::SkewBm;
pub use sticky::StickyBm;

use crate::error::{Error, Result};
use crate::numdiff::central_derivative;
use crate::quadrature::{integrate_endpoint_singular, integrate_to_infinity, QuadConfig};

/// Which one-sided derivative to take at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Half-line of the state space relative to the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Positive,
    Negative,
}

pub trait Diffusion: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &str;

    fn params(&self) -> Vec<(&'static str, f64)>;

    /// Density of the speed measure with respect to Lebesgue measure, `x != 0`.
    fn speed_density(&self, x: f64) -> f64;

    /// Mass of the speed measure at the origin.
    fn speed_atom_at_zero(&self) -> f64 {
        0.0
    }

    /// Scale function normalized by `S(0) = 0`.
    fn scale(&self, x: f64) -> f64;

    /// Increasing fundamental solution.
    fn psi(&self, lambda: f64, x: f64) -> f64;

    /// Decreasing fundamental solution.
    fn phi(&self, lambda: f64, x: f64) -> f64;

    fn wronskian(&self, lambda: f64) -> f64;

    fn is_self_similar(&self) -> bool;

    /// Speed density behaves like `|x|^exponent` at the origin; used to
    /// absorb the singularity in integrals against `m`.
    fn speed_exponent_at_zero(&self) -> f64 {
        0.0
    }

    /// Length over which `phi_λ` decays by a factor `e`, for tail integration.
    fn decay_length(&self, lambda: f64) -> f64 {
        1.0 / (2.0 * lambda).sqrt()
    }

    /// One-sided derivative of `psi_λ` with respect to the scale function.
    fn psi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        scale_deriv_fd(self, |y| self.psi(lambda, y), x, side)
    }

    /// One-sided derivative of `phi_λ` with respect to the scale function.
    fn phi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        scale_deriv_fd(self, |y| self.phi(lambda, y), x, side)
    }

    fn green_kernel(&self, lambda: f64, x: f64, y: f64) -> f64 {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        self.psi(lambda, lo) * self.phi(lambda, hi) / self.wronskian(lambda)
    }

    /// `E_x exp(-λ H_0)`.
    fn hitting_transform(&self, x: f64, lambda: f64) -> f64 {
        if x >= 0.0 {
            self.phi(lambda, x) / self.phi(lambda, 0.0)
        } else {
            self.psi(lambda, x) / self.psi(lambda, 0.0)
        }
    }

    /// Highest λ-derivative order supported by [`Diffusion::hitting_transform_deriv`].
    fn hitting_order_max(&self) -> usize {
        4
    }

    /// `d^k/dλ^k E_x exp(-λ H_0) = (-1)^k E_x(H_0^k exp(-λ H_0))`.
    fn hitting_transform_deriv(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        if k > self.hitting_order_max() {
            return Err(Error::DerivativeOrder { k, max: self.hitting_order_max() });
        }
        Ok(central_derivative(|l| self.hitting_transform(x, l), lambda, 1e-2 * lambda, k))
    }
}

fn scale_deriv_fd<D: Diffusion + ?Sized>(d: &D, f: impl Fn(f64) -> f64, x: f64, side: Side) -> f64 {
    // Richardson-extrapolated one-sided difference quotient in scale coordinates.
    let h = 1e-4 * x.abs().max(1.0);
    let sgn = match side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    let quotient = |step: f64| {
        let y = x + sgn * step;
        (f(y) - f(x)) / (d.scale(y) - d.scale(x))
    };
    2.0 * quotient(0.5 * h) - quotient(h)
}

/// λ-derivatives of `exp(-y sqrt(2λ))`, `y >= 0`: the hitting transform of
/// Brownian motion at distance `y`.
pub(crate) fn exp_sqrt_deriv(y: f64, lambda: f64, k: usize) -> f64 {
    let z = y * (2.0 * lambda).sqrt();
    if k == 0 {
        return (-z).exp();
    }
    if z == 0.0 {
        return 0.0;
    }
    // (-1)^k (2λ)^{-k} e^{-z} z^k Σ_m (k-1+m)! / (m! (k-1-m)!) (2z)^{-m}
    let n = k - 1;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..n {
        term *= ((n + m + 1) * (n - m)) as f64 / ((m + 1) as f64 * 2.0 * z);
        sum += term;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (z / (2.0 * lambda)).powi(k as i32) * (-z).exp() * sum
}

/// Borrowed view `(x, λ, k) -> d^k/dλ^k E_x exp(-λ H_0)`.
#[derive(Debug, Clone, Copy)]
pub struct HittingTransform<'a, D: Diffusion + ?Sized> {
    diffusion: &'a D,
}

impl<'a, D: Diffusion + ?Sized> HittingTransform<'a, D> {
    pub fn new(diffusion: &'a D) -> Self {
        HittingTransform { diffusion }
    }

    pub fn eval(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        if k == 0 {
            Ok(self.diffusion.hitting_transform(x, lambda))
        } else {
            self.diffusion.hitting_transform_deriv(x, lambda, k)
        }
    }

    pub fn order_max(&self) -> usize {
        self.diffusion.hitting_order_max()
    }
}

/// `∫ G_λ(0,y) h(y) m(dy)` over one open half-line, plus the atom term
/// `m({0}) G_λ(0,0) h(0)` when `include_atom` is set.
pub fn green_integral<D: Diffusion + ?Sized>(
    d: &D,
    lambda: f64,
    h: impl Fn(f64) -> f64,
    half: HalfLine,
    include_atom: bool,
    cfg: &QuadConfig,
) -> Result<f64> {
    let sgn = match half {
        HalfLine::Positive => 1.0,
        HalfLine::Negative => -1.0,
    };
    let integrand = |u: f64| {
        let y = sgn * u;
        d.green_kernel(lambda, 0.0, y) * h(y) * d.speed_density(y)
    };
    let len = d.decay_length(lambda);
    let alpha = d.speed_exponent_at_zero();
    let head = integrate_endpoint_singular(|p| integrand(p.x), 0.0, len, alpha.min(0.0), 0.0, cfg)?;
    let tail = integrate_to_infinity(integrand, len, len, cfg)?;
    let mut total = head.value + tail.value;
    if include_atom {
        let atom = d.speed_atom_at_zero();
        if atom > 0.0 {
            total += atom * d.green_kernel(lambda, 0.0, 0.0) * h(0.0);
        }
    }
    Ok(total)
}

/// Built-in diffusions behind one value type.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionSpec {
    SkewBessel(SkewBessel),
    SkewBm(SkewBm),
    OscillatingBm(OscillatingBm),
    StickyBm(StickyBm),
}

pub fn make_skew_bessel(nu: f64, beta: f64) -> Result<DiffusionSpec> {
    Ok(DiffusionSpec::SkewBessel(SkewBessel::new(nu, beta)?))
}

pub fn make_skew_bm(beta: f64) -> Result<DiffusionSpec> {
    Ok(DiffusionSpec::SkewBm(SkewBm::new(beta)?))
}

pub fn make_oscillating_bm(sigma_plus: f64, sigma_minus: f64) -> Result<DiffusionSpec> {
    Ok(DiffusionSpec::OscillatingBm(OscillatingBm::new(sigma_plus, sigma_minus)?))
}

pub fn make_sticky_bm(gamma: f64) -> Result<DiffusionSpec> {
    Ok(DiffusionSpec::StickyBm(StickyBm::new(gamma)?))
}

macro_rules! delegate {
    ($self:ident, $inner:ident => $body:expr) => {
        match $self {
            DiffusionSpec::SkewBessel($inner) => $body,
            DiffusionSpec::SkewBm($inner) => $body,
            DiffusionSpec::OscillatingBm($inner) => $body,
            DiffusionSpec::StickyBm($inner) => $body,
        }
    };
}

impl Diffusion for DiffusionSpec {
    fn name(&self) -> &str {
        delegate!(self, d => d.name())
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        delegate!(self, d => d.params())
    }
    fn speed_density(&self, x: f64) -> f64 {
        delegate!(self, d => d.speed_density(x))
    }
    fn speed_atom_at_zero(&self) -> f64 {
        delegate!(self, d => d.speed_atom_at_zero())
    }
    fn scale(&self, x: f64) -> f64 {
        delegate!(self, d => d.scale(x))
    }
    fn psi(&self, lambda: f64, x: f64) -> f64 {
        delegate!(self, d => d.psi(lambda, x))
    }
    fn phi(&self, lambda: f64, x: f64) -> f64 {
        delegate!(self, d => d.phi(lambda, x))
    }
    fn wronskian(&self, lambda: f64) -> f64 {
        delegate!(self, d => d.wronskian(lambda))
    }
    fn is_self_similar(&self) -> bool {
        delegate!(self, d => d.is_self_similar())
    }
    fn speed_exponent_at_zero(&self) -> f64 {
        delegate!(self, d => d.speed_exponent_at_zero())
    }
    fn decay_length(&self, lambda: f64) -> f64 {
        delegate!(self, d => d.decay_length(lambda))
    }
    fn psi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        delegate!(self, d => d.psi_scale_deriv(lambda, x, side))
    }
    fn phi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        delegate!(self, d => d.phi_scale_deriv(lambda, x, side))
    }
    fn green_kernel(&self, lambda: f64, x: f64, y: f64) -> f64 {
        delegate!(self, d => d.green_kernel(lambda, x, y))
    }
    fn hitting_transform(&self, x: f64, lambda: f64) -> f64 {
        delegate!(self, d => d.hitting_transform(x, lambda))
    }
    fn hitting_order_max(&self) -> usize {
        delegate!(self, d => d.hitting_order_max())
    }
    fn hitting_transform_deriv(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        delegate!(self, d => d.hitting_transform_deriv(x, lambda, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_family_first_derivative() {
        // d/dλ exp(-x sqrt(2λ)) = -(x / sqrt(2λ)) exp(-x sqrt(2λ))
        let v = exp_sqrt_deriv(1.0, 0.5, 1);
        assert!((v + (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn exp_family_matches_finite_differences() {
        for &(y, lambda) in &[(0.3, 0.7), (1.0, 2.0), (2.5, 0.4)] {
            for k in 1..=4 {
                let fd = central_derivative(|l| exp_sqrt_deriv(y, l, 0), lambda, 1e-2 * lambda, k);
                let exact = exp_sqrt_deriv(y, lambda, k);
                assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1e-3), "y={y} λ={lambda} k={k}");
            }
        }
    }
}
