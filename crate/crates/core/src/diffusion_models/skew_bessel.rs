use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Diffusion, Side};
use crate::error::{check_open, Error, Result};
use crate::scalar::ratio_to_f64;
use crate::special_fn::{bessel_i, bessel_i_pow_scaled, bessel_k, bessel_k_seq, factorial_big, gamma};

/// Highest λ-derivative of the hitting transform with precomputed exact
/// coefficients.
pub const BESSEL_HITTING_ORDER_MAX: usize = 32;

/// Skew two-sided Bessel process with index `nu ∈ (-1, 0)` and skewness
/// `beta ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewBessel {
    nu: f64,
    beta: f64,
}

impl SkewBessel {
    pub fn new(nu: f64, beta: f64) -> Result<Self> {
        check_open("nu", nu, -1.0, 0.0, "(-1, 0)")?;
        check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
        Ok(SkewBessel { nu, beta })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn rate(lambda: f64) -> f64 {
        (2.0 * lambda).sqrt()
    }

    // x^{-ν} I_ν(cx) and x^{-ν} K_ν(cx) on x >= 0, with their limits at 0.
    fn psi_hat(&self, lambda: f64, x: f64) -> f64 {
        let c = Self::rate(lambda);
        c.powf(self.nu) * bessel_i_pow_scaled(self.nu, c * x)
    }

    fn phi_hat(&self, lambda: f64, x: f64) -> f64 {
        let c = Self::rate(lambda);
        if x == 0.0 {
            (0.5 * c).powf(self.nu) * gamma(-self.nu) / 2.0
        } else {
            x.powf(-self.nu) * bessel_k(self.nu, c * x)
        }
    }

    fn sin_term(&self) -> f64 {
        (-PI * self.nu).sin()
    }

    // Coefficients of the increasing solution on the side where it is built
    // from both one-sided solutions.
    fn mix(&self, weight: f64) -> (f64, f64) {
        (PI / (2.0 * weight * self.sin_term()), (1.0 - weight) / weight)
    }

    // lim_{x→0} x^{ν+1} K_{ν+1}(cx) · c = Γ(ν+1) (2/c)^ν
    fn kink(&self, lambda: f64) -> f64 {
        gamma(self.nu + 1.0) * (2.0 / Self::rate(lambda)).powf(self.nu)
    }

    fn hitting_const(&self) -> f64 {
        2f64.powf(self.nu + 1.0) / gamma(-self.nu)
    }
}

/// Per-order coefficients `a_{k,j}` such that
/// `d^k/dλ^k f(x;λ) = 2^{ν+1} / (λ^k Γ(-ν)) Σ_j a_{k,j} z^{j-ν} K_{ν+j}(z)`,
/// `z = x sqrt(2λ)`. Summed exactly over the inner index, so terms that
/// cancel identically are dropped before any floating-point evaluation.
fn derivative_coefficients() -> &'static Vec<Vec<(usize, f64)>> {
    static TABLE: OnceLock<Vec<Vec<(usize, f64)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let fact = |n: usize| BigInt::from(factorial_big(n as u64));
        (0..=BESSEL_HITTING_ORDER_MAX)
            .map(|k| {
                if k == 0 {
                    return vec![(0, 1.0)];
                }
                let mut row = Vec::new();
                for j in 1..=k {
                    let mut acc = BigRational::zero();
                    for i in j..=k.min(2 * j) {
                        let num = fact(2 * k - 1 - i) * BigInt::from(i);
                        let den = fact(k - i) * fact(i - j) * fact(2 * j - i) * BigInt::from(2).pow((2 * k - j) as u32);
                        let term = BigRational::new(num, den);
                        if (k + i - j) % 2 == 0 {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    if !acc.is_zero() {
                        row.push((j, ratio_to_f64(&acc)));
                    }
                }
                row
            })
            .collect()
    })
}

/// Nonzero entries `(j, a_{k,j})` of the Bessel hitting-transform expansion.
pub fn bessel_hitting_coefficients(k: usize) -> Option<&'static [(usize, f64)]> {
    derivative_coefficients().get(k).map(|v| v.as_slice())
}

// z^{j-ν} K_{ν+j}(z) from a precomputed K-sequence, falling back to the
// small-argument limit 2^{ν+j-1} Γ(ν+j) z^{-2ν} when K overflows.
fn pow_k(nu: f64, j: usize, z: f64, k_val: f64) -> f64 {
    let v = z.powf(j as f64 - nu) * k_val;
    if v.is_finite() {
        v
    } else {
        let mu = nu + j as f64;
        2f64.powf(mu - 1.0) * gamma(mu) * z.powf(-2.0 * nu)
    }
}

impl Diffusion for SkewBessel {
    fn name(&self) -> &str {
        "skew-bessel"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("nu", self.nu), ("beta", self.beta)]
    }

    fn speed_density(&self, x: f64) -> f64 {
        let w = if x > 0.0 { self.beta } else { 1.0 - self.beta };
        4.0 * w * x.abs().powf(2.0 * self.nu + 1.0)
    }

    fn scale(&self, x: f64) -> f64 {
        if x >= 0.0 {
            -x.powf(-2.0 * self.nu) / (4.0 * self.beta * self.nu)
        } else {
            (-x).powf(-2.0 * self.nu) / (4.0 * (1.0 - self.beta) * self.nu)
        }
    }

    fn psi(&self, lambda: f64, x: f64) -> f64 {
        if x >= 0.0 {
            let (a, b) = self.mix(self.beta);
            a * self.psi_hat(lambda, x) - b * self.phi_hat(lambda, x)
        } else {
            self.phi_hat(lambda, -x)
        }
    }

    fn phi(&self, lambda: f64, x: f64) -> f64 {
        if x >= 0.0 {
            self.phi_hat(lambda, x)
        } else {
            let (a, b) = self.mix(1.0 - self.beta);
            a * self.psi_hat(lambda, -x) - b * self.phi_hat(lambda, -x)
        }
    }

    fn wronskian(&self, _lambda: f64) -> f64 {
        PI / self.sin_term()
    }

    fn is_self_similar(&self) -> bool {
        true
    }

    fn speed_exponent_at_zero(&self) -> f64 {
        2.0 * self.nu + 1.0
    }

    // The scale derivatives are continuous at 0, so `side` only matters
    // through the limit there.
    fn psi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let c = Self::rate(lambda);
        let nu = self.nu;
        if x > 0.0 {
            let (a, b) = self.mix(self.beta);
            let z = c * x;
            2.0 * self.beta * c * x.powf(nu + 1.0) * (a * bessel_i(nu + 1.0, z) + b * bessel_k(nu + 1.0, z))
        } else if x < 0.0 {
            let z = -c * x;
            2.0 * (1.0 - self.beta) * c * (-x).powf(nu + 1.0) * bessel_k(nu + 1.0, z)
        } else {
            2.0 * (1.0 - self.beta) * self.kink(lambda)
        }
    }

    fn phi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let c = Self::rate(lambda);
        let nu = self.nu;
        if x > 0.0 {
            -2.0 * self.beta * c * x.powf(nu + 1.0) * bessel_k(nu + 1.0, c * x)
        } else if x < 0.0 {
            let (a, b) = self.mix(1.0 - self.beta);
            let z = -c * x;
            -2.0 * (1.0 - self.beta) * c * (-x).powf(nu + 1.0) * (a * bessel_i(nu + 1.0, z) + b * bessel_k(nu + 1.0, z))
        } else {
            -2.0 * self.beta * self.kink(lambda)
        }
    }

    fn hitting_transform(&self, x: f64, lambda: f64) -> f64 {
        if x == 0.0 {
            return 1.0;
        }
        let z = x.abs() * Self::rate(lambda);
        self.hitting_const() * z.powf(-self.nu) * bessel_k(self.nu, z)
    }

    fn hitting_order_max(&self) -> usize {
        BESSEL_HITTING_ORDER_MAX
    }

    fn hitting_transform_deriv(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        let Some(row) = bessel_hitting_coefficients(k) else {
            return Err(Error::DerivativeOrder { k, max: BESSEL_HITTING_ORDER_MAX });
        };
        if k == 0 {
            return Ok(self.hitting_transform(x, lambda));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let z = x.abs() * Self::rate(lambda);
        let ks = bessel_k_seq(self.nu, z, k + 1);
        let sum: f64 = row.iter().map(|&(j, a)| a * pow_k(self.nu, j, z, ks[j])).sum();
        Ok(self.hitting_const() * sum / lambda.powi(k as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_collapses_to_top_order() {
        // Combined coefficients vanish except j = k, where a_{k,k} = (-1/2)^k.
        for k in 1..=BESSEL_HITTING_ORDER_MAX {
            let row = bessel_hitting_coefficients(k).unwrap();
            assert_eq!(row.len(), 1, "k={k}");
            assert_eq!(row[0].0, k);
            let want = (-0.5f64).powi(k as i32);
            assert!((row[0].1 - want).abs() <= 1e-15 * want.abs());
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(SkewBessel::new(0.1, 0.5).is_err());
        assert!(SkewBessel::new(-1.0, 0.5).is_err());
        assert!(SkewBessel::new(-0.3, 1.0).is_err());
        assert!(SkewBessel::new(-0.3, f64::NAN).is_err());
    }

    #[test]
    fn order_cap_is_enforced() {
        let d = SkewBessel::new(-0.3, 0.6).unwrap();
        assert!(matches!(d.hitting_transform_deriv(1.0, 1.0, 33), Err(Error::DerivativeOrder { .. })));
    }

    #[test]
    fn values_at_origin_join_continuously() {
        let d = SkewBessel::new(-0.3, 0.6).unwrap();
        let lambda = 1.3;
        let at0 = d.psi(lambda, 0.0);
        assert!((d.phi(lambda, 0.0) - at0).abs() < 1e-14 * at0);
        for eps in [1e-6, 1e-9] {
            assert!((d.psi(lambda, eps) - at0).abs() < 1e-3 * at0);
            assert!((d.psi(lambda, -eps) - at0).abs() < 1e-3 * at0);
        }
    }
}
