//! Special-function kernels: gamma, generalized binomials, Stirling numbers
//! and modified Bessel functions of real order.

mod bessel;
mod stirling;

pub use bessel::{
    bessel_i, bessel_i_checked, bessel_i_pow_scaled, bessel_k, bessel_k_checked, bessel_k_scaled, bessel_k_seq,
    BesselEval, RangeFlag, I_OVERFLOW_THRESHOLD, K_UNDERFLOW_THRESHOLD,
};
pub use stirling::{stirling1_unsigned, stirling2, StirlingCache, STIRLING_CACHE_MAX};

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::scalar::Scalar;

/// Gamma function on the reals (poles return ±inf or NaN).
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Natural log of |Γ(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`.
///
/// Uses the falling product, so it is finite for every real `x` (including
/// negative integers) and exact for rational `x`.
pub fn gen_binomial<T: Scalar>(x: &T, k: usize) -> T {
    let mut acc = T::one();
    for i in 0..k {
        let num = x.clone() - T::from_int(i as i64);
        acc = acc * num / T::from_int(i as i64 + 1);
    }
    acc
}

/// `f64` convenience wrapper around [`gen_binomial`].
pub fn gen_binomial_f64(x: f64, k: usize) -> f64 {
    gen_binomial(&x, k)
}

/// Ordinary binomial coefficient as an exact integer (0 when k > n).
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact factorial.
pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `n!` as a scalar of the requested field.
pub fn factorial<T: Scalar>(n: usize) -> T {
    T::from_bigint(&BigInt::from(factorial_big(n as u64)))
}

/// Central binomial ratio `C(2n, n) / 4^n`, the n-th arcsine moment.
pub fn central_binomial_ratio<T: Scalar>(n: usize) -> T {
    let c = BigInt::from(binomial_big(2 * n as u64, n as u64));
    let four_n = BigInt::from(4u32).pow(n as u32);
    T::from_bigint(&c) / T::from_bigint(&four_n)
}
