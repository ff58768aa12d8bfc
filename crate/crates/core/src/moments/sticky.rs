use num_bigint::BigInt;
use num_rational::BigRational;

use super::closed::skew_seq;
use super::table::{Method, MomentDomain, MomentTable, MomentValues, Param};
use super::check_order;
use crate::error::{check_positive, Error, Result};
use crate::scalar::ratio_to_f64;
use crate::special_fn::{binomial_big, factorial};

/// Which occupation functional of sticky BM: `A` counts time at 0, `B` does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StickyFunctional {
    A,
    B,
}

/// `H(λ) = 1 / (2 + γ sqrt(2λ))`.
pub fn sticky_h(gamma: f64, lambda: f64) -> f64 {
    1.0 / (2.0 + gamma * (2.0 * lambda).sqrt())
}

/// `T_n = C(2n, n) / (4^n (2n - 1))`.
pub fn sticky_t(n: usize) -> BigRational {
    let c = BigInt::from(binomial_big(2 * n as u64, n as u64));
    let den = (BigInt::from(1) << (2 * n)) * BigInt::from(2 * n as i64 - 1);
    BigRational::new(c, den)
}

fn check_gamma_lambda(gamma: f64, lambda: f64) -> Result<()> {
    check_positive("gamma", gamma)?;
    check_positive("lambda", lambda)
}

/// `U_n^B(λ)` for `n = 1..=n_max`; `gamma = 0` gives the arcsine moments.
pub(crate) fn u_b(gamma: f64, lambda: f64, n_max: usize) -> Vec<f64> {
    skew_seq(&sticky_h(gamma, lambda), n_max)
}

/// `B̂_n(λ) = n!/λ^{n+1} Σ_k C(n-1+k, k) H(λ)^{n-k} / 2^{n+k-1}`.
pub fn sticky_bhat(gamma: f64, lambda: f64, n: usize) -> Result<f64> {
    check_gamma_lambda(gamma, lambda)?;
    check_order(n)?;
    let u = u_b(gamma, lambda, n)[n - 1];
    Ok(factorial::<f64>(n) * u / lambda.powi(n as i32 + 1))
}

/// Coefficient `D_k(λ)` of the Laplace-domain recursion for sticky BM.
pub fn sticky_dk(gamma: f64, lambda: f64, k: usize, functional: StickyFunctional) -> Result<f64> {
    check_gamma_lambda(gamma, lambda)?;
    if k == 0 {
        return Err(Error::Config("D_k is defined for k >= 1".into()));
    }
    let h = sticky_h(gamma, lambda);
    Ok(match (k, functional) {
        (1, StickyFunctional::A) => -h * (0.5 + gamma * (2.0 * lambda).sqrt()),
        _ => -h * ratio_to_f64(&sticky_t(k)),
    })
}

/// `U_n(λ) = λ^{n+1} Â_0(λ; n) / n!` for the chosen functional. `B` uses the
/// closed form; `A` runs the Laplace-domain recursion with the closed-form
/// `D_k^A` and `U_1^A = λ ∫_{[0,∞)} G_λ(0,y) m(dy) = (1 + γ√(2λ)) H(λ)`.
pub fn sticky_u_table(gamma: f64, lambda: f64, n_max: usize, functional: StickyFunctional) -> Result<MomentTable> {
    check_gamma_lambda(gamma, lambda)?;
    check_order(n_max)?;
    let (values, method) = match functional {
        StickyFunctional::B => (u_b(gamma, lambda, n_max), Method::ClosedForm),
        StickyFunctional::A => {
            let d: Vec<f64> = (1..n_max).map(|k| sticky_dk(gamma, lambda, k, functional)).collect::<Result<_>>()?;
            let u1 = (1.0 + gamma * (2.0 * lambda).sqrt()) * sticky_h(gamma, lambda);
            (laplace_recursion(u1, &d, n_max), Method::Recursion)
        }
    };
    let name = match functional {
        StickyFunctional::A => "sticky-bm:A",
        StickyFunctional::B => "sticky-bm:B",
    };
    let mut t = MomentTable::new(name, vec![("gamma", Param::Real(gamma))], MomentValues::Float(values), method);
    t.domain = MomentDomain::Laplace;
    t.lambda = Some(lambda);
    Ok(t)
}

/// `U_n = U_1 + Σ_{k=1}^{n-1} (1 - U_{n-k}) D_k`.
pub(crate) fn laplace_recursion(u1: f64, d: &[f64], n_max: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(n_max);
    u.push(u1);
    for n in 2..=n_max {
        let mut acc = u1;
        for k in 1..n {
            acc += (1.0 - u[n - k - 1]) * d[k - 1];
        }
        u.push(acc);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert!((sticky_h(1.0, 2.0) - 0.25).abs() < 1e-16);
        assert!((sticky_bhat(1.0, 2.0, 1).unwrap() - 1.0 / 16.0).abs() < 1e-16);
        assert!((sticky_dk(1.0, 2.0, 1, StickyFunctional::B).unwrap() + 0.125).abs() < 1e-16);
        assert_eq!(sticky_t(1), BigRational::new(1.into(), 2.into()));
        assert!(sticky_bhat(0.0, 1.0, 1).is_err());
        assert!(sticky_bhat(1.0, -1.0, 1).is_err());
    }

    #[test]
    fn b_recursion_reproduces_closed_form() {
        let (gamma, lambda) = (0.7, 1.3);
        let d: Vec<f64> = (1..8).map(|k| sticky_dk(gamma, lambda, k, StickyFunctional::B).unwrap()).collect();
        let rec = laplace_recursion(sticky_h(gamma, lambda), &d, 8);
        for (a, b) in rec.iter().zip(u_b(gamma, lambda, 8)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn a_functional_dominates_b() {
        let a = sticky_u_table(1.0, 0.5, 6, StickyFunctional::A).unwrap().values_f64();
        let b = sticky_u_table(1.0, 0.5, 6, StickyFunctional::B).unwrap().values_f64();
        for (x, y) in a.iter().zip(&b) {
            assert!(x > y && *x < 1.0);
        }
    }
}
