use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::table::{Method, MomentTable, MomentValues, Param};
use super::check_order;
use crate::error::{Error, Result};
use crate::scalar::{f64_to_ratio, ratio_to_f64, Scalar};
use crate::special_fn::{binomial_big, central_binomial_ratio, factorial_big, gen_binomial, StirlingCache};

/// `E_0(A_1^n) = C(2n, n) / 4^n`.
pub(crate) fn arcsine_seq<T: Scalar>(n_max: usize) -> Vec<T> {
    (1..=n_max).map(central_binomial_ratio).collect()
}

/// `Σ_{k=0}^{n-1} C(n-1+k, k) β^{n-k} / 2^{n+k-1}`, all terms positive.
pub(crate) fn skew_seq<T: Scalar>(beta: &T, n_max: usize) -> Vec<T> {
    (1..=n_max)
        .map(|n| {
            let mut acc = T::zero();
            for k in 0..n {
                let c = T::from_bigint(&BigInt::from(binomial_big((n - 1 + k) as u64, k as u64)));
                let two = T::from_bigint(&(BigInt::one() << (n + k - 1)));
                acc = acc + c * beta.powi(n - k) / two;
            }
            acc
        })
        .collect()
}

/// `E(A^n) = β C(ν+n-1, n-1) - β Σ_{k=1}^{n-1} C(ν+k-1, k) E(A^{n-k})`.
/// The binomials `C(ν+k-1, k)` are negative for `ν ∈ (-1, 0)`, so every term
/// adds a positive amount.
fn bessel_rec_seq<T: Scalar>(nu: &T, beta: &T, n_max: usize) -> Vec<T> {
    let shifted = |k: usize| nu.clone() + T::from_int(k as i64 - 1);
    let d: Vec<T> = (0..n_max).map(|k| gen_binomial(&shifted(k), k)).collect();
    let mut out: Vec<T> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = gen_binomial(&shifted(n), n - 1);
        for k in 1..n {
            acc = acc - d[k].clone() * out[n - k - 1].clone();
        }
        out.push(beta.clone() * acc);
    }
    out
}

/// Stirling double sum, evaluated exactly:
/// `Σ_k Σ_j (-1)^j j! / (n-1)! · s1(n, k+1) S2(k+1, j+1) ν^k β^{j+1}`.
fn bessel_closed_seq(nu: &BigRational, beta: &BigRational, n_max: usize) -> Vec<BigRational> {
    let cache = StirlingCache::build(n_max.max(1));
    let int = |v: num_bigint::BigUint| BigRational::from_integer(BigInt::from(v));
    // inner[k] = Σ_j (-1)^j j! S2(k+1, j+1) β^{j+1}
    let mut beta_pow = vec![beta.clone()];
    for _ in 1..n_max {
        let next = beta_pow.last().unwrap() * beta;
        beta_pow.push(next);
    }
    let inner: Vec<BigRational> = (0..n_max)
        .map(|k| {
            let mut acc = BigRational::zero();
            for j in 0..=k {
                let term = int(factorial_big(j as u64) * cache.second(k + 1, j + 1)) * &beta_pow[j];
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    let mut nu_pow = vec![BigRational::one()];
    for _ in 1..n_max {
        let next = nu_pow.last().unwrap() * nu;
        nu_pow.push(next);
    }
    (1..=n_max)
        .map(|n| {
            let mut acc = BigRational::zero();
            for k in 0..n {
                acc += int(cache.first(n, k + 1)) * &nu_pow[k] * &inner[k];
            }
            acc / int(factorial_big(n as u64 - 1))
        })
        .collect()
}

fn exact_pair(a: &Param, b: &Param) -> Option<(BigRational, BigRational)> {
    Some((a.as_exact()?.clone(), b.as_exact()?.clone()))
}

fn check_nu(nu: &Param) -> Result<()> {
    let v = nu.to_f64();
    if v.is_finite() && v > -1.0 && v < 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name: "nu", value: v, range: "(-1, 0)" })
    }
}

/// `Some(table)` for the constant tables at β ∈ {0, 1}.
fn check_beta(diffusion: &str, params: &[(&str, Param)], beta: &Param, n: usize, method: Method) -> Result<Option<MomentTable>> {
    let v = beta.to_f64();
    if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
        return Err(Error::Domain { name: "beta", value: v, range: "[0, 1]" });
    }
    let is_one = match beta {
        Param::Exact(r) => r.is_one(),
        _ => v == 1.0,
    };
    let is_zero = match beta {
        Param::Exact(r) => r.is_zero(),
        _ => v == 0.0,
    };
    if !(is_one || is_zero) {
        return Ok(None);
    }
    let c = if is_one { 1 } else { 0 };
    let values = match beta {
        Param::Exact(_) => MomentValues::Exact(vec![BigRational::from_integer(c.into()); n]),
        _ => MomentValues::Float(vec![c as f64; n]),
    };
    let mut t = MomentTable::new(diffusion, params.to_vec(), values, method);
    t.degenerate = true;
    Ok(Some(t))
}

pub fn bm_moments(n_max: usize) -> Result<MomentTable> {
    check_order(n_max)?;
    Ok(MomentTable::new("bm", vec![], MomentValues::Exact(arcsine_seq(n_max)), Method::ClosedForm))
}

fn skew_table(diffusion: &str, params: Vec<(&str, Param)>, beta: &Param, n_max: usize) -> Result<MomentTable> {
    check_order(n_max)?;
    if let Some(t) = check_beta(diffusion, &params, beta, n_max, Method::ClosedForm)? {
        return Ok(t);
    }
    let values = match beta {
        Param::Exact(b) => MomentValues::Exact(skew_seq(b, n_max)),
        _ => MomentValues::Float(skew_seq(&beta.to_f64(), n_max)),
    };
    Ok(MomentTable::new(diffusion, params, values, Method::ClosedForm))
}

pub fn skew_bm_moments(beta: &Param, n_max: usize) -> Result<MomentTable> {
    skew_table("skew-bm", vec![("beta", beta.clone())], beta, n_max)
}

pub fn bessel_moments_recursive(nu: &Param, beta: &Param, n_max: usize) -> Result<MomentTable> {
    check_order(n_max)?;
    check_nu(nu)?;
    let params = vec![("nu", nu.clone()), ("beta", beta.clone())];
    if let Some(t) = check_beta("skew-bessel", &params, beta, n_max, Method::Recursion)? {
        return Ok(t);
    }
    let values = match exact_pair(nu, beta) {
        Some((n, b)) => MomentValues::Exact(bessel_rec_seq(&n, &b, n_max)),
        None => MomentValues::Float(bessel_rec_seq(&nu.to_f64(), &beta.to_f64(), n_max)),
    };
    Ok(MomentTable::new("skew-bessel", params, values, Method::Recursion))
}

/// The Stirling double sum alternates in sign with terms far larger than the
/// result, so floating inputs are converted to their exact dyadic values,
/// summed exactly, and rounded once.
pub fn bessel_moments_closed(nu: &Param, beta: &Param, n_max: usize) -> Result<MomentTable> {
    check_order(n_max)?;
    check_nu(nu)?;
    let params = vec![("nu", nu.clone()), ("beta", beta.clone())];
    if let Some(t) = check_beta("skew-bessel", &params, beta, n_max, Method::ClosedForm)? {
        return Ok(t);
    }
    let values = match exact_pair(nu, beta) {
        Some((n, b)) => MomentValues::Exact(bessel_closed_seq(&n, &b, n_max)),
        None => {
            let n = f64_to_ratio(nu.to_f64())?;
            let b = f64_to_ratio(beta.to_f64())?;
            MomentValues::Float(bessel_closed_seq(&n, &b, n_max).iter().map(ratio_to_f64).collect())
        }
    };
    Ok(MomentTable::new("skew-bessel", params, values, Method::ClosedForm))
}

/// Skew-BM moments at `β = σ₋ / (σ₊ + σ₋)`.
pub fn oscillating_moments(sigma_plus: &Param, sigma_minus: &Param, n_max: usize) -> Result<MomentTable> {
    for (name, s) in [("sigma_plus", sigma_plus), ("sigma_minus", sigma_minus)] {
        let v = s.to_f64();
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain { name, value: v, range: "(0, inf)" });
        }
    }
    let beta = match exact_pair(sigma_plus, sigma_minus) {
        Some((p, m)) => Param::Exact(&m / (&p + &m)),
        None => {
            let (p, m) = (sigma_plus.to_f64(), sigma_minus.to_f64());
            Param::Real(m / (p + m))
        }
    };
    skew_table(
        "oscillating-bm",
        vec![("sigma_plus", sigma_plus.clone()), ("sigma_minus", sigma_minus.clone())],
        &beta,
        n_max,
    )
}

/// Skewness seen by the occupation time of the rays in `rays` (1-based).
pub fn spider_beta(p: &[Param], rays: &[usize]) -> Result<Param> {
    if p.is_empty() {
        return Err(Error::Config("spider needs at least one ray probability".into()));
    }
    for pi in p {
        let v = pi.to_f64();
        if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
            return Err(Error::Domain { name: "p", value: v, range: "[0, 1]" });
        }
    }
    let mut seen = vec![false; p.len()];
    for &r in rays {
        if r == 0 || r > p.len() {
            return Err(Error::Config(format!("ray index {r} outside 1..={}", p.len())));
        }
        if std::mem::replace(&mut seen[r - 1], true) {
            return Err(Error::Config(format!("ray index {r} listed twice")));
        }
    }
    let all_exact: Option<Vec<&BigRational>> = p.iter().map(|x| x.as_exact()).collect();
    match all_exact {
        Some(ex) => {
            let total: BigRational = ex.iter().copied().sum();
            if !total.is_one() {
                return Err(Error::Domain { name: "sum(p)", value: ratio_to_f64(&total), range: "{1}" });
            }
            Ok(Param::Exact(rays.iter().map(|&r| ex[r - 1].clone()).sum()))
        }
        None => {
            let total: f64 = p.iter().map(Param::to_f64).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::Domain { name: "sum(p)", value: total, range: "{1}" });
            }
            let b: f64 = rays.iter().map(|&r| p[r - 1].to_f64()).sum();
            Ok(Param::Real(b.clamp(0.0, 1.0)))
        }
    }
}

/// Occupation time of a set of spider rays: skew-BM moments at
/// `β = Σ_{i ∈ rays} p_i`, constant 1 when every ray is queried.
pub fn spider_moments(p: &[Param], rays: &[usize], n_max: usize) -> Result<MomentTable> {
    let beta = spider_beta(p, rays)?;
    let mut params: Vec<(&str, Param)> = vec![("rays", Param::Indices(rays.to_vec()))];
    let names: Vec<String> = (1..=p.len()).map(|i| format!("p{i}")).collect();
    let mut t = skew_table("spider", vec![], &beta, n_max)?;
    params.push(("beta", beta));
    t.params = names.into_iter().zip(p.iter().cloned()).chain(params.into_iter().map(|(k, v)| (k.to_string(), v))).collect();
    Ok(t)
}
