//! Numeric field abstraction shared by the exact and floating moment paths.
//!
//! The moment recursions and closed forms are polynomial in the model
//! parameters, so every formula is written once against [`Scalar`] and run
//! either on `f64` or on exact [`BigRational`] values.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> {
    fn from_int(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn to_f64(&self) -> f64;
    fn is_exact() -> bool;

    fn powi(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }

    fn powi(&self, exp: usize) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn is_exact() -> bool {
        true
    }
}

/// Converts an exact rational to the nearest-ish `f64`, robust to numerators
/// and denominators far outside the `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer(), r.denom());
    if let (Some(nf), Some(df)) = (n.to_f64(), d.to_f64()) {
        if nf.is_finite() && df.is_finite() && df != 0.0 && nf.abs() < 9.0e15 && df < 9.0e15 {
            return nf / df;
        }
    }
    // Shift both to ~64 significant bits before dividing.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let ns = (n.abs() >> shift_n as usize).to_f64().unwrap_or(f64::INFINITY);
    let ds = (d >> shift_d as usize).to_f64().unwrap_or(f64::INFINITY);
    let mag = ns / ds * 2f64.powi((shift_n - shift_d) as i32);
    if n.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Exact value of a finite `f64` (every finite double is a dyadic rational).
pub fn f64_to_ratio(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::Domain {
        name: "value",
        value: x,
        range: "finite reals",
    })
}

/// Parses `"p/q"`, integers, or plain decimals (`"0.35"`, `"-1.5e-2"`) into an
/// exact rational. Decimal strings are read at face value, not via `f64`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse `{s}` as a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `"p/q"` rendering used by every serializer; integers keep the `/1`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
