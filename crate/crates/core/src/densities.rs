//! Occupation-time densities on (0, 1): the Lamperti family, its skew
//! Brownian special case and the arcsine law.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{check_open, Error, Result};
use crate::quadrature::{integrate, integrate_endpoint_singular, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DensityFamily {
    Lamperti { nu: f64, beta: f64 },
    SkewBm { beta: f64 },
    Arcsine,
}

impl DensityFamily {
    fn validate(&self) -> Result<()> {
        match *self {
            DensityFamily::Lamperti { nu, beta } => {
                check_open("nu", nu, -1.0, 0.0, "(-1, 0)")?;
                check_open("beta", beta, 0.0, 1.0, "(0, 1)")
            }
            DensityFamily::SkewBm { beta } => check_open("beta", beta, 0.0, 1.0, "(0, 1)"),
            DensityFamily::Arcsine => Ok(()),
        }
    }

    /// Exponent of the integrable singularity at both ends of (0, 1).
    pub fn endpoint_exponent(&self) -> f64 {
        match *self {
            DensityFamily::Lamperti { nu, .. } => -nu - 1.0,
            _ => -0.5,
        }
    }

    // Density at x given both x and 1 - x, so neither end loses precision.
    fn pdf_split(&self, x: f64, y: f64) -> f64 {
        match *self {
            DensityFamily::Lamperti { nu, beta } => lamperti_kernel(nu, beta, x, y),
            DensityFamily::SkewBm { beta } => skew_kernel(beta, x, y),
            DensityFamily::Arcsine => 1.0 / (PI * (x * y).sqrt()),
        }
    }
}

fn lamperti_kernel(nu: f64, beta: f64, x: f64, y: f64) -> f64 {
    let b = 1.0 - beta;
    let xy = x * y;
    let num = (-nu * PI).sin() * beta * b * xy.powf(-nu - 1.0) / PI;
    let den = beta * beta * y.powf(-2.0 * nu) + b * b * x.powf(-2.0 * nu) + 2.0 * beta * b * xy.powf(-nu) * (-nu * PI).cos();
    num / den
}

fn skew_kernel(beta: f64, x: f64, y: f64) -> f64 {
    // β² + x(1 - 2β) written as β² y + (1-β)² x
    let b = 1.0 - beta;
    beta * b / (PI * (x * y).sqrt() * (beta * beta * y + b * b * x))
}

fn check_unit_open(x: f64) -> Result<()> {
    check_open("x", x, 0.0, 1.0, "(0, 1)")
}

fn check_unit_closed(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { name: "x", value: x, range: "[0, 1]" })
    }
}

/// Lamperti density with index `nu ∈ (-1, 0)` and skewness `beta ∈ (0, 1)`.
pub fn lamperti_pdf(nu: f64, beta: f64, x: f64) -> Result<f64> {
    DensityFamily::Lamperti { nu, beta }.validate()?;
    check_unit_open(x)?;
    Ok(lamperti_kernel(nu, beta, x, 1.0 - x))
}

pub fn skew_bm_pdf(beta: f64, x: f64) -> Result<f64> {
    check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
    check_unit_open(x)?;
    Ok(skew_kernel(beta, x, 1.0 - x))
}

pub fn skew_bm_cdf(beta: f64, x: f64) -> Result<f64> {
    check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
    check_unit_closed(x)?;
    let c = (beta / (1.0 - beta)).powi(2);
    Ok(2.0 / PI * (x / (x + c * (1.0 - x))).sqrt().asin())
}

pub fn arcsine_pdf(x: f64) -> Result<f64> {
    check_unit_open(x)?;
    Ok(1.0 / (PI * (x * (1.0 - x)).sqrt()))
}

pub fn arcsine_cdf(x: f64) -> Result<f64> {
    check_unit_closed(x)?;
    Ok(2.0 / PI * x.sqrt().asin())
}

/// A density on (0, 1) with its distribution function. For the Lamperti
/// family the cdf comes from an interpolant that is built on first use and
/// shared between clones.
#[derive(Debug, Clone)]
pub struct OccupationDensity {
    family: DensityFamily,
    cdf_cache: Arc<OnceLock<std::result::Result<LampertiCdf, String>>>,
}

impl OccupationDensity {
    pub fn new(family: DensityFamily) -> Result<Self> {
        family.validate()?;
        Ok(OccupationDensity { family, cdf_cache: Arc::new(OnceLock::new()) })
    }

    pub fn family(&self) -> DensityFamily {
        self.family
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_unit_open(x)?;
        Ok(self.family.pdf_split(x, 1.0 - x))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_unit_closed(x)?;
        match self.family {
            DensityFamily::Lamperti { nu, beta } => {
                let cache = self
                    .cdf_cache
                    .get_or_init(|| LampertiCdf::build(nu, beta).map_err(|e| e.to_string()));
                match cache {
                    Ok(c) => Ok(c.eval(x)),
                    Err(msg) => Err(Error::Config(format!("lamperti cdf interpolant: {msg}"))),
                }
            }
            DensityFamily::SkewBm { beta } => skew_bm_cdf(beta, x),
            DensityFamily::Arcsine => arcsine_cdf(x),
        }
    }

    /// `∫_0^1 x^n f(x) dx` by quadrature, with the endpoint singularities
    /// removed by a power substitution at each end.
    pub fn moment(&self, n: usize) -> Result<f64> {
        density_moment_oracle(self.family, n)
    }
}

/// Largest moment order accepted by [`density_moment_oracle`].
pub const DENSITY_MOMENT_ORDER_MAX: usize = 20;

/// n-th moment of the density by quadrature; absolute error target 1e-10.
pub fn density_moment_oracle(family: DensityFamily, n: usize) -> Result<f64> {
    family.validate()?;
    if n > DENSITY_MOMENT_ORDER_MAX {
        return Err(Error::OrderCap { requested: n, cap: DENSITY_MOMENT_ORDER_MAX });
    }
    let e = family.endpoint_exponent();
    let cfg = QuadConfig::with_tol(1e-12, 1e-12);
    let r = integrate_endpoint_singular(|p| p.x.powi(n as i32) * family.pdf_split(p.from_a, p.from_b), 0.0, 1.0, e, e, &cfg)?;
    if r.abs_error > 1e-10 {
        return Err(Error::Quadrature { achieved: r.abs_error, target: 1e-10 });
    }
    Ok(r.value)
}

const CHEB_DEGREE: usize = 20;
// Panel breaks in t: 0, then geometric 2^-GEOMETRIC_PANELS .. 1/16, then
// uniform steps of 1/16 up to 1, where high powers of t appear for small |ν|.
const GEOMETRIC_PANELS: i32 = 30;
const UNIFORM_PANELS: usize = 16;

#[derive(Debug, Clone)]
struct ChebPanel {
    lo: f64,
    hi: f64,
    coeffs: Vec<f64>,
}

impl ChebPanel {
    fn fit(lo: f64, hi: f64, values: &[f64]) -> Self {
        let n = values.len();
        let coeffs = (0..n)
            .map(|j| {
                let s: f64 = values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                let w = if j == 0 { 1.0 } else { 2.0 };
                w * s / n as f64
            })
            .collect();
        ChebPanel { lo, hi, coeffs }
    }

    fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| {
                let c = (PI * (k as f64 + 0.5) / n as f64).cos();
                0.5 * (lo + hi) + 0.5 * (hi - lo) * c
            })
            .collect()
    }

    fn eval(&self, t: f64) -> f64 {
        let u = (2.0 * t - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.coeffs[0]
    }
}

/// Mass of `[0, x]` on one half, `x = t^{1/p} / 2` with `p = -ν`, as a
/// piecewise Chebyshev series in `t ∈ [0, 1]`. In that variable the
/// integrand is bounded.
#[derive(Debug, Clone)]
struct HalfCdf {
    p: f64,
    panels: Vec<ChebPanel>,
    total: f64,
}

impl HalfCdf {
    fn build(nu: f64, beta: f64) -> Result<Self> {
        let p = -nu;
        let half_p = 0.5f64.powf(p);
        let (sin, cos) = ((p * PI).sin(), (p * PI).cos());
        let b = 1.0 - beta;
        let g = move |t: f64| {
            let x = 0.5 * t.powf(1.0 / p);
            let y = 1.0 - x;
            let s = half_p * t; // x^p
            let yp = y.powf(p);
            let den = beta * beta * yp * yp + b * b * s * s + 2.0 * beta * b * s * yp * cos;
            half_p / p * sin / PI * beta * b * y.powf(p - 1.0) / den
        };
        let cfg = QuadConfig::with_tol(1e-15, 1e-13);
        let mut breaks = vec![0.0];
        breaks.extend((4..=GEOMETRIC_PANELS).rev().map(|k| 0.5f64.powi(k)));
        breaks.extend((2..=UNIFORM_PANELS).map(|k| k as f64 / UNIFORM_PANELS as f64));
        let mut panels = Vec::with_capacity(breaks.len() - 1);
        let mut base = 0.0;
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mut nodes = ChebPanel::nodes(lo, hi, CHEB_DEGREE + 1);
            nodes.reverse();
            let mut values = Vec::with_capacity(nodes.len());
            let (mut prev, mut acc) = (lo, base);
            for &t in &nodes {
                acc += integrate(g, prev, t, &cfg)?.value;
                values.push(acc);
                prev = t;
            }
            values.reverse();
            base = acc + integrate(g, prev, hi, &cfg)?.value;
            panels.push(ChebPanel::fit(lo, hi, &values));
        }
        Ok(HalfCdf { p, panels, total: base })
    }

    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let t = (2.0 * x).powf(self.p).min(1.0);
        let idx = self.panels.partition_point(|pn| pn.hi < t).min(self.panels.len() - 1);
        self.panels[idx].eval(t)
    }
}

#[derive(Debug, Clone)]
struct LampertiCdf {
    left: HalfCdf,
    right: HalfCdf,
}

impl LampertiCdf {
    // The right half is the left half of the mirrored density (ν, 1-β).
    fn build(nu: f64, beta: f64) -> Result<Self> {
        Ok(LampertiCdf { left: HalfCdf::build(nu, beta)?, right: HalfCdf::build(nu, 1.0 - beta)? })
    }

    fn eval(&self, x: f64) -> f64 {
        let v = if x <= 0.5 {
            self.left.eval(x)
        } else {
            self.left.total + self.right.total - self.right.eval(1.0 - x)
        };
        v.clamp(0.0, 1.0)
    }
}
