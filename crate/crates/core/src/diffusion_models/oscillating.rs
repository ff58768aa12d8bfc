use super::skew_bm::check_order;
use super::{exp_sqrt_deriv, Diffusion, Side};
use crate::error::{check_positive, Result};

/// Brownian motion with volatility `sigma_plus` above 0 and `sigma_minus`
/// below, in natural scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatingBm {
    sigma_plus: f64,
    sigma_minus: f64,
}

impl OscillatingBm {
    pub fn new(sigma_plus: f64, sigma_minus: f64) -> Result<Self> {
        check_positive("sigma_plus", sigma_plus)?;
        check_positive("sigma_minus", sigma_minus)?;
        Ok(OscillatingBm { sigma_plus, sigma_minus })
    }

    pub fn sigma_plus(&self) -> f64 {
        self.sigma_plus
    }

    pub fn sigma_minus(&self) -> f64 {
        self.sigma_minus
    }

    /// Skewness of the skew Brownian motion this process is a scale image of.
    pub fn equivalent_beta(&self) -> f64 {
        self.sigma_minus / (self.sigma_plus + self.sigma_minus)
    }
}

impl Diffusion for OscillatingBm {
    fn name(&self) -> &str {
        "oscillating-bm"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("sigma_plus", self.sigma_plus), ("sigma_minus", self.sigma_minus)]
    }

    fn speed_density(&self, x: f64) -> f64 {
        let s = if x > 0.0 { self.sigma_plus } else { self.sigma_minus };
        2.0 / (s * s)
    }

    fn scale(&self, x: f64) -> f64 {
        x
    }

    fn psi(&self, lambda: f64, x: f64) -> f64 {
        let a = (2.0 * lambda).sqrt();
        if x >= 0.0 {
            let z = a * x / self.sigma_plus;
            z.cosh() + self.sigma_plus / self.sigma_minus * z.sinh()
        } else {
            (a * x / self.sigma_minus).exp()
        }
    }

    fn phi(&self, lambda: f64, x: f64) -> f64 {
        let a = (2.0 * lambda).sqrt();
        if x >= 0.0 {
            (-a * x / self.sigma_plus).exp()
        } else {
            let z = a * x / self.sigma_minus;
            z.cosh() - self.sigma_minus / self.sigma_plus * z.sinh()
        }
    }

    fn wronskian(&self, lambda: f64) -> f64 {
        (2.0 * lambda).sqrt() * (1.0 / self.sigma_plus + 1.0 / self.sigma_minus)
    }

    fn is_self_similar(&self) -> bool {
        true
    }

    fn decay_length(&self, lambda: f64) -> f64 {
        self.sigma_plus.max(self.sigma_minus) / (2.0 * lambda).sqrt()
    }

    fn psi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let (sp, sm) = (self.sigma_plus, self.sigma_minus);
        if x > 0.0 {
            let z = a * x / sp;
            a / sp * z.sinh() + a / sm * z.cosh()
        } else {
            a / sm * (a * x / sm).exp()
        }
    }

    fn phi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let (sp, sm) = (self.sigma_plus, self.sigma_minus);
        if x >= 0.0 {
            -a / sp * (-a * x / sp).exp()
        } else {
            let z = a * x / sm;
            a / sm * z.sinh() - a / sp * z.cosh()
        }
    }

    fn hitting_transform(&self, x: f64, lambda: f64) -> f64 {
        let s = if x >= 0.0 { self.sigma_plus } else { self.sigma_minus };
        exp_sqrt_deriv(x.abs() / s, lambda, 0)
    }

    fn hitting_order_max(&self) -> usize {
        super::BESSEL_HITTING_ORDER_MAX
    }

    fn hitting_transform_deriv(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        check_order(k, self.hitting_order_max())?;
        let s = if x >= 0.0 { self.sigma_plus } else { self.sigma_minus };
        Ok(exp_sqrt_deriv(x.abs() / s, lambda, k))
    }
}
