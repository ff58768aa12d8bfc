use super::{exp_sqrt_deriv, Diffusion, Side};
use crate::error::{check_open, Result};

/// Skew Brownian motion: excursion signs are Bernoulli(`beta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewBm {
    beta: f64,
}

impl SkewBm {
    pub fn new(beta: f64) -> Result<Self> {
        check_open("beta", beta, 0.0, 1.0, "(0, 1)")?;
        Ok(SkewBm { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Diffusion for SkewBm {
    fn name(&self) -> &str {
        "skew-bm"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("beta", self.beta)]
    }

    fn speed_density(&self, x: f64) -> f64 {
        if x > 0.0 {
            4.0 * self.beta
        } else {
            4.0 * (1.0 - self.beta)
        }
    }

    fn scale(&self, x: f64) -> f64 {
        if x >= 0.0 {
            x / (2.0 * self.beta)
        } else {
            x / (2.0 * (1.0 - self.beta))
        }
    }

    fn psi(&self, lambda: f64, x: f64) -> f64 {
        let z = x * (2.0 * lambda).sqrt();
        if x >= 0.0 {
            z.exp() + (1.0 - 2.0 * self.beta) / self.beta * z.sinh()
        } else {
            z.exp()
        }
    }

    fn phi(&self, lambda: f64, x: f64) -> f64 {
        let z = x * (2.0 * lambda).sqrt();
        if x >= 0.0 {
            (-z).exp()
        } else {
            (-z).exp() + (1.0 - 2.0 * self.beta) / (1.0 - self.beta) * z.sinh()
        }
    }

    fn wronskian(&self, lambda: f64) -> f64 {
        2.0 * (2.0 * lambda).sqrt()
    }

    fn is_self_similar(&self) -> bool {
        true
    }

    fn psi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let z = a * x;
        if x > 0.0 {
            2.0 * self.beta * a * (z.exp() + (1.0 - 2.0 * self.beta) / self.beta * z.cosh())
        } else {
            2.0 * (1.0 - self.beta) * a * z.exp()
        }
    }

    fn phi_scale_deriv(&self, lambda: f64, x: f64, _side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let z = a * x;
        if x >= 0.0 {
            -2.0 * self.beta * a * (-z).exp()
        } else {
            2.0 * (1.0 - self.beta) * a * (-(-z).exp() + (1.0 - 2.0 * self.beta) / (1.0 - self.beta) * z.cosh())
        }
    }

    fn hitting_transform(&self, x: f64, lambda: f64) -> f64 {
        exp_sqrt_deriv(x.abs(), lambda, 0)
    }

    fn hitting_order_max(&self) -> usize {
        super::BESSEL_HITTING_ORDER_MAX
    }

    fn hitting_transform_deriv(&self, x: f64, lambda: f64, k: usize) -> Result<f64> {
        check_order(k, self.hitting_order_max())?;
        Ok(exp_sqrt_deriv(x.abs(), lambda, k))
    }
}

pub(super) fn check_order(k: usize, max: usize) -> Result<()> {
    if k > max {
        Err(crate::Error::DerivativeOrder { k, max })
    } else {
        Ok(())
    }
}
