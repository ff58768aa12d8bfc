use super::skew_bm::check_order;
use super::{exp_sqrt_deriv, Diffusion, Side};
use crate::error::{check_positive, Result};

/// Brownian motion sticky at 0: speed measure `2 dx + 2 gamma δ_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StickyBm {
    gamma: f64,
}

impl StickyBm {
    pub fn new(gamma: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        Ok(StickyBm { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Diffusion for StickyBm {
    fn name(&self) -> &str {
        "sticky-bm"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("gamma", self.gamma)]
    }

    fn speed_density(&self, _x: f64) -> f64 {
        2.0
    }

    fn speed_atom_at_zero(&self) -> f64 {
        2.0 * self.gamma
    }

    fn scale(&self, x: f64) -> f64 {
        x
    }

    fn psi(&self, lambda: f64, x: f64) -> f64 {
        let a = (2.0 * lambda).sqrt();
        if x >= 0.0 {
            (a * x).exp() + self.gamma * a * (a * x).sinh()
        } else {
            (a * x).exp()
        }
    }

    fn phi(&self, lambda: f64, x: f64) -> f64 {
        let a = (2.0 * lambda).sqrt();
        if x >= 0.0 {
            (-a * x).exp()
        } else {
            (-a * x).exp() - self.gamma * a * (a * x).sinh()
        }
    }

    fn wronskian(&self, lambda: f64) -> f64 {
        2.0 * (2.0 * lambda).sqrt() + 2.0 * lambda * self.gamma
    }

    fn is_self_similar(&self) -> bool {
        false
    }

    fn psi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let upper = x > 0.0 || (x == 0.0 && side == Side::Right);
        if upper {
            a * (a * x).exp() + self.gamma * a * a * (a * x).cosh()
        } else {
            a * (a * x).exp()
        }
    }

    fn phi_scale_deriv(&self, lambda: f64, x: f64, side: Side) -> f64 {
        let a = (2.0 * lambda).sqrt();
        let upper = x > 0.0 || (x == 0.0 && side == Side::Right);
        if upper {
            -a * (-a * x).exp()
        } else {
            -a * (-a * x).exp() - self.gamma * a * a * (a * x).cosh()
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
