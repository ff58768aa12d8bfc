use thiserror::Error;

/// Errors produced by the analytic and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("moment order {requested} outside the supported range 1..={cap}")]
    OrderCap { requested: usize, cap: usize },

    #[error("hitting-transform derivative order {k} exceeds the supported maximum {max}")]
    DerivativeOrder { k: usize, max: usize },

    #[error("quadrature did not converge: achieved error {achieved:e}, target {target:e}")]
    Quadrature { achieved: f64, target: f64 },

    #[error("Laplace inversion at t = {t} did not converge: orders disagree by {disagreement:e}")]
    Inversion { t: f64, disagreement: f64 },

    #[error("vanishing denominator in {0}")]
    Singular(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_open(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if value.is_finite() && value > lo && value < hi {
        Ok(())
    } else {
        Err(Error::Domain { name, value, range })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    check_open(name, value, 0.0, f64::INFINITY, "(0, inf)")
}

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { name, value, range: "[0, inf)" })
    }
}
