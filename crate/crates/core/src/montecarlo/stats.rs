use serde::Serialize;

use crate::diffusion_models::{Diffusion, DiffusionSpec};
use crate::error::{check_positive, Error, Result};
use crate::moments::{
    bessel_moments_closed, skew_bm_moments, Method, MomentTable, MomentValues, Param, StickyFunctional,
};

use super::{simulate, OccupationSample, SimConfig, SimTarget};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleMoment {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
}

/// Mean of `v^n` with its delete-one jackknife standard error, which for a
/// sample mean reduces to `s / sqrt(N)`.
pub fn sample_moment(values: &[f64], n: usize) -> SampleMoment {
    let len = values.len() as f64;
    let powered: Vec<f64> = values.iter().map(|v| v.powi(n as i32)).collect();
    let mean = powered.iter().sum::<f64>() / len;
    let std_error = if values.len() > 1 {
        let ss: f64 = powered.iter().map(|p| (p - mean).powi(2)).sum();
        (ss / (len - 1.0) / len).sqrt()
    } else {
        f64::NAN
    };
    SampleMoment { n, mean, std_error }
}

/// Sample moments of `A_t / t` (or `B_t / t`), `n = 1..=n_max`, as a Monte
/// Carlo moment table with standard errors. The scheme, step, horizon and
/// path count are recorded with the parameters.
pub fn estimate_moments(
    cfg: &SimConfig,
    samples: &[OccupationSample],
    n_max: usize,
    functional: StickyFunctional,
) -> Result<MomentTable> {
    if samples.is_empty() {
        return Err(Error::Config("no samples".into()));
    }
    if n_max == 0 || n_max > crate::moments::MOMENT_ORDER_CAP {
        return Err(Error::OrderCap { requested: n_max, cap: crate::moments::MOMENT_ORDER_CAP });
    }
    let t = cfg.horizon;
    let scaled: Vec<f64> = samples
        .iter()
        .map(|s| match functional {
            StickyFunctional::A => s.a_t / t,
            StickyFunctional::B => s.b_t / t,
        })
        .collect();
    let moments: Vec<SampleMoment> = (1..=n_max).map(|n| sample_moment(&scaled, n)).collect();
    let params = cfg.target.params();
    let mut table_params: Vec<(&str, Param)> = params.iter().map(|(k, v)| (k.as_str(), Param::Real(*v))).collect();
    if let SimTarget::Spider { rays, .. } = &cfg.target {
        table_params.push(("rays", Param::Indices(rays.clone())));
    }
    table_params.push(("horizon", Param::Real(t)));
    table_params.push(("step", Param::Real(cfg.step)));
    table_params.push(("paths", Param::Real(samples.len() as f64)));
    table_params.push(("seed", Param::Real(cfg.seed as f64)));
    let name = match (&cfg.target, functional) {
        (SimTarget::StickyBm { .. }, StickyFunctional::A) => "sticky-bm:A".to_string(),
        (SimTarget::StickyBm { .. }, StickyFunctional::B) => "sticky-bm:B".to_string(),
        (target, _) => target.name().to_string(),
    };
    let mut table = MomentTable::new(
        &name,
        table_params,
        MomentValues::Float(moments.iter().map(|m| m.mean).collect()),
        Method::MonteCarlo,
    );
    table.std_errors = Some(moments.iter().map(|m| m.std_error).collect());
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    /// Statistic at which the asymptotic p-value equals 0.01.
    pub critical_1pct: f64,
}

impl KsResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value > alpha
    }
}

// Kolmogorov survival function Q(λ) = 2 Σ (-1)^{k-1} exp(-2 k² λ²).
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test of `values` against a continuous cdf,
/// with Stephens' finite-sample correction of the asymptotic p-value.
pub fn ks_test(values: &[f64], cdf: impl Fn(f64) -> Result<f64>) -> Result<KsResult> {
    if values.is_empty() {
        return Err(Error::Config("no samples".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let en = n.sqrt() + 0.12 + 0.11 / n.sqrt();
    Ok(KsResult { n: sorted.len(), statistic: d, p_value: kolmogorov_q(en * d), critical_1pct: 1.627_6 / en })
}

/// Monte Carlo `E_0(A_t^n)` against `t^n E_0(A_1^n)` for a self-similar
/// diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KacCheck {
    pub n: usize,
    pub horizon: f64,
    pub paths: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub analytic: f64,
    /// `(estimate - analytic) / std_error`.
    pub z: f64,
}

impl KacCheck {
    pub fn within(&self, standard_errors: f64) -> bool {
        self.z.abs() <= standard_errors
    }
}

pub fn kac_raw_moment_mc_check(spec: &DiffusionSpec, t: f64, n: usize, paths: usize, seed: u64) -> Result<KacCheck> {
    check_positive("t", t)?;
    if !spec.is_self_similar() {
        return Err(Error::Config(format!("{} is not self-similar", spec.name())));
    }
    let unit = match spec {
        DiffusionSpec::SkewBessel(d) => bessel_moments_closed(&Param::Real(d.nu()), &Param::Real(d.beta()), n)?,
        DiffusionSpec::SkewBm(d) => skew_bm_moments(&Param::Real(d.beta()), n)?,
        DiffusionSpec::OscillatingBm(d) => skew_bm_moments(&Param::Real(d.equivalent_beta()), n)?,
        DiffusionSpec::StickyBm(_) => unreachable!("not self-similar"),
    }
    .value(n);
    let cfg = SimConfig::new(SimTarget::from_spec(spec), t, paths, seed);
    let samples = simulate(&cfg)?;
    let raw: Vec<f64> = samples.iter().map(|s| s.a_t).collect();
    let m = sample_moment(&raw, n);
    let analytic = t.powi(n as i32) * unit;
    Ok(KacCheck {
        n,
        horizon: t,
        paths,
        estimate: m.mean,
        std_error: m.std_error,
        analytic,
        z: (m.mean - analytic) / m.std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_tail_values() {
        assert!((kolmogorov_q(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_q(1.3581) - 0.05).abs() < 1e-4);
        assert_eq!(kolmogorov_q(0.0), 1.0);
    }

    #[test]
    fn jackknife_of_constant_is_zero() {
        let m = sample_moment(&[0.5; 10], 2);
        assert_eq!(m.mean, 0.25);
        assert_eq!(m.std_error, 0.0);
    }
}
