//! The cross-validation matrix behind `occtime verify` and the acceptance
//! test target. Each check compares independent routes to the same quantity
//! and carries its tolerance and runtime budget.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::densities::{arcsine_cdf, density_moment_oracle, skew_bm_cdf, DensityFamily, OccupationDensity};
use crate::diffusion_models::{
    green_integral, make_oscillating_bm, make_skew_bessel, make_skew_bm, make_sticky_bm, Diffusion, DiffusionSpec,
    HalfLine,
};
use crate::error::Result;
use crate::laplace::{sticky_b_moment, tauberian_check};
use crate::mgf::{mgf_bessel_closed, mgf_exp_time, mgf_two_sided, ZeroSide};
use crate::moments::{
    bessel_moments_closed, bessel_moments_recursive, bm_moments, dk_coefficients, skew_bm_moments, sticky_h, Param,
};
use crate::montecarlo::{ks_test, sample_moment, simulate, SimConfig, SimTarget};
use crate::quadrature::QuadConfig;
use crate::special_fn::{binomial_big, factorial_big, gen_binomial_f64, stirling1_unsigned, stirling2, StirlingCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// Criterion-sized runs: 10^5 Monte Carlo paths, minimal grids.
    Quick,
    /// Denser parameter grids and more paths.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: usize,
    pub name: &'static str,
    pub status: Status,
    /// Worst observed discrepancy in the check's own units.
    pub worst: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub scale: Scale,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// `(id, name, runtime budget in seconds)`. Budgets apply at quick scale.
pub const CRITERIA: [(usize, &str, Option<f64>); 11] = [
    (1, "arcsine-moments", Some(1.0)),
    (2, "bessel-recursion-vs-closed-form", Some(10.0)),
    (3, "density-quadrature-moments", Some(60.0)),
    (4, "first-moment-three-ways", None),
    (5, "mgf-quadrature-vs-closed-form", None),
    (6, "two-sided-mgf", None),
    (7, "dk-coefficients", None),
    (8, "stirling-identities", Some(5.0)),
    (9, "sticky-tauberian-limit", None),
    (10, "monte-carlo-distributions", Some(300.0)),
    (11, "hitting-derivatives-near-origin", None),
];

// Outcome of one check body: worst discrepancy, tolerance, pass flag, detail.
struct Outcome {
    worst: f64,
    tolerance: f64,
    ok: bool,
    detail: String,
}

impl Outcome {
    fn within(worst: f64, tolerance: f64, detail: String) -> Self {
        Outcome { worst, tolerance, ok: worst <= tolerance, detail }
    }
}

pub fn run(scale: Scale) -> VerifyReport {
    let checks: Vec<CheckReport> = CRITERIA.iter().map(|c| run_check(c.0, scale)).collect();
    VerifyReport {
        version: env!("CARGO_PKG_VERSION"),
        scale,
        passed: checks.iter().all(|c| c.status == Status::Pass),
        checks,
    }
}

/// Runs one criterion; panics on an unknown id.
pub fn run_check(id: usize, scale: Scale) -> CheckReport {
    let (_, name, budget) = *CRITERIA.iter().find(|c| c.0 == id).expect("criterion id in 1..=11");
    let budget = budget.filter(|_| scale == Scale::Quick);
    let start = Instant::now();
    let outcome = match id {
        1 => arcsine_moments(),
        2 => bessel_recursion(scale),
        3 => density_moments(scale),
        4 => first_moment(scale),
        5 => mgf_closed_form(scale),
        6 => two_sided(),
        7 => dk_checks(scale),
        8 => stirling_identities(),
        9 => tauberian(),
        10 => mc_distributions(scale),
        11 => hitting_derivatives(),
        _ => unreachable!(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (status, worst, tolerance, detail) = match outcome {
        Ok(o) => {
            let in_time = budget.is_none_or(|b| seconds <= b);
            let mut detail = o.detail;
            if !in_time {
                detail.push_str(&format!("; over runtime budget ({seconds:.1} s)"));
            }
            (if o.ok && in_time { Status::Pass } else { Status::Fail }, o.worst, o.tolerance, detail)
        }
        Err(e) => (Status::Fail, f64::NAN, f64::NAN, format!("error: {e}")),
    };
    CheckReport { id, name, status, worst, tolerance, seconds, budget_seconds: budget, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// The 9 × 9 grid ν ∈ {-0.9, ..., -0.1}, β ∈ {0.1, ..., 0.9}.
fn nu_beta_grid() -> Vec<(f64, f64)> {
    (1..=9).flat_map(|i| (1..=9).map(move |j| (-(i as f64) / 10.0, j as f64 / 10.0))).collect()
}

fn arcsine_moments() -> Result<Outcome> {
    let table = bm_moments(20)?;
    let mut mismatches = Vec::new();
    let mut product = BigRational::one();
    for n in 1..=20 {
        product *= q(2 * n as i64 - 1, 2 * n as i64);
        if table.exact(n) != Some(&product) {
            mismatches.push(n);
        }
    }
    for (n, v) in [(1, q(1, 2)), (2, q(3, 8)), (3, q(5, 16))] {
        if table.exact(n) != Some(&v) {
            mismatches.push(n);
        }
    }
    let detail = if mismatches.is_empty() {
        "n = 1..=20 equal to prod (2k-1)/(2k); spot values 1/2, 3/8, 5/16".to_string()
    } else {
        format!("mismatch at n = {mismatches:?}")
    };
    Ok(Outcome::within(mismatches.len() as f64, 0.0, detail))
}

fn bessel_recursion(scale: Scale) -> Result<Outcome> {
    let n_max = 12;
    let mut worst = 0.0f64;
    for (nu, beta) in nu_beta_grid() {
        let r = bessel_moments_recursive(&nu.into(), &beta.into(), n_max)?.values_f64();
        let c = bessel_moments_closed(&nu.into(), &beta.into(), n_max)?.values_f64();
        worst = r.iter().zip(&c).fold(worst, |w, (a, b)| w.max(rel(*a, *b)));
    }
    let betas: Vec<BigRational> = match scale {
        Scale::Quick => vec![q(1, 10), q(1, 2), q(2, 3), q(9, 10)],
        Scale::Full => (1..20).map(|k| q(k, 20)).collect(),
    };
    let half = Param::Exact(q(-1, 2));
    let mut exact_failures = 0;
    for b in &betas {
        let b = Param::Exact(b.clone());
        let skew = skew_bm_moments(&b, n_max)?;
        let rec = bessel_moments_recursive(&half, &b, n_max)?;
        let closed = bessel_moments_closed(&half, &b, n_max)?;
        if !(skew.is_exact() && rec.values == skew.values && closed.values == skew.values) {
            exact_failures += 1;
        }
    }
    let tol = 1e-12;
    Ok(Outcome {
        worst,
        tolerance: tol,
        ok: worst <= tol && exact_failures == 0,
        detail: format!(
            "81-point grid, n <= {n_max}; exact equality with skew BM at nu = -1/2 for {} beta values ({exact_failures} failures)",
            betas.len()
        ),
    })
}

fn density_moments(scale: Scale) -> Result<Outcome> {
    let n_max = match scale {
        Scale::Quick => 8,
        Scale::Full => 12,
    };
    let mut worst = 0.0f64;
    let mut at = (0.0, 0.0, 0);
    for (nu, beta) in nu_beta_grid() {
        let closed = bessel_moments_closed(&nu.into(), &beta.into(), n_max)?.values_f64();
        for n in 1..=n_max {
            let quad = density_moment_oracle(DensityFamily::Lamperti { nu, beta }, n)?;
            let err = (quad - closed[n - 1]).abs();
            if err > worst {
                worst = err;
                at = (nu, beta, n);
            }
        }
    }
    Ok(Outcome::within(
        worst,
        1e-8,
        format!("81-point grid, n <= {n_max}; worst at nu = {}, beta = {}, n = {}", at.0, at.1, at.2),
    ))
}

// A fixed seed per criterion keeps reports reproducible.
const SEED: u64 = 20_240_901;

const CHAIN_STEP_FOR_MEANS: f64 = 3e-3;

fn mc_paths(scale: Scale) -> usize {
    match scale {
        Scale::Quick => 100_000,
        Scale::Full => 300_000,
    }
}

fn first_moment(scale: Scale) -> Result<Outcome> {
    let points: &[(f64, f64)] = match scale {
        Scale::Quick => &[(-0.3, 0.6)],
        Scale::Full => &[(-0.3, 0.6), (-0.1, 0.3), (-0.2, 0.85)],
    };
    let cfg = QuadConfig::default();
    let (mut worst_exact, mut worst_z) = (0.0f64, 0.0f64);
    let mut parts = Vec::new();
    for (i, &(nu, beta)) in points.iter().enumerate() {
        let closed = bessel_moments_closed(&nu.into(), &beta.into(), 1)?.value(1);
        let d = make_skew_bessel(nu, beta)?;
        // λ ∫_{[0,∞)} G_λ(0, y) m(dy) = β for every λ.
        let quad: Vec<f64> = [0.5, 1.0, 2.0]
            .iter()
            .map(|&l| Ok(l * green_integral(&d, l, |_| 1.0, HalfLine::Positive, true, &cfg)?))
            .collect::<Result<_>>()?;
        // The mean does not need the fine resolution near 0 that the
        // distributional checks use, so a 10x coarser inner grid point will do.
        let sim = SimConfig::new(SimTarget::SkewBessel { nu, beta }, 1.0, mc_paths(scale), SEED + i as u64)
            .with_step(CHAIN_STEP_FOR_MEANS);
        let a: Vec<f64> = simulate(&sim)?.iter().map(|s| s.a_t).collect();
        let m = sample_moment(&a, 1);
        let z = (m.mean - beta) / m.std_error;
        worst_exact = quad.iter().fold((closed - beta).abs(), |w, v| w.max((v - beta).abs())).max(worst_exact);
        worst_z = worst_z.max(z.abs());
        parts.push(format!(
            "(nu, beta) = ({nu}, {beta}): closed {closed:.15}, quadrature {:.12}, MC {:.5} +- {:.5} (z = {z:.2})",
            quad[1], m.mean, m.std_error
        ));
    }
    let (tol_exact, gate) = (1e-10, 4.0);
    Ok(Outcome {
        worst: worst_z,
        tolerance: gate,
        ok: worst_exact <= tol_exact && worst_z <= gate,
        detail: format!(
            "{}; worst analytic error {worst_exact:.2e} (tol {tol_exact:.0e}); {} paths, inner grid point \
             {CHAIN_STEP_FOR_MEANS}, gate {gate} SE",
            parts.join("; "),
            mc_paths(scale)
        ),
    })
}

fn mgf_closed_form(scale: Scale) -> Result<Outcome> {
    let (nus, betas): (Vec<f64>, Vec<f64>) = match scale {
        Scale::Quick => (vec![-0.9, -0.7, -0.5, -0.3, -0.1], vec![0.1, 0.3, 0.5, 0.7, 0.9]),
        Scale::Full => ((1..=9).map(|i| -(i as f64) / 10.0).collect(), (1..=9).map(|j| j as f64 / 10.0).collect()),
    };
    let lr = [(1.0, 0.5), (0.3, 2.0), (2.0, 7.0), (1.0, 100.0)];
    let mut worst = 0.0f64;
    for &nu in &nus {
        for &beta in &betas {
            let d = make_skew_bessel(nu, beta)?;
            for &(l, r) in &lr {
                let quad = mgf_exp_time(&d, l, r, 0.0)?.value;
                worst = worst.max((quad - mgf_bessel_closed(nu, beta, l, r)?).abs());
            }
        }
    }
    let bm = make_skew_bm(0.5)?;
    let mut worst_bm = 0.0f64;
    for &(l, r) in &lr {
        let exact = (l / (l + r)).sqrt();
        worst_bm = worst_bm
            .max((mgf_exp_time(&bm, l, r, 0.0)?.value - exact).abs())
            .max((mgf_bessel_closed(-0.5, 0.5, l, r)? - exact).abs());
    }
    let (tol, tol_bm) = (1e-10, 1e-12);
    Ok(Outcome {
        worst,
        tolerance: tol,
        ok: worst <= tol && worst_bm <= tol_bm,
        detail: format!(
            "{} x {} x {} grid; Brownian case worst {worst_bm:.2e} (tol {tol_bm:.0e})",
            nus.len(),
            betas.len(),
            lr.len()
        ),
    })
}

fn two_sided() -> Result<Outcome> {
    let specs = [
        make_skew_bessel(-0.3, 0.6)?,
        make_skew_bessel(-0.75, 0.2)?,
        make_skew_bm(0.3)?,
        make_oscillating_bm(2.0, 1.0)?,
    ];
    let mut worst_reduction = 0.0f64;
    let mut worst_collapse = 0.0f64;
    for d in &specs {
        for &(l, r) in &[(1.0, 2.5), (0.5, 0.1), (3.0, 10.0)] {
            let one = mgf_exp_time(d, l, r, 0.0)?.value;
            let two = mgf_two_sided(d, l, r, 0.0, ZeroSide::Plus, 0.0)?.value;
            worst_reduction = worst_reduction.max((one - two).abs());
            let both = mgf_two_sided(d, l, r, r, ZeroSide::Plus, 0.0)?.value;
            worst_collapse = worst_collapse.max((both - l / (l + r)).abs());
        }
    }
    let gap = |g: f64| -> Result<f64> {
        let d = make_sticky_bm(g)?;
        let p = mgf_two_sided(&d, 1.0, 2.0, 0.5, ZeroSide::Plus, 0.0)?.value;
        let m = mgf_two_sided(&d, 1.0, 2.0, 0.5, ZeroSide::Minus, 0.0)?.value;
        Ok((p - m).abs())
    };
    let gammas = [1.0, 1e-2, 1e-4, 1e-6, 1e-8];
    let gaps: Vec<f64> = gammas.iter().map(|&g| gap(g)).collect::<Result<_>>()?;
    let gap_list: Vec<String> = gaps.iter().map(|g| format!("{g:.3e}")).collect();
    let sticky_ok = gaps[0] > 1e-3 && gaps.windows(2).all(|w| w[1] < w[0]) && gaps[4] < 1e-7;
    let (tol_red, tol_col) = (1e-10, 1e-12);
    Ok(Outcome {
        worst: worst_reduction,
        tolerance: tol_red,
        ok: worst_reduction <= tol_red && worst_collapse <= tol_col && sticky_ok,
        detail: format!(
            "q = 0 reduction worst {worst_reduction:.2e}; r = q collapse worst {worst_collapse:.2e} (tol {tol_col:.0e}); \
             sticky left/right gap at gamma = {gammas:?}: [{}]",
            gap_list.join(", ")
        ),
    })
}

fn dk_checks(scale: Scale) -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let points: Vec<(f64, f64)> = match scale {
        Scale::Quick => vec![(-0.3, 0.6), (-0.75, 0.2), (-0.5, 0.7), (-0.1, 0.9)],
        Scale::Full => (1..=9).step_by(2).flat_map(|i| [(-(i as f64) / 10.0, 0.2), (-(i as f64) / 10.0, 0.7)]).collect(),
    };
    let (mut worst_closed, mut worst_lambda) = (0.0f64, 0.0f64);
    for &(nu, beta) in &points {
        let d = make_skew_bessel(nu, beta)?;
        let sets: Vec<Vec<f64>> =
            [0.5, 1.0, 2.0].iter().map(|&l| Ok(dk_coefficients(&d, l, 6, true, &cfg)?.values)).collect::<Result<_>>()?;
        for k in 1..=6 {
            let want = beta * gen_binomial_f64(nu + k as f64 - 1.0, k);
            worst_closed = worst_closed.max((sets[1][k - 1] - want).abs());
            worst_lambda = worst_lambda.max((sets[0][k - 1] - sets[1][k - 1]).abs()).max((sets[2][k - 1] - sets[1][k - 1]).abs());
        }
    }
    let mut worst_sticky = 0.0f64;
    for &(gamma, lambda) in &[(1.0, 2.0), (0.3, 0.5), (4.0, 1.0)] {
        let d = make_sticky_bm(gamma)?;
        let a = dk_coefficients(&d, lambda, 1, true, &cfg)?.values[0];
        let b = dk_coefficients(&d, lambda, 1, false, &cfg)?.values[0];
        let want = -sticky_h(gamma, lambda) * gamma * (2.0 * lambda).sqrt();
        worst_sticky = worst_sticky.max((a - b - want).abs());
    }
    let (tol_closed, tol_lambda, tol_sticky) = (1e-8, 1e-10, 1e-10);
    Ok(Outcome {
        worst: worst_closed,
        tolerance: tol_closed,
        ok: worst_closed <= tol_closed && worst_lambda <= tol_lambda && worst_sticky <= tol_sticky,
        detail: format!(
            "{} (nu, beta) points, k <= 6: closed-form worst {worst_closed:.2e}; lambda spread {worst_lambda:.2e} \
             (tol {tol_lambda:.0e}); sticky D1 gap worst {worst_sticky:.2e} (tol {tol_sticky:.0e})",
            points.len()
        ),
    })
}

fn stirling_identities() -> Result<Outcome> {
    let mut failures = Vec::new();
    let t = StirlingCache::global();
    for n in 0..t.max_n() {
        for k in 1..=n + 1 {
            if t.first(n + 1, k) != t.first(n, k) * BigUint::from(n) + t.first(n, k - 1)
                || t.second(n + 1, k) != t.second(n, k) * BigUint::from(k) + t.second(n, k - 1)
            {
                failures.push(format!("recurrence n={n} k={k}"));
            }
        }
    }
    for n in 0..=12usize {
        for m in 0..=12usize {
            for l in 0..=12usize {
                let lhs = stirling1_unsigned(n + 1, l + m + 1) * binomial_big((l + m) as u64, l as u64);
                let rhs: BigUint = if l + m > n {
                    BigUint::zero()
                } else {
                    (l..=n - m)
                        .map(|k| stirling1_unsigned(k + 1, l + 1) * stirling1_unsigned(n - k, m) * binomial_big(n as u64, k as u64))
                        .sum()
                };
                if lhs != rhs {
                    failures.push(format!("convolution n={n} m={m} l={l}"));
                }
            }
        }
    }
    for n in 1..=12usize {
        for k in 1..=n {
            let lhs: BigInt = (k..=n)
                .map(|i| BigInt::from(stirling1_unsigned(n, i)) * BigInt::from(stirling2(i, k)) * BigInt::from(-2).pow((n - i) as u32))
                .sum();
            let num = BigInt::from(factorial_big((2 * n - k - 1) as u64));
            let den = BigInt::from(2).pow((n - k) as u32)
                * BigInt::from(factorial_big((k - 1) as u64))
                * BigInt::from(factorial_big((n - k) as u64));
            let sign = if (n - k) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if (&num % &den) != BigInt::zero() || lhs != sign * num / den {
                failures.push(format!("signed inner product n={n} k={k}"));
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("recurrences for n < {}, convolution identity for n, m, l <= 12, signed inner product for n <= 12", t.max_n())
    } else {
        format!("failures: {}", failures.join(", "))
    };
    Ok(Outcome::within(failures.len() as f64, 0.0, detail))
}

fn tauberian() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for &gamma in &[0.1, 1.0, 10.0] {
        for n in 1..=5 {
            worst = worst.max(tauberian_check(gamma, n, 1e-10)?.final_gap);
        }
    }
    let t = 1e3;
    let ratio = sticky_b_moment(1.0, 1, t)?.value / t;
    let tol = 1e-3;
    Ok(Outcome {
        worst,
        tolerance: tol,
        ok: worst <= tol && (0.48..=0.52).contains(&ratio),
        detail: format!("gap at lambda = 1e-10 for gamma in {{0.1, 1, 10}}, n <= 5; E(B_t)/t at t = 1e3: {ratio:.6} (range [0.48, 0.52])"),
    })
}

fn mc_distributions(scale: Scale) -> Result<Outcome> {
    let paths = mc_paths(scale);
    let lamperti = OccupationDensity::new(DensityFamily::Lamperti { nu: -0.3, beta: 0.6 })?;
    type Cdf<'a> = Box<dyn Fn(f64) -> Result<f64> + 'a>;
    let cases: Vec<(&str, SimTarget, f64, Cdf)> = vec![
        ("arcsine", SimTarget::SkewBm { beta: 0.5 }, -0.5, Box::new(arcsine_cdf)),
        ("skew-bm 0.7", SimTarget::SkewBm { beta: 0.7 }, -0.5, Box::new(|x| skew_bm_cdf(0.7, x))),
        ("lamperti (-0.3, 0.6)", SimTarget::SkewBessel { nu: -0.3, beta: 0.6 }, -0.3, Box::new(|x| lamperti.cdf(x))),
    ];
    let (alpha, gate) = (0.01, 4.0);
    let mut ok = true;
    let mut worst_z = 0.0f64;
    let mut parts = Vec::new();
    for (i, (label, target, nu, cdf)) in cases.into_iter().enumerate() {
        let beta = match target {
            SimTarget::SkewBm { beta } | SimTarget::SkewBessel { beta, .. } => beta,
            _ => unreachable!(),
        };
        let cfg = SimConfig::new(target, 1.0, paths, SEED + 100 + i as u64);
        let a: Vec<f64> = simulate(&cfg)?.iter().map(|s| s.a_t).collect();
        let ks = ks_test(&a, cdf)?;
        let exact = [beta, beta * (1.0 + nu - nu * beta)];
        let z: Vec<f64> = (1..=2)
            .map(|n| {
                let m = sample_moment(&a, n);
                (m.mean - exact[n - 1]) / m.std_error
            })
            .collect();
        worst_z = z.iter().fold(worst_z, |w, v| w.max(v.abs()));
        ok &= ks.passes(alpha) && z.iter().all(|v| v.abs() <= gate);
        parts.push(format!("{label}: KS D = {:.5}, p = {:.3}; z = ({:.2}, {:.2})", ks.statistic, ks.p_value, z[0], z[1]));
    }
    Ok(Outcome {
        worst: worst_z,
        tolerance: gate,
        ok,
        detail: format!("{paths} paths each, KS level {alpha}, moment gate {gate} SE; {}", parts.join("; ")),
    })
}

fn hitting_derivatives() -> Result<Outcome> {
    let specs: Vec<DiffusionSpec> = vec![
        make_skew_bessel(-0.3, 0.6)?,
        make_skew_bessel(-0.75, 0.2)?,
        make_skew_bm(0.7)?,
        make_oscillating_bm(2.0, 1.0)?,
        make_sticky_bm(1.0)?,
    ];
    let xs = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let tol = 1e-5;
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for d in &specs {
        for &lambda in &[0.5, 2.0] {
            for k in 1..=4 {
                let vals: Vec<f64> =
                    xs.iter().map(|&x| Ok(d.hitting_transform_deriv(x, lambda, k)?.abs())).collect::<Result<_>>()?;
                let last = vals[xs.len() - 1];
                let monotone = vals.windows(2).all(|w| w[1] < w[0]);
                worst = worst.max(last);
                if !monotone || last >= tol {
                    failing.push(format!("{}{:?} lambda={lambda} k={k}: {last:.2e}", d.name(), d.params()));
                }
            }
        }
    }
    let detail = if failing.is_empty() {
        "all cells decrease monotonically and end below the bound".to_string()
    } else {
        format!("{} of {} cells fail: {}", failing.len(), specs.len() * 8, failing.join("; "))
    };
    Ok(Outcome { worst, tolerance: tol, ok: failing.is_empty(), detail })
}
