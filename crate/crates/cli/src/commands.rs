use std::path::Path;

use anyhow::{bail, Context, Result};
use occtime_core::densities::{density_moment_oracle, DensityFamily, OccupationDensity};
use occtime_core::diffusion_models::{
    make_oscillating_bm, make_skew_bessel, make_skew_bm, make_sticky_bm, DiffusionSpec,
};
use occtime_core::laplace::{invert_with, sticky_b_moment, TalbotConfig, TransformFn};
use occtime_core::mgf::{mgf_bessel_closed, mgf_exp_time_with, mgf_two_sided, ZeroSide};
use occtime_core::moments::{
    bessel_moments_closed, bessel_moments_recursive, bm_moments, generic_laplace_moments_with, oscillating_moments,
    skew_bm_moments, spider_beta, spider_moments, sticky_u_table, MomentTable, Param, StickyFunctional,
};
use occtime_core::montecarlo::{estimate_moments, ks_test, simulate, OccupationSample, Scheme, SimConfig, SimTarget};
use occtime_core::quadrature::QuadConfig;
use occtime_core::scalar::{parse_rational, ratio_to_f64};
use occtime_core::verify::{self, Scale, Status, CRITERIA};
use serde_json::{json, Map};

use crate::args::*;
use crate::output::{emit, moment_table, write_bytes, Cell, Meta, Table};
use crate::UsageError;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn workers() -> usize {
    rayon::current_num_threads()
}

fn kind_name(k: DiffusionKind) -> &'static str {
    match k {
        DiffusionKind::Bm => "bm",
        DiffusionKind::SkewBm => "skew-bm",
        DiffusionKind::Bessel => "bessel",
        DiffusionKind::Oscillating => "oscillating",
        DiffusionKind::Spider => "spider",
        DiffusionKind::Sticky => "sticky",
    }
}

/// Rejects missing parameters and parameters the diffusion does not take.
fn check_params(d: &DiffusionArgs) -> Result<()> {
    let needed: &[&str] = match d.diffusion {
        DiffusionKind::Bm => &[],
        DiffusionKind::SkewBm => &["beta"],
        DiffusionKind::Bessel => &["nu", "beta"],
        DiffusionKind::Oscillating => &["sigma-plus", "sigma-minus"],
        DiffusionKind::Spider => &["p", "rays"],
        DiffusionKind::Sticky => &["gamma"],
    };
    let given = [
        ("beta", d.beta.is_some()),
        ("nu", d.nu.is_some()),
        ("sigma-plus", d.sigma_plus.is_some()),
        ("sigma-minus", d.sigma_minus.is_some()),
        ("gamma", d.gamma.is_some()),
        ("p", !d.p.is_empty()),
        ("rays", !d.rays.is_empty()),
    ];
    let name = kind_name(d.diffusion);
    for (flag, set) in given {
        if set && !needed.contains(&flag) {
            bail!(usage(format!("--{flag} does not apply to --diffusion {name}")));
        }
        if !set && needed.contains(&flag) {
            bail!(usage(format!("--diffusion {name} needs --{flag}")));
        }
    }
    Ok(())
}

fn param(s: &Option<String>, exact: bool) -> Result<Param> {
    let r = parse_rational(s.as_deref().expect("checked by check_params"))?;
    Ok(if exact { Param::Exact(r) } else { Param::Real(ratio_to_f64(&r)) })
}

fn real(s: &Option<String>) -> Result<f64> {
    Ok(param(s, false)?.to_f64())
}

fn spider_params(d: &DiffusionArgs, exact: bool) -> Result<Vec<Param>> {
    d.p.iter().map(|s| param(&Some(s.clone()), exact)).collect()
}

fn spider_real_beta(d: &DiffusionArgs) -> Result<f64> {
    Ok(spider_beta(&spider_params(d, false)?, &d.rays)?.to_f64())
}

/// Analytic model; a spider is represented by the skew BM it reduces to.
fn spec(d: &DiffusionArgs) -> Result<DiffusionSpec> {
    check_params(d)?;
    Ok(match d.diffusion {
        DiffusionKind::Bm => make_skew_bm(0.5)?,
        DiffusionKind::SkewBm => make_skew_bm(real(&d.beta)?)?,
        DiffusionKind::Bessel => make_skew_bessel(real(&d.nu)?, real(&d.beta)?)?,
        DiffusionKind::Oscillating => make_oscillating_bm(real(&d.sigma_plus)?, real(&d.sigma_minus)?)?,
        DiffusionKind::Spider => make_skew_bm(spider_real_beta(d)?)?,
        DiffusionKind::Sticky => make_sticky_bm(real(&d.gamma)?)?,
    })
}

fn sim_target(d: &DiffusionArgs) -> Result<SimTarget> {
    check_params(d)?;
    Ok(match d.diffusion {
        DiffusionKind::Bm => SimTarget::SkewBm { beta: 0.5 },
        DiffusionKind::SkewBm => SimTarget::SkewBm { beta: real(&d.beta)? },
        DiffusionKind::Bessel => SimTarget::SkewBessel { nu: real(&d.nu)?, beta: real(&d.beta)? },
        DiffusionKind::Oscillating => {
            SimTarget::OscillatingBm { sigma_plus: real(&d.sigma_plus)?, sigma_minus: real(&d.sigma_minus)? }
        }
        DiffusionKind::Spider => SimTarget::Spider {
            p: spider_params(d, false)?.iter().map(Param::to_f64).collect(),
            rays: d.rays.clone(),
        },
        DiffusionKind::Sticky => SimTarget::StickyBm { gamma: real(&d.gamma)? },
    })
}

fn sticky_functional(f: Functional, kind: DiffusionKind) -> Result<StickyFunctional> {
    match (f, kind) {
        (Functional::B, _) => Ok(StickyFunctional::B),
        (Functional::A, DiffusionKind::Sticky) => Ok(StickyFunctional::A),
        (Functional::A, _) => Err(usage("--functional a applies only to --diffusion sticky")),
    }
}

pub fn moments_table(a: &MomentsArgs) -> Result<MomentTable> {
    let d = &a.diffusion;
    check_params(d)?;
    let kind = d.diffusion;
    let sticky = kind == DiffusionKind::Sticky;
    let generic = a.method == MomentMethod::Generic;
    let functional = sticky_functional(a.functional, kind)?;
    let lambda = match (a.lambda, sticky || generic) {
        (Some(l), true) => l,
        (None, true) => bail!(usage("--lambda is required for sticky BM and for --method generic")),
        (Some(_), false) => bail!(usage(format!(
            "--lambda does not apply to --diffusion {}: it is self-similar, so its moments do not depend on lambda",
            kind_name(kind)
        ))),
        (None, false) => 0.0,
    };
    if a.exact && (sticky || generic) {
        bail!(usage("--exact needs a rational closed form; sticky BM and --method generic are floating point"));
    }
    let n = a.n_max;
    let p = |s: &Option<String>| param(s, a.exact);
    Ok(match (a.method, kind) {
        (MomentMethod::Generic, _) => {
            let include_atom = functional == StickyFunctional::A;
            generic_laplace_moments_with(&spec(d)?, lambda, n, include_atom, &QuadConfig::default())?.table
        }
        (_, DiffusionKind::Sticky) => sticky_u_table(real(&d.gamma)?, lambda, n, functional)?,
        (MomentMethod::Recursion, DiffusionKind::Bessel) => bessel_moments_recursive(&p(&d.nu)?, &p(&d.beta)?, n)?,
        (MomentMethod::Recursion, k) => {
            bail!(usage(format!("--method recursion applies to bessel and sticky, not {}", kind_name(k))))
        }
        (MomentMethod::Closed, DiffusionKind::Bm) => bm_moments(n)?,
        (MomentMethod::Closed, DiffusionKind::SkewBm) => skew_bm_moments(&p(&d.beta)?, n)?,
        (MomentMethod::Closed, DiffusionKind::Bessel) => bessel_moments_closed(&p(&d.nu)?, &p(&d.beta)?, n)?,
        (MomentMethod::Closed, DiffusionKind::Oscillating) => {
            oscillating_moments(&p(&d.sigma_plus)?, &p(&d.sigma_minus)?, n)?
        }
        (MomentMethod::Closed, DiffusionKind::Spider) => spider_moments(&spider_params(d, a.exact)?, &d.rays, n)?,
    })
}

pub fn moments(a: &MomentsArgs) -> Result<u8> {
    let table = moments_table(a)?;
    let meta = Meta::new("moments", workers(), a)?;
    let mut extra = Map::new();
    extra.insert("table".into(), table.to_json()?);
    emit(&a.out, &meta, &moment_table(&table), extra)?;
    Ok(0)
}

pub fn mgf(a: &MgfArgs) -> Result<u8> {
    let d = &a.diffusion;
    let model = spec(d)?;
    let functional = sticky_functional(a.functional, d.diffusion)?;
    let cfg = QuadConfig::with_tol(a.abs_tol, a.rel_tol);
    let zero_side = match a.zero_side {
        ZeroSideArg::Plus => ZeroSide::Plus,
        ZeroSideArg::Minus => ZeroSide::Minus,
    };
    // (nu, beta) of the skew Bessel process with the same occupation law.
    let closed_params = || -> Result<(f64, f64)> {
        Ok(match d.diffusion {
            DiffusionKind::Bm => (-0.5, 0.5),
            DiffusionKind::SkewBm => (-0.5, real(&d.beta)?),
            DiffusionKind::Bessel => (real(&d.nu)?, real(&d.beta)?),
            DiffusionKind::Oscillating => {
                let (sp, sm) = (real(&d.sigma_plus)?, real(&d.sigma_minus)?);
                (-0.5, sm / (sp + sm))
            }
            DiffusionKind::Spider => (-0.5, spider_real_beta(d)?),
            DiffusionKind::Sticky => bail!(usage("--method closed does not apply to sticky BM")),
        })
    };
    let mut table = Table::new(&["lambda", "r", "q", "x", "value", "method", "diffusion"]);
    for &r in &a.r {
        let (value, method) = match (a.method, a.q) {
            (MgfMethodArg::Closed, Some(_)) => bail!(usage("--method closed has no two-sided form; drop --q")),
            (MgfMethodArg::Closed, None) => {
                if a.x != 0.0 {
                    bail!(usage("--method closed starts at 0; drop --x"));
                }
                let (nu, beta) = closed_params()?;
                (mgf_bessel_closed(nu, beta, a.lambda, r)?, "closed_form")
            }
            (MgfMethodArg::Quadrature, Some(q)) => {
                (mgf_two_sided(&model, a.lambda, r, q, zero_side, a.x)?.value, "two_sided")
            }
            (MgfMethodArg::Quadrature, None) => {
                let include_atom = functional == StickyFunctional::A;
                (mgf_exp_time_with(&model, a.lambda, r, a.x, include_atom, &cfg)?.value, "quadrature")
            }
        };
        table.push(vec![
            a.lambda.into(),
            r.into(),
            a.q.into(),
            a.x.into(),
            value.into(),
            method.into(),
            kind_name(d.diffusion).into(),
        ]);
    }
    emit(&a.out, &Meta::new("mgf", workers(), a)?, &table, Map::new())?;
    Ok(0)
}

pub fn density(a: &DensityArgs) -> Result<u8> {
    let family = match (a.family, a.nu, a.beta) {
        (FamilyArg::Lamperti, Some(nu), Some(beta)) => DensityFamily::Lamperti { nu, beta },
        (FamilyArg::Lamperti, _, _) => bail!(usage("--family lamperti needs --nu and --beta")),
        (FamilyArg::SkewBm, None, Some(beta)) => DensityFamily::SkewBm { beta },
        (FamilyArg::SkewBm, Some(_), _) => bail!(usage("--nu does not apply to --family skew-bm")),
        (FamilyArg::SkewBm, None, None) => bail!(usage("--family skew-bm needs --beta")),
        (FamilyArg::Arcsine, None, None) => DensityFamily::Arcsine,
        (FamilyArg::Arcsine, _, _) => bail!(usage("--family arcsine takes no parameters")),
    };
    let density = OccupationDensity::new(family)?;
    let table = match (a.x.is_empty(), a.n_max) {
        (false, None) => {
            let mut t = Table::new(&["x", "pdf", "cdf"]);
            for &x in &a.x {
                let cdf = density.cdf(x)?;
                // The densities blow up at both ends of [0, 1].
                let pdf = if x == 0.0 || x == 1.0 { f64::INFINITY } else { density.pdf(x)? };
                t.push(vec![x.into(), pdf.into(), cdf.into()]);
            }
            t
        }
        (true, Some(n_max)) => {
            let mut t = Table::new(&["n", "moment"]);
            for n in 1..=n_max {
                t.push(vec![n.into(), density_moment_oracle(family, n)?.into()]);
            }
            t
        }
        _ => bail!(usage("give exactly one of --x and --n-max")),
    };
    emit(&a.out, &Meta::new("density", workers(), a)?, &table, Map::new())?;
    Ok(0)
}

fn write_samples(path: &Path, samples: &[OccupationSample]) -> Result<()> {
    let mut wr = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    wr.write_record(["path_id", "a_t", "b_t", "zero_time", "terminal"])?;
    for (i, s) in samples.iter().enumerate() {
        let f = occtime_core::moments::format_f64;
        wr.write_record([i.to_string(), f(s.a_t), f(s.b_t), f(s.zero_time), f(s.terminal)])?;
    }
    wr.flush()?;
    Ok(())
}

/// Exact moments of `A_t / t` (or `B_t / t`) for comparison, where known.
fn analytic_moments(
    d: &DiffusionArgs,
    target: &SimTarget,
    horizon: f64,
    n_max: usize,
    functional: StickyFunctional,
) -> Result<Vec<Option<f64>>> {
    let table = match target {
        SimTarget::SkewBm { beta } => skew_bm_moments(&Param::Real(*beta), n_max)?,
        SimTarget::SkewBessel { nu, beta } => bessel_moments_closed(&Param::Real(*nu), &Param::Real(*beta), n_max)?,
        SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
            oscillating_moments(&Param::Real(*sigma_plus), &Param::Real(*sigma_minus), n_max)?
        }
        SimTarget::Spider { rays, .. } => spider_moments(&spider_params(d, false)?, rays, n_max)?,
        SimTarget::StickyBm { gamma } => {
            return Ok(match functional {
                StickyFunctional::B => (1..=n_max)
                    .map(|n| sticky_b_moment(*gamma, n, horizon).ok().map(|inv| inv.value / horizon.powi(n as i32)))
                    .collect(),
                StickyFunctional::A => vec![None; n_max],
            });
        }
    };
    Ok(table.values_f64().into_iter().map(Some).collect())
}

/// Reference law of `A_t / t` for the self-similar targets.
fn reference_cdf(target: &SimTarget) -> Result<Option<OccupationDensity>> {
    let family = match target {
        SimTarget::SkewBm { beta } if *beta == 0.5 => DensityFamily::Arcsine,
        SimTarget::SkewBm { beta } => DensityFamily::SkewBm { beta: *beta },
        SimTarget::OscillatingBm { sigma_plus, sigma_minus } => {
            DensityFamily::SkewBm { beta: sigma_minus / (sigma_plus + sigma_minus) }
        }
        SimTarget::SkewBessel { nu, beta } => DensityFamily::Lamperti { nu: *nu, beta: *beta },
        SimTarget::Spider { p, rays } => {
            let beta: f64 = rays.iter().map(|&r| p[r - 1]).sum();
            if !(beta > 0.0 && beta < 1.0) {
                return Ok(None);
            }
            DensityFamily::SkewBm { beta }
        }
        SimTarget::StickyBm { .. } => return Ok(None),
    };
    Ok(Some(OccupationDensity::new(family)?))
}

pub fn simulate_cmd(a: &SimulateArgs) -> Result<u8> {
    let d = &a.diffusion;
    let target = sim_target(d)?;
    let functional = sticky_functional(a.functional, d.diffusion)?;
    let mut cfg = SimConfig::new(target.clone(), a.horizon, a.paths, a.seed);
    if let Some(s) = a.scheme {
        cfg = cfg.with_scheme(match s {
            SchemeArg::SkewWalk => Scheme::SkewWalk,
            SchemeArg::ChainApprox => Scheme::ChainApprox,
            SchemeArg::Euler => Scheme::Euler,
            SchemeArg::StickyWalk => Scheme::StickyWalk,
        });
    }
    if let Some(h) = a.step {
        cfg = cfg.with_step(h);
    }
    cfg.validate()?;
    let samples = simulate(&cfg)?;
    if let Some(path) = &a.samples {
        write_samples(path, &samples)?;
    }
    let estimates = estimate_moments(&cfg, &samples, a.n_max, functional)?;
    let analytic = analytic_moments(d, &target, a.horizon, a.n_max, functional)?;
    let se = estimates.std_errors.clone().unwrap_or_default();
    let mut table = Table::new(&["n", "estimate", "std_error", "analytic", "z", "scheme", "step", "paths", "seed"]);
    let scheme = serde_json::to_value(cfg.scheme)?.as_str().unwrap_or_default().to_string();
    for n in 1..=a.n_max {
        let est = estimates.value(n);
        let exact = analytic[n - 1];
        let z = exact.map(|e| (est - e) / se[n - 1]);
        table.push(vec![
            n.into(),
            est.into(),
            se[n - 1].into(),
            exact.into(),
            z.into(),
            scheme.as_str().into(),
            cfg.step.into(),
            cfg.paths.into(),
            Cell::Int(cfg.seed),
        ]);
    }
    let ks = match reference_cdf(&target)? {
        Some(density) => {
            let scaled: Vec<f64> = samples.iter().map(|s| s.a_t / a.horizon).collect();
            Some(ks_test(&scaled, |x| density.cdf(x.clamp(0.0, 1.0)))?)
        }
        None => None,
    };
    let mut extra = Map::new();
    extra.insert("config".into(), serde_json::to_value(&cfg)?);
    extra.insert("ks".into(), serde_json::to_value(ks)?);
    emit(&a.out, &Meta::new("simulate", workers(), a)?, &table, extra)?;
    Ok(0)
}

pub fn invert(a: &InvertArgs) -> Result<u8> {
    if a.diffusion != DiffusionKind::Sticky {
        bail!(usage("invert supports only --diffusion sticky"));
    }
    let f = TransformFn::sticky_b(a.gamma, a.n)?;
    let cfg = TalbotConfig { order: a.order, rel_tol: a.rel_tol, abs_tol: a.abs_tol };
    let mut table = Table::new(&["t", "value", "error_estimate", "n", "gamma"]);
    for &t in &a.t {
        let inv = invert_with(&f, t, &cfg)?;
        table.push(vec![t.into(), inv.value.into(), inv.error_estimate.into(), a.n.into(), a.gamma.into()]);
    }
    emit(&a.out, &Meta::new("invert", workers(), a)?, &table, Map::new())?;
    Ok(0)
}

pub fn verify_cmd(a: &VerifyArgs) -> Result<u8> {
    let scale = match a.scale {
        ScaleArg::Quick => Scale::Quick,
        ScaleArg::Full => Scale::Full,
    };
    let ids: Vec<usize> = if a.only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|&&i| !CRITERIA.iter().any(|c| c.0 == i)) {
        bail!(usage(format!("unknown criterion {bad}; valid ids are 1..={}", CRITERIA.len())));
    }
    let mut checks = Vec::new();
    for id in ids {
        let r = verify::run_check(id, scale);
        let tag = if r.status == Status::Pass { "PASS" } else { "FAIL" };
        eprintln!("[{tag}] {id:>2} {}: worst {:.3e} (tol {:.1e}) in {:.2} s", r.name, r.worst, r.tolerance, r.seconds);
        checks.push(r);
    }
    let passed = checks.iter().all(|c| c.status == Status::Pass);
    let report = json!({
        "meta": Meta::new("verify", workers(), a)?,
        "scale": scale,
        "passed": passed,
        "checks": checks,
    });
    let mut s = serde_json::to_string_pretty(&report)?;
    s.push('\n');
    write_bytes(a.output.as_deref(), s.as_bytes())?;
    Ok(if passed { 0 } else { 1 })
}
