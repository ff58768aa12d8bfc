//! Fixtures shared by the criterion benchmarks.

pub use occtime_core::diffusion_models::{make_skew_bessel, make_sticky_bm, DiffusionSpec};
pub use occtime_core::moments::Param;

/// Skew Bessel parameters used across benchmarks, as `(nu, beta)`.
pub const BESSEL_CASES: [(f64, f64); 3] = [(-0.3, 0.6), (-0.5, 0.5), (-0.75, 0.2)];

/// `(nu, beta)` as exact rationals `-3/10, 3/5`.
pub fn exact_bessel_params() -> (Param, Param) {
    let p = |s: &str| Param::Exact(occtime_core::scalar::parse_rational(s).expect("literal"));
    (p("-3/10"), p("3/5"))
}

pub fn bessel_specs() -> Vec<DiffusionSpec> {
    BESSEL_CASES.iter().map(|&(nu, beta)| make_skew_bessel(nu, beta).expect("valid parameters")).collect()
}
