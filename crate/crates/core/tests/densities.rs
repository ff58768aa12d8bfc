use std::f64::consts::PI;

use occtime_core::densities::{
    arcsine_cdf, density_moment_oracle, lamperti_pdf, skew_bm_cdf, skew_bm_pdf, DensityFamily, OccupationDensity,
};
use occtime_core::moments::{bessel_moments_closed, skew_bm_moments, Param};
use occtime_core::quadrature::{integrate_endpoint_singular, QuadConfig};
use proptest::prelude::*;

fn grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for i in 1..=9 {
        for j in 1..=9 {
            g.push((-(i as f64) / 10.0, j as f64 / 10.0));
        }
    }
    g
}

// Lamperti density written out from x and 1 - x separately.
fn pdf_xy(nu: f64, beta: f64, x: f64, y: f64) -> f64 {
    let (s, c) = ((-nu * PI).sin(), (-nu * PI).cos());
    let b = 1.0 - beta;
    s * beta * b * (x * y).powf(-nu - 1.0) / PI
        / (beta * beta * y.powf(-2.0 * nu) + b * b * x.powf(-2.0 * nu) + 2.0 * beta * b * (x * y).powf(-nu) * c)
}

// ∫_0^x f by direct quadrature, independent of the interpolant.
fn cdf_by_quadrature(nu: f64, beta: f64, x: f64) -> f64 {
    let e = -nu - 1.0;
    let cfg = QuadConfig::with_tol(1e-14, 1e-13);
    if x <= 0.5 {
        integrate_endpoint_singular(|p| pdf_xy(nu, beta, p.x, 1.0 - p.x), 0.0, x, e, 0.0, &cfg).unwrap().value
    } else {
        let tail = integrate_endpoint_singular(|p| pdf_xy(nu, beta, 1.0 - p.from_b, p.from_b), x, 1.0, 0.0, e, &cfg);
        1.0 - tail.unwrap().value
    }
}

#[test]
fn lamperti_reduces_to_arcsine() {
    let v = lamperti_pdf(-0.5, 0.5, 0.5).unwrap();
    assert!((v - 2.0 / PI).abs() < 1e-15);
}

#[test]
fn lamperti_mirror_symmetry() {
    for (nu, beta) in grid() {
        for x in [0.013, 0.25, 0.5, 0.81, 0.999] {
            let a = lamperti_pdf(nu, beta, x).unwrap();
            let b = lamperti_pdf(nu, 1.0 - beta, 1.0 - x).unwrap();
            assert!((a - b).abs() <= 1e-12 * a, "nu={nu} beta={beta} x={x}");
        }
    }
}

#[test]
fn densities_normalize() {
    for (nu, beta) in grid() {
        let m0 = density_moment_oracle(DensityFamily::Lamperti { nu, beta }, 0).unwrap();
        assert!((m0 - 1.0).abs() < 1e-10, "nu={nu} beta={beta}: {m0}");
    }
    for fam in [DensityFamily::Arcsine, DensityFamily::SkewBm { beta: 0.7 }] {
        assert!((density_moment_oracle(fam, 0).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn skew_density_is_lamperti_at_half_index() {
    for beta in [0.1, 0.3, 0.7, 0.95] {
        for x in [1e-6, 0.2, 0.5, 0.77, 1.0 - 1e-6] {
            let a = skew_bm_pdf(beta, x).unwrap();
            let b = lamperti_pdf(-0.5, beta, x).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }
}

#[test]
fn skew_cdf_spot_and_derivative() {
    assert!((skew_bm_cdf(0.5, 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((arcsine_cdf(0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let h = 1e-5;
    for x in [0.1, 0.4, 0.6, 0.9] {
        let fd = (skew_bm_cdf(0.7, x + h).unwrap() - skew_bm_cdf(0.7, x - h).unwrap()) / (2.0 * h);
        assert!((fd - skew_bm_pdf(0.7, x).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn moment_oracle_spot_values() {
    assert!((density_moment_oracle(DensityFamily::Arcsine, 2).unwrap() - 0.375).abs() < 1e-10);
    let m1 = density_moment_oracle(DensityFamily::Lamperti { nu: -0.3, beta: 0.6 }, 1).unwrap();
    assert!((m1 - 0.6).abs() < 1e-8);
    let closed = skew_bm_moments(&Param::Real(0.7), 3).unwrap().value(3);
    let m3 = density_moment_oracle(DensityFamily::SkewBm { beta: 0.7 }, 3).unwrap();
    assert!((m3 - closed).abs() < 1e-8);
}

#[test]
fn moment_oracle_matches_closed_form_on_grid() {
    let mut worst = 0.0f64;
    for (nu, beta) in grid() {
        let closed = bessel_moments_closed(&Param::Real(nu), &Param::Real(beta), 8).unwrap();
        for n in 1..=8 {
            let q = density_moment_oracle(DensityFamily::Lamperti { nu, beta }, n).unwrap();
            worst = worst.max((q - closed.value(n)).abs());
        }
    }
    assert!(worst <= 1e-8, "worst {worst}");
}

#[test]
fn interpolated_cdf_matches_closed_skew_cdf() {
    for beta in [0.2, 0.5, 0.7] {
        let d = OccupationDensity::new(DensityFamily::Lamperti { nu: -0.5, beta }).unwrap();
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            let want = skew_bm_cdf(beta, x).unwrap();
            assert!((d.cdf(x).unwrap() - want).abs() < 1e-10, "beta={beta} x={x}");
        }
    }
}

#[test]
fn interpolated_cdf_matches_direct_quadrature() {
    for (nu, beta) in [(-0.3, 0.6), (-0.05, 0.5), (-0.9, 0.2), (-0.7, 0.9)] {
        let d = OccupationDensity::new(DensityFamily::Lamperti { nu, beta }).unwrap();
        for x in [1e-12, 1e-6, 0.01, 0.3, 0.5, 0.62, 0.99, 1.0 - 1e-9] {
            let want = cdf_by_quadrature(nu, beta, x);
            let got = d.cdf(x).unwrap();
            assert!((got - want).abs() < 1e-9, "nu={nu} beta={beta} x={x}: {got} vs {want}");
        }
        assert!((d.cdf(1.0).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn rejects_points_outside_unit_interval() {
    assert!(lamperti_pdf(-0.3, 0.6, 0.0).is_err());
    assert!(lamperti_pdf(-0.3, 0.6, 1.2).is_err());
    assert!(skew_bm_cdf(0.5, -0.1).is_err());
    assert!(OccupationDensity::new(DensityFamily::Lamperti { nu: 0.2, beta: 0.5 }).is_err());
    assert!(density_moment_oracle(DensityFamily::Arcsine, 21).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lamperti_cdf_is_monotone(nu in -0.95f64..-0.05, beta in 0.05f64..0.95, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let d = OccupationDensity::new(DensityFamily::Lamperti { nu, beta }).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(d.cdf(lo).unwrap() <= d.cdf(hi).unwrap() + 1e-12);
    }

    #[test]
    fn pdf_is_positive(nu in -0.99f64..-0.01, beta in 0.01f64..0.99, x in 1e-9f64..(1.0 - 1e-9)) {
        prop_assert!(lamperti_pdf(nu, beta, x).unwrap() > 0.0);
    }
}
