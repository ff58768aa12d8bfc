use occtime_core::diffusion_models::{make_oscillating_bm, make_skew_bessel, make_skew_bm, make_sticky_bm};
use occtime_core::mgf::{mgf_bessel_closed, mgf_exp_time, mgf_moment_consistency, mgf_two_sided, ZeroSide};
use proptest::prelude::*;

#[test]
fn brownian_transform_matches_square_root_law() {
    let d = make_skew_bm(0.5).unwrap();
    for &(l, r) in &[(1.0, 3.0), (0.5, 0.2), (2.0, 10.0)] {
        let v = mgf_exp_time(&d, l, r, 0.0).unwrap().value;
        let exact = (l / (l + r)).sqrt();
        assert!((v - exact).abs() < 1e-10, "l={l} r={r}: {v} vs {exact}");
    }
    let v = mgf_exp_time(&d, 1.0, 3.0, 0.0).unwrap().value;
    assert!((v - 0.5).abs() < 1e-10);
}

#[test]
fn quadrature_matches_bessel_closed_form_on_grid() {
    let mut worst = 0.0f64;
    for &nu in &[-0.9, -0.7, -0.5, -0.3, -0.1] {
        for &beta in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            for &(l, r) in &[(1.0, 0.5), (0.3, 2.0), (2.0, 7.0), (1.0, 100.0)] {
                let d = make_skew_bessel(nu, beta).unwrap();
                let q = mgf_exp_time(&d, l, r, 0.0).unwrap().value;
                let c = mgf_bessel_closed(nu, beta, l, r).unwrap();
                worst = worst.max((q - c).abs());
            }
        }
    }
    assert!(worst < 1e-10, "worst {worst}");
}

#[test]
fn start_away_from_origin_tends_to_origin_value() {
    let d = make_skew_bessel(-0.3, 0.6).unwrap();
    let at0 = mgf_exp_time(&d, 1.0, 2.0, 0.0).unwrap().value;
    for x in [1e-8, -1e-8] {
        let v = mgf_exp_time(&d, 1.0, 2.0, x).unwrap().value;
        assert!((v - at0).abs() < 1e-4, "x={x}");
    }
    // Far right: almost all the time is spent positive.
    let far = mgf_exp_time(&d, 1.0, 2.0, 50.0).unwrap().value;
    assert!((far - 1.0 / 3.0).abs() < 1e-8);
    let far_left = mgf_exp_time(&d, 1.0, 2.0, -50.0).unwrap().value;
    assert!((far_left - 1.0).abs() < 1e-8);
}

#[test]
fn two_sided_reduces_to_one_sided_when_q_is_zero() {
    for d in [make_skew_bessel(-0.3, 0.6).unwrap(), make_skew_bm(0.3).unwrap(), make_oscillating_bm(2.0, 1.0).unwrap()] {
        let one = mgf_exp_time(&d, 1.0, 2.5, 0.0).unwrap().value;
        let two = mgf_two_sided(&d, 1.0, 2.5, 0.0, ZeroSide::Plus, 0.0).unwrap().value;
        assert!((one - two).abs() < 1e-9, "{one} vs {two}");
    }
}

#[test]
fn equal_rates_give_total_time() {
    let d = make_skew_bessel(-0.4, 0.2).unwrap();
    let v = mgf_two_sided(&d, 1.5, 0.7, 0.7, ZeroSide::Plus, 0.0).unwrap().value;
    assert!((v - 1.5 / 2.2).abs() < 1e-13);
}

#[test]
fn swapping_rates_mirrors_skewness() {
    let a = make_skew_bm(0.3).unwrap();
    let b = make_skew_bm(0.7).unwrap();
    let va = mgf_two_sided(&a, 1.0, 2.0, 0.5, ZeroSide::Plus, 0.0).unwrap().value;
    let vb = mgf_two_sided(&b, 1.0, 0.5, 2.0, ZeroSide::Plus, 0.0).unwrap().value;
    assert!((va - vb).abs() < 1e-13);
}

#[test]
fn sticky_threshold_side_matters_and_vanishes_without_stickiness() {
    let gap = |g: f64| {
        let d = make_sticky_bm(g).unwrap();
        let p = mgf_two_sided(&d, 1.0, 2.0, 0.5, ZeroSide::Plus, 0.0).unwrap().value;
        let m = mgf_two_sided(&d, 1.0, 2.0, 0.5, ZeroSide::Minus, 0.0).unwrap().value;
        (p - m).abs()
    };
    assert!(gap(1.0) > 1e-3);
    assert!(gap(1e-9) < 1e-8);
}

#[test]
fn sticky_atom_changes_positive_time() {
    let d = make_sticky_bm(1.0).unwrap();
    let cfg = occtime_core::quadrature::QuadConfig::default();
    let with = occtime_core::mgf::mgf_exp_time_with(&d, 1.0, 2.0, 0.0, true, &cfg).unwrap().value;
    let without = occtime_core::mgf::mgf_exp_time_with(&d, 1.0, 2.0, 0.0, false, &cfg).unwrap().value;
    assert!(with < without);
    let plus = mgf_two_sided(&d, 1.0, 2.0, 0.0, ZeroSide::Plus, 0.0).unwrap().value;
    let minus = mgf_two_sided(&d, 1.0, 2.0, 0.0, ZeroSide::Minus, 0.0).unwrap().value;
    assert!((with - plus).abs() < 1e-8, "{with} vs {plus}");
    assert!((without - minus).abs() < 1e-8, "{without} vs {minus}");
}

#[test]
fn derivatives_in_rate_recover_moments() {
    let d = make_skew_bessel(-0.3, 0.6).unwrap();
    let rows = mgf_moment_consistency(&d, 1.0, 2).unwrap();
    for row in rows {
        assert!(row.rel_error < 1e-5, "{row:?}");
    }
}

#[test]
fn rejects_bad_arguments() {
    let d = make_skew_bm(0.3).unwrap();
    assert!(mgf_exp_time(&d, 0.0, 1.0, 0.0).is_err());
    assert!(mgf_exp_time(&d, 1.0, -1.0, 0.0).is_err());
    assert!(mgf_two_sided(&d, 1.0, 1.0, -0.1, ZeroSide::Plus, 0.0).is_err());
    assert!(mgf_moment_consistency(&make_sticky_bm(1.0).unwrap(), 1.0, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_within_trivial_bounds(nu in -0.95f64..-0.05, beta in 0.05f64..0.95, l in 0.1f64..5.0, r in 0.0f64..50.0) {
        let v = mgf_bessel_closed(nu, beta, l, r).unwrap();
        prop_assert!(v >= l / (l + r) - 1e-14 && v <= 1.0 + 1e-14);
    }

    #[test]
    fn two_sided_within_bounds(beta in 0.05f64..0.95, r in 0.0f64..20.0, q in 0.0f64..20.0) {
        let d = make_skew_bm(beta).unwrap();
        let v = mgf_two_sided(&d, 1.0, r, q, ZeroSide::Plus, 0.0).unwrap().value;
        let lo = 1.0 / (1.0 + r.max(q));
        let hi = 1.0 / (1.0 + r.min(q));
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }
}
