use num_complex::Complex64;
use occtime_core::laplace::{invert, sticky_b_moment, tauberian_check, KnownSign, TransformFn};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn pairs() -> Vec<(&'static str, TransformFn, fn(f64) -> f64)> {
    let p = KnownSign::Positive;
    vec![
        ("1/s^2", TransformFn::new(|s: Complex64| 1.0 / (s * s), p, ""), |t| t),
        ("6/s^4", TransformFn::new(|s: Complex64| 6.0 / s.powi(4), p, ""), |t| t.powi(3)),
        ("1/(s+1)", TransformFn::new(|s: Complex64| 1.0 / (s + 1.0), p, ""), |t| (-t).exp()),
        ("1/(s+1)^2", TransformFn::new(|s: Complex64| 1.0 / ((s + 1.0) * (s + 1.0)), p, ""), |t| t * (-t).exp()),
        ("1/sqrt(s)", TransformFn::new(|s: Complex64| 1.0 / s.sqrt(), p, ""), |t| 1.0 / (std::f64::consts::PI * t).sqrt()),
        ("1/(s(s+1))", TransformFn::new(|s: Complex64| 1.0 / (s * (s + 1.0)), p, ""), |t| 1.0 - (-t).exp()),
        (
            "-(ln s + γ)/s",
            TransformFn::new(|s: Complex64| -(s.ln() + EULER_GAMMA) / s, KnownSign::Unknown, ""),
            |t| t.ln(),
        ),
    ]
}

#[test]
fn round_trip_on_known_pairs() {
    for (name, f, exact) in pairs() {
        for i in 0..=20 {
            let t = 0.1 * 100f64.powf(i as f64 / 20.0);
            let want = exact(t);
            let got = invert(&f, t).map(|r| r.value).unwrap_or(f64::NAN);
            // ln t vanishes at t = 1
            let scale = want.abs().max(if name.contains("ln") { 1.0 } else { 0.0 });
            assert!((got - want).abs() <= 1e-6 * scale, "{name} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn spot_inversions() {
    assert!((invert(&TransformFn::power(1), 3.0).unwrap().value - 3.0).abs() < 1e-8);
    assert!((invert(&TransformFn::power(3), 2.0).unwrap().value - 8.0).abs() < 1e-6);
}

#[test]
fn sticky_positive_time_grows_like_half_of_t() {
    let r = sticky_b_moment(1.0, 1, 1e3).unwrap();
    let ratio = r.value / 1e3;
    assert!((0.48..=0.52).contains(&ratio), "{ratio}");
    let mut prev = 0.0;
    for i in 1..=40 {
        let t = 0.05 * 1.25f64.powi(i);
        for n in 1..=3 {
            let v = sticky_b_moment(1.0, n, t).unwrap().value;
            assert!(v > 0.0 && v <= t.powi(n as i32) * (1.0 + 1e-9));
        }
        let v = sticky_b_moment(1.0, 1, t).unwrap().value;
        assert!(v >= prev, "t={t}");
        prev = v;
    }
}

#[test]
fn sticky_without_stickiness_is_arcsine_scaled() {
    // γ = 0: B̂_n = n! C(2n,n)/4^n / λ^{n+1}, so E(B_t^n) = t^n C(2n,n)/4^n.
    let arcsine = [0.5, 0.375, 0.3125];
    for (n, m) in arcsine.iter().enumerate() {
        let v = sticky_b_moment(0.0, n + 1, 2.0).unwrap().value;
        assert!((v - m * 2f64.powi(n as i32 + 1)).abs() < 1e-8);
    }
}

#[test]
fn tauberian_limits() {
    for gamma in [0.1, 1.0, 10.0] {
        for n in 1..=5 {
            let r = tauberian_check(gamma, n, 1e-10).unwrap();
            assert!(r.monotone, "gamma={gamma} n={n}");
            assert!(r.final_gap < 1e-3, "gamma={gamma} n={n}: {}", r.final_gap);
        }
    }
    let r = tauberian_check(1.0, 1, 1e-10).unwrap();
    assert!((r.limit - 0.5).abs() < 1e-15 && r.final_gap < 1e-4);
    assert!((tauberian_check(1.0, 2, 1e-10).unwrap().limit - 0.75).abs() < 1e-15);
    let flat = tauberian_check(0.0, 3, 1e-6).unwrap();
    assert!(flat.rows.iter().all(|row| row.rel_gap < 1e-15));
}

#[test]
fn rejects_bad_input() {
    assert!(invert(&TransformFn::power(1), 0.0).is_err());
    assert!(TransformFn::sticky_b(-1.0, 1).is_err());
    assert!(TransformFn::sticky_b(1.0, 0).is_err());
    // No inverse function: Talbot orders disagree.
    let f = TransformFn::new(|s: Complex64| s.exp(), KnownSign::Unknown, "grows");
    assert!(invert(&f, 1.0).is_err());
}
