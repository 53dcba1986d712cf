use hyperlev::special::{hh, hh_all, hh_by_quadrature, hh_real, phi_all, phi_real};
use hyperlev::C64;
use libm::tgamma;
use proptest::prelude::*;

fn gamma_bound(n: i32, t: f64) -> f64 {
    t.powf(n as f64 / 2.0) / tgamma(n as f64 / 2.0 + 1.0)
}

#[test]
fn phi_at_zero_distance_is_a_power() {
    for &t in &[0.01, 0.3, 1.0, 2.5] {
        for n in -1..=12 {
            let want = gamma_bound(n, t);
            let got = phi_real(n, t, 0.0).unwrap();
            assert!(
                (got - want).abs() <= 1e-10 * want.max(1.0),
                "n={n}, t={t}: {got} vs {want}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn phi_is_bounded_by_its_zero_distance_value(n in 0i32..=12, t in 1e-3f64..=2.0, c in 0.0f64..=5.0) {
        let got = phi_real(n, t, c).unwrap();
        let bound = gamma_bound(n, t);
        prop_assert!(got >= -1e-15 && got <= bound * (1.0 + 1e-12), "n={}, t={}, c={}: {} > {}", n, t, c, got, bound);
    }
}

#[test]
fn recurrence_holds_at_real_and_complex_points() {
    for z in [C64::new(1.3, 0.0), C64::new(-0.7, 0.4), C64::new(2.0, -3.0)] {
        let v = hh_all(15, z);
        for n in 1..=15 {
            let lhs = v[n + 1] * n as f64;
            let rhs = v[n - 1] - z * v[n];
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()), "n={n}, z={z}");
        }
    }
}

#[test]
fn recurrence_agrees_with_direct_quadrature() {
    for z in [
        C64::new(-2.0, 0.0),
        C64::new(0.05, 0.0),
        C64::new(1.3, 0.0),
        C64::new(4.0, 0.0),
        C64::new(0.5, 2.0),
    ] {
        for n in 0..=10 {
            let a = hh(n, z);
            let b = hh_by_quadrature(n, z);
            assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-3), "n={n}, z={z}: {a} vs {b}");
        }
    }
}

#[test]
fn derivative_steps_down_one_index() {
    let h = 1e-5;
    for &x in &[-1.0, 0.2, 1.3, 3.0] {
        for n in 0..=10 {
            let fd = (hh_real(n, x + h) - hh_real(n, x - h)) / (2.0 * h);
            let want = -hh_real(n - 1, x);
            assert!(
                (fd - want).abs() < 1e-8 * (1.0 + want.abs()),
                "n={n}, x={x}: {fd} vs {want}"
            );
        }
    }
}

#[test]
fn phi_shrinks_as_time_goes_to_zero() {
    for n in 0..=8 {
        let mut prev = f64::INFINITY;
        for &t in &[1.0, 0.5, 0.1, 0.01, 1e-3] {
            let v = phi_real(n, t, 0.8).unwrap();
            assert!(v < prev, "n={n}, t={t}");
            prev = v;
        }
        assert!(prev < 1e-60);
    }
}

#[test]
fn phi_rejects_nonpositive_time() {
    assert!(phi_all(3, C64::new(0.0, 1.0), 0.5).is_err());
    assert!(phi_real(3, -1.0, 0.5).is_err());
}
