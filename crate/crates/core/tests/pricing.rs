mod common;

use common::{assert_close, set1, set2};
use hyperlev::pricing::{laplace_price, truncation_len, OptionKind, Pricer, TruncationVector};
use hyperlev::roots::{numeric_roots_real, RootMode};
use hyperlev::{HyperExpParams, C64};

const R: f64 = 0.03;

fn trunc(row: &[usize]) -> TruncationVector {
    TruncationVector::new(row.to_vec()).unwrap()
}

const DEFAULT_ROW: [usize; 8] = [15, 15, 15, 15, 15, 30, 30, 60];

fn call(p: &HyperExpParams, s0: f64, k: f64, row: &[usize]) -> Pricer {
    Pricer::new(p, s0, k, R, OptionKind::Call, &trunc(row)).unwrap()
}

#[test]
fn itm_call_set1() {
    let pr = call(&set1(R), 95.0, 90.0, &DEFAULT_ROW);
    for (t, want) in [(0.01, 5.09975), (0.1, 5.94755), (0.2, 6.79759), (0.5, 8.95421)] {
        assert_close(pr.price(t).unwrap().price, want, 1e-5, &format!("T={t}"));
    }
}

#[test]
fn atm_call_set2() {
    let pr = call(&set2(R), 300.0, 300.0, &DEFAULT_ROW);
    for (t, want) in [
        (0.01, 0.61954),
        (0.1, 5.25121),
        (0.2, 9.23991),
        (0.5, 18.14807),
        (0.9, 26.98182),
    ] {
        assert_close(pr.price(t).unwrap().price, want, 2e-5, &format!("T={t}"));
    }
}

#[test]
fn otm_call_set2() {
    let pr = call(&set2(R), 10.0, 11.0, &[15, 15, 15, 15, 15, 20, 20, 30]);
    for (t, want) in [
        (0.01, 0.00128),
        (0.1, 0.01532),
        (0.2, 0.03678),
        (0.5, 0.14488),
        (0.9, 0.38460),
    ] {
        assert_close(pr.price(t).unwrap().price, want, 1e-5, &format!("T={t}"));
    }
}

#[test]
fn put_call_parity() {
    for (p, s0, k) in [
        (set1(R), 95.0, 90.0),
        (set1(R), 100.0, 110.0),
        (set2(R), 10.0, 11.0),
        (set2(R), 300.0, 300.0),
    ] {
        let row = TruncationVector::default_for(truncation_len(&p, k / s0));
        let c = Pricer::new(&p, s0, k, R, OptionKind::Call, &row).unwrap();
        let put = Pricer::new(&p, s0, k, R, OptionKind::Put, &row).unwrap();
        for t in [0.05, 0.3, 0.7] {
            let lhs = c.price(t).unwrap().price - put.price(t).unwrap().price;
            assert_close(
                lhs,
                s0 - k * (-R * t).exp(),
                1e-10 * s0,
                &format!("s0={s0}, k={k}, T={t}"),
            );
        }
    }
}

#[test]
fn laplace_transform_matches_exponential_time_law() {
    for p in [set1(R), set2(R)] {
        let q = 5.0;
        let dist = p.exp_time_distribution(q, &numeric_roots_real(&p, q).unwrap()).unwrap();
        for k in [1.1, 1.5] {
            let got = laplace_price(&p, k, C64::new(q, 0.0), None, RootMode::Numeric).unwrap();
            // E[(e^X - k)^+] at an exponential time is q times the transform
            let want = dist.call_payoff(k) / q;
            assert!(
                (got.re - want).abs() < 1e-10 * want && got.im.abs() < 1e-12,
                "k={k}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn greeks_match_finite_differences() {
    let p = set1(R);
    let row = trunc(&DEFAULT_ROW);
    let (s0, k) = (95.0, 90.0);
    let make = |s: f64, kind| {
        Pricer::new(&p, s, k, R, kind, &row)
            .unwrap()
            .with_greeks(&p, &row)
            .unwrap()
    };
    for kind in [OptionKind::Call, OptionKind::Put] {
        let pr = make(s0, kind);
        let h = 1e-2;
        let (up, down) = (make(s0 + h, kind), make(s0 - h, kind));
        for t in [0.1, 0.2, 0.5] {
            let (delta, gamma) = pr.delta_gamma(t).unwrap();
            let (pu, p0, pd) = (
                up.price(t).unwrap().price,
                pr.price(t).unwrap().price,
                down.price(t).unwrap().price,
            );
            assert_close(delta, (pu - pd) / (2.0 * h), 1e-5, &format!("delta {kind:?} T={t}"));
            assert_close(
                gamma,
                (pu - 2.0 * p0 + pd) / (h * h),
                1e-5,
                &format!("gamma {kind:?} T={t}"),
            );
            let dt = 1e-5;
            let fd = (pr.price(t + dt).unwrap().price - pr.price(t - dt).unwrap().price) / (2.0 * dt);
            assert_close(pr.theta(t).unwrap(), fd, 1e-5, &format!("theta {kind:?} T={t}"));
        }
    }
}

#[test]
fn theta_jumps_at_the_kink() {
    let p = set2(R);
    let (s0, k) = (10.0, 11.0);
    let put = Pricer::new(&p, s0, k, R, OptionKind::Put, &trunc(&[15, 15, 15, 15, 15, 20, 20, 30])).unwrap();
    let (c, jump) = put
        .theta_jump()
        .expect("a pure-jump model with positive drift has a kink");
    assert_close(c, 0.71182, 1e-4, "kink location");
    assert_close(jump, 0.03559, 1e-4, "jump size");

    // the jump from the local expansion around infinity: a K (K/S0)^{(eta_0 - r)/a}
    let eta0 = p.laurent_coeffs(2).eta[0];
    let closed = p.a * k * (k / s0).powf((eta0 - R) / p.a);
    assert_close(jump, closed, 1e-8, "closed form");
    assert_close(c, (k / s0).ln() / p.a, 1e-12, "kink at log-moneyness over drift");

    // one-sided derivatives straddle the kink
    let eps = 1e-3;
    let before = put.theta(c - eps).unwrap();
    let after = put.theta(c + eps).unwrap();
    assert!(
        ((after - before) - jump).abs() < 5e-3 * jump.max(1.0),
        "{before} -> {after}"
    );
    assert!(matches!(put.theta(c), Err(hyperlev::Error::AtKinkPoint { .. })));
}

#[test]
fn zero_maturity_is_intrinsic() {
    for (p, s0, k) in [(set1(R), 95.0, 90.0), (set2(R), 10.0, 11.0), (set2(R), 300.0, 300.0)] {
        let row = TruncationVector::default_for(truncation_len(&p, k / s0));
        for kind in [OptionKind::Call, OptionKind::Put] {
            let pr = Pricer::new(&p, s0, k, R, kind, &row).unwrap();
            let intrinsic = match kind {
                OptionKind::Call => (s0 - k).max(0.0),
                OptionKind::Put => (k - s0).max(0.0),
            };
            assert_close(
                pr.price(0.0).unwrap().price,
                intrinsic,
                1e-12,
                &format!("{kind:?} s0={s0}"),
            );
        }
    }
}

#[test]
fn negative_maturity_is_rejected() {
    let pr = call(&set1(R), 95.0, 90.0, &DEFAULT_ROW);
    assert!(pr.price(-0.1).is_err());
}
