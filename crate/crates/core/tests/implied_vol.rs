mod common;

use std::f64::consts::PI;

use common::{set1, set2};
use hyperlev::implied_vol::{bs_atm_series, bs_call, implied_vol_expansion, invert_bs_series, VolRegime};
use hyperlev::pricing::{truncation_len, OptionKind, Pricer, TruncationVector};
use hyperlev::series::TruncatedSeries;
use hyperlev::HyperExpParams;

fn rel_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol * want.abs(),
        "{what}: got {got:e}, want {want:e}"
    );
}

#[test]
fn bs_price_golden_coefficients() {
    let sigma: f64 = 0.37;
    let s = bs_atm_series(sigma, 8).unwrap();
    let r = (2.0 * PI).sqrt();
    // coefficient of T^{m/2} is the coefficient of s^m times sigma^m
    let want = [
        (1, sigma / r),
        (3, -sigma.powi(3) / (24.0 * r)),
        (5, sigma.powi(5) / (640.0 * r)),
        (7, -sigma.powi(7) / (21504.0 * r)),
    ];
    for (m, w) in want {
        rel_close(s.coeff_at(m).re * sigma.powi(m), w, 1e-12, &format!("T^{m}/2"));
    }
    for m in [0, 2, 4, 6, 8] {
        assert!(s.coeff_at(m).norm() < 1e-15, "even power {m}");
    }
}

#[test]
fn inverse_series_golden_coefficients() {
    let inv = invert_bs_series(12).unwrap();
    let s2 = 2f64.sqrt();
    let want = [
        (1, (2.0 * PI).sqrt()),
        (3, PI.powf(1.5) / (6.0 * s2)),
        (5, 7.0 * PI.powf(2.5) / (240.0 * s2)),
        (7, 127.0 * PI.powf(3.5) / (20160.0 * s2)),
        (9, 4369.0 * PI.powf(4.5) / (2903040.0 * s2)),
        (11, 34807.0 * PI.powf(5.5) / (91238400.0 * s2)),
    ];
    for (m, w) in want {
        rel_close(inv.coeff_at(m).re, w, 1e-12, &format!("w^{m}"));
    }
}

#[test]
fn inverse_composes_to_identity() {
    let inv = invert_bs_series(15).unwrap();
    let fwd = bs_atm_series(1.0, 15).unwrap();
    let id = TruncatedSeries::compose(&fwd, &inv).unwrap();
    for e in 0..=15 {
        let want = if e == 1 { 1.0 } else { 0.0 };
        assert!((id.coeff_at(e).re - want).abs() < 1e-12, "w^{e}: {}", id.coeff_at(e));
    }
}

/// Coefficients of the ATM price in powers of `sqrt(T)` for `b_1, b_2, b_3`.
fn gaussian_price_terms(p: &HyperExpParams) -> (f64, f64, f64) {
    let (s, a) = (p.sigma, p.a);
    let eta0 = p.laurent_coeffs(2).eta[0];
    let r = (2.0 * PI).sqrt();
    let jumps: f64 = p.pos_jumps.iter().map(|(w, rho)| w / (rho - 1.0)).sum();
    let b1 = s / r;
    let b2 = (2.0 * a + s * s) / 4.0 + jumps;
    let b3 = (3.0 * a * a + 6.0 * a * s * s + 6.0 * eta0 * s * s + 2.0 * s.powi(4)) / (6.0 * r * s);
    (b1, b2, b3)
}

#[test]
fn gaussian_expansion_leading_terms() {
    let p = set1(0.0);
    let e = implied_vol_expansion(&p, 6).unwrap();
    assert_eq!(e.regime, VolRegime::Gaussian);
    let (b1, b2, b3) = gaussian_price_terms(&p);
    let r = (2.0 * PI).sqrt();
    rel_close(e.coeffs[0], p.sigma, 1e-12, "constant term");
    rel_close(e.coeffs[1], r * b2, 1e-10, "sqrt(T) term");
    let third = PI.powf(1.5) * b1.powi(3) / (6.0 * 2f64.sqrt()) + r * b3;
    rel_close(e.coeffs[2], third, 1e-9, "T term");
}

#[test]
fn pure_jump_leading_term() {
    let p = set2(0.0);
    let e = implied_vol_expansion(&p, 4).unwrap();
    assert_eq!(e.regime, VolRegime::NoGaussian);
    let up: f64 = p.pos_jumps.iter().map(|(w, rho)| w / (rho - 1.0)).sum();
    let down: f64 = p.neg_jumps.iter().map(|(w, rho)| w / (rho + 1.0)).sum();
    let want = (2.0 * PI).sqrt() * up.max(down);
    assert_eq!(e.coeffs[0], 0.0);
    rel_close(e.coeffs[1], want, 1e-12, "T^{1/2} term");
    // only odd powers of sqrt(T)
    for (i, c) in e.coeffs.iter().enumerate().filter(|(i, _)| i % 2 == 0) {
        assert!(c.abs() < 1e-12, "slot {i}: {c}");
    }
}

fn roundtrip_errors(p: &HyperExpParams, orders: &[usize], ts: &[f64]) -> Vec<f64> {
    let full = implied_vol_expansion(p, *orders.iter().max().unwrap()).unwrap();
    let trunc = TruncationVector::default_for(truncation_len(p, 1.0));
    let model = Pricer::new(p, 1.0, 1.0, 0.0, OptionKind::Call, &trunc).unwrap();
    orders
        .iter()
        .map(|&n| {
            let e = full.partial(n);
            ts.iter()
                .map(|&t| (bs_call(1.0, 1.0, 0.0, t, e.eval(t)) - model.price(t).unwrap().price).abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

#[test]
fn more_terms_fit_better() {
    let ts: Vec<f64> = (1..=20).map(|i| i as f64 * 5e-4).collect();
    for p in [set1(0.0), set2(0.0)] {
        let errs = roundtrip_errors(&p, &[1, 2, 5, 10], &ts);
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "{errs:?}");
        }
        assert!(errs[3] < 1e-8, "{errs:?}");
    }
}

#[test]
fn requires_zero_rate_risk_neutrality() {
    assert!(implied_vol_expansion(&set1(0.03), 3).is_err());
}
