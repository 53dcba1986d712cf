//! Short-maturity expansion of the at-the-money implied volatility.
//!
//! With `r = 0` and `S0 = K = 1` the Black-Scholes ATM price is an odd
//! series `w(s)` in `s = sigma sqrt(T)`. Reverting it and composing with the
//! model's ATM price, a series in `tau = sqrt(T)`, gives `s(tau)`; dividing
//! by `tau` leaves the implied volatility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HyperExpParams;
use crate::pricing::{build_price_expansion, PriceExpansion, Transform, TruncationVector};
use crate::roots::{side_ids, Side};
use crate::series::{Branch, Step, TruncatedSeries};

/// Largest supported expansion order.
pub const MAX_ORDER: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolRegime {
    Gaussian,
    NoGaussian,
}

/// `sigma_hat(T) = sum_i coeffs[i] T^{i/2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImpliedVolExpansion {
    pub regime: VolRegime,
    pub coeffs: Vec<f64>,
    /// Number of terms counted from the leading one.
    pub order: usize,
}

impl ImpliedVolExpansion {
    pub fn eval(&self, t: f64) -> f64 {
        let tau = t.sqrt();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * tau + c)
    }

    /// The expansion cut to its first `n` terms.
    pub fn partial(&self, n: usize) -> Self {
        let len = slots(self.regime, n).min(self.coeffs.len());
        Self {
            regime: self.regime,
            coeffs: self.coeffs[..len].to_vec(),
            order: n.min(self.order),
        }
    }
}

/// Powers of `sqrt(T)` spanned by `n` terms. Without a Gaussian part the
/// price is a series in `T`, so only odd powers of `sqrt(T)` appear.
fn slots(regime: VolRegime, n: usize) -> usize {
    match regime {
        VolRegime::Gaussian => n,
        VolRegime::NoGaussian => 2 * n,
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::IndexOutOfRange {
            index: order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// ATM price `E[(e^{X_T} - 1)^+]` as coefficients of `tau^m`, `tau = sqrt(T)`,
/// through `tau^top`.
fn atm_tau_coeffs(params: &HyperExpParams, top: usize) -> Result<Vec<f64>> {
    let len = side_ids(params, Side::Pos).len();
    let trunc = TruncationVector::uniform(top.max(2), len)?;
    let exp: PriceExpansion = build_price_expansion(params, 1.0, Side::Pos, &trunc, Transform::Price)?;
    let mut coeffs = exp
        .sqrt_time_coeffs()
        .ok_or_else(|| Error::InvalidParams("ATM expansion is not a series in sqrt(T)".into()))?;
    coeffs.resize(top + 1, 0.0);
    Ok(coeffs)
}

/// Black-Scholes ATM price (`r = 0`, `S0 = K = 1`) through `s^order`,
/// `s = sigma sqrt(T)`.
pub fn bs_atm_series(sigma: f64, order: usize) -> Result<TruncatedSeries> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParams(format!("sigma = {sigma} must be positive")));
    }
    let params = HyperExpParams::new(sigma, -0.5 * sigma * sigma, Vec::new(), Vec::new())?;
    let tau = atm_tau_coeffs(&params, order)?;
    let coeffs: Vec<f64> = tau.iter().enumerate().map(|(m, c)| c / sigma.powi(m as i32)).collect();
    Ok(TruncatedSeries::from_real(0, Step::Whole, &coeffs))
}

/// Reversion of [`bs_atm_series`]: `s` as a series in the price `w`, through `w^order`.
pub fn invert_bs_series(order: usize) -> Result<TruncatedSeries> {
    check_order(order)?;
    revert_bs(order)
}

fn revert_bs(order: usize) -> Result<TruncatedSeries> {
    bs_atm_series(1.0, order)?
        .lagrange_invert(Branch::Principal)
        .map(|s| s.truncate(order as i32))
}

/// ATM implied volatility of a risk-neutral model with `r = 0`.
pub fn implied_vol_expansion(params: &HyperExpParams, order: usize) -> Result<ImpliedVolExpansion> {
    check_order(order)?;
    params.check_risk_neutral(0.0, 1e-10)?;
    let regime = if params.sigma > 0.0 {
        VolRegime::Gaussian
    } else {
        VolRegime::NoGaussian
    };
    let top = slots(regime, order);
    let price = TruncatedSeries::from_real(0, Step::Whole, &atm_tau_coeffs(params, top + 1)?);
    let s = TruncatedSeries::compose(&revert_bs(top + 1)?, &price)?;
    let coeffs = (0..top).map(|i| s.coeff_at(i as i32 + 1).re).collect();
    Ok(ImpliedVolExpansion { regime, coeffs, order })
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Black-Scholes call price.
pub fn bs_call(s0: f64, strike: f64, r: f64, t: f64, sigma: f64) -> f64 {
    if t <= 0.0 || sigma <= 0.0 {
        return (s0 - strike * (-r * t).exp()).max(0.0);
    }
    let v = sigma * t.sqrt();
    let d1 = ((s0 / strike).ln() + r * t) / v + 0.5 * v;
    s0 * norm_cdf(d1) - strike * (-r * t).exp() * norm_cdf(d1 - v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bs_series_leading_terms() {
        let s = bs_atm_series(0.3, 7).unwrap();
        let r = (2.0 * PI).sqrt();
        let want = [
            0.0,
            1.0 / r,
            0.0,
            -1.0 / (24.0 * r),
            0.0,
            1.0 / (640.0 * r),
            0.0,
            -1.0 / (21504.0 * r),
        ];
        for (i, w) in want.iter().enumerate() {
            let got = s.coeff_at(i as i32).re;
            assert!((got - w).abs() < 1e-12 * (1.0 + w.abs()), "s^{i}: {got} vs {w}");
        }
    }

    #[test]
    fn order_is_bounded() {
        assert!(invert_bs_series(0).is_err());
        assert!(invert_bs_series(MAX_ORDER + 1).is_err());
    }
}
