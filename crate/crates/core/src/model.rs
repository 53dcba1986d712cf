//! The hyperexponential Laplace exponent and its local expansions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Step, TruncatedSeries, C64};

/// Distance to a pole below which `psi` refuses to evaluate.
pub const POLE_FLOOR: f64 = 1e-12;

/// Which extra roots exist beyond the outermost poles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `sigma > 0`: one extra root on each side.
    Gaussian,
    /// `sigma = 0, a > 0`: one extra positive root.
    DriftPos,
    /// `sigma = 0, a < 0`: one extra negative root.
    DriftNeg,
    /// `sigma = 0, a = 0`: no extra roots.
    Driftless,
}

/// One exponential jump component: `(weight, rate)`.
pub type Jump = (f64, f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperExpParams {
    pub sigma: f64,
    pub a: f64,
    pub pos_jumps: Vec<Jump>,
    pub neg_jumps: Vec<Jump>,
}

fn check_jumps(side: &str, jumps: &[Jump]) -> Result<()> {
    let mut prev = 0.0;
    for &(w, rho) in jumps {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidParams(format!("{side} weight {w} must be positive")));
        }
        if !(rho > prev && rho.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "{side} rates must be positive and strictly increasing (got {rho} after {prev})"
            )));
        }
        prev = rho;
    }
    Ok(())
}

impl HyperExpParams {
    pub fn new(sigma: f64, a: f64, pos_jumps: Vec<Jump>, neg_jumps: Vec<Jump>) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("sigma = {sigma}")));
        }
        if !a.is_finite() {
            return Err(Error::InvalidParams(format!("a = {a}")));
        }
        check_jumps("positive", &pos_jumps)?;
        check_jumps("negative", &neg_jumps)?;
        Ok(Self {
            sigma,
            a,
            pos_jumps,
            neg_jumps,
        })
    }

    /// Parameters whose drift makes `psi(1) = r`.
    pub fn risk_neutral(sigma: f64, pos_jumps: Vec<Jump>, neg_jumps: Vec<Jump>, r: f64) -> Result<Self> {
        let a = risk_neutral_drift(sigma, &pos_jumps, &neg_jumps, r)?;
        Self::new(sigma, a, pos_jumps, neg_jumps)
    }

    /// Same jumps, different drift.
    pub fn with_drift(&self, a: f64) -> Self {
        Self { a, ..self.clone() }
    }

    pub fn n_pos(&self) -> usize {
        self.pos_jumps.len()
    }

    pub fn n_neg(&self) -> usize {
        self.neg_jumps.len()
    }

    pub fn regime(&self) -> Regime {
        if self.sigma > 0.0 {
            Regime::Gaussian
        } else if self.a > 0.0 {
            Regime::DriftPos
        } else if self.a < 0.0 {
            Regime::DriftNeg
        } else {
            Regime::Driftless
        }
    }

    /// Number of positive and negative roots of `psi(z) = q` for `q > 0`.
    pub fn root_counts(&self) -> (usize, usize) {
        let (n, nh) = (self.n_pos(), self.n_neg());
        match self.regime() {
            Regime::Gaussian => (n + 1, nh + 1),
            Regime::DriftPos => (n + 1, nh),
            Regime::DriftNeg => (n, nh + 1),
            Regime::Driftless => (n, nh),
        }
    }

    /// Poles of `psi` on the real line, ascending.
    pub fn poles(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.neg_jumps.iter().rev().map(|&(_, r)| -r).collect();
        p.extend(self.pos_jumps.iter().map(|&(_, r)| r));
        p
    }

    pub fn total_weight(&self) -> f64 {
        self.pos_jumps.iter().map(|j| j.0).sum::<f64>() + self.neg_jumps.iter().map(|j| j.0).sum::<f64>()
    }

    /// `psi(z)` with a pole-proximity check.
    pub fn psi(&self, z: C64) -> Result<C64> {
        for p in self.poles() {
            let d = (z - p).norm();
            if d < POLE_FLOOR {
                return Err(Error::PoleEvaluation { pole: p, distance: d });
            }
        }
        Ok(self.psi_unchecked(z))
    }

    /// `psi(z)` without the pole check.
    pub fn psi_unchecked(&self, z: C64) -> C64 {
        let s2 = self.sigma * self.sigma;
        let mut acc = z * z * (0.5 * s2) + z * self.a;
        for &(w, rho) in &self.pos_jumps {
            acc += z * w / (rho - z);
        }
        for &(w, rho) in &self.neg_jumps {
            acc -= z * w / (rho + z);
        }
        acc
    }

    pub fn psi_deriv(&self, z: C64) -> C64 {
        let s2 = self.sigma * self.sigma;
        let mut acc = z * s2 + self.a;
        for &(w, rho) in &self.pos_jumps {
            let d = rho - z;
            acc += w * rho / (d * d);
        }
        for &(w, rho) in &self.neg_jumps {
            let d = rho + z;
            acc -= w * rho / (d * d);
        }
        acc
    }

    pub fn psi_real(&self, x: f64) -> f64 {
        self.psi_unchecked(Complex64::new(x, 0.0)).re
    }

    pub fn psi_deriv_real(&self, x: f64) -> f64 {
        self.psi_deriv(Complex64::new(x, 0.0)).re
    }

    /// `psi(1) = r`, checked to `tol`.
    pub fn check_risk_neutral(&self, r: f64, tol: f64) -> Result<()> {
        if let Some(&(_, rho1)) = self.pos_jumps.first() {
            if rho1 <= 1.0 {
                return Err(Error::RhoOneTooSmall(rho1));
            }
        }
        let psi_one = self.psi_real(1.0);
        if (psi_one - r).abs() > tol {
            return Err(Error::NotRiskNeutral { psi_one, rate: r });
        }
        Ok(())
    }

    pub fn laurent_coeffs(&self, order: usize) -> LaurentCoefficientCache {
        LaurentCoefficientCache::new(self, order)
    }

    /// Law of `X` at an independent exponential time of rate `q`.
    pub fn exp_time_distribution(&self, q: f64, roots: &RealRoots) -> Result<ExpTimeDistribution> {
        let atom = if self.regime() == Regime::Driftless {
            q / (q + self.total_weight())
        } else {
            0.0
        };
        let pos: Vec<(f64, f64)> = roots.pos.iter().map(|&z| (q / self.psi_deriv_real(z), z)).collect();
        let neg: Vec<(f64, f64)> = roots.neg.iter().map(|&z| (-q / self.psi_deriv_real(-z), z)).collect();
        let dist = ExpTimeDistribution { atom, pos, neg };
        let mass = dist.total_mass();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(Error::InconsistentRoots(mass));
        }
        Ok(dist)
    }
}

/// Drift `a` solving `psi(1) = r`.
pub fn risk_neutral_drift(sigma: f64, pos_jumps: &[Jump], neg_jumps: &[Jump], r: f64) -> Result<f64> {
    if let Some(&(_, rho1)) = pos_jumps.first() {
        if rho1 <= 1.0 {
            return Err(Error::RhoOneTooSmall(rho1));
        }
    }
    let mut a = r - 0.5 * sigma * sigma;
    for &(w, rho) in pos_jumps {
        a -= w / (rho - 1.0);
    }
    for &(w, rho) in neg_jumps {
        a += w / (rho + 1.0);
    }
    Ok(a)
}

/// Real roots of `psi(z) = q`: `pos` holds `zeta_1 < ... < zeta_M`,
/// `neg` holds the magnitudes `zeta_hat_1 < ...`, located at `-zeta_hat`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoots {
    pub pos: Vec<f64>,
    pub neg: Vec<f64>,
}

impl RealRoots {
    /// All root locations in ascending order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.neg.iter().rev().map(|z| -z).collect();
        v.extend(self.pos.iter().copied());
        v
    }
}

/// Atom at zero plus exponential densities `w e^{-zeta x}` (x > 0) and
/// `w e^{zeta_hat x}` (x < 0); each pair is `(w, rate)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpTimeDistribution {
    pub atom: f64,
    pub pos: Vec<(f64, f64)>,
    pub neg: Vec<(f64, f64)>,
}

impl ExpTimeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.atom + self.pos.iter().map(|(w, z)| w / z).sum::<f64>() + self.neg.iter().map(|(w, z)| w / z).sum::<f64>()
    }

    /// `E[(e^X - k)^+]`; finite when every positive rate exceeds 1.
    pub fn call_payoff(&self, k: f64) -> f64 {
        let lk = k.ln();
        let mut acc = 0.0;
        if lk >= 0.0 {
            for &(w, z) in &self.pos {
                // int_{log k}^inf (e^x - k) w e^{-z x} dx
                acc += w * k.powf(1.0 - z) * (1.0 / (z - 1.0) - 1.0 / z);
            }
        } else {
            for &(w, z) in &self.pos {
                acc += w * (1.0 / (z - 1.0) - k / z);
            }
            for &(w, z) in &self.neg {
                // int_{log k}^0 (e^x - k) w e^{z x} dx
                let up = 1.0 / (z + 1.0) - k / z;
                let low = k.powf(z + 1.0) / (z + 1.0) - k * k.powf(z) / z;
                acc += w * (up - low);
            }
            acc += self.atom * (1.0 - k);
        }
        acc
    }
}

/// Closed-form local coefficients of `psi` around infinity and around each pole.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentCoefficientCache {
    /// `psi(1/z) = sigma^2/2 z^-2 + a z^-1 + sum_n eta[n] z^n`.
    pub eta: Vec<f64>,
    /// `omega[l][n]` for the expansion around `rho_{l+1}`.
    pub omega: Vec<Vec<f64>>,
    /// `omega_hat[l][n]` for the expansion around `-rho_hat_{l+1}`.
    pub omega_hat: Vec<Vec<f64>>,
    /// `sum a_l + sum a_hat_l`, the `q`-free part of the atom constant.
    pub weight_sum: f64,
    pub order: usize,
    sigma: f64,
    a: f64,
    pos_jumps: Vec<Jump>,
    neg_jumps: Vec<Jump>,
}

impl LaurentCoefficientCache {
    pub fn new(params: &HyperExpParams, order: usize) -> Self {
        let pos = &params.pos_jumps;
        let neg = &params.neg_jumps;
        let eta = (0..=order)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let p: f64 = pos.iter().map(|&(w, r)| w * r.powi(n as i32)).sum();
                let m: f64 = neg.iter().map(|&(w, r)| w * r.powi(n as i32)).sum();
                -(p + sign * m)
            })
            .collect();

        let omega = (0..pos.len())
            .map(|l| {
                let rl = pos[l].1;
                (0..=order)
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        if n == 0 {
                            let mut acc = -pos[l].0;
                            for (i, &(w, r)) in pos.iter().enumerate() {
                                if i != l {
                                    acc += w * rl / (r - rl);
                                }
                            }
                            for &(w, r) in neg {
                                acc -= w * rl / (r + rl);
                            }
                            acc
                        } else {
                            let mut acc = 0.0;
                            for (i, &(w, r)) in pos.iter().enumerate() {
                                if i != l {
                                    acc += w * r / (r - rl).powi(n as i32 + 1);
                                }
                            }
                            for &(w, r) in neg {
                                acc += sign * w * r / (r + rl).powi(n as i32 + 1);
                            }
                            acc
                        }
                    })
                    .collect()
            })
            .collect();

        let omega_hat = (0..neg.len())
            .map(|l| {
                let rl = neg[l].1;
                (0..=order)
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        if n == 0 {
                            let mut acc = -neg[l].0;
                            for &(w, r) in pos {
                                acc -= w * rl / (r + rl);
                            }
                            for (i, &(w, r)) in neg.iter().enumerate() {
                                if i != l {
                                    acc += w * rl / (r - rl);
                                }
                            }
                            acc
                        } else {
                            let mut acc = 0.0;
                            for &(w, r) in pos {
                                acc += w * r / (r + rl).powi(n as i32 + 1);
                            }
                            for (i, &(w, r)) in neg.iter().enumerate() {
                                if i != l {
                                    acc += sign * w * r / (r - rl).powi(n as i32 + 1);
                                }
                            }
                            acc
                        }
                    })
                    .collect()
            })
            .collect();

        Self {
            eta,
            omega,
            omega_hat,
            weight_sum: params.total_weight(),
            order,
            sigma: params.sigma,
            a: params.a,
            pos_jumps: pos.clone(),
            neg_jumps: neg.clone(),
        }
    }

    /// The atom constant `1 / (q + sum of weights)`.
    pub fn gamma(&self, q: f64) -> f64 {
        1.0 / (q + self.weight_sum)
    }

    /// `h(z) = psi(1/z)` through `z^order`.
    pub fn h_series(&self) -> TruncatedSeries {
        let mut c = vec![0.5 * self.sigma * self.sigma, self.a];
        c.extend(self.eta.iter().copied());
        TruncatedSeries::from_real(-2, Step::Whole, &c)
    }

    /// `g(z; l) = psi(rho_l + z)` through `z^order`; `l` is 1-based.
    pub fn g_series(&self, l: usize) -> Result<TruncatedSeries> {
        let max = self.pos_jumps.len();
        if l == 0 || l > max {
            return Err(Error::IndexOutOfRange { index: l, max });
        }
        let (w, rho) = self.pos_jumps[l - 1];
        let om = &self.omega[l - 1];
        Ok(self.local_series(-w * rho, rho, om))
    }

    /// `g_hat(z; l) = psi(-rho_hat_l + z)` through `z^order`; `l` is 1-based.
    pub fn g_hat_series(&self, l: usize) -> Result<TruncatedSeries> {
        let max = self.neg_jumps.len();
        if l == 0 || l > max {
            return Err(Error::IndexOutOfRange { index: l, max });
        }
        let (w, rho) = self.neg_jumps[l - 1];
        let om = &self.omega_hat[l - 1];
        Ok(self.local_series(w * rho, -rho, om))
    }

    fn local_series(&self, residue: f64, center: f64, om: &[f64]) -> TruncatedSeries {
        let s2 = self.sigma * self.sigma;
        let mut c = Vec::with_capacity(om.len() + 1);
        c.push(residue);
        for (n, w) in om.iter().enumerate() {
            let poly = match n {
                0 => 0.5 * s2 * center * center + self.a * center,
                1 => s2 * center + self.a,
                2 => 0.5 * s2,
                _ => 0.0,
            };
            c.push(poly + w);
        }
        TruncatedSeries::from_real(-1, Step::Whole, &c)
    }
}
