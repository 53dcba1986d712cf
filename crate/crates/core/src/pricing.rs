//! European option prices and Greeks as time-domain series.
//!
//! Every root on the relevant side of the origin contributes a product
//! series in `1/q` (or `q^{-1/2}`), possibly times `exp(-c q^{1/2})` or
//! `exp(-c q)`. Termwise inversion turns these into powers `T^n/n!`, the
//! kernels `phi_n(T; c)` or shifted powers `(T - c)^n/n!` switched on at
//! `T = c`. Out-of-the-money calls use the positive roots, out-of-the-money
//! puts the negative ones, and in-the-money options go through parity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{HyperExpParams, Regime};
use crate::roots::{
    expand_root, roots_at, side_ids, DerivedKind, Prefactor, RootExpansion, RootId, RootKind, RootMode, Side,
};
use crate::series::{Step, TruncatedSeries, C64};
use crate::special::phi_all;

/// `|k - 1|` below which the at-the-money formula is used.
pub const ATM_TOL: f64 = 1e-12;
/// Last-term magnitude, relative to the price, that triggers a warning.
pub const TAIL_TOL: f64 = 1e-7;
/// Distance from the kink inside which theta is reported one-sided.
pub const KINK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub s0: f64,
    pub strike: f64,
    pub rate: f64,
    pub maturity: f64,
    pub kind: OptionKind,
}

impl OptionSpec {
    pub fn new(s0: f64, strike: f64, rate: f64, maturity: f64, kind: OptionKind) -> Result<Self> {
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(Error::InvalidParams(format!("spot {s0} must be positive")));
        }
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(Error::InvalidParams(format!("strike {strike} must be positive")));
        }
        if !rate.is_finite() {
            return Err(Error::InvalidParams(format!("rate {rate}")));
        }
        if !(maturity >= 0.0 && maturity.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "maturity {maturity} must be non-negative"
            )));
        }
        Ok(Self {
            s0,
            strike,
            rate,
            maturity,
            kind,
        })
    }

    /// `k = K / S0`.
    pub fn moneyness(&self) -> f64 {
        self.strike / self.s0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moneyness {
    /// `k < 1`.
    Below,
    /// `|k - 1| < ATM_TOL`.
    At,
    /// `k > 1`.
    Above,
}

pub fn classify(k: f64) -> Moneyness {
    if (k - 1.0).abs() < ATM_TOL {
        Moneyness::At
    } else if k > 1.0 {
        Moneyness::Above
    } else {
        Moneyness::Below
    }
}

/// Per-root truncation orders, far root last. A near root with entry `M`
/// keeps the terms `T^n/n!` for `n <= M + 1`; the far root keeps kernel
/// indices `n <= M`. This is the convention under which the published
/// price tables are reproduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationVector(Vec<usize>);

impl TruncationVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.iter().any(|&m| m < 2) {
            return Err(Error::TruncationTooSmall);
        }
        Ok(Self(entries))
    }

    pub fn uniform(m: usize, len: usize) -> Result<Self> {
        Self::new(vec![m; len])
    }

    /// `(15, ..., 15, 30, 30, 60)` shaped default for `len` roots.
    pub fn default_for(len: usize) -> Self {
        let mut v = vec![15; len];
        for (slot, m) in v.iter_mut().rev().zip([60, 30, 30]) {
            *slot = m;
        }
        Self(v)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Time-domain image of one series term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    /// `q^{-(n+1)}` maps to `T^n / n!`.
    Power,
    /// `exp(-c q^{1/2}) q^{-(n+2)/2}` maps to `phi_n(T; c)`.
    Phi(f64),
    /// `exp(-c q) q^{-(n+1)}` maps to `(T - c)^n / n!` for `T >= c`.
    Shifted(f64),
}

impl Kernel {
    /// Grid exponent minus time index.
    fn lag(self) -> i32 {
        match self {
            Kernel::Phi(_) => 2,
            _ => 1,
        }
    }

    fn lowest_index(self) -> i32 {
        match self {
            Kernel::Phi(_) => -1,
            _ => 0,
        }
    }

    pub fn shift(self) -> f64 {
        match self {
            Kernel::Power => 0.0,
            Kernel::Phi(c) | Kernel::Shifted(c) => c,
        }
    }

    /// Values of the kernel for time indices `first..first + len`.
    pub fn values(self, first: i32, len: usize, t: f64) -> Result<Vec<f64>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        let last = first + len as i32 - 1;
        let idx = first..=last;
        match self {
            Kernel::Power => Ok(idx.map(|n| scaled_power(t, n)).collect()),
            Kernel::Shifted(c) => Ok(idx.map(|n| if t >= c { scaled_power(t - c, n) } else { 0.0 }).collect()),
            Kernel::Phi(c) => {
                if t == 0.0 {
                    return idx
                        .map(|n| match n {
                            n if n >= 1 => Ok(0.0),
                            0 => Ok(if c == 0.0 { 1.0 } else { 0.0 }),
                            _ if c > 0.0 => Ok(0.0),
                            _ => Err(Error::DomainError(t)),
                        })
                        .collect();
                }
                let all = phi_all(last.max(0), C64::new(t, 0.0), c)?;
                Ok(idx.map(|n| all[(n + 1) as usize].re).collect())
            }
        }
    }

    /// `d/dT` of the kernel for time indices `first..first + len`.
    pub fn derivatives(self, first: i32, len: usize, t: f64) -> Result<Vec<f64>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        match self {
            Kernel::Power | Kernel::Shifted(_) => {
                let lower = self.values(first - 1, len, t)?;
                Ok(lower
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| if first + (i as i32) < 1 { 0.0 } else { v })
                    .collect())
            }
            Kernel::Phi(c) => {
                if first < 0 {
                    return Err(Error::DomainError(first as f64));
                }
                if !(t > 0.0) {
                    return Err(Error::DomainError(t));
                }
                // phi_n' = phi_{n-2}; phi_0' = c e^{-c^2/4t} / (2 sqrt(pi) t^{3/2})
                let last = first + len as i32 - 1;
                let all = phi_all((last - 2).max(-1), C64::new(t, 0.0), c)?;
                Ok((first..=last)
                    .map(|n| {
                        if n >= 1 {
                            all[(n - 1) as usize].re
                        } else {
                            c * (-c * c / (4.0 * t)).exp() / (2.0 * std::f64::consts::PI.sqrt() * t.powf(1.5))
                        }
                    })
                    .collect())
            }
        }
    }
}

/// `x^n / n!` with `x^0 = 1` and zero for negative `n`.
fn scaled_power(x: f64, n: i32) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 1..=n {
        v *= x / i as f64;
    }
    v
}

/// Which product of root series is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    /// `zeta' k^{-zeta} / (zeta (zeta - 1))`, the price.
    Price,
    /// `zeta' k^{-zeta} / zeta`, the first strike derivative.
    Slope,
    /// `zeta' k^{-zeta}`, the second strike derivative.
    Curvature,
}

/// One root's truncated time series: `coeffs[i]` multiplies the kernel with
/// time index `first + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constituent {
    pub id: RootId,
    pub kernel: Kernel,
    pub first: i32,
    pub coeffs: Vec<f64>,
}

impl Constituent {
    /// Individual terms at `T`.
    pub fn terms(&self, t: f64) -> Result<Vec<f64>> {
        let k = self.kernel.values(self.first, self.coeffs.len(), t)?;
        Ok(self.coeffs.iter().zip(k).map(|(c, v)| c * v).collect())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.terms(t)?.iter().sum())
    }

    /// Magnitude of the last kept term at `T`.
    pub fn tail(&self, t: f64) -> Result<f64> {
        Ok(self.terms(t)?.last().map_or(0.0, |v| v.abs()))
    }
}

/// Summed time-domain series for one side, one moneyness and one transform.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceExpansion {
    pub regime: Regime,
    pub side: Side,
    pub transform: Transform,
    pub k: f64,
    /// Coefficients of `T^n / n!`, from `n = 0`.
    pub smooth_coeffs: Vec<f64>,
    /// Kernel of the far root when it does not reduce to powers of `T`.
    pub kernel: Kernel,
    pub kernel_first: i32,
    pub kernel_coeffs: Vec<f64>,
    pub constituents: Vec<Constituent>,
}

impl PriceExpansion {
    pub fn shift(&self) -> f64 {
        self.kernel.shift()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let smooth = Kernel::Power.values(0, self.smooth_coeffs.len(), t)?;
        let kern = self.kernel.values(self.kernel_first, self.kernel_coeffs.len(), t)?;
        Ok(dot(&self.smooth_coeffs, &smooth) + dot(&self.kernel_coeffs, &kern))
    }

    /// Termwise `d/dT`; at the kink of a shifted kernel the right-hand value.
    pub fn eval_deriv(&self, t: f64) -> Result<f64> {
        let smooth = Kernel::Power.derivatives(0, self.smooth_coeffs.len(), t)?;
        let kern = self
            .kernel
            .derivatives(self.kernel_first, self.kernel_coeffs.len(), t)?;
        Ok(dot(&self.smooth_coeffs, &smooth) + dot(&self.kernel_coeffs, &kern))
    }

    /// Last-term magnitudes of every constituent at `T`.
    pub fn tails(&self, t: f64) -> Result<Vec<f64>> {
        self.constituents.iter().map(|c| c.tail(t)).collect()
    }

    /// Kink location and jump of `d/dT` for a shifted kernel.
    pub fn kink(&self) -> Option<(f64, f64)> {
        match self.kernel {
            Kernel::Shifted(c) => {
                let i = 1 - self.kernel_first;
                let jump = if i >= 0 {
                    self.kernel_coeffs.get(i as usize).copied().unwrap_or(0.0)
                } else {
                    0.0
                };
                Some((c, jump))
            }
            _ => None,
        }
    }

    /// Coefficients of `tau^m`, `tau = T^{1/2}`, when no kernel is shifted.
    pub fn sqrt_time_coeffs(&self) -> Option<Vec<f64>> {
        let mut out = vec![0.0; 2 * self.smooth_coeffs.len()];
        for (n, c) in self.smooth_coeffs.iter().enumerate() {
            out[2 * n] += c / factorial(n as i32);
        }
        match self.kernel {
            Kernel::Power => {}
            Kernel::Shifted(0.0) => {
                for (i, v) in self.kernel_coeffs.iter().enumerate() {
                    let n = (self.kernel_first + i as i32) as usize;
                    if out.len() <= 2 * n {
                        out.resize(2 * n + 1, 0.0);
                    }
                    out[2 * n] += v / factorial(n as i32);
                }
            }
            Kernel::Phi(0.0) => {
                for (i, v) in self.kernel_coeffs.iter().enumerate() {
                    let n = self.kernel_first + i as i32;
                    if n < 0 {
                        if *v != 0.0 {
                            return None;
                        }
                        continue;
                    }
                    let m = n as usize;
                    if out.len() <= m {
                        out.resize(m + 1, 0.0);
                    }
                    // phi_n(T; 0) = T^{n/2} / Gamma(n/2 + 1)
                    out[m] += v / libm::tgamma(n as f64 / 2.0 + 1.0);
                }
            }
            _ => return None,
        }
        Some(out)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Product series of one root for `transform`, with its exponential factor.
pub fn root_product(
    params: &HyperExpParams,
    exp: &RootExpansion,
    k: f64,
    transform: Transform,
) -> Result<(TruncatedSeries, Prefactor)> {
    let deriv = exp.derive(params, DerivedKind::Deriv)?;
    let power = exp.derive(params, DerivedKind::Power(k))?;
    let mut s = deriv.series.mul(&power.series);
    if matches!(transform, Transform::Price | Transform::Slope) {
        s = s.mul(&exp.derive(params, DerivedKind::Inv)?.series);
    }
    if transform == Transform::Price {
        s = s.mul(&exp.derive(params, DerivedKind::InvShift)?.series);
    }
    Ok((s, power.prefactor))
}

fn kernel_for(step: Step, prefactor: Prefactor) -> Kernel {
    match (step, prefactor) {
        (Step::Half, p) => Kernel::Phi(p.shift()),
        (Step::Whole, Prefactor::None) => Kernel::Power,
        (Step::Whole, p) => Kernel::Shifted(p.shift()),
    }
}

/// Builds the time series of one root, keeping time indices up to `m`.
pub fn build_constituent(
    params: &HyperExpParams,
    id: RootId,
    k: f64,
    transform: Transform,
    m: usize,
) -> Result<Constituent> {
    let far_gaussian = id.kind == RootKind::Far && params.regime() == Regime::Gaussian;
    let mut order = if far_gaussian { m / 2 + 4 } else { m + 3 };
    for _ in 0..8 {
        let exp = expand_root(params, id, order)?;
        let (series, prefactor) = root_product(params, &exp, k, transform)?;
        let kernel = kernel_for(series.step(), prefactor);
        let lag = kernel.lag();
        let need = m as i32 + lag;
        if series.top_exp() < need {
            order += order / 2 + 2;
            continue;
        }
        let lowest = kernel.lowest_index();
        for j in series.base_exp()..lowest + lag {
            if series.coeff_at(j).norm() > 1e-14 {
                return Err(Error::InvalidParams(format!(
                    "{transform:?} transform of {} has a singular term at q^{}",
                    id.label(params),
                    -(j as f64) / series.step().slots() as f64
                )));
            }
        }
        let first = (series.base_exp() - lag).max(lowest);
        let coeffs = (first..=m as i32).map(|n| series.coeff_at(n + lag).re).collect();
        return Ok(Constituent {
            id,
            kernel,
            first,
            coeffs,
        });
    }
    Err(Error::InvalidParams(format!(
        "could not reach order {m} for {}",
        id.label(params)
    )))
}

/// Sums the constituents of `side` into one expansion.
pub fn build_price_expansion(
    params: &HyperExpParams,
    k: f64,
    side: Side,
    trunc: &TruncationVector,
    transform: Transform,
) -> Result<PriceExpansion> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParams(format!("moneyness {k} must be positive")));
    }
    match (side, classify(k)) {
        (Side::Pos, Moneyness::Below) => return Err(Error::RegimeMismatch(format!("call side with k = {k} < 1"))),
        (Side::Neg, Moneyness::Above) => return Err(Error::RegimeMismatch(format!("put side with k = {k} > 1"))),
        _ => {}
    }
    let k_eff = if classify(k) == Moneyness::At { 1.0 } else { k };
    let ids = side_ids(params, side);
    if ids.len() != trunc.len() {
        return Err(Error::TruncationLength {
            expected: ids.len(),
            got: trunc.len(),
        });
    }
    let constituents = ids
        .iter()
        .zip(trunc.entries())
        .map(|(id, &m)| {
            let top = match id.kind {
                RootKind::Near(_) => m + 1,
                RootKind::Far => m,
            };
            build_constituent(params, *id, k_eff, transform, top)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut smooth: Vec<f64> = Vec::new();
    let mut kernel = Kernel::Power;
    let mut kernel_first = 0;
    let mut kernel_coeffs = Vec::new();
    for c in &constituents {
        if c.kernel == Kernel::Power {
            let top = (c.first + c.coeffs.len() as i32) as usize;
            if smooth.len() < top {
                smooth.resize(top, 0.0);
            }
            for (i, v) in c.coeffs.iter().enumerate() {
                smooth[c.first as usize + i] += v;
            }
        } else {
            kernel = c.kernel;
            kernel_first = c.first;
            kernel_coeffs = c.coeffs.clone();
        }
    }
    Ok(PriceExpansion {
        regime: params.regime(),
        side,
        transform,
        k: k_eff,
        smooth_coeffs: smooth,
        kernel,
        kernel_first,
        kernel_coeffs,
        constituents,
    })
}

/// Laplace transform in `T` of `E[(e^{X_T} - k)^+]` (for `k >= 1`) or of
/// `E[(k - e^{X_T})^+]` (for `k < 1`), from the roots at `q`.
pub fn laplace_price(
    params: &HyperExpParams,
    k: f64,
    q: C64,
    expansions: Option<&[RootExpansion]>,
    mode: RootMode,
) -> Result<C64> {
    if !(q.re > 0.0) {
        return Err(Error::DomainError(q.re));
    }
    let roots = roots_at(params, q, expansions, mode)?;
    let ids = crate::roots::root_ids(params);
    let lk = k.ln();
    let call_side = classify(k) != Moneyness::Below;
    let mut acc = C64::new(0.0, 0.0);
    for (id, z) in ids.iter().zip(roots) {
        let dz = C64::new(1.0, 0.0) / params.psi_deriv(z);
        let weight = (-z * lk).exp();
        match (id.side, call_side) {
            (Side::Pos, true) => acc += dz * weight / (z * (z - 1.0)),
            (Side::Neg, false) => {
                // zeta_hat = -z, zeta_hat' = -dz
                let zh = -z;
                acc += -dz * weight / (zh * (zh + 1.0));
            }
            _ => {}
        }
    }
    Ok(acc * k)
}

/// A price with per-root convergence diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceResult {
    pub price: f64,
    /// Last-term magnitudes of each root's series, in price units.
    pub tails: Vec<f64>,
    pub warnings: Vec<Error>,
}

/// Expansions for one option, evaluated at any maturity.
#[derive(Clone, Debug)]
pub struct Pricer {
    pub s0: f64,
    pub strike: f64,
    pub rate: f64,
    pub kind: OptionKind,
    pub expansion: PriceExpansion,
    greeks: Option<(PriceExpansion, PriceExpansion)>,
}

impl Pricer {
    pub fn new(
        params: &HyperExpParams,
        s0: f64,
        strike: f64,
        rate: f64,
        kind: OptionKind,
        trunc: &TruncationVector,
    ) -> Result<Self> {
        OptionSpec::new(s0, strike, rate, 0.0, kind)?;
        let k = strike / s0;
        let side = Self::side_for(k);
        let expansion = build_price_expansion(params, k, side, trunc, Transform::Price)?;
        Ok(Self {
            s0,
            strike,
            rate,
            kind,
            expansion,
            greeks: None,
        })
    }

    /// Also builds the strike-derivative series needed by delta and gamma.
    pub fn with_greeks(mut self, params: &HyperExpParams, trunc: &TruncationVector) -> Result<Self> {
        if params.sigma <= 0.0 {
            return Err(Error::GaussianRequired);
        }
        let k = self.strike / self.s0;
        let side = Self::side_for(k);
        let slope = build_price_expansion(params, k, side, trunc, Transform::Slope)?;
        let curv = build_price_expansion(params, k, side, trunc, Transform::Curvature)?;
        self.greeks = Some((slope, curv));
        Ok(self)
    }

    fn side_for(k: f64) -> Side {
        match classify(k) {
            Moneyness::Below => Side::Neg,
            _ => Side::Pos,
        }
    }

    pub fn moneyness(&self) -> f64 {
        self.strike / self.s0
    }

    /// Parity correction added to the out-of-the-money value.
    fn parity(&self, t: f64) -> f64 {
        let fwd = self.s0 - self.strike * (-self.rate * t).exp();
        match (self.kind, self.expansion.side) {
            (OptionKind::Call, Side::Neg) => fwd,
            (OptionKind::Put, Side::Pos) => -fwd,
            _ => 0.0,
        }
    }

    fn parity_deriv(&self, t: f64) -> f64 {
        let d = self.rate * self.strike * (-self.rate * t).exp();
        match (self.kind, self.expansion.side) {
            (OptionKind::Call, Side::Neg) => d,
            (OptionKind::Put, Side::Pos) => -d,
            _ => 0.0,
        }
    }

    pub fn price(&self, t: f64) -> Result<PriceResult> {
        if !(t >= 0.0) {
            return Err(Error::DomainError(t));
        }
        let scale = (-self.rate * t).exp() * self.strike;
        let otm = scale * self.expansion.eval(t)?;
        let price = otm + self.parity(t);
        let tails: Vec<f64> = self.expansion.tails(t)?.into_iter().map(|v| v * scale).collect();
        let warnings = tails
            .iter()
            .enumerate()
            .filter(|(_, &tail)| tail > TAIL_TOL * price.abs().max(f64::MIN_POSITIVE))
            .map(|(i, &tail)| Error::ConvergenceWarning {
                constituent: i + 1,
                tail,
                price,
            })
            .collect();
        Ok(PriceResult { price, tails, warnings })
    }

    /// `dPrice/dT`; [`Error::AtKinkPoint`] within [`KINK_TOL`] of a kink.
    pub fn theta(&self, t: f64) -> Result<f64> {
        if let Some((c, jump)) = self.expansion.kink() {
            if (t - c).abs() < KINK_TOL {
                let right = self.theta_unchecked(c)?;
                let left = right - (-self.rate * c).exp() * self.strike * jump;
                return Err(Error::AtKinkPoint { c, left, right });
            }
        }
        self.theta_unchecked(t)
    }

    fn theta_unchecked(&self, t: f64) -> Result<f64> {
        let e = (-self.rate * t).exp() * self.strike;
        let h = self.expansion.eval(t)?;
        let dh = self.expansion.eval_deriv(t)?;
        Ok(e * (dh - self.rate * h) + self.parity_deriv(t))
    }

    /// Location and size of the jump in theta, if the price has a kink.
    pub fn theta_jump(&self) -> Option<(f64, f64)> {
        let (c, jump) = self.expansion.kink()?;
        Some((c, (-self.rate * c).exp() * self.strike * jump))
    }

    /// `(dPrice/dS0, d^2 Price/dS0^2)`; needs [`Pricer::with_greeks`].
    pub fn delta_gamma(&self, t: f64) -> Result<(f64, f64)> {
        let (slope, curv) = self.greeks.as_ref().ok_or(Error::GaussianRequired)?;
        let k = self.expansion.k;
        let growth = (self.rate * t).exp();
        let h = self.expansion.eval(t)?;
        let hs = slope.eval(t)?;
        let hc = curv.eval(t)?;
        // f(T, k) = E[(e^{X_T} - k)^+] and its strike derivatives
        let (f, fk) = match self.expansion.side {
            Side::Pos => (k * h, -hs),
            Side::Neg => (k * h + growth - k, hs - 1.0),
        };
        let fkk = hc / k;
        let disc = 1.0 / growth;
        let call_delta = disc * (f - k * fk);
        let gamma = disc * k * k * fkk / self.s0;
        let delta = match self.kind {
            OptionKind::Call => call_delta,
            OptionKind::Put => call_delta - 1.0,
        };
        Ok((delta, gamma))
    }
}

/// Price of `spec` with truncation `trunc`.
pub fn price(spec: &OptionSpec, params: &HyperExpParams, trunc: &TruncationVector) -> Result<PriceResult> {
    Pricer::new(params, spec.s0, spec.strike, spec.rate, spec.kind, trunc)?.price(spec.maturity)
}

/// Theta of `spec`.
pub fn theta(spec: &OptionSpec, params: &HyperExpParams, trunc: &TruncationVector) -> Result<f64> {
    Pricer::new(params, spec.s0, spec.strike, spec.rate, spec.kind, trunc)?.theta(spec.maturity)
}

/// Delta and gamma of `spec`; needs `sigma > 0`.
pub fn delta_gamma(spec: &OptionSpec, params: &HyperExpParams, trunc: &TruncationVector) -> Result<(f64, f64)> {
    Pricer::new(params, spec.s0, spec.strike, spec.rate, spec.kind, trunc)?
        .with_greeks(params, trunc)?
        .delta_gamma(spec.maturity)
}

/// Truncation vector length for options of moneyness `k`.
pub fn truncation_len(params: &HyperExpParams, k: f64) -> usize {
    let side = match classify(k) {
        Moneyness::Below => Side::Neg,
        _ => Side::Pos,
    };
    side_ids(params, side).len()
}
