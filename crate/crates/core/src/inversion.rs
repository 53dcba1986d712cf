//! Numerical transform inversion, used as an oracle for the series.
//!
//! Filon quadrature of `int_0^U e^{itu} g(u) du`, a Fourier pricer in the
//! log-strike, and the up-and-out digital option priced by Bromwich
//! inversion with roots from contour tracking or from the expansions.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HyperExpParams;
use crate::roots::{expand_root, side_ids, ContourTracker, RootExpansion, RootMode, Side};
use crate::series::C64;

/// Below this `theta = t h` the Filon weights use their Taylor series.
pub const FILON_TAYLOR: f64 = 1e-2;

/// Grid for `int_0^upper e^{itu} g(u) du` plus the Bromwich abscissa.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub c: f64,
    pub upper: f64,
    /// Number of subintervals; must be even.
    pub steps: usize,
}

impl QuadratureSpec {
    pub fn new(c: f64, upper: f64, steps: usize) -> Result<Self> {
        let spec = Self { c, upper, steps };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 || !self.steps.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "steps = {} must be even and positive",
                self.steps
            )));
        }
        if !(self.upper > 0.0 && self.upper.is_finite()) {
            return Err(Error::InvalidParams(format!("upper = {} must be positive", self.upper)));
        }
        Ok(())
    }
}

/// Filon weights `(alpha, beta, gamma)` at `theta = t h`.
pub fn filon_weights(theta: f64) -> (f64, f64, f64) {
    if theta.abs() < FILON_TAYLOR {
        let t2 = theta * theta;
        let alpha = theta * t2 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * 2.0 / 4725.0));
        let beta = 2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * 2.0 / 567.0));
        let gamma = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 / 11340.0));
        return (alpha, beta, gamma);
    }
    let (s, c) = theta.sin_cos();
    let t3 = theta * theta * theta;
    let alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
    let beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
    let gamma = 4.0 * (s - theta * c) / t3;
    (alpha, beta, gamma)
}

/// Filon quadrature of `int_0^upper e^{itu} g(u) du` with `steps` equal
/// subintervals; `g` is sampled once per node, in increasing `u`.
pub fn filon_integrate_with<G>(mut g: G, t: f64, upper: f64, steps: usize) -> Result<C64>
where
    G: FnMut(f64) -> Result<C64>,
{
    if steps == 0 || !steps.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "steps = {steps} must be even and positive"
        )));
    }
    let h = upper / steps as f64;
    let (alpha, beta, gamma) = filon_weights(t * h);
    let i = C64::new(0.0, 1.0);
    let mut even = C64::new(0.0, 0.0);
    let mut odd = C64::new(0.0, 0.0);
    // blocked accumulation keeps the summation order fixed and the error small
    let mut block_even = C64::new(0.0, 0.0);
    let mut block_odd = C64::new(0.0, 0.0);
    let mut first = C64::new(0.0, 0.0);
    let mut last = C64::new(0.0, 0.0);
    for j in 0..=steps {
        let u = j as f64 * h;
        let v = g(u)? * C64::new(0.0, t * u).exp();
        if j == 0 {
            first = v;
        }
        if j == steps {
            last = v;
        }
        if j % 2 == 0 {
            block_even += v;
        } else {
            block_odd += v;
        }
        if j % 1024 == 1023 {
            even += block_even;
            odd += block_odd;
            block_even = C64::new(0.0, 0.0);
            block_odd = C64::new(0.0, 0.0);
        }
    }
    even += block_even;
    odd += block_odd;
    even -= (first + last) * 0.5;
    Ok((i * (first - last) * alpha + even * beta + odd * gamma) * h)
}

/// [`filon_integrate_with`] for an infallible integrand.
pub fn filon_integrate<G: Fn(f64) -> C64>(g: G, t: f64, upper: f64, steps: usize) -> Result<C64> {
    filon_integrate_with(|u| Ok(g(u)), t, upper, steps)
}

/// Allowed Fourier abscissae `(1 - rho_1, 0)`.
pub fn fourier_strip(params: &HyperExpParams) -> (f64, f64) {
    let lo = params.pos_jumps.first().map_or(f64::NEG_INFINITY, |&(_, r)| 1.0 - r);
    (lo, 0.0)
}

/// Midpoint of the strip, but no further left than `-2`.
///
/// Keeping `c` away from both the pole at `z = 0` and the strip edge matters
/// at `h = 0.25`: with `c = -1` the rule is off by about `1e-6 S0`.
pub fn default_fourier_c(params: &HyperExpParams) -> f64 {
    let (lo, _) = fourier_strip(params);
    (0.5 * lo).max(-2.0)
}

/// Fourier settings: upper limit `1e5` and `4e5` steps.
pub fn default_fourier_spec(params: &HyperExpParams) -> QuadratureSpec {
    QuadratureSpec {
        c: default_fourier_c(params),
        upper: 1e5,
        steps: 400_000,
    }
}

/// European call by inversion in the log-strike.
///
/// With `k = K/S0` and `z = c + iu`,
/// `C = e^{-rT} S0 k^c / pi * Re int_0^inf e^{iu log k} e^{T psi(1-z)} / (z (z-1)) du`.
pub fn fourier_call_price(
    params: &HyperExpParams,
    s0: f64,
    strike: f64,
    r: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    let (lo, hi) = fourier_strip(params);
    if !(spec.c > lo && spec.c < hi) {
        return Err(Error::ContourOutOfStrip { c: spec.c, lo, hi });
    }
    if t == 0.0 {
        return Ok((s0 - strike).max(0.0));
    }
    let k = strike / s0;
    let g = |u: f64| {
        let z = C64::new(spec.c, u);
        (params.psi_unchecked(C64::new(1.0, 0.0) - z) * t).exp() / (z * (z - 1.0))
    };
    let integral = filon_integrate(g, k.ln(), spec.upper, spec.steps)?;
    Ok((-r * t).exp() * s0 * k.powf(spec.c) / PI * integral.re)
}

/// Settings of the digital barrier pricer beyond the quadrature grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierOptions {
    /// Hybrid mode uses the expansions for `u` above this value.
    pub switch_u: f64,
    /// Expansion order (terms through `q^{-order}`) in hybrid mode.
    pub order: usize,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            switch_u: 80.0,
            order: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DigitalResult {
    pub price: f64,
    /// Time spent producing roots.
    pub root_time: Duration,
    pub total_time: Duration,
}

/// `(1 - sum_l beta_l k^{-zeta_l}) / q` from the positive roots at `q`.
pub fn barrier_transform(params: &HyperExpParams, k: f64, q: C64, roots: &[C64]) -> C64 {
    let one = C64::new(1.0, 0.0);
    let lk = k.ln();
    let mut acc = C64::new(0.0, 0.0);
    for (l, &z) in roots.iter().enumerate() {
        let mut num = one;
        for &(_, rho) in &params.pos_jumps {
            num *= one - z / rho;
        }
        let mut den = one;
        for (j, &w) in roots.iter().enumerate() {
            if j != l {
                den *= one - z / w;
            }
        }
        acc += num / den * (-z * lk).exp();
    }
    (one - acc) / q
}

/// Up-and-out digital paying 1 at `t` if `S` stays below `k S0`:
/// `D(t) = e^{-rt} Re(e^{ct}/pi int_0^U e^{itu} G(c + iu) du)`.
pub fn digital_barrier_price(
    params: &HyperExpParams,
    t: f64,
    k: f64,
    r: f64,
    spec: &QuadratureSpec,
    mode: RootMode,
    opts: &BarrierOptions,
) -> Result<DigitalResult> {
    let start = Instant::now();
    spec.validate()?;
    if params.sigma <= 0.0 {
        return Err(Error::GaussianRequired);
    }
    if !(k > 1.0) {
        return Err(Error::InvalidParams(format!("barrier level k = {k} must exceed 1")));
    }
    if !(t > 0.0) {
        return Err(Error::DomainError(t));
    }
    if !(spec.c > 0.0) {
        return Err(Error::ContourOutOfStrip {
            c: spec.c,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let expansions: Vec<RootExpansion> = match mode {
        RootMode::Hybrid => side_ids(params, Side::Pos)
            .into_iter()
            .map(|id| expand_root(params, id, opts.order))
            .collect::<Result<_>>()?,
        RootMode::Numeric => Vec::new(),
    };
    let mut tracker = ContourTracker::new(params, spec.c, Some(Side::Pos))?;
    let mut root_time = start.elapsed();
    let mut roots: Vec<C64> = Vec::with_capacity(params.n_pos() + 1);
    let g = |u: f64| -> Result<C64> {
        let q = C64::new(spec.c, u);
        let t0 = Instant::now();
        roots.clear();
        if mode == RootMode::Hybrid && u > opts.switch_u {
            roots.extend(expansions.iter().map(|e| e.eval(q)));
        } else {
            tracker.advance(u)?;
            roots.extend_from_slice(tracker.pos());
        }
        root_time += t0.elapsed();
        Ok(barrier_transform(params, k, q, &roots))
    };
    let integral = filon_integrate_with(g, t, spec.upper, spec.steps)?;
    let price = (-r * t).exp() * (spec.c * t).exp() / PI * integral.re;
    Ok(DigitalResult {
        price,
        root_time,
        total_time: start.elapsed(),
    })
}
