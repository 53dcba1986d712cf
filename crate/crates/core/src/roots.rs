//! Roots of `psi(z) = q`: convergent expansions in `1/q` (or `q^{-1/2}`),
//! derived series, and numerical root finders used as oracle and fallback.
//!
//! Every [`RootExpansion`] stores the series of the root *location* `z(q)`.
//! Negative roots are located at `-zeta_hat`, so their series has leading
//! term `-rho_hat_l` (near) or `-sqrt(2q)/sigma` (far, Gaussian case).

use crate::error::{Error, Result};
use crate::model::{HyperExpParams, RealRoots, Regime};
use crate::series::{Branch, Step, TruncatedSeries, C64};

/// Relative residual that marks the edge of an expansion's validity region.
pub const Q_MIN_RESIDUAL: f64 = 1e-8;
/// Safety factor applied to the empirical validity threshold.
pub const Q_MIN_FACTOR: f64 = 1.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Pos,
    Neg,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Pos => 1.0,
            Side::Neg => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// Trapped between two poles; 1-based index.
    Near(usize),
    /// The extra root beyond the outermost pole.
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootId {
    pub side: Side,
    pub kind: RootKind,
}

impl RootId {
    pub fn near(side: Side, l: usize) -> Self {
        Self {
            side,
            kind: RootKind::Near(l),
        }
    }

    pub fn far(side: Side) -> Self {
        Self {
            side,
            kind: RootKind::Far,
        }
    }

    /// 1-based position among the roots of its side (far root last).
    pub fn position(&self, params: &HyperExpParams) -> usize {
        match self.kind {
            RootKind::Near(l) => l,
            RootKind::Far => match self.side {
                Side::Pos => params.n_pos() + 1,
                Side::Neg => params.n_neg() + 1,
            },
        }
    }

    pub fn label(&self, params: &HyperExpParams) -> String {
        let p = self.position(params);
        match self.side {
            Side::Pos => format!("zeta_{p}"),
            Side::Neg => format!("zeta_hat_{p}"),
        }
    }
}

/// All roots that exist in this regime: positive side first, each side
/// ordered by increasing magnitude.
pub fn root_ids(params: &HyperExpParams) -> Vec<RootId> {
    let (m, mh) = params.root_counts();
    let mut ids: Vec<RootId> = (1..=params.n_pos()).map(|l| RootId::near(Side::Pos, l)).collect();
    if m > params.n_pos() {
        ids.push(RootId::far(Side::Pos));
    }
    ids.extend((1..=params.n_neg()).map(|l| RootId::near(Side::Neg, l)));
    if mh > params.n_neg() {
        ids.push(RootId::far(Side::Neg));
    }
    ids
}

/// Ids of one side only.
pub fn side_ids(params: &HyperExpParams, side: Side) -> Vec<RootId> {
    root_ids(params).into_iter().filter(|id| id.side == side).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootExpansion {
    pub id: RootId,
    pub regime: Regime,
    pub branch: Branch,
    /// Terms are kept through `q^{-order}`.
    pub order: usize,
    /// Location series in `w = 1/q` (integer grid) or `w^{1/2}` (half grid).
    pub series: TruncatedSeries,
    /// Empirical modulus above which the expansion is trusted.
    pub q_min: f64,
}

/// Expansion of the far root on `side`.
pub fn expand_far_root(params: &HyperExpParams, side: Side, order: usize) -> Result<RootExpansion> {
    let regime = params.regime();
    let (series, branch) = match (regime, side) {
        (Regime::Gaussian, _) => {
            // psi(1/y) = h(y) = q; 1/h = w = f_2 y^2 + ...; invert in w^{1/2}; z = 1/y
            let cache = params.laurent_coeffs(2 * order);
            let h = cache.h_series();
            let branch = match side {
                Side::Pos => Branch::Principal,
                Side::Neg => Branch::Negated,
            };
            let y = h.reciprocal()?.lagrange_invert(branch)?;
            (y.reciprocal()?, branch)
        }
        (Regime::DriftPos, Side::Pos) | (Regime::DriftNeg, Side::Neg) => {
            let cache = params.laurent_coeffs(order);
            let h = cache.h_series();
            let y = h.reciprocal()?.lagrange_invert(Branch::Principal)?;
            (y.reciprocal()?, Branch::Principal)
        }
        _ => {
            return Err(Error::RegimeMismatch(format!(
                "far {} root ({regime:?})",
                match side {
                    Side::Pos => "positive",
                    Side::Neg => "negative",
                }
            )))
        }
    };
    let top = match series.step() {
        Step::Whole => order as i32,
        Step::Half => 2 * order as i32,
    };
    let mut exp = RootExpansion {
        id: RootId::far(side),
        regime,
        branch,
        order,
        series: series.truncate(top),
        q_min: f64::INFINITY,
    };
    exp.q_min = calibrate_q_min(params, &exp);
    Ok(exp)
}

/// Expansion of the `l`-th near root (1-based) on `side`.
pub fn expand_near_root(params: &HyperExpParams, side: Side, l: usize, order: usize) -> Result<RootExpansion> {
    let cache = params.laurent_coeffs(order.max(2));
    let (g, center) = match side {
        Side::Pos => (cache.g_series(l)?, params.pos_jumps[l - 1].1),
        Side::Neg => (cache.g_hat_series(l)?, -params.neg_jumps[l - 1].1),
    };
    let s = g.reciprocal()?.lagrange_invert(Branch::Principal)?;
    let series = s.add_scalar(C64::new(center, 0.0)).truncate(order as i32);
    let mut exp = RootExpansion {
        id: RootId::near(side, l),
        regime: params.regime(),
        branch: Branch::Principal,
        order,
        series,
        q_min: f64::INFINITY,
    };
    exp.q_min = calibrate_q_min(params, &exp);
    Ok(exp)
}

/// Expansion of any root by id.
pub fn expand_root(params: &HyperExpParams, id: RootId, order: usize) -> Result<RootExpansion> {
    match id.kind {
        RootKind::Near(l) => expand_near_root(params, id.side, l, order),
        RootKind::Far => expand_far_root(params, id.side, order),
    }
}

/// Expansions of every root of the regime, in [`root_ids`] order.
pub fn expand_all_roots(params: &HyperExpParams, order: usize) -> Result<Vec<RootExpansion>> {
    root_ids(params)
        .into_iter()
        .map(|id| expand_root(params, id, order))
        .collect()
}

/// Scans `|q|` downward along the positive real axis and along `1 + iu`
/// until the relative residual exceeds [`Q_MIN_RESIDUAL`].
fn calibrate_q_min(params: &HyperExpParams, exp: &RootExpansion) -> f64 {
    let mut worst: f64 = 1.0;
    let probes: [fn(f64) -> C64; 2] = [|m| C64::new(m, 0.0), |m| C64::new(1.0, (m * m - 1.0).max(0.0).sqrt())];
    for probe in probes {
        let mut m = 1e4;
        while m > 1.0 {
            let q = probe(m);
            let z = exp.series.eval_in_q(q);
            let res = (params.psi_unchecked(z) - q).norm() / q.norm();
            if !(res <= Q_MIN_RESIDUAL) {
                worst = worst.max(m);
                break;
            }
            m *= 0.95;
        }
    }
    Q_MIN_FACTOR * worst
}

/// Which transformation of a root series to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivedKind {
    /// `1/zeta` (or `1/zeta_hat`).
    Inv,
    /// `1/(zeta - 1)` (or `1/(zeta_hat + 1)`).
    InvShift,
    /// `k^{-zeta}` (or `k^{zeta_hat}`), both equal to `k^{-z}`.
    Power(f64),
    /// `d zeta/dq` (or `d zeta_hat/dq`).
    Deriv,
}

/// Exponential factor split off a power series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prefactor {
    None,
    /// `exp(-c q^{1/2})`.
    ExpSqrt(f64),
    /// `exp(-c q)`.
    ExpLinear(f64),
}

impl Prefactor {
    pub fn eval(&self, q: C64) -> C64 {
        match *self {
            Prefactor::None => C64::new(1.0, 0.0),
            Prefactor::ExpSqrt(c) => (-q.sqrt() * c).exp(),
            Prefactor::ExpLinear(c) => (-q * c).exp(),
        }
    }

    pub fn shift(&self) -> f64 {
        match *self {
            Prefactor::None => 0.0,
            Prefactor::ExpSqrt(c) | Prefactor::ExpLinear(c) => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivedRootSeries {
    pub kind: DerivedKind,
    pub series: TruncatedSeries,
    pub prefactor: Prefactor,
}

impl DerivedRootSeries {
    pub fn eval(&self, q: C64) -> C64 {
        self.prefactor.eval(q) * self.series.eval_in_q(q)
    }
}

impl RootExpansion {
    pub fn step(&self) -> Step {
        self.series.step()
    }

    /// Coefficient `b_n` of `q^{-n * step}`; `n = -1` is the growing term.
    pub fn coeff(&self, n: i32) -> f64 {
        self.series.coeff_at(n).re
    }

    /// Root location at `q`.
    pub fn eval(&self, q: C64) -> C64 {
        self.series.eval_in_q(q)
    }

    /// Root location at `q`, with a warning when `|q| < q_min`.
    pub fn eval_with_warning(&self, q: C64) -> (C64, Option<Error>) {
        let warn = (q.norm() < self.q_min).then_some(Error::BelowValidityThreshold {
            modulus: q.norm(),
            q_min: self.q_min,
        });
        (self.eval(q), warn)
    }

    /// `zeta` for positive roots, `zeta_hat = -z` for negative ones.
    pub fn magnitude(&self) -> TruncatedSeries {
        self.series.scale(C64::new(self.id.side.sign(), 0.0))
    }

    pub fn derive(&self, params: &HyperExpParams, kind: DerivedKind) -> Result<DerivedRootSeries> {
        let zeta = self.magnitude();
        let (series, prefactor) = match kind {
            DerivedKind::Inv => (zeta.reciprocal()?, Prefactor::None),
            DerivedKind::InvShift => {
                if let Some(&(_, rho1)) = params.pos_jumps.first() {
                    if rho1 <= 1.0 {
                        return Err(Error::RhoOneTooSmall(rho1));
                    }
                }
                let shift = -self.id.side.sign();
                (zeta.add_scalar(C64::new(shift, 0.0)).reciprocal()?, Prefactor::None)
            }
            DerivedKind::Power(k) => self.power(k)?,
            DerivedKind::Deriv => (zeta.differentiate_param(), Prefactor::None),
        };
        Ok(DerivedRootSeries {
            kind,
            series,
            prefactor,
        })
    }

    /// `k^{-z}` with any growing part moved into an exponential prefactor.
    fn power(&self, k: f64) -> Result<(TruncatedSeries, Prefactor)> {
        if k == 1.0 {
            let len = self.series.top_exp().max(0) as usize + 1;
            return Ok((
                TruncatedSeries::constant(C64::new(1.0, 0.0), self.step(), len),
                Prefactor::None,
            ));
        }
        let lead = self.series.coeff_at(-1).re;
        let top = self.series.top_exp();
        let regular = TruncatedSeries::new(0, self.step(), (0..=top).map(|e| self.series.coeff_at(e)).collect());
        let powered = regular.neg().exp_base_power(k)?;
        let c = lead * k.ln();
        let prefactor = if lead == 0.0 {
            Prefactor::None
        } else {
            match self.step() {
                Step::Half => Prefactor::ExpSqrt(c),
                Step::Whole => Prefactor::ExpLinear(c),
            }
        };
        Ok((powered, prefactor))
    }
}

/// `psi(z) - q` and `psi'(z)` on the real line.
fn real_residual(params: &HyperExpParams, x: f64, q: f64) -> f64 {
    params.psi_real(x) - q
}

/// Safeguarded Newton/bisection on a bracket with `f(lo) < 0 < f(hi)`
/// (or the reverse).
fn solve_bracket(params: &HyperExpParams, q: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (a0, b0) = (lo, hi);
    let flo = real_residual(params, lo, q);
    let fhi = real_residual(params, hi, q);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketFailure { lo: a0, hi: b0 });
    }
    let increasing = flo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let f = real_residual(params, x, q);
        if f == 0.0 {
            return Ok(x);
        }
        if (f < 0.0) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        let d = params.psi_deriv_real(x);
        let newton = x - f / d;
        let next = if newton > lo.min(hi) && newton < lo.max(hi) && d != 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let tol = 1e-15 * x.abs().max(1e-300);
        if (next - x).abs() <= tol || (hi - lo).abs() <= tol {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// All real roots of `psi(z) = q` for real `q > 0`, located by bisection
/// and Newton polish inside the interlacing intervals.
pub fn numeric_roots_real(params: &HyperExpParams, q: f64) -> Result<RealRoots> {
    if !(q > 0.0) {
        return Err(Error::InvalidParams(format!("q = {q} must be positive")));
    }
    let (m, mh) = params.root_counts();
    let shrink = |a: f64, b: f64| {
        let w = b - a;
        (a + 1e-9 * w, b - 1e-9 * w)
    };

    let mut pos = Vec::with_capacity(m);
    let mut left = 0.0;
    for &(_, rho) in &params.pos_jumps {
        let (a, b) = shrink(left, rho);
        pos.push(solve_bracket(params, q, if left == 0.0 { 0.0 } else { a }, b)?);
        left = rho;
    }
    if m > params.n_pos() {
        let a = if left == 0.0 { 0.0 } else { left + 1e-9 * left.max(1.0) };
        let mut b = (left.max(1.0)) * 2.0;
        while real_residual(params, b, q) < 0.0 {
            b *= 2.0;
            if b > 1e300 {
                return Err(Error::BracketFailure { lo: a, hi: b });
            }
        }
        pos.push(solve_bracket(params, q, a, b)?);
    }

    let mut neg = Vec::with_capacity(mh);
    let mut right = 0.0;
    for &(_, rho) in &params.neg_jumps {
        let (a, b) = shrink(-rho, right);
        let root = solve_bracket(params, q, a, if right == 0.0 { 0.0 } else { b })?;
        neg.push(-root);
        right = -rho;
    }
    if mh > params.n_neg() {
        let b = if right == 0.0 {
            0.0
        } else {
            right - 1e-9 * right.abs().max(1.0)
        };
        let mut a = -(right.abs().max(1.0)) * 2.0;
        while real_residual(params, a, q) < 0.0 {
            a *= 2.0;
            if a < -1e300 {
                return Err(Error::BracketFailure { lo: a, hi: b });
            }
        }
        neg.push(-solve_bracket(params, q, a, b)?);
    }
    Ok(RealRoots { pos, neg })
}

/// Newton iterations on `psi(z) = q` from `z`, at most `max_iter`.
pub fn newton_complex(params: &HyperExpParams, q: C64, mut z: C64, max_iter: usize) -> Option<C64> {
    let scale = q.norm().max(1.0);
    for _ in 0..max_iter {
        let f = params.psi_unchecked(z) - q;
        if f.norm() <= 1e-13 * scale {
            return Some(z);
        }
        let d = params.psi_deriv(z);
        let dz = f / d;
        z -= dz;
        if !z.is_finite() {
            return None;
        }
        if dz.norm() <= 1e-15 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    let f = params.psi_unchecked(z) - q;
    (f.norm() <= 1e-10 * scale).then_some(z)
}

/// Root locations along `q = c + iu`: `pos[i][j]` is `zeta_{j+1}` at `u[i]`,
/// `neg[i][j]` is the location `-zeta_hat_{j+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourRoots {
    pub c: f64,
    pub u: Vec<f64>,
    pub pos: Vec<Vec<C64>>,
    pub neg: Vec<Vec<C64>>,
}

impl ContourRoots {
    /// Location of root `id` at grid index `i`.
    pub fn at(&self, params: &HyperExpParams, id: RootId, i: usize) -> C64 {
        let j = id.position(params) - 1;
        match id.side {
            Side::Pos => self.pos[i][j],
            Side::Neg => self.neg[i][j],
        }
    }
}

/// Largest ODE substep used while tracking.
const TRACK_STEP: f64 = 0.05;

fn track_one(params: &HyperExpParams, c: f64, z0: C64, u0: f64, u1: f64, root: usize) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    let poles = params.poles();
    let mut z = z0;
    let mut u = u0;
    let mut halvings = 0;
    while u < u1 {
        let d = params.psi_deriv(z);
        // keep the predicted move small next to the nearest pole
        let gap = poles
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
            .min(z.norm().max(1.0));
        let cap = 0.05 * gap * d.norm() / 2f64.powi(halvings);
        let h = TRACK_STEP.min(cap).min(u1 - u).max(1e-14);
        let k1 = i / d;
        let mid = z + k1 * (0.5 * h);
        let k2 = i / params.psi_deriv(mid);
        let guess = z + k2 * h;
        let q = C64::new(c, u + h);
        let moved = (guess - z).norm();
        match newton_complex(params, q, guess, 10) {
            Some(next) if (next - guess).norm() <= 0.25 * moved + 1e-12 * z.norm().max(1.0) => {
                z = next;
                u += h;
                halvings = 0;
            }
            _ => {
                halvings += 1;
                if halvings > 40 {
                    return Err(Error::TrackingDivergence { root, u: u + h });
                }
            }
        }
    }
    Ok(z)
}

/// Follows the roots of one or both sides along `q = c + iu` for
/// increasing `u`, starting from the real roots at `q = c`.
#[derive(Clone, Debug)]
pub struct ContourTracker<'a> {
    params: &'a HyperExpParams,
    c: f64,
    u: f64,
    pos: Vec<C64>,
    neg: Vec<C64>,
}

impl<'a> ContourTracker<'a> {
    /// `side = None` tracks every root.
    pub fn new(params: &'a HyperExpParams, c: f64, side: Option<Side>) -> Result<Self> {
        let start = numeric_roots_real(params, c)?;
        let pos = if side != Some(Side::Neg) {
            start.pos.iter().map(|&z| C64::new(z, 0.0)).collect()
        } else {
            Vec::new()
        };
        let neg = if side != Some(Side::Pos) {
            start.neg.iter().map(|&z| C64::new(-z, 0.0)).collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            params,
            c,
            u: 0.0,
            pos,
            neg,
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Tracked positive-side locations at the current `u`.
    pub fn pos(&self) -> &[C64] {
        &self.pos
    }

    /// Tracked negative-side locations at the current `u`.
    pub fn neg(&self) -> &[C64] {
        &self.neg
    }

    /// Moves every tracked root to `u >= self.u()`.
    pub fn advance(&mut self, u: f64) -> Result<()> {
        if u < self.u {
            return Err(Error::InvalidParams(format!(
                "tracking must move forward ({} -> {u})",
                self.u
            )));
        }
        if u == self.u {
            return Ok(());
        }
        let n_pos = self.pos.len();
        for (j, z) in self.pos.iter_mut().enumerate() {
            *z = track_one(self.params, self.c, *z, self.u, u, j + 1)?;
        }
        for (j, z) in self.neg.iter_mut().enumerate() {
            *z = track_one(self.params, self.c, *z, self.u, u, n_pos + j + 1)?;
        }
        self.u = u;
        Ok(())
    }
}

/// Tracks every root from the real roots at `q = c` along `q = c + iu`
/// with midpoint steps on `dz/du = i / psi'(z)` and Newton polish.
/// `u_grid` must start at 0 and be increasing.
pub fn track_roots_contour(params: &HyperExpParams, c: f64, u_grid: &[f64]) -> Result<ContourRoots> {
    let mut tracker = ContourTracker::new(params, c, None)?;
    let mut pos = Vec::with_capacity(u_grid.len());
    let mut neg = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        tracker.advance(u)?;
        pos.push(tracker.pos.clone());
        neg.push(tracker.neg.clone());
    }
    Ok(ContourRoots {
        c,
        u: u_grid.to_vec(),
        pos,
        neg,
    })
}

/// How roots at complex `q` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootMode {
    /// Contour tracking everywhere.
    Numeric,
    /// Expansions where `|q|` clears their threshold, tracking otherwise.
    Hybrid,
}

/// Root locations (in [`root_ids`] order) at a complex `q` with `Re q > 0`.
pub fn roots_at(
    params: &HyperExpParams,
    q: C64,
    expansions: Option<&[RootExpansion]>,
    mode: RootMode,
) -> Result<Vec<C64>> {
    if mode == RootMode::Hybrid {
        if let Some(exps) = expansions {
            if exps.iter().all(|e| q.norm() >= e.q_min) {
                return Ok(exps.iter().map(|e| e.eval(q)).collect());
            }
        }
    }
    let grid = [0.0, q.im.abs()];
    let tracked = track_roots_contour(params, q.re, &grid)?;
    let ids = root_ids(params);
    Ok(ids
        .iter()
        .map(|id| {
            let z = tracked.at(params, *id, 1);
            if q.im < 0.0 {
                z.conj()
            } else {
                z
            }
        })
        .collect())
}
