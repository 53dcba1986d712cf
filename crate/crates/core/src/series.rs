//! Truncated Laurent/Puiseux series with integer or half-integer exponents.
//!
//! A [`TruncatedSeries`] stores the coefficients of `x^(base_exp + n)` where
//! `x = z` on the integer grid and `x = z^(1/2)` on the half grid. Every
//! non-zero series also records how far it is known: coefficients past
//! `top_exp()` are unknown, and binary operations never claim more than
//! both operands support. The empty coefficient list is the exact zero.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default floor below which a leading coefficient is treated as zero.
pub const RECIPROCAL_FLOOR: f64 = 1e-300;

/// Exponent granularity of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// Exponents are integers.
    Whole,
    /// Exponents are multiples of one half.
    Half,
}

impl Step {
    /// Grid slots per unit exponent.
    pub fn slots(self) -> i32 {
        match self {
            Step::Whole => 1,
            Step::Half => 2,
        }
    }

    pub fn as_f64(self) -> f64 {
        1.0 / self.slots() as f64
    }
}

/// Which `k`-th root of the leading coefficient seeds an inversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Principal,
    Negated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    base_exp: i32,
    step: Step,
    coeffs: Vec<C64>,
}

impl TruncatedSeries {
    /// Builds a series, stripping exact leading zeros.
    pub fn new(base_exp: i32, step: Step, coeffs: Vec<C64>) -> Self {
        let lead = coeffs.iter().position(|c| *c != C64::new(0.0, 0.0));
        match lead {
            None => Self::zero(step),
            Some(i) => Self {
                base_exp: base_exp + i as i32,
                step,
                coeffs: coeffs[i..].to_vec(),
            },
        }
    }

    pub fn from_real(base_exp: i32, step: Step, coeffs: &[f64]) -> Self {
        Self::new(base_exp, step, coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero(step: Step) -> Self {
        Self {
            base_exp: 0,
            step,
            coeffs: Vec::new(),
        }
    }

    /// The constant `c` known through `x^(len-1)`.
    pub fn constant(c: C64, step: Step, len: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); len.max(1)];
        coeffs[0] = c;
        Self::new(0, step, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn base_exp(&self) -> i32 {
        self.base_exp
    }

    pub fn step(&self) -> Step {
        self.step
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest known grid exponent (`i32::MAX` for the exact zero).
    pub fn top_exp(&self) -> i32 {
        if self.is_zero() {
            i32::MAX
        } else {
            self.base_exp + self.coeffs.len() as i32 - 1
        }
    }

    /// Coefficient of `x^e` on the grid; zero outside the stored range.
    pub fn coeff_at(&self, e: i32) -> C64 {
        if self.is_zero() || e < self.base_exp || e > self.top_exp() {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[(e - self.base_exp) as usize]
    }

    /// Real exponent of the `n`-th stored coefficient.
    pub fn exponent(&self, n: usize) -> f64 {
        (self.base_exp + n as i32) as f64 * self.step.as_f64()
    }

    /// Re-expresses the series on the half grid (odd slots zero).
    pub fn to_half(&self) -> Self {
        match self.step {
            Step::Half => self.clone(),
            Step::Whole => {
                if self.is_zero() {
                    return Self::zero(Step::Half);
                }
                let mut out = vec![C64::new(0.0, 0.0); 2 * self.coeffs.len() - 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    out[2 * i] = *c;
                }
                Self {
                    base_exp: 2 * self.base_exp,
                    step: Step::Half,
                    coeffs: out,
                }
            }
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.step == b.step {
            (a.clone(), b.clone())
        } else {
            (a.to_half(), b.to_half())
        }
    }

    /// Drops every coefficient above grid exponent `top`.
    pub fn truncate(&self, top: i32) -> Self {
        if self.is_zero() || top >= self.top_exp() {
            return self.clone();
        }
        if top < self.base_exp {
            return Self::zero(self.step);
        }
        let keep = (top - self.base_exp + 1) as usize;
        Self::new(self.base_exp, self.step, self.coeffs[..keep].to_vec())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.base_exp, self.step, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    /// Adds an exact constant.
    pub fn add_scalar(&self, s: C64) -> Self {
        if self.is_zero() {
            return Self::new(0, self.step, vec![s]);
        }
        let top = self.top_exp();
        if top < 0 {
            // the constant lies beyond the known range
            return self.clone();
        }
        let base = self.base_exp.min(0);
        let mut out = vec![C64::new(0.0, 0.0); (top - base + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.base_exp - base) as usize + i] = *c;
        }
        out[(-base) as usize] += s;
        Self::new(base, self.step, out)
    }

    /// Coefficientwise sum, known up to the lower of the two known orders.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return if self.step == other.step {
                other.clone()
            } else {
                other.to_half()
            };
        }
        if other.is_zero() {
            return if self.step == other.step {
                self.clone()
            } else {
                self.to_half()
            };
        }
        let (a, b) = Self::aligned(self, other);
        let base = a.base_exp.min(b.base_exp);
        let top = a.top_exp().min(b.top_exp());
        if top < base {
            return Self::zero(a.step);
        }
        let coeffs = (base..=top).map(|e| a.coeff_at(e) + b.coeff_at(e)).collect();
        Self::new(base, a.step, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(if self.step == other.step { self.step } else { Step::Half });
        }
        let (a, b) = Self::aligned(self, other);
        let len = a.coeffs.len().min(b.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..=n {
                acc += a.coeffs[j] * b.coeffs[n - j];
            }
            out.push(acc);
        }
        Self::new(a.base_exp + b.base_exp, a.step, out)
    }

    /// Product of several series.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Option<Self> {
        let mut it = factors.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, f| acc.mul(f)))
    }

    /// `1/f` with the default leading-coefficient floor.
    pub fn reciprocal(&self) -> Result<Self> {
        self.reciprocal_with_floor(RECIPROCAL_FLOOR)
    }

    /// `1/f` by the triangular recurrence `sum_j f_j r_{n-j} = delta_n0`.
    pub fn reciprocal_with_floor(&self, floor: f64) -> Result<Self> {
        let lead = match self.coeffs.first() {
            Some(c) if c.norm() >= floor => *c,
            Some(c) => return Err(Error::ZeroLeadingCoefficient(c.norm())),
            None => return Err(Error::ZeroLeadingCoefficient(0.0)),
        };
        let inv = C64::new(1.0, 0.0) / lead;
        let len = self.coeffs.len();
        let mut r = Vec::with_capacity(len);
        r.push(inv);
        for n in 1..len {
            let mut acc = C64::new(0.0, 0.0);
            for j in 1..=n {
                acc += self.coeffs[j] * r[n - j];
            }
            r.push(-acc * inv);
        }
        Ok(Self::new(-self.base_exp, self.step, r))
    }

    /// Coefficients of `c^{f}` for a power series `f` and `c > 0`.
    pub fn exp_base_power(&self, c: f64) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::new(0, self.step, vec![C64::new(1.0, 0.0)]));
        }
        if self.base_exp < 0 {
            return Err(Error::PrincipalPartPresent(self.base_exp));
        }
        let log_c = c.ln();
        let top = self.top_exp();
        let g: Vec<C64> = (0..=top).map(|e| self.coeff_at(e) * log_c).collect();
        let mut p = Vec::with_capacity(g.len());
        p.push(g[0].exp());
        for n in 1..g.len() {
            let mut acc = C64::new(0.0, 0.0);
            for j in 1..=n {
                acc += g[j] * p[n - j] * j as f64;
            }
            p.push(acc / n as f64);
        }
        Ok(Self::new(0, self.step, p))
    }

    /// Series reversion of `w = f(z)` with `f = f_k z^k + ...`, `k` in {1, 2}.
    ///
    /// The result is `z` as a series in `w^(1/k)` with `l_1 = 1 / f_k^(1/k)`
    /// for the selected branch; for `n >= 2`,
    /// `l_n = [z^(n-1)] (z / f(z)^(1/k))^n / n`, with the power of
    /// `1 + f_{k+1}/f_k z + ...` expanded by Miller's recurrence.
    pub fn lagrange_invert(&self, branch: Branch) -> Result<Self> {
        if self.step != Step::Whole {
            return Err(Error::UnsupportedGrid);
        }
        let k = self.base_exp;
        if k != 1 && k != 2 {
            return Err(Error::UnsupportedOrder(k));
        }
        let lead = self.coeffs[0];
        let mut root = if k == 1 { lead } else { lead.sqrt() };
        if k == 2 && branch == Branch::Negated {
            root = -root;
        }
        let inv_root = C64::new(1.0, 0.0) / root;
        let len = self.coeffs.len();
        let u: Vec<C64> = self.coeffs.iter().map(|c| c / lead).collect();

        let mut out = Vec::with_capacity(len);
        out.push(inv_root);
        let mut root_pow = inv_root;
        for n in 2..=len {
            root_pow *= inv_root;
            let alpha = -(n as f64) / k as f64;
            let m_max = n - 1;
            let mut p = Vec::with_capacity(m_max + 1);
            p.push(C64::new(1.0, 0.0));
            for m in 1..=m_max {
                let mut acc = C64::new(0.0, 0.0);
                for j in 1..=m {
                    acc += u[j] * p[m - j] * ((alpha + 1.0) * j as f64 - m as f64);
                }
                p.push(acc / m as f64);
            }
            out.push(p[m_max] * root_pow / n as f64);
        }
        let step = if k == 1 { Step::Whole } else { Step::Half };
        Ok(Self::new(1, step, out))
    }

    /// `outer(inner(x))` for a power series `outer` on the integer grid and
    /// an `inner` that vanishes at the origin.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.step != Step::Whole {
            return Err(Error::UnsupportedGrid);
        }
        if !outer.is_zero() && outer.base_exp < 0 {
            return Err(Error::PrincipalPartPresent(outer.base_exp));
        }
        if inner.is_zero() {
            return Ok(Self::new(0, inner.step, vec![outer.coeff_at(0)]));
        }
        if inner.base_exp < 1 {
            return Err(Error::NonvanishingInner(inner.base_exp));
        }
        if outer.is_zero() {
            return Ok(Self::zero(inner.step));
        }
        let ib = inner.base_exp;
        let outer_top = outer.top_exp();
        let first = outer.base_exp.max(1);
        let top = (ib * (outer_top + 1) - 1).min(inner.top_exp() + (first - 1) * ib);
        let top = top.max(0) as usize;
        let dense_inner: Vec<C64> = (0..=top as i32).map(|e| inner.coeff_at(e)).collect();

        let mut acc = vec![C64::new(0.0, 0.0); top + 1];
        for j in (0..=outer_top).rev() {
            let mut next = vec![C64::new(0.0, 0.0); top + 1];
            for (n, slot) in next.iter_mut().enumerate() {
                let mut s = C64::new(0.0, 0.0);
                for m in 0..=n {
                    s += acc[m] * dense_inner[n - m];
                }
                *slot = s;
            }
            next[0] += outer.coeff_at(j);
            acc = next;
        }
        Ok(Self::new(0, inner.step, acc))
    }

    /// Termwise `d/dq` of a series in `w = 1/q` (or `w^(1/2)` on the half grid):
    /// `x^e` with real exponent `e` in `w` maps to `-e w^(e+1)`.
    pub fn differentiate_param(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * (-self.exponent(n)))
            .collect();
        Self::new(self.base_exp + self.step.slots(), self.step, coeffs)
    }

    /// Evaluates at a grid point `x` (`x = w` or `x = w^(1/2)`).
    pub fn eval_grid(&self, x: C64) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(self.base_exp)
    }

    /// Evaluates the series as a function of `q`, with `w = 1/q` and the
    /// principal square root on the half grid.
    pub fn eval_in_q(&self, q: C64) -> C64 {
        let x = match self.step {
            Step::Whole => C64::new(1.0, 0.0) / q,
            Step::Half => C64::new(1.0, 0.0) / q.sqrt(),
        };
        self.eval_grid(x)
    }
}

/// Exponential partial Bell polynomial `B_{n,m}(x_1, ..., x_{n-m+1})`.
///
/// `x[0]` holds `x_1`. Uses `B_{n,m} = sum_j C(n-1, j-1) x_j B_{n-j,m-1}`.
pub fn bell_partial(n: usize, m: usize, x: &[C64]) -> Result<C64> {
    if n == 0 && m == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if m == 0 || m > n {
        return Ok(C64::new(0.0, 0.0));
    }
    let need = n - m + 1;
    if x.len() < need {
        return Err(Error::IndexError {
            index: need,
            len: x.len(),
        });
    }
    // table[i][j] = B_{i,j} for i <= n, j <= m
    let mut table = vec![vec![C64::new(0.0, 0.0); m + 1]; n + 1];
    table[0][0] = C64::new(1.0, 0.0);
    let mut binom = vec![vec![0.0f64; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1.0;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + if j < i { binom[i - 1][j] } else { 0.0 };
        }
    }
    for i in 1..=n {
        for j in 1..=m.min(i) {
            let mut acc = C64::new(0.0, 0.0);
            for part in 1..=(i - j + 1) {
                acc += x[part - 1] * table[i - part][j - 1] * binom[i - 1][part - 1];
            }
            table[i][j] = acc;
        }
    }
    Ok(table[n][m])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn whole(base: i32, v: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_real(base, Step::Whole, v)
    }

    fn assert_coeffs(s: &TruncatedSeries, base: i32, want: &[f64], tol: f64) {
        for (i, w) in want.iter().enumerate() {
            let got = s.coeff_at(base + i as i32);
            assert!(
                (got - c(*w)).norm() <= tol,
                "coefficient {} : got {got}, want {w}",
                base + i as i32
            );
        }
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let s = whole(0, &[1.0, 1.0]).add(&whole(0, &[1.0, -1.0]));
        assert_coeffs(&s, 0, &[2.0, 0.0], 0.0);
        let f = whole(-1, &[3.0, 1.0, 4.0]);
        assert_eq!(f.add(&TruncatedSeries::zero(Step::Whole)), f);
        let lead = whole(0, &[1.0, 1.0]).add(&whole(0, &[-1.0, 1.0]));
        assert_eq!(lead.base_exp(), 1);
    }

    #[test]
    fn mixed_grids_promote_to_half() {
        let a = whole(0, &[1.0, 2.0, 3.0]);
        let b = TruncatedSeries::from_real(1, Step::Half, &[5.0, 0.0, 7.0, 0.0]);
        let s = a.add(&b);
        assert_eq!(s.step(), Step::Half);
        assert_coeffs(&s, 0, &[1.0, 5.0, 2.0, 7.0, 3.0], 0.0);
    }

    #[test]
    fn mul_small_cases() {
        let p = whole(0, &[1.0, 1.0, 0.0]).mul(&whole(0, &[1.0, -1.0, 0.0]));
        assert_coeffs(&p, 0, &[1.0, 0.0, -1.0], 0.0);
        let q = whole(-1, &[1.0, 0.0, 0.0]).mul(&whole(2, &[1.0, 0.0, 0.0]));
        assert_eq!(q.base_exp(), 1);
        assert_coeffs(&q, 1, &[1.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn reciprocal_of_one_plus_z_is_geometric() {
        let r = whole(0, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]).reciprocal().unwrap();
        assert_coeffs(&r, 0, &[1.0, -1.0, 1.0, -1.0, 1.0, -1.0], 1e-15);
    }

    #[test]
    fn reciprocal_moves_the_pole_order() {
        let h = whole(-2, &[0.5 * 0.042 * 0.042, 0.14, -5.0, 1.0, 2.0]);
        let r = h.reciprocal().unwrap();
        assert_eq!(r.base_exp(), 2);
    }

    #[test]
    fn reciprocal_rejects_tiny_leading_coefficient() {
        let f = whole(0, &[1e-310, 1.0]);
        assert!(matches!(f.reciprocal(), Err(Error::ZeroLeadingCoefficient(_))));
        assert!(f.reciprocal_with_floor(1e-320).is_ok());
    }

    #[test]
    fn exp_base_power_small_cases() {
        let e = whole(1, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).exp_base_power(std::f64::consts::E);
        let e = e.unwrap();
        let mut fact = 1.0;
        for n in 0..6 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((e.coeff_at(n) - c(1.0 / fact)).norm() < 1e-15);
        }
        let one = whole(0, &[0.3, 2.0, -1.0]).exp_base_power(1.0).unwrap();
        assert_coeffs(&one, 0, &[1.0, 0.0, 0.0], 0.0);
        assert!(matches!(
            whole(-1, &[1.0]).exp_base_power(2.0),
            Err(Error::PrincipalPartPresent(-1))
        ));
    }

    #[test]
    fn exp_base_power_matches_finite_differences() {
        // c = 2, f = 0.3 + 0.1 t + 0.05 t^2; derivatives of 2^{f(t)} at 0
        let f = |t: f64| 2f64.powf(0.3 + 0.1 * t + 0.05 * t * t);
        let h = 1e-2;
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let d3 = (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
        let p = whole(0, &[0.3, 0.1, 0.05, 0.0]).exp_base_power(2.0).unwrap();
        assert!((p.coeff_at(0).re - f(0.0)).abs() < 1e-15);
        assert!((p.coeff_at(1).re - d1).abs() < 1e-5 * 1e-1);
        assert!((p.coeff_at(2).re - d2 / 2.0).abs() < 1e-5);
        assert!((p.coeff_at(3).re - d3 / 6.0).abs() < 1e-5);
    }

    #[test]
    fn bell_partial_small_cases() {
        let x: Vec<C64> = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0].iter().map(|v| c(*v)).collect();
        for n in 1..=6 {
            assert_eq!(bell_partial(n, 1, &x).unwrap(), x[n - 1]);
            assert_eq!(bell_partial(n, n, &x).unwrap(), x[0].powi(n as i32));
        }
        // {1,2,3} into two blocks: three ways, each a singleton and a pair
        assert_eq!(bell_partial(3, 2, &x).unwrap(), c(3.0 * 2.0 * 3.0));
        assert!(matches!(bell_partial(5, 1, &x[..2]), Err(Error::IndexError { .. })));
    }

    #[test]
    fn lagrange_inversion_gives_catalan_numbers() {
        // oracle: fixed-point iteration z <- w + z^2 on truncated polynomials
        let order = 8;
        let mut z = vec![0.0f64; order + 1];
        for _ in 0..order + 1 {
            let mut next = vec![0.0; order + 1];
            next[1] = 1.0;
            for i in 0..=order {
                for j in 0..=order - i {
                    next[i + j] += z[i] * z[j];
                }
            }
            z = next;
        }
        let f = whole(1, &[1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let inv = f.lagrange_invert(Branch::Principal).unwrap();
        for n in 1..=order {
            assert!((inv.coeff_at(n as i32).re - z[n]).abs() < 1e-12, "n = {n}");
        }
        assert_coeffs(&inv, 1, &[1.0, 1.0, 2.0, 5.0, 14.0], 1e-12);
    }

    #[test]
    fn lagrange_inversion_of_a_pure_square() {
        let f = whole(2, &[1.0, 0.0, 0.0, 0.0]);
        let p = f.lagrange_invert(Branch::Principal).unwrap();
        let n = f.lagrange_invert(Branch::Negated).unwrap();
        assert_eq!(p.step(), Step::Half);
        assert_coeffs(&p, 1, &[1.0, 0.0, 0.0, 0.0], 1e-15);
        assert_coeffs(&n, 1, &[-1.0, 0.0, 0.0, 0.0], 1e-15);
        assert!(matches!(
            whole(3, &[1.0]).lagrange_invert(Branch::Principal),
            Err(Error::UnsupportedOrder(3))
        ));
    }

    #[test]
    fn compose_geometric_with_square() {
        let outer = whole(0, &[1.0; 6]);
        let inner = whole(2, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let s = TruncatedSeries::compose(&outer, &inner).unwrap();
        assert_coeffs(&s, 0, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0], 0.0);
        let bad = TruncatedSeries::compose(&outer, &whole(0, &[1.0, 1.0]));
        assert!(matches!(bad, Err(Error::NonvanishingInner(0))));
    }

    #[test]
    fn compose_exp_with_log_is_identity() {
        let n = 10;
        let mut fact = 1.0;
        let exp: Vec<f64> = (0..n)
            .map(|i| {
                if i > 0 {
                    fact *= i as f64;
                }
                1.0 / fact
            })
            .collect();
        let log: Vec<f64> = (1..n)
            .map(|i| if i % 2 == 1 { 1.0 / i as f64 } else { -1.0 / i as f64 })
            .collect();
        let s = TruncatedSeries::compose(&whole(0, &exp), &whole(1, &log)).unwrap();
        assert!(s.top_exp() >= n - 1);
        assert!((s.coeff_at(0) - c(1.0)).norm() < 1e-15);
        assert!((s.coeff_at(1) - c(1.0)).norm() < 1e-15);
        for e in 2..n {
            assert!(s.coeff_at(e).norm() < 1e-14, "e = {e}");
        }
    }

    #[test]
    fn differentiate_param_power_rule() {
        // q^{1/2} = w^{-1/2}
        let f = TruncatedSeries::from_real(-1, Step::Half, &[1.0, 0.0, 0.0]);
        let d = f.differentiate_param();
        assert_eq!(d.base_exp(), 1);
        assert!((d.coeff_at(1) - c(0.5)).norm() < 1e-15);
        let constant = whole(0, &[3.0]);
        assert!(constant.differentiate_param().is_zero());
    }

    #[test]
    fn differentiate_param_matches_root_derivative_pattern() {
        // b_{-1} q^{1/2} + b_0 + b_1 q^{-1/2} + ...; d/dq gives ((2-n)/2) b_{n-2} q^{-n/2}
        let b: Vec<f64> = (0..10).map(|i| 1.0 + 0.37 * i as f64).collect();
        let f = TruncatedSeries::from_real(-1, Step::Half, &b);
        let d = f.differentiate_param();
        for n in 1..=8i32 {
            let want = (2.0 - n as f64) / 2.0 * b[(n - 2 + 1) as usize];
            assert!((d.coeff_at(n) - c(want)).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn eval_uses_principal_root_on_half_grid() {
        let f = TruncatedSeries::from_real(-1, Step::Half, &[1.0]);
        let q = C64::new(-3.0, 4.0);
        assert!((f.eval_in_q(q) - q.sqrt()).norm() < 1e-14);
        let g = whole(0, &[1.0, 2.0]);
        assert!((g.eval_in_q(c(4.0)) - c(1.5)).norm() < 1e-15);
    }
}
