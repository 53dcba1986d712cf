//! The `Hh_n` functions and the `phi_n(t; c)` pricing kernels.
//!
//! `Hh_n(z) = (1/n!) int_0^inf s^n exp(-(z + s)^2 / 2) ds` for `n >= 0` and
//! `Hh_{-1}(z) = exp(-z^2/2)`; they satisfy `n Hh_n = Hh_{n-2} - z Hh_{n-1}`.
//! `phi_n(t; c)` is the inverse Laplace transform of
//! `exp(-c sqrt(q)) q^{-(n+2)/2}`, i.e.
//! `2^{(n+1)/2} t^{n/2} Hh_n(c / sqrt(2t)) / sqrt(pi)`.

use std::f64::consts::PI;

use libm::erfc;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre_panels;
use crate::series::C64;

/// Below this real part the forward recurrence is used.
const FORWARD_LIMIT: f64 = 0.1;
/// Downward recurrences are rescaled once values exceed this magnitude
/// (kept well below the range where complex division overflows).
const RESCALE: f64 = 1e120;

/// `Hh_n(z)` for `n >= -1`.
pub fn hh(n: i32, z: C64) -> C64 {
    assert!(n >= -1, "Hh_n is defined for n >= -1");
    hh_all(n, z)[(n + 1) as usize]
}

/// `Hh_n(x)` for real `x`.
pub fn hh_real(n: i32, x: f64) -> f64 {
    hh(n, C64::new(x, 0.0)).re
}

/// `[Hh_{-1}(z), Hh_0(z), ..., Hh_nmax(z)]`.
pub fn hh_all(nmax: i32, z: C64) -> Vec<C64> {
    let len = (nmax + 2).max(1) as usize;
    if z.re < FORWARD_LIMIT {
        hh_forward(len, z)
    } else {
        hh_miller(len, z)
    }
}

fn hh0(z: C64) -> C64 {
    if z.im == 0.0 {
        return C64::new((PI / 2.0).sqrt() * erfc(z.re / 2f64.sqrt()), 0.0);
    }
    hh_by_quadrature(0, z)
}

fn hh_forward(len: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(len);
    out.push((-z * z * 0.5).exp());
    if len > 1 {
        out.push(hh0(z));
    }
    for i in 2..len {
        let n = (i - 1) as f64;
        let next = (out[i - 2] - z * out[i - 1]) / n;
        out.push(next);
    }
    out
}

/// Downward (Miller) recurrence, normalised by `Hh_{-1}`.
fn hh_miller(len: usize, z: C64) -> Vec<C64> {
    let nmax = len as i32 - 2;
    let x = z.re;
    let start = {
        let s = (2.0 * nmax.max(0) as f64).sqrt() + 26.0 / x;
        ((0.5 * s * s).ceil() as i32 + 10).clamp(nmax + 20, 200_000)
    };
    let mut out = vec![C64::new(0.0, 0.0); len];
    // hi = Hh_{m+1}, mid = Hh_m as m runs downward
    let mut hi = C64::new(0.0, 0.0);
    let mut mid = C64::new(1.0, 0.0);
    let mut m = start;
    while m >= 0 {
        // Hh_{m-1} = (m+1) Hh_{m+1} + z Hh_m
        let lo = hi * (m + 1) as f64 + z * mid;
        if m <= nmax {
            out[(m + 1) as usize] = mid;
        }
        hi = mid;
        mid = lo;
        m -= 1;
        if mid.norm() > RESCALE {
            hi /= RESCALE;
            mid /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    out[0] = mid;
    let target = (-z * z * 0.5).exp();
    let scale = target / mid;
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// `Hh_n(z)` by direct quadrature of its integral representation.
pub fn hh_by_quadrature(n: i32, z: C64) -> C64 {
    if n == -1 {
        return (-z * z * 0.5).exp();
    }
    let mut fact = 1.0;
    for i in 1..=n {
        fact *= i as f64;
    }
    let nn = n;
    let f = move |s: f64| {
        let w = z + s;
        (-w * w * 0.5).exp() * s.powi(nn)
    };
    // the integrand peaks near s = max(0, -Re z) + sqrt(n) and decays like a Gaussian
    let peak = (-z.re).max(0.0) + (n as f64).sqrt();
    let upper = peak + 40.0;
    let panels = (2.0 * upper * (1.0 + z.im.abs())).ceil().max(16.0) as usize;
    gauss_legendre_panels(&f, 0.0, upper, panels, 20) / fact
}

/// `phi_n(t; c)` for `n >= -1`, `Re t > 0`, `c >= 0`.
pub fn phi(n: i32, t: C64, c: f64) -> Result<C64> {
    Ok(phi_all(n, t, c)?[(n + 1) as usize])
}

/// `phi_n(t; c)` for real `t > 0`.
pub fn phi_real(n: i32, t: f64, c: f64) -> Result<f64> {
    Ok(phi(n, C64::new(t, 0.0), c)?.re)
}

/// `[phi_{-1}(t;c), phi_0(t;c), ..., phi_nmax(t;c)]`.
pub fn phi_all(nmax: i32, t: C64, c: f64) -> Result<Vec<C64>> {
    if !(t.re > 0.0) {
        return Err(Error::DomainError(t.re));
    }
    let root = (t * 2.0).sqrt();
    let sqrt_t = t.sqrt();
    let hh = if c == 0.0 {
        hh_forward((nmax + 2).max(1) as usize, C64::new(0.0, 0.0))
    } else {
        hh_all(nmax, C64::new(c, 0.0) / root)
    };
    let mut out = Vec::with_capacity(hh.len());
    // 2^{(n+1)/2} t^{n/2} / sqrt(pi), starting at n = -1
    let mut pref = C64::new(1.0 / PI.sqrt(), 0.0) / sqrt_t;
    let step = sqrt_t * 2f64.sqrt();
    for h in hh {
        out.push(pref * h);
        pref *= step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::tgamma as gamma;

    #[test]
    fn hh0_at_origin_is_half_gaussian_mass() {
        assert!((hh_real(0, 0.0) - (PI / 2.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn miller_agrees_with_quadrature() {
        for &x in &[0.1, 0.5, 1.3, 4.0, 12.0] {
            for n in [0, 1, 2, 5, 10, 20] {
                let want = hh_by_quadrature(n, C64::new(x, 0.0));
                let got = hh(n, C64::new(x, 0.0));
                assert!(((got - want) / want).norm() < 1e-9, "x={x} n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn complex_argument_matches_quadrature() {
        for &z in &[C64::new(0.05, 0.3), C64::new(1.2, -0.7), C64::new(-0.4, 0.5)] {
            for n in [0, 3, 7] {
                let want = hh_by_quadrature(n, z);
                let got = hh(n, z);
                assert!(((got - want) / want).norm() < 1e-9, "z={z} n={n}");
            }
        }
    }

    #[test]
    fn phi_without_shift_is_a_power() {
        for n in -1..=12 {
            let t: f64 = 0.37;
            let want = t.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0);
            let got = phi_real(n, t, 0.0).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn phi_rejects_nonpositive_time() {
        assert!(matches!(phi_real(1, 0.0, 1.0), Err(Error::DomainError(_))));
    }
}
