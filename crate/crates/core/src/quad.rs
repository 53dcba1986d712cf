//! Small quadrature helpers used by the special functions and as reference
//! integrators in tests.

use std::f64::consts::PI;

use crate::series::C64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre quadrature with `panels` equal panels of
/// `order` points each.
pub fn gauss_legendre_panels<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        let mut part = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            part += f(mid + 0.5 * h * xi) * *wi;
        }
        acc += part * (0.5 * h);
    }
    acc
}

/// Adaptive Simpson quadrature of a complex integrand on `[a, b]` with an
/// absolute tolerance and a bounded recursion depth.
pub fn adaptive_simpson<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, tol: f64) -> C64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    simpson_step(f, a, b, (fa, fm, fb), whole, tol, 30)
}

fn simpson_step<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    (fa, fm, fb): (C64, C64, C64),
    whole: C64,
    tol: f64,
    depth: u32,
) -> C64 {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let diff = left + right - whole;
    if depth == 0 || diff.norm() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson_step(f, a, m, (fa, flm, fm), left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, (fm, frm, fb), right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_a_gaussian() {
        let f = |x: f64| C64::new((-0.5 * x * x).exp(), 0.0);
        let want = (PI / 2.0).sqrt();
        let got = gauss_legendre_panels(&f, 0.0, 40.0, 40, 20);
        assert!((got.re - want).abs() < 1e-14);
        let got = adaptive_simpson(&f, 0.0, 40.0, 1e-12);
        assert!((got.re - want).abs() < 1e-10);
    }
}
