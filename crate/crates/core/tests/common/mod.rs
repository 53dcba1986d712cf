#![allow(dead_code)]

use hyperlev::fixtures::load_set;
use hyperlev::roots::numeric_roots_real;
use hyperlev::HyperExpParams;
use proptest::prelude::*;

pub fn set1(r: f64) -> HyperExpParams {
    load_set("set1").unwrap().params(None, r).unwrap()
}

pub fn set2(r: f64) -> HyperExpParams {
    load_set("set2").unwrap().params(None, r).unwrap()
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!((got - want).abs() <= tol, "{what}: got {got}, want {want} (tol {tol})");
}

/// Increasing rates built from positive gaps.
fn rates(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.5f64..20.0, n).prop_map(|gaps| {
        let mut acc = 0.5;
        gaps.iter()
            .map(|g| {
                acc += g;
                acc
            })
            .collect()
    })
}

fn jumps(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    (0..=max)
        .prop_flat_map(|n| (prop::collection::vec(0.01f64..3.0, n), rates(n)))
        .prop_map(|(w, r)| w.into_iter().zip(r).collect())
}

pub fn random_params() -> impl Strategy<Value = HyperExpParams> {
    (prop_oneof![Just(0.0), 0.01f64..0.5], -2.0f64..2.0, jumps(6), jumps(6))
        .prop_filter_map("needs a well-posed model", |(sigma, a, pos, neg)| {
            HyperExpParams::new(sigma, a, pos, neg).ok()
        })
}

/// `1/(1 + a_1 z + a_2 z^2 + ...)` through `z^n` by the Hessenberg determinant.
pub fn determinant_reciprocal(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for m in 1..=n {
        let mut mat = vec![vec![0.0; m]; m];
        for (i, row) in mat.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                if j <= i + 1 {
                    let idx = i + 1 - j;
                    *slot = if idx == 0 {
                        1.0
                    } else {
                        a.get(idx).copied().unwrap_or(0.0)
                    };
                }
            }
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        out.push(sign * det(mat));
    }
    out
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            d = -d;
        }
        d *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    d
}

/// Checks root counts, interlacing with the poles and the residual at real `q`.
pub fn interlacing(p: &HyperExpParams, q: f64) -> Result<(), String> {
    let roots = numeric_roots_real(p, q).map_err(|e| e.to_string())?;
    let (m, mh) = p.root_counts();
    if roots.pos.len() != m || roots.neg.len() != mh {
        return Err(format!(
            "root counts {}/{} instead of {m}/{mh}",
            roots.pos.len(),
            roots.neg.len()
        ));
    }
    for (side, found, poles) in [("pos", &roots.pos, &p.pos_jumps), ("neg", &roots.neg, &p.neg_jumps)] {
        let mut lo = 0.0;
        for (j, &z) in found.iter().enumerate() {
            let hi = poles.get(j).map_or(f64::INFINITY, |&(_, rho)| rho);
            if !(z > lo && z < hi) {
                return Err(format!("{side} root {}: {z} not in ({lo}, {hi})", j + 1));
            }
            lo = hi;
        }
    }
    for z in roots.sorted() {
        let scale = p.psi_deriv_real(z).abs().max(1.0);
        if (p.psi_real(z) - q).abs() >= 1e-9 * scale * q.max(1.0) {
            return Err(format!("psi({z}) != {q}"));
        }
    }
    Ok(())
}
