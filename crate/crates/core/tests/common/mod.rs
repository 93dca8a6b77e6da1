//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use ffmor::linalg::{cplx, identity, CMat};
use ffmor::StateSpaceModel;
use num_complex::Complex64;

/// Solves `A P + P A* + W = 0` (continuous) or `A P A* - P + W = 0`
/// (discrete) by column-stacking into an n²×n² dense system.
pub fn kronecker_lyapunov(a: &CMat, w: &CMat, discrete: bool) -> CMat {
    let n = a.nrows();
    let nn = n * n;
    let mut k = CMat::zeros(nn, nn);
    // vec(A P B) = (Bᵀ ⊗ A) vec(P)
    let ac = a.map(|z| z.conj());
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                for c in 0..n {
                    let row = j * n + i;
                    let col = c * n + r;
                    let mut v = Complex64::new(0.0, 0.0);
                    if discrete {
                        // A P A*: (conj(A) ⊗ A)
                        v += ac[(j, c)] * a[(i, r)];
                        if row == col {
                            v -= 1.0;
                        }
                    } else {
                        if j == c {
                            v += a[(i, r)];
                        }
                        if i == r {
                            v += ac[(j, c)];
                        }
                    }
                    k[(row, col)] = v;
                }
            }
        }
    }
    let rhs = CMat::from_fn(nn, 1, |idx, _| -w[(idx % n, idx / n)]);
    let x = k.lu().solve(&rhs).expect("Kronecker system is nonsingular");
    CMat::from_fn(n, n, |i, j| x[(j * n + i, 0)])
}

/// `C (xI - A)^-1 B + D` through an explicit dense inverse.
pub fn dense_inverse_transfer(model: &StateSpaceModel, x: Complex64) -> CMat {
    let n = model.n();
    let m = identity(n) * x - model.a();
    let inv = m.try_inverse().expect("invertible");
    model.c() * inv * model.b() + model.d()
}

pub fn jw(w: f64) -> Complex64 {
    cplx(0.0, w)
}

pub fn rel_err(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Log-spaced points between `lo` and `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect()
}

/// `count` admissible ρ spread logarithmically away from the threshold.
pub fn rho_spread(iv: &ffmor::mapping::RhoInterval, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (l, u) = (iv.lower, iv.upper);
    if l.is_finite() && u.is_finite() {
        let w = u - l;
        return (1..=count).map(|i| l + w * i as f64 / (count + 1) as f64).collect();
    }
    let t = iv.threshold();
    logspace(lo, hi, count)
        .into_iter()
        .map(|d| if iv.opens_upward() { t + d } else { t - d })
        .collect()
}
