//! Dense numerical kernels.
//!
//! Everything here operates on complex matrices. Real-valued inputs are
//! detected (all imaginary parts exactly zero) and routed through real
//! arithmetic where it matters for keeping results real, e.g. Hermitian
//! eigendecompositions and Gramian factors of real systems.

mod decomp;
mod lyapunov;

pub use decomp::{
    cholesky_psd, eig_hermitian, eigenvalues_general, spectral_abscissa, spectral_radius,
    HermitianEigen,
};
pub use lyapunov::{
    lyapunov_factor_continuous, lyapunov_factor_discrete, solve_lyapunov_continuous,
    solve_lyapunov_discrete, LyapunovSolution,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMat = DMatrix<Complex64>;

/// Condition estimates above this are treated as singular.
pub const SINGULAR_CONDITION: f64 = 1.0 / f64::EPSILON;

#[inline]
pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// True when every imaginary part is exactly zero.
pub fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

pub fn real_part(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> DMatrix<f64> {
    m.map(|z| z.im)
}

pub fn strip_imag(m: &mut CMat) {
    for z in m.iter_mut() {
        z.im = 0.0;
    }
}

/// (M + M*)/2
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest singular value.
pub fn sigma_max(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone().singular_values().max()
}

fn one_norm(m: &CMat) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `m x = rhs` by LU and returns the solution with a cheap
/// condition estimate (pivot ratio combined with the solution growth).
pub fn solve_with_condition(m: &CMat, rhs: &CMat) -> (Option<CMat>, f64) {
    let n = m.nrows();
    if n == 0 {
        return (Some(rhs.clone()), 1.0);
    }
    let lu = m.clone().lu();
    let u = lu.u();
    let (mut dmin, mut dmax) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let d = u[(i, i)].norm();
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    if dmin == 0.0 || !dmin.is_finite() {
        return (None, f64::INFINITY);
    }
    let pivot_cond = dmax / dmin;
    let Some(x) = lu.solve(rhs) else {
        return (None, f64::INFINITY);
    };
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return (None, f64::INFINITY);
    }
    let rn = one_norm(rhs);
    let growth = if rn > 0.0 { one_norm(m) * one_norm(&x) / rn } else { 0.0 };
    (Some(x), pivot_cond.max(growth))
}

/// Solves `m x = rhs`, reporting `SingularShift` when `m` is numerically
/// singular. `at` describes the shift for the error message.
pub fn shifted_solve(m: &CMat, rhs: &CMat, at: impl FnOnce() -> String) -> Result<CMat> {
    match solve_with_condition(m, rhs) {
        (Some(x), cond) if cond < SINGULAR_CONDITION => Ok(x),
        (_, cond) => Err(Error::SingularShift { at: at(), condition: cond }),
    }
}

/// Inverse via LU with the same singularity contract as [`shifted_solve`].
pub fn inverse(m: &CMat, at: impl FnOnce() -> String) -> Result<CMat> {
    shifted_solve(m, &identity(m.nrows()), at)
}

/// Solves `(alpha T + beta I) x = rhs` for upper-triangular `T`.
pub(crate) fn solve_upper_shifted(
    t: &CMat,
    alpha: Complex64,
    beta: Complex64,
    rhs: &[Complex64],
) -> Vec<Complex64> {
    let n = rhs.len();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for k in i + 1..n {
            acc -= alpha * t[(i, k)] * x[k];
        }
        x[i] = acc / (alpha * t[(i, i)] + beta);
    }
    x
}

/// Real square factor `R` with `R Rᵀ = Re(L L*)`, obtained from a QR
/// factorisation of `[Re L, Im L]ᵀ`. Keeps Gramian factors of real systems
/// real without forming the Gramian.
pub(crate) fn real_factor(l: &CMat) -> CMat {
    let n = l.nrows();
    let k = l.ncols();
    let mut stacked = DMatrix::<f64>::zeros(n, 2 * k);
    for j in 0..k {
        for i in 0..n {
            stacked[(i, j)] = l[(i, j)].re;
            stacked[(i, k + j)] = l[(i, j)].im;
        }
    }
    let r = stacked.transpose().qr().r();
    // r is min(2k, n) x n; pad to n x n.
    let mut out = DMatrix::<f64>::zeros(n, n);
    for i in 0..r.nrows().min(n) {
        for j in 0..n {
            out[(j, i)] = r[(i, j)];
        }
    }
    to_complex(&out)
}

/// Columns of a unitary matrix whose first column is the unit vector `v`.
pub(crate) fn unitary_completion(v: &[Complex64]) -> CMat {
    let m = v.len();
    let mut cols: Vec<Vec<Complex64>> = vec![v.to_vec()];
    for e in 0..m {
        if cols.len() == m {
            break;
        }
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        w[e] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for c in &cols {
                let dot: Complex64 = c.iter().zip(&w).map(|(ci, wi)| ci.conj() * wi).sum();
                for (wi, ci) in w.iter_mut().zip(c) {
                    *wi -= dot * ci;
                }
            }
        }
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.5 {
            cols.push(w.into_iter().map(|z| z / nrm).collect());
        }
    }
    CMat::from_fn(m, m, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_factor_matches_real_part_of_gramian() {
        let l = CMat::from_fn(4, 3, |i, j| cplx((i + 2 * j) as f64 - 2.5, (i * j) as f64 * 0.3 - 0.4));
        let r = real_factor(&l);
        assert!(is_real(&r));
        let want = (&l * l.adjoint()).map(|z| cplx(z.re, 0.0));
        assert!((&r * r.adjoint() - want).norm() < 1e-12 * l.norm().powi(2));
    }

    #[test]
    fn unitary_completion_is_unitary() {
        let v = [cplx(0.6, 0.0), cplx(0.0, 0.8), cplx(0.0, 0.0)];
        let h = unitary_completion(&v);
        assert!((h.adjoint() * &h - identity(3)).norm() < 1e-14);
        assert_eq!(h[(1, 0)], v[1]);
    }

    #[test]
    fn singular_shift_detected() {
        let m = CMat::from_fn(2, 2, |_, _| cplx(1.0, 0.0));
        assert!(matches!(inverse(&m, || "test".into()), Err(Error::SingularShift { .. })));
    }
}
