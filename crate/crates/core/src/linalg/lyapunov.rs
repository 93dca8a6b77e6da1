//! Lyapunov and Stein equation solvers on the complex Schur form.
//!
//! `solve_lyapunov_*` return the full solution `P` for a general Hermitian
//! right-hand side (Bartels–Stewart back-substitution). The `*_factor_*`
//! variants take `W = B B*` in factored form and return `L` with `P = L L*`
//! directly (Hammarling), which keeps small Gramian directions accurate.

use nalgebra::Schur;
use num_complex::Complex64;

use super::{
    hermitian_part, identity, is_real, real_factor, solve_upper_shifted, strip_imag,
    unitary_completion, CMat,
};
use crate::error::{Error, Result};

const STABILITY_MARGIN: f64 = 1e-12;
const RESIDUAL_TARGET: f64 = 1e-10;
const REFINEMENT_STEPS: usize = 3;

/// Solution of a Lyapunov/Stein equation with its measured residual.
#[derive(Debug, Clone)]
pub struct LyapunovSolution {
    pub p: CMat,
    /// Frobenius norm of the equation residual at `p`.
    pub residual_norm: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Continuous,
    Discrete,
}

fn check_square(a: &CMat, w: &CMat) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            matrix: "A".into(),
            detail: format!("expected square, got {}x{}", n, a.ncols()),
        });
    }
    if w.nrows() != n || w.ncols() != n {
        return Err(Error::DimensionMismatch {
            matrix: "W".into(),
            detail: format!("expected {n}x{n}, got {}x{}", w.nrows(), w.ncols()),
        });
    }
    Ok(())
}

fn schur(a: &CMat) -> Result<(CMat, CMat)> {
    let n = a.nrows();
    if n == 1 {
        return Ok((identity(1), a.clone()));
    }
    let s = Schur::try_new(a.clone(), f64::EPSILON, 1000 * n).ok_or_else(|| {
        Error::NoConvergence {
            what: "Schur decomposition".into(),
            residual: f64::NAN,
            target: f64::EPSILON,
        }
    })?;
    Ok(s.unpack())
}

fn check_stable(t: &CMat, kind: Kind) -> Result<()> {
    for i in 0..t.nrows() {
        let l = t[(i, i)];
        match kind {
            Kind::Continuous if l.re >= -STABILITY_MARGIN => {
                return Err(Error::NotStable(format!("eigenvalue {l} has Re >= 0")));
            }
            Kind::Discrete if l.norm() >= 1.0 - STABILITY_MARGIN => {
                return Err(Error::NotStable(format!("eigenvalue {l} has modulus >= 1")));
            }
            _ => {}
        }
    }
    Ok(())
}

fn residual(a: &CMat, p: &CMat, w: &CMat, kind: Kind) -> CMat {
    match kind {
        Kind::Continuous => a * p + p * a.adjoint() + w,
        Kind::Discrete => a * p * a.adjoint() - p + w,
    }
}

/// Triangular solve of `T X + X T* + F = 0` or `T X T* - X + F = 0`.
fn triangular_solve(t: &CMat, f: &CMat, kind: Kind) -> CMat {
    let n = t.nrows();
    let mut x = CMat::zeros(n, n);
    for j in (0..n).rev() {
        // tail = sum_{k>j} conj(T[j,k]) x_k
        let mut tail = vec![Complex64::new(0.0, 0.0); n];
        for k in j + 1..n {
            let c = t[(j, k)].conj();
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                tail[i] += c * x[(i, k)];
            }
        }
        let tjj = t[(j, j)].conj();
        let x_j = match kind {
            Kind::Continuous => {
                let rhs: Vec<_> = (0..n).map(|i| -f[(i, j)] - tail[i]).collect();
                solve_upper_shifted(t, Complex64::new(1.0, 0.0), tjj, &rhs)
            }
            Kind::Discrete => {
                let rhs: Vec<_> = (0..n)
                    .map(|i| {
                        let mut ti = Complex64::new(0.0, 0.0);
                        for k in i..n {
                            ti += t[(i, k)] * tail[k];
                        }
                        -f[(i, j)] - ti
                    })
                    .collect();
                solve_upper_shifted(t, tjj, Complex64::new(-1.0, 0.0), &rhs)
            }
        };
        for i in 0..n {
            x[(i, j)] = x_j[i];
        }
    }
    x
}

fn solve(a: &CMat, w: &CMat, kind: Kind) -> Result<LyapunovSolution> {
    check_square(a, w)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(LyapunovSolution { p: CMat::zeros(0, 0), residual_norm: 0.0 });
    }
    let (q, t) = schur(a)?;
    check_stable(&t, kind)?;
    let keep_real = is_real(a) && is_real(w);
    let w = hermitian_part(w);
    let target = RESIDUAL_TARGET * w.norm().max(1.0);

    let qh = q.adjoint();
    let mut p = CMat::zeros(n, n);
    let mut rhs = w.clone();
    let mut res_norm = f64::INFINITY;
    for _ in 0..=REFINEMENT_STEPS {
        let x = triangular_solve(&t, &(&qh * &rhs * &q), kind);
        p += &q * x * &qh;
        p = hermitian_part(&p);
        if keep_real {
            strip_imag(&mut p);
        }
        let r = residual(a, &p, &w, kind);
        let r_norm = r.norm();
        if r_norm >= res_norm {
            break;
        }
        res_norm = r_norm;
        if res_norm <= target * 1e-3 {
            break;
        }
        rhs = r;
    }
    if !(res_norm <= target) {
        return Err(Error::NoConvergence {
            what: "Lyapunov solver".into(),
            residual: res_norm,
            target,
        });
    }
    Ok(LyapunovSolution { p, residual_norm: res_norm })
}

/// Solves `A P + P A* + W = 0` for Hurwitz `A` and Hermitian `W`.
pub fn solve_lyapunov_continuous(a: &CMat, w: &CMat) -> Result<LyapunovSolution> {
    solve(a, w, Kind::Continuous)
}

/// Solves `A P A* - P + W = 0` for Schur-stable `A` and Hermitian `W`.
pub fn solve_lyapunov_discrete(a: &CMat, w: &CMat) -> Result<LyapunovSolution> {
    solve(a, w, Kind::Discrete)
}

/// Hammarling recursion on upper-triangular `t`; returns upper-triangular
/// `U` with `t U U* + U U* t* + b b* = 0` (continuous) or
/// `t U U* t* - U U* + b b* = 0` (discrete).
fn hammarling(t: &CMat, b: &CMat, kind: Kind) -> CMat {
    let n = t.nrows();
    let m = b.ncols();
    let zero = Complex64::new(0.0, 0.0);
    let mut u = CMat::zeros(n, n);
    let mut bcur = b.clone();
    for k in (0..n).rev() {
        let tau = t[(k, k)];
        let row: Vec<Complex64> = (0..m).map(|j| bcur[(k, j)]).collect();
        let nb = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let denom = match kind {
            Kind::Continuous => -2.0 * tau.re,
            Kind::Discrete => 1.0 - tau.norm_sqr(),
        };
        let nu = nb / denom.sqrt();
        u[(k, k)] = Complex64::new(nu, 0.0);
        if k == 0 {
            break;
        }
        let t1 = t.view((0, 0), (k, k)).clone_owned();
        if nu == 0.0 {
            bcur = bcur.rows(0, k).clone_owned();
            continue;
        }
        // B1 b, where b* is the current last row
        let b1 = bcur.rows(0, k).clone_owned();
        let b1b: Vec<Complex64> = (0..k)
            .map(|i| (0..m).map(|j| b1[(i, j)] * row[j].conj()).sum())
            .collect();
        let xi = nu * nu;
        let x = match kind {
            Kind::Continuous => {
                let rhs: Vec<_> = (0..k).map(|i| -b1b[i] - t[(i, k)] * xi).collect();
                solve_upper_shifted(&t1, Complex64::new(1.0, 0.0), tau.conj(), &rhs)
            }
            Kind::Discrete => {
                let rhs: Vec<_> = (0..k).map(|i| -b1b[i] - tau.conj() * t[(i, k)] * xi).collect();
                solve_upper_shifted(&t1, tau.conj(), Complex64::new(-1.0, 0.0), &rhs)
            }
        };
        let uvec: Vec<Complex64> = x.iter().map(|z| z / nu).collect();
        for i in 0..k {
            u[(i, k)] = uvec[i];
        }
        bcur = match kind {
            Kind::Continuous => {
                let mut next = b1;
                for i in 0..k {
                    for j in 0..m {
                        next[(i, j)] -= uvec[i] * row[j] / nu;
                    }
                }
                next
            }
            Kind::Discrete => {
                let c = denom.sqrt();
                // w = T1 u + t nu
                let w: Vec<Complex64> = (0..k)
                    .map(|i| {
                        let mut s = t[(i, k)] * nu;
                        for l in i..k {
                            s += t1[(i, l)] * uvec[l];
                        }
                        s
                    })
                    .collect();
                let beta: Vec<Complex64> = row.iter().map(|z| z.conj() / nb).collect();
                let h = unitary_completion(&beta);
                let mut next = CMat::zeros(k, m);
                for i in 0..k {
                    let mut b1beta = zero;
                    for j in 0..m {
                        b1beta += b1[(i, j)] * beta[j];
                    }
                    next[(i, 0)] = w[i] * c - tau * b1beta;
                    for col in 1..m {
                        let mut s = zero;
                        for j in 0..m {
                            s += b1[(i, j)] * h[(j, col)];
                        }
                        next[(i, col)] = s;
                    }
                }
                next
            }
        };
    }
    u
}

fn factor(a: &CMat, b: &CMat, kind: Kind) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            matrix: "A".into(),
            detail: format!("expected square, got {}x{}", n, a.ncols()),
        });
    }
    if b.nrows() != n {
        return Err(Error::DimensionMismatch {
            matrix: "B".into(),
            detail: format!("expected {n} rows, got {}", b.nrows()),
        });
    }
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let (q, t) = schur(a)?;
    check_stable(&t, kind)?;
    let u = hammarling(&t, &(q.adjoint() * b), kind);
    let l = q * u;
    let l = if is_real(a) && is_real(b) { real_factor(&l) } else { l };

    let p = &l * l.adjoint();
    let w = b * b.adjoint();
    let r = residual(a, &p, &w, kind).norm();
    // Backward-error criterion: the residual is measured relative to the
    // magnitude of the terms that were summed.
    let scale = match kind {
        Kind::Continuous => w.norm() + 2.0 * a.norm() * p.norm(),
        Kind::Discrete => w.norm() + (a.norm().powi(2) + 1.0) * p.norm(),
    };
    let target = RESIDUAL_TARGET * scale.max(f64::MIN_POSITIVE);
    if !(r <= target) {
        return Err(Error::NoConvergence {
            what: "Hammarling factor solver".into(),
            residual: r,
            target,
        });
    }
    Ok(l)
}

/// Factor `L` with `A L L* + L L* A* + B B* = 0` for Hurwitz `A`.
///
/// Real `A` and `B` give a real `L`.
pub fn lyapunov_factor_continuous(a: &CMat, b: &CMat) -> Result<CMat> {
    factor(a, b, Kind::Continuous)
}

/// Factor `L` with `A L L* A* - L L* + B B* = 0` for Schur-stable `A`.
pub fn lyapunov_factor_discrete(a: &CMat, b: &CMat) -> Result<CMat> {
    factor(a, b, Kind::Discrete)
}
