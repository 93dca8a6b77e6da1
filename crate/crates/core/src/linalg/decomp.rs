use nalgebra::{Schur, SymmetricEigen};
use num_complex::Complex64;

use super::{hermitian_part, is_real, real_part, to_complex, CMat};
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_DIM: usize = 1000;

/// Eigenvalues in descending order with matching orthonormal eigenvectors
/// stored column-wise.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// Real symmetric input is decomposed in real arithmetic so eigenvectors
/// come back real.
pub fn eig_hermitian(m: &CMat) -> Result<HermitianEigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch {
            matrix: "M".into(),
            detail: format!("expected square, got {}x{}", n, m.ncols()),
        });
    }
    if n == 0 {
        return Ok(HermitianEigen { values: vec![], vectors: CMat::zeros(0, 0) });
    }
    let h = hermitian_part(m);
    let max_iter = MAX_SWEEPS_PER_DIM * n;
    let (values, vectors) = if is_real(&h) {
        let eig = SymmetricEigen::try_new(real_part(&h), f64::EPSILON, max_iter).ok_or_else(
            || Error::NoConvergence {
                what: "symmetric eigensolver".into(),
                residual: f64::NAN,
                target: f64::EPSILON,
            },
        )?;
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), to_complex(&eig.eigenvectors))
    } else {
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, max_iter).ok_or_else(|| {
            Error::NoConvergence {
                what: "Hermitian eigensolver".into(),
                residual: f64::NAN,
                target: f64::EPSILON,
            }
        })?;
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = CMat::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(HermitianEigen { values: sorted_values, vectors: sorted_vectors })
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues_general(a: &CMat) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            matrix: "A".into(),
            detail: format!("expected square, got {}x{}", n, a.ncols()),
        });
    }
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, MAX_SWEEPS_PER_DIM * n).ok_or_else(|| {
        Error::NoConvergence {
            what: "Schur decomposition".into(),
            residual: f64::NAN,
            target: f64::EPSILON,
        }
    })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Largest real part of the spectrum.
pub fn spectral_abscissa(a: &CMat) -> Result<f64> {
    Ok(eigenvalues_general(a)?.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &CMat) -> Result<f64> {
    Ok(eigenvalues_general(a)?.iter().map(|l| l.norm()).fold(0.0, f64::max))
}

/// Factor `U` with `P = U U*` for a Hermitian positive semidefinite `P`.
///
/// Positive definite input gets the lower Cholesky factor. Singular or
/// slightly indefinite input (eigenvalues down to `-1e-8 ‖P‖`) falls back
/// to an eigen-based factor of the same numerical rank, with negative
/// roundoff eigenvalues clipped to zero.
pub fn cholesky_psd(p: &CMat) -> Result<CMat> {
    let n = p.nrows();
    let h = hermitian_part(p);
    let scale = h.norm();
    if n == 0 || scale == 0.0 {
        return Ok(CMat::zeros(n, n));
    }
    let eig = eig_hermitian(&h)?;
    let min = *eig.values.last().unwrap();
    if min < -1e-8 * scale {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    if min > 1e-12 * scale {
        let chol = if is_real(&h) {
            real_part(&h).cholesky().map(|c| to_complex(&c.unpack()))
        } else {
            h.clone().cholesky().map(|c| c.unpack())
        };
        if let Some(l) = chol {
            return Ok(l);
        }
    }
    let mut u = eig.vectors.clone();
    for (j, &lam) in eig.values.iter().enumerate() {
        let s = lam.max(0.0).sqrt();
        for i in 0..n {
            u[(i, j)] *= s;
        }
    }
    Ok(u)
}
