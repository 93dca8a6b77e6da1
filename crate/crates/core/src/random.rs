//! Seeded random test systems.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{eigenvalues_general, to_complex};
use crate::model::{StateSpaceModel, TimeDomain};

fn randn(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Random stable continuous-time model: Gaussian matrices with `A` shifted
/// so its spectral abscissa lies in `[-1, -0.1]`.
pub fn stable_continuous(n: usize, m: usize, p: usize, seed: u64) -> StateSpaceModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = randn(&mut rng, n, n);
    let abscissa = eigenvalues_general(&to_complex(&a))
        .expect("eigenvalues of a random matrix")
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = rng.random_range(0.1..1.0);
    for i in 0..n {
        a[(i, i)] -= abscissa + margin;
    }
    let b = randn(&mut rng, n, m);
    let c = randn(&mut rng, p, n);
    let d = randn(&mut rng, p, m);
    StateSpaceModel::from_real(a, b, c, d, TimeDomain::Continuous).expect("consistent dimensions")
}

/// Random Schur-stable discrete-time model with spectral radius in
/// `[0.3, 0.95]`.
pub fn stable_discrete(n: usize, m: usize, p: usize, seed: u64) -> StateSpaceModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = randn(&mut rng, n, n);
    let radius = eigenvalues_general(&to_complex(&a))
        .expect("eigenvalues of a random matrix")
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max);
    let target = rng.random_range(0.3..0.95);
    let a = a * (target / radius.max(f64::MIN_POSITIVE));
    let b = randn(&mut rng, n, m);
    let c = randn(&mut rng, p, n);
    let d = randn(&mut rng, p, m);
    StateSpaceModel::from_real(a, b, c, d, TimeDomain::Discrete).expect("consistent dimensions")
}

/// Random real invertible matrix `I + 0.5 X / sqrt(n)` with Gaussian `X`,
/// used as a similarity transform.
pub fn similarity(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DMatrix::identity(n, n) + randn(&mut rng, n, n) * (0.5 / (n as f64).sqrt())
}
