//! Gramians by the Schur-based solvers, plus a low-rank factor.

use ffmor::linalg::{lyapunov_factor_continuous, solve_lyapunov_continuous, solve_lyapunov_discrete};
use ffmor::random;

fn main() -> ffmor::Result<()> {
    let m = random::stable_continuous(5, 2, 1, 7);
    let w = m.b() * m.b().adjoint();
    let sol = solve_lyapunov_continuous(m.a(), &w)?;
    println!("continuous: residual {:.2e}", sol.residual_norm);
    let l = lyapunov_factor_continuous(m.a(), m.b())?;
    let err = (&l * l.adjoint() - &sol.p).norm() / sol.p.norm();
    println!("factor L L* reproduces P to {err:.2e}");

    let d = random::stable_discrete(5, 2, 1, 7);
    let sol = solve_lyapunov_discrete(d.a(), &(d.b() * d.b().adjoint()))?;
    println!("discrete: residual {:.2e}", sol.residual_norm);
    Ok(())
}
