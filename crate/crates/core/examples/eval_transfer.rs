//! Frequency response of the two-state fixture model.

use ffmor::fixtures;
use ffmor::linalg::cplx;

fn main() -> ffmor::Result<()> {
    let m = fixtures::example1();
    let g0 = m.eval_transfer(cplx(0.0, 0.0))?;
    println!("G(0) = {:.6}", g0[(0, 0)]);
    for w in [0.01, 0.1, 1.0, 10.0, 100.0] {
        println!("w = {w:>7}: |G(jw)| = {:.6}", m.sigma_at(w)?);
    }
    Ok(())
}
