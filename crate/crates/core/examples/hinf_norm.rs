//! ∞-norm of continuous and discrete models.

use ffmor::analysis::hinf_norm;
use ffmor::{fixtures, random};

fn main() -> ffmor::Result<()> {
    for (name, m) in [("example1", fixtures::example1()), ("example2", fixtures::example2()), ("random discrete", random::stable_discrete(6, 2, 2, 3))] {
        let h = hinf_norm(&m)?;
        println!("{name}: gamma = {:.8} at {:.6}", h.gamma, h.omega_peak);
    }
    Ok(())
}
