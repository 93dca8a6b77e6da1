//! High-frequency reduction above ϖ_h = 2 rad/s.

use ffmor::analysis::{band_sup, error_system};
use ffmor::pfdbt::{admissible_rho, pfdbt_hf, Routing};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    let band = FrequencyRange::high(2.0)?;
    let iv = admissible_rho(&m, &band, Routing::R1)?;
    let rho = iv.threshold() + 10.0;
    println!("admissible rho > {:.4}; using {rho:.4}", iv.threshold());
    for r in 1..m.n() {
        let res = pfdbt_hf(&m, band, rho, r, Routing::R1)?;
        let err = band_sup(&error_system(&m, &res.reduced)?, &band, 600)?;
        println!("r = {r}: error for |w| >= 2 is {err:.4e}, bound {:.4e}", res.bound);
    }
    Ok(())
}
