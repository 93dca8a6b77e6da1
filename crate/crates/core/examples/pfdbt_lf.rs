//! Low-frequency reduction with both routings; the in-band error stays below
//! the a priori bound.

use ffmor::analysis::{band_sup, error_system};
use ffmor::pfdbt::{pfdbt_lf, Routing};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    let band = FrequencyRange::low(1.0)?;
    for (routing, rho) in [(Routing::R1, 4.0), (Routing::R2, -4.0)] {
        println!("{routing}, rho = {rho}");
        for r in 1..m.n() {
            let res = pfdbt_lf(&m, band, rho, r, routing)?;
            let err = band_sup(&error_system(&m, &res.reduced)?, &band, 600)?;
            println!("  r = {r}: in-band error {err:.4e} <= bound {:.4e}, stable {}", res.bound, res.is_stable());
        }
    }
    Ok(())
}
