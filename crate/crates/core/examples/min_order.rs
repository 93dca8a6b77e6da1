//! Smallest order meeting an error tolerance: entire-range bound against the
//! low-frequency bound.

use ffmor::pfdbt::{min_order_ef, min_order_for_tolerance, Routing};
use ffmor::{fixtures, Error, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    let band = FrequencyRange::low(1.0)?;
    for tol in [1e-1, 1e-2, 1e-3, 1e-5, 1e-9] {
        let ef = min_order_ef(&m, tol);
        let ff = min_order_for_tolerance(&m, band, 4.0, Routing::R1, tol);
        let show = |r: ffmor::Result<ffmor::pfdbt::MinOrder>| match r {
            Ok(x) => format!("{} (bound {:.2e})", x.order, x.bound),
            Err(Error::NotAchievable { .. }) => "not achievable".to_string(),
            Err(e) => e.to_string(),
        };
        println!("tol {tol:.0e}: balanced truncation {}, PFDBT on {band} {}", show(ef), show(ff));
    }
    Ok(())
}
