//! Band-gain estimates from mapped ∞-norms against the sampled band gain,
//! for four low-frequency bands.

use ffmor::analysis::{band_gain_bound, band_sup};
use ffmor::mapping::{admissible_interval, Flavor, FormulaVariant};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example1();
    for wl in [0.1, 1.0, 10.0, 100.0] {
        let band = FrequencyRange::low(wl)?;
        let actual = band_sup(&m, &band, 600)?;
        println!("band {band}: sampled gain {actual:.6}");
        let iv = admissible_interval(m.a(), Flavor::Upper, &band, FormulaVariant::Consistent)?;
        for k in -1..=3 {
            let rho = iv.threshold() + wl * 10f64.powi(k);
            println!("  rho {rho:>10.4}: estimate {:.6}", band_gain_bound(&m, &band, rho, Flavor::Upper)?);
        }
    }
    Ok(())
}
