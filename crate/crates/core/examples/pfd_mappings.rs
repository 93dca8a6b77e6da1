//! The eight frequency-dependent mappings: admissible ρ, the mapped model's
//! time domain and a forward/inverse round trip.

use ffmor::analysis::sigma_sweep;
use ffmor::linalg::sigma_max;
use ffmor::mapping::{admissible_interval, apply_map, invert_map, Flavor, FormulaVariant, PfdMapKind};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    for band in [FrequencyRange::low(1.0)?, FrequencyRange::high(2.0)?] {
        for flavor in Flavor::ALL {
            let iv = admissible_interval(m.a(), flavor, &band, FormulaVariant::Consistent)?;
            let rho = if iv.opens_upward() { iv.threshold() + 1.0 } else { iv.threshold() - 1.0 };
            let kind = PfdMapKind::new(flavor, band, rho);
            let mapped = apply_map(&m, kind)?;
            let back = invert_map(&mapped.model, &kind)?;
            let mut dev: f64 = 0.0;
            for &(w, _) in sigma_sweep(&m, &band, 50)?.points() {
                dev = dev.max(sigma_max(&(m.freq_response(w)? - back.freq_response(w)?)));
            }
            println!(
                "{band:>6} {flavor:>5}: rho in ({:.3}, {:.3}), using {rho:.3}, mapped {:?}, scale {:.3}, round trip {dev:.1e}",
                iv.lower,
                iv.upper,
                mapped.model.time_domain(),
                kind.scale()?
            );
        }
    }
    Ok(())
}
