//! Entire-range balanced truncation and singular perturbation on the
//! six-state fixture, with the 2·Σ tail bound next to the observed error.

use ffmor::analysis::{band_sup, error_system};
use ffmor::bt::{balance, lyabt, spa_reduce};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    let bal = balance(&m)?;
    let hsv: Vec<String> = bal.hankel_sv.iter().map(|s| format!("{s:.3e}")).collect();
    println!("Hankel singular values: {}", hsv.join(", "));
    let ef = FrequencyRange::entire();
    println!("{:>2} {:>12} {:>12} {:>12}", "r", "bound", "LyaBT err", "SPA err");
    for r in 1..m.n() {
        let bt = lyabt(&m, r)?;
        let sp = spa_reduce(&m, r)?;
        let e_bt = band_sup(&error_system(&m, &bt.reduced)?, &ef, 600)?;
        let e_sp = band_sup(&error_system(&m, &sp.reduced)?, &ef, 600)?;
        println!("{r:>2} {:>12.4e} {e_bt:>12.4e} {e_sp:>12.4e}", bt.bound);
    }
    Ok(())
}
