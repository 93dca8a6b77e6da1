//! Choosing ρ: the automatic three-point grid and a wider sweep.

use ffmor::analysis::logspace;
use ffmor::pfdbt::{admissible_rho, auto_rho_grid, sweep_rho, Routing};
use ffmor::{fixtures, FrequencyRange};

fn main() -> ffmor::Result<()> {
    let m = fixtures::example2();
    let band = FrequencyRange::low(2.0)?;
    let grid = auto_rho_grid(&m, &band, Routing::R1)?;
    let s = sweep_rho(&m, band, 3, Routing::R1, &grid)?;
    for p in &s.points {
        println!("rho {:>10.4}: bound {:.4e}", p.rho, p.bound);
    }
    println!("automatic choice: rho = {:.4}", s.best_rho);

    let t = admissible_rho(&m, &band, Routing::R1)?.threshold();
    let wide: Vec<f64> = logspace(1e-2, 1e3, 30).into_iter().map(|d| t + d).collect();
    let s = sweep_rho(&m, band, 3, Routing::R1, &wide)?;
    println!("30-point sweep: best rho = {:.4}, bound {:.4e}", s.best_rho, s.best().bound);
    Ok(())
}
