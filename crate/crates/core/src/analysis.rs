//! Frequency sweeps, ∞-norms and band-gain estimates.

use serde::Serialize;

use crate::bt::stability_margin;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_general, sigma_max, CMat};
use crate::mapping::{apply_map, Flavor, PfdMapKind};
use crate::model::{FrequencyRange, SigmaSweep, StateSpaceModel, SweepDomain, TimeDomain};

/// Log-spaced points from `lo` to `hi` inclusive; a single point is `hi`.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![hi],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            let last = count - 1;
            (0..count)
                .map(|i| match i {
                    0 => lo,
                    i if i == last => hi,
                    i => 10f64.powf(a + (b - a) * i as f64 / last as f64),
                })
                .collect()
        }
    }
}

/// Uniform points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![hi],
        _ => (0..count)
            .map(|i| if i == count - 1 { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 })
            .collect(),
    }
}

/// Upper edge of HF grids relative to ϖ_h.
pub const HF_GRID_SPAN: f64 = 1e3;

/// Lower edge of log grids that start at 0, relative to the band edge.
const LOG_FLOOR: f64 = 1e-4;

/// Sample frequencies for a band, ascending.
///
/// Continuous models: LF grids hold 0 and log-spaced |ω| up to ϖ_l on both
/// sides; MF grids are log-spaced over [ϖ_1, ϖ_2] (with 0 added when
/// ϖ_1 = 0); HF grids are log-spaced over ϖ_h ≤ |ω| ≤ 1e3 ϖ_h; EF grids hold
/// 0 and 1e-4 ≤ |ω| ≤ 1e6. Discrete models only accept EF and sample θ
/// uniformly in [-π, π].
pub fn frequency_grid(band: &FrequencyRange, time_domain: TimeDomain, n_points: usize) -> Result<Vec<f64>> {
    if n_points < 2 {
        return Err(Error::Usage(format!("need at least 2 grid points, got {n_points}")));
    }
    if time_domain == TimeDomain::Discrete {
        if *band != FrequencyRange::Entire {
            return Err(Error::InvalidBand(format!(
                "finite ranges apply to continuous-time models, got {band} for a discrete model"
            )));
        }
        return Ok(linspace(-std::f64::consts::PI, std::f64::consts::PI, n_points));
    }
    let symmetric = |lo: f64, hi: f64, with_zero: bool| {
        let rest = n_points - usize::from(with_zero);
        let neg = rest / 2;
        let pos = rest - neg;
        let mut g: Vec<f64> = logspace(lo, hi, neg).into_iter().rev().map(|w| -w).collect();
        if with_zero {
            g.push(0.0);
        }
        g.extend(logspace(lo, hi, pos));
        g
    };
    let grid = match *band {
        FrequencyRange::Entire => symmetric(LOG_FLOOR, 1e6, true),
        FrequencyRange::Low { wl } => symmetric(wl * LOG_FLOOR, wl, true),
        FrequencyRange::Middle { w1, w2 } if w1 > 0.0 => logspace(w1, w2, n_points),
        FrequencyRange::Middle { w2, .. } => {
            let mut g = vec![0.0];
            g.extend(logspace(w2 * LOG_FLOOR, w2, n_points - 1));
            g
        }
        FrequencyRange::High { wh } => symmetric(wh, wh * HF_GRID_SPAN, false),
    };
    Ok(grid)
}

/// σ_max of a sampled frequency response. Points where the response cannot
/// be evaluated are recorded in `skipped`.
pub fn sweep_at(model: &StateSpaceModel, freqs: &[f64]) -> Result<SigmaSweep> {
    let mut points = Vec::with_capacity(freqs.len());
    let mut skipped = Vec::new();
    for &w in freqs {
        match model.freq_response(w) {
            Ok(g) => points.push((w, sigma_max(&g))),
            Err(e @ Error::SingularShift { .. }) => skipped.push((w, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let mut sweep = SigmaSweep::new(SweepDomain::from(model.time_domain()), points)?;
    sweep.skipped = skipped;
    Ok(sweep)
}

/// σ_max(G) over a band at `n_points` frequencies.
pub fn sigma_sweep(model: &StateSpaceModel, band: &FrequencyRange, n_points: usize) -> Result<SigmaSweep> {
    sweep_at(model, &frequency_grid(band, model.time_domain(), n_points)?)
}

/// Error system `G - G_r` realized as `([[A_r, 0], [0, A]], [B_r; B], [-C_r, C], D - D_r)`.
pub fn error_system(model: &StateSpaceModel, reduced: &StateSpaceModel) -> Result<StateSpaceModel> {
    if model.p() != reduced.p() || model.m() != reduced.m() {
        return Err(Error::DimensionMismatch {
            matrix: "D".into(),
            detail: format!(
                "models have {}x{} and {}x{} transfer matrices",
                model.p(),
                model.m(),
                reduced.p(),
                reduced.m()
            ),
        });
    }
    if model.time_domain() != reduced.time_domain() {
        return Err(Error::InvalidModel("models live in different time domains".into()));
    }
    let (n, r) = (model.n(), reduced.n());
    let mut a = CMat::zeros(n + r, n + r);
    a.view_mut((0, 0), (r, r)).copy_from(reduced.a());
    a.view_mut((r, r), (n, n)).copy_from(model.a());
    let mut b = CMat::zeros(n + r, model.m());
    b.rows_mut(0, r).copy_from(reduced.b());
    b.rows_mut(r, n).copy_from(model.b());
    let mut c = CMat::zeros(model.p(), n + r);
    c.columns_mut(0, r).copy_from(&-reduced.c());
    c.columns_mut(r, n).copy_from(model.c());
    let d = model.d() - reduced.d();
    let out = StateSpaceModel::new(a, b, c, d, model.time_domain())?;
    Ok(if model.is_real() && reduced.is_real() { out } else { out.into_complex() })
}

/// σ_max(G - G_r) over a band.
pub fn band_error(model: &StateSpaceModel, reduced: &StateSpaceModel, band: &FrequencyRange, n_points: usize) -> Result<SigmaSweep> {
    sigma_sweep(&error_system(model, reduced)?, band, n_points)
}

/// Largest σ_max over a band: the sweep maximum, and for HF bands also the
/// ω → ∞ limit σ_max(D).
pub fn band_sup(model: &StateSpaceModel, band: &FrequencyRange, n_points: usize) -> Result<f64> {
    let sweep = sigma_sweep(model, band, n_points)?;
    let mut sup = sweep.max_sigma();
    if matches!(band, FrequencyRange::High { .. } | FrequencyRange::Entire)
        && model.time_domain() == TimeDomain::Continuous
    {
        sup = sup.max(sigma_max(model.d()));
    }
    Ok(sup)
}

/// Peak gain and where it occurs. `omega_peak` is infinite when the peak
/// is the high-frequency limit of a continuous model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HinfNorm {
    pub gamma: f64,
    pub omega_peak: f64,
}

const HINF_GRID: usize = 400;
const HINF_PEAKS: usize = 5;

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo) <= 1e-12 * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 { (x1, f1) } else { (x2, f2) }
}

/// ∞-norm over ω ∈ ℝ (continuous, including ω → ∞) or θ ∈ [-π, π]
/// (discrete): a dense grid seeded with pole frequencies, refined by
/// golden-section search around the five largest local maxima. Never
/// returns less than the grid maximum.
pub fn hinf_norm(model: &StateSpaceModel) -> Result<HinfNorm> {
    let margin = stability_margin(model)?;
    if margin >= 0.0 {
        return Err(Error::NotStable(format!("spectral margin {margin:.3e}")));
    }
    let eigs = eigenvalues_general(model.a())?;
    let mut grid: Vec<f64> = match model.time_domain() {
        TimeDomain::Continuous => {
            let mags: Vec<f64> = eigs.iter().map(|l| l.norm()).filter(|&m| m > 0.0).collect();
            let lo = mags.iter().copied().fold(1e-4, f64::min) * 1e-2;
            let hi = mags.iter().copied().fold(1e4, f64::max) * 1e2;
            let mut g = logspace(lo, hi, HINF_GRID);
            g.extend(logspace(lo, hi, HINF_GRID).into_iter().map(|w| -w));
            g.push(0.0);
            for l in &eigs {
                g.extend([l.im, -l.im, l.norm(), -l.norm()]);
            }
            g
        }
        TimeDomain::Discrete => {
            let mut g = linspace(-std::f64::consts::PI, std::f64::consts::PI, 2 * HINF_GRID + 1);
            g.extend(eigs.iter().filter(|l| l.norm() > 0.0).map(|l| l.arg()));
            g
        }
    };
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let eval = |w: f64| model.sigma_at(w).unwrap_or(0.0);
    let values: Vec<f64> = grid.iter().map(|&w| eval(w)).collect();
    let mut best = HinfNorm { gamma: 0.0, omega_peak: 0.0 };
    for (&w, &s) in grid.iter().zip(&values) {
        if s > best.gamma {
            best = HinfNorm { gamma: s, omega_peak: w };
        }
    }
    let mut peaks: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let left = if i > 0 { values[i - 1] } else { f64::NEG_INFINITY };
            let right = if i + 1 < grid.len() { values[i + 1] } else { f64::NEG_INFINITY };
            values[i] >= left && values[i] >= right
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    for &i in peaks.iter().take(HINF_PEAKS) {
        let lo = if i > 0 { grid[i - 1] } else { grid[i] };
        let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
        if hi <= lo {
            continue;
        }
        let (w, s) = golden_max(&eval, lo, hi);
        if s > best.gamma {
            best = HinfNorm { gamma: s, omega_peak: w };
        }
    }
    if model.time_domain() == TimeDomain::Continuous {
        let limit = sigma_max(model.d());
        if limit > best.gamma {
            best = HinfNorm { gamma: limit, omega_peak: f64::INFINITY };
        }
    }
    // Normalizes a peak at -0.0.
    best.omega_peak += 0.0;
    Ok(best)
}

/// Upper estimate of the band gain of `model` through a PFD mapping:
/// `scale · ‖G'‖_∞` with `G'` the mapped model.
pub fn band_gain_bound(model: &StateSpaceModel, band: &FrequencyRange, rho: f64, flavor: Flavor) -> Result<f64> {
    band_gain_bound_with_kind(model, PfdMapKind::new(flavor, *band, rho))
}

/// [`band_gain_bound`] for an explicit mapping (e.g. a formula variant).
pub fn band_gain_bound_with_kind(model: &StateSpaceModel, kind: PfdMapKind) -> Result<f64> {
    let mapped = apply_map(model, kind)?;
    Ok(kind.scale()? * hinf_norm(&mapped.model)?.gamma)
}
