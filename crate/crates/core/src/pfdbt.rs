//! Balanced truncation in PFD-mapped coordinates.
//!
//! The source model is mapped to a discrete-time model (upper map for
//! routing 1, lower map for routing 2), balanced and truncated there, and
//! the truncated model is mapped back. The band error of the result is
//! bounded by `2 (ρ² + ϖ²)^{1/2} Σ_{i>r} σ_i` with σ_i the Hankel singular
//! values of the mapped model.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bt::{balance, stability_warning, tail_bound, truncate, BoundKind, Method, ReductionResult, Warning};
use crate::error::{Error, Result};
use crate::mapping::{admissible_interval, apply_map, invert_map, Flavor, FormulaVariant, PfdMapKind, RhoInterval};
use crate::model::{FrequencyRange, StateSpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Routing {
    /// Upper mapping.
    R1,
    /// Lower mapping.
    R2,
}

impl Routing {
    pub fn flavor(self) -> Flavor {
        match self {
            Routing::R1 => Flavor::Upper,
            Routing::R2 => Flavor::Lower,
        }
    }

    pub fn method(self) -> Method {
        match self {
            Routing::R1 => Method::PfdbtR1,
            Routing::R2 => Method::PfdbtR2,
        }
    }
}

impl fmt::Display for Routing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Routing::R1 => "r1",
            Routing::R2 => "r2",
        })
    }
}

impl FromStr for Routing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" | "1" | "upper" => Ok(Routing::R1),
            "r2" | "2" | "lower" => Ok(Routing::R2),
            _ => Err(Error::Usage(format!("routing must be r1 or r2, got '{s}'"))),
        }
    }
}

fn bound_kind(band: &FrequencyRange) -> Result<BoundKind> {
    match band {
        FrequencyRange::Low { .. } => Ok(BoundKind::Lf),
        FrequencyRange::Middle { .. } => Ok(BoundKind::Mf),
        FrequencyRange::High { .. } => Ok(BoundKind::Hf),
        FrequencyRange::Entire => Err(Error::InvalidBand("PFDBT needs a finite frequency range".into())),
    }
}

fn check_order(r: usize, n: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::BadOrder { order: r, states: n });
    }
    Ok(())
}

/// Runs the full pipeline for an explicit mapping.
pub fn pfdbt_with_kind(model: &StateSpaceModel, kind: PfdMapKind, r: usize) -> Result<ReductionResult> {
    check_order(r, model.n())?;
    let method = match kind.flavor {
        Flavor::Upper => Method::PfdbtR1,
        Flavor::Lower => Method::PfdbtR2,
        other => {
            return Err(Error::Usage(format!("PFDBT routes through upper or lower maps, got {other}")));
        }
    };
    let bound_kind = bound_kind(&kind.band)?;
    let mapped = apply_map(model, kind)?;
    let bal = balance(&mapped.model)?;
    let cut = truncate(&bal, r)?;
    let reduced = invert_map(&cut.reduced, &kind)?;
    let scale = kind.scale()?;
    let tail = bal.hankel_sv[r..].to_vec();
    let mut warnings: Vec<Warning> = bal.warnings.clone();
    warnings.extend(stability_warning(&reduced)?);
    Ok(ReductionResult {
        reduced,
        bound: tail_bound(scale, &tail),
        tail_sv: tail,
        hankel_sv: bal.hankel_sv,
        scale,
        bound_kind,
        method,
        rho: Some(kind.rho),
        band: kind.band,
        mapped_reduced: Some(cut.reduced),
        warnings,
    })
}

/// PFDBT for any finite band. Middle-frequency bands give complex reduced
/// models and are experimental.
pub fn pfdbt(model: &StateSpaceModel, band: FrequencyRange, rho: f64, r: usize, routing: Routing) -> Result<ReductionResult> {
    pfdbt_with_kind(model, PfdMapKind::new(routing.flavor(), band, rho), r)
}

/// Low-frequency PFDBT; the bound covers |ω| ≤ ϖ_l.
pub fn pfdbt_lf(model: &StateSpaceModel, band: FrequencyRange, rho: f64, r: usize, routing: Routing) -> Result<ReductionResult> {
    if !matches!(band, FrequencyRange::Low { .. }) {
        return Err(Error::InvalidBand(format!("expected an lf range, got {band}")));
    }
    pfdbt(model, band, rho, r, routing)
}

/// High-frequency PFDBT; the bound covers |ω| ≥ ϖ_h.
pub fn pfdbt_hf(model: &StateSpaceModel, band: FrequencyRange, rho: f64, r: usize, routing: Routing) -> Result<ReductionResult> {
    if !matches!(band, FrequencyRange::High { .. }) {
        return Err(Error::InvalidBand(format!("expected an hf range, got {band}")));
    }
    pfdbt(model, band, rho, r, routing)
}

/// Middle-frequency PFDBT. The mapped model is complex, so is the reduced
/// one; the bound is the same construction as for the other bands.
pub fn pfdbt_mf_experimental(
    model: &StateSpaceModel,
    band: FrequencyRange,
    rho: f64,
    r: usize,
    routing: Routing,
) -> Result<ReductionResult> {
    if !matches!(band, FrequencyRange::Middle { .. }) {
        return Err(Error::InvalidBand(format!("expected an mf range, got {band}")));
    }
    pfdbt(model, band, rho, r, routing)
}

/// Analytic admissible interval for a routing.
pub fn admissible_rho(model: &StateSpaceModel, band: &FrequencyRange, routing: Routing) -> Result<RhoInterval> {
    admissible_interval(model.a(), routing.flavor(), band, FormulaVariant::Consistent)
}

/// Retries with ρ moved further into the admissible region (by `factor`
/// times its magnitude each step) until the reduced model is stable. Returns
/// the last attempt if none is stable.
pub fn pfdbt_retry_larger_rho(
    model: &StateSpaceModel,
    band: FrequencyRange,
    rho: f64,
    r: usize,
    routing: Routing,
    factor: f64,
    max_tries: usize,
) -> Result<ReductionResult> {
    let dir = if admissible_rho(model, &band, routing)?.opens_upward() { 1.0 } else { -1.0 };
    let mut rho = rho;
    let mut last = pfdbt(model, band, rho, r, routing)?;
    for _ in 1..max_tries.max(1) {
        if last.is_stable() {
            break;
        }
        rho += dir * rho.abs().max(1.0) * (factor - 1.0).max(0.1);
        last = pfdbt(model, band, rho, r, routing)?;
    }
    Ok(last)
}

/// One admissible point of a ρ sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RhoPoint {
    pub rho: f64,
    pub bound: f64,
    pub reduced_stable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoSweep {
    /// Sorted by ρ.
    pub points: Vec<RhoPoint>,
    /// Grid points that failed, with the reason.
    pub skipped: Vec<(f64, String)>,
    /// ρ with the smallest bound.
    pub best_rho: f64,
}

impl RhoSweep {
    pub fn best(&self) -> &RhoPoint {
        self.points.iter().find(|p| p.rho == self.best_rho).expect("best point is in the sweep")
    }
}

/// Runs PFDBT at every grid point; inadmissible points are skipped.
pub fn sweep_rho(
    model: &StateSpaceModel,
    band: FrequencyRange,
    r: usize,
    routing: Routing,
    rho_grid: &[f64],
) -> Result<RhoSweep> {
    if rho_grid.is_empty() {
        return Err(Error::NoAdmissiblePoint("empty rho grid".into()));
    }
    let mut grid = rho_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for rho in grid {
        match pfdbt(model, band, rho, r, routing) {
            Ok(res) => points.push(RhoPoint { rho, bound: res.bound, reduced_stable: res.is_stable() }),
            Err(e @ (Error::BadOrder { .. } | Error::InvalidBand(_) | Error::InvalidModel(_))) => return Err(e),
            Err(e) => skipped.push((rho, e.to_string())),
        }
    }
    let best_rho = points
        .iter()
        .min_by(|a, b| a.bound.total_cmp(&b.bound))
        .map(|p| p.rho)
        .ok_or_else(|| {
            let reasons: Vec<String> = skipped.iter().map(|(r, e)| format!("rho={r}: {e}")).collect();
            Error::NoAdmissiblePoint(reasons.join("; "))
        })?;
    Ok(RhoSweep { points, skipped, best_rho })
}

/// Three-point grid at the admissibility threshold t: `{t(1+ε), 10t, 100t}`
/// when that moves into the admissible region, otherwise steps of the band
/// frequency away from t.
pub fn auto_rho_grid(model: &StateSpaceModel, band: &FrequencyRange, routing: Routing) -> Result<Vec<f64>> {
    const EPS: f64 = 1e-3;
    let iv = admissible_rho(model, band, routing)?;
    let t = iv.threshold();
    let s = match band {
        FrequencyRange::High { wh } => *wh,
        _ => band.half_width().unwrap_or(1.0),
    };
    let dir = if iv.opens_upward() { 1.0 } else { -1.0 };
    // Multiplying moves into the region when t lies on the same side of 0
    // as the admissible direction.
    let grid = if t * dir > 0.0 {
        vec![t * (1.0 + EPS), 10.0 * t, 100.0 * t]
    } else {
        vec![t + dir * EPS * s, t + dir * 10.0 * s, t + dir * 100.0 * s]
    };
    Ok(grid)
}

/// Hankel singular values of the mapped model and the bound scale.
pub fn mapped_hankel(model: &StateSpaceModel, kind: PfdMapKind) -> Result<(Vec<f64>, f64)> {
    let mapped = apply_map(model, kind)?;
    let bal = balance(&mapped.model)?;
    Ok((bal.hankel_sv, kind.scale()?))
}

/// `bound(r)` for r = 1..n-1.
pub fn bound_curve(hankel_sv: &[f64], scale: f64) -> Vec<(usize, f64)> {
    (1..hankel_sv.len()).map(|r| (r, tail_bound(scale, &hankel_sv[r..]))).collect()
}

/// Smallest order whose bound does not exceed `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinOrder {
    pub order: usize,
    pub bound: f64,
}

/// Smallest r in 1..n-1 with `bound(r) <= tol` for a given singular value
/// sequence and scale.
pub fn min_order_from_hankel(hankel_sv: &[f64], scale: f64, tol: f64) -> Result<MinOrder> {
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let curve = bound_curve(hankel_sv, scale);
    if let Some(&(order, bound)) = curve.iter().find(|(_, b)| *b <= tol) {
        return Ok(MinOrder { order, bound });
    }
    let (order, best_bound) = curve.last().copied().unwrap_or((0, f64::INFINITY));
    Err(Error::NotAchievable { tol, best_bound, order })
}

/// Smallest PFDBT order whose band bound does not exceed `tol`.
pub fn min_order_for_tolerance(
    model: &StateSpaceModel,
    band: FrequencyRange,
    rho: f64,
    routing: Routing,
    tol: f64,
) -> Result<MinOrder> {
    bound_kind(&band)?;
    let (hsv, scale) = mapped_hankel(model, PfdMapKind::new(routing.flavor(), band, rho))?;
    min_order_from_hankel(&hsv, scale, tol)
}

/// Smallest balanced-truncation order whose entire-range bound does not
/// exceed `tol`.
pub fn min_order_ef(model: &StateSpaceModel, tol: f64) -> Result<MinOrder> {
    let bal = balance(model)?;
    min_order_from_hankel(&bal.hankel_sv, 1.0, tol)
}
