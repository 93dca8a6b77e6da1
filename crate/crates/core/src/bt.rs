//! Lyapunov balanced truncation and singular perturbation approximation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues_general, identity, is_real, lyapunov_factor_continuous,
    lyapunov_factor_discrete, real_part, solve_with_condition, to_complex, CMat,
    SINGULAR_CONDITION,
};
use crate::model::{FrequencyRange, StateSpaceModel, TimeDomain};

/// Hankel singular values below this fraction of the largest are treated
/// as numerically zero when building the balancing transform.
pub const NEGLIGIBLE_SV_RATIO: f64 = 1e-13;

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Smallest/largest Hankel singular value ratio is below
    /// [`NEGLIGIBLE_SV_RATIO`]; the balancing transform is ill-conditioned.
    NearlyNonMinimal { ratio: f64 },
    /// The reduced model is not stable in its time domain.
    StabilityLost { abscissa: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearlyNonMinimal { ratio } => {
                write!(f, "nearly non-minimal: sigma_n/sigma_1 = {ratio:.3e}")
            }
            Warning::StabilityLost { abscissa } => {
                write!(f, "reduced model is unstable (spectral margin {abscissa:.3e})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "EF")]
    Ef,
    #[serde(rename = "LF")]
    Lf,
    #[serde(rename = "MF")]
    Mf,
    #[serde(rename = "HF")]
    Hf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "LyaBT")]
    LyaBt,
    #[serde(rename = "SPA")]
    Spa,
    #[serde(rename = "PFDBT-R1")]
    PfdbtR1,
    #[serde(rename = "PFDBT-R2")]
    PfdbtR2,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::LyaBt => "LyaBT",
            Method::Spa => "SPA",
            Method::PfdbtR1 => "PFDBT-R1",
            Method::PfdbtR2 => "PFDBT-R2",
        };
        f.write_str(s)
    }
}

/// Balanced realization with its Hankel singular values and the
/// state transform `x_b = T^-1 x`.
#[derive(Debug, Clone)]
pub struct BalancedRealization {
    pub model: StateSpaceModel,
    /// Descending, nonnegative.
    pub hankel_sv: Vec<f64>,
    pub t: CMat,
    pub t_inv: CMat,
    pub warnings: Vec<Warning>,
}

/// A reduced model with its a priori error bound.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: StateSpaceModel,
    /// Discarded Hankel singular values of the balanced object
    /// (of the mapped model for PFDBT).
    pub tail_sv: Vec<f64>,
    /// All Hankel singular values of the balanced object.
    pub hankel_sv: Vec<f64>,
    /// Multiplier in `bound = 2 · scale · Σ tail_sv` (1 for EF bounds).
    pub scale: f64,
    pub bound: f64,
    pub bound_kind: BoundKind,
    pub method: Method,
    pub rho: Option<f64>,
    pub band: FrequencyRange,
    /// For PFDBT: the reduced model in mapped coordinates, before inversion.
    pub mapped_reduced: Option<StateSpaceModel>,
    pub warnings: Vec<Warning>,
}

impl ReductionResult {
    pub fn is_stable(&self) -> bool {
        !self.warnings.iter().any(|w| matches!(w, Warning::StabilityLost { .. }))
    }
}

/// `2 · scale · Σ tail`.
pub fn tail_bound(scale: f64, tail: &[f64]) -> f64 {
    2.0 * scale * tail.iter().sum::<f64>()
}

/// Stability margin: spectral abscissa (continuous) or spectral radius
/// minus one (discrete). Negative means stable.
pub fn stability_margin(model: &StateSpaceModel) -> Result<f64> {
    let eigs = eigenvalues_general(model.a())?;
    Ok(match model.time_domain() {
        TimeDomain::Continuous => eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max),
        TimeDomain::Discrete => eigs.iter().map(|l| l.norm()).fold(0.0, f64::max) - 1.0,
    })
}

pub(crate) fn stability_warning(model: &StateSpaceModel) -> Result<Option<Warning>> {
    let margin = stability_margin(model)?;
    Ok((margin >= 0.0).then_some(Warning::StabilityLost { abscissa: margin }))
}

/// Gramian factors `(Lc, Lo)` with `Pc = Lc Lc*`, `Po = Lo Lo*`.
pub fn gramian_factors(model: &StateSpaceModel) -> Result<(CMat, CMat)> {
    let (a, b, c) = (model.a(), model.b(), model.c());
    let ah = a.adjoint();
    let ch = c.adjoint();
    match model.time_domain() {
        TimeDomain::Continuous => Ok((lyapunov_factor_continuous(a, b)?, lyapunov_factor_continuous(&ah, &ch)?)),
        TimeDomain::Discrete => Ok((lyapunov_factor_discrete(a, b)?, lyapunov_factor_discrete(&ah, &ch)?)),
    }
}

/// SVD `M = W diag(s) V*` with singular values in descending order.
/// Real input is decomposed in real arithmetic.
fn svd_sorted(m: &CMat) -> (CMat, Vec<f64>, CMat) {
    let n = m.nrows();
    let (u, s, vt) = if is_real(m) {
        let svd = real_part(m).svd(true, true);
        (to_complex(&svd.u.unwrap()), svd.singular_values.iter().copied().collect::<Vec<_>>(), to_complex(&svd.v_t.unwrap()))
    } else {
        let svd = m.clone().svd(true, true);
        (svd.u.unwrap(), svd.singular_values.iter().copied().collect::<Vec<_>>(), svd.v_t.unwrap())
    };
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let w = CMat::from_fn(n, n, |r, c| u[(r, order[c])]);
    let v = CMat::from_fn(n, n, |r, c| vt[(order[c], r)].conj());
    (w, order.iter().map(|&i| s[i]).collect(), v)
}

/// Orthonormal basis of the column space of `m` with the given rank.
fn range_basis(m: &CMat, rank: usize) -> CMat {
    let (w, _, _) = svd_sorted(m);
    w.columns(0, rank).clone_owned()
}

/// Square-root balancing.
///
/// With Gramian factors `Lc`, `Lo` and the SVD `Lo* Lc = W Σ V*`,
/// `T = Lc V Σ^-1/2` and `T^-1 = Σ^-1/2 W* Lo*`. States whose Hankel
/// singular value is below `1e-13 σ_1` cannot be balanced; they are kept
/// as an oblique complement of the balanced subspace and the result
/// carries a `NearlyNonMinimal` warning.
pub fn balance(model: &StateSpaceModel) -> Result<BalancedRealization> {
    let n = model.n();
    let (lc, lo) = gramian_factors(model)?;
    let (w, sv, v) = svd_sorted(&(lo.adjoint() * &lc));
    let sigma1 = sv[0];
    let mut warnings = Vec::new();
    let ratio = if sigma1 > 0.0 { sv[n - 1] / sigma1 } else { 0.0 };
    if ratio < NEGLIGIBLE_SV_RATIO {
        warnings.push(Warning::NearlyNonMinimal { ratio });
    }
    if sigma1 == 0.0 {
        return Ok(BalancedRealization {
            model: model.clone(),
            hankel_sv: vec![0.0; n],
            t: identity(n),
            t_inv: identity(n),
            warnings,
        });
    }
    let q = sv.iter().take_while(|&&s| s > NEGLIGIBLE_SV_RATIO * sigma1).count();
    let mut t = CMat::zeros(n, n);
    let mut t_inv = CMat::zeros(n, n);
    let lc_v = &lc * v.columns(0, q);
    let w_lo = w.columns(0, q).adjoint() * lo.adjoint();
    for j in 0..q {
        let f = 1.0 / sv[j].sqrt();
        for i in 0..n {
            t[(i, j)] = lc_v[(i, j)] * f;
            t_inv[(j, i)] = w_lo[(j, i)] * f;
        }
    }
    if q < n {
        let tr = t.columns(0, q).clone_owned();
        let lr = t_inv.rows(0, q).clone_owned();
        let proj = identity(n) - &tr * &lr;
        let basis = range_basis(&proj, n - q);
        let left = basis.adjoint() * &proj;
        t.columns_mut(q, n - q).copy_from(&basis);
        t_inv.rows_mut(q, n - q).copy_from(&left);
    }
    if model.is_real() {
        // Both factors and the SVD were real; drop roundoff-free zeros.
        t = to_complex(&real_part(&t));
        t_inv = to_complex(&real_part(&t_inv));
    }
    let balanced = model.similarity(&t, &t_inv)?;
    Ok(BalancedRealization { model: balanced, hankel_sv: sv, t, t_inv, warnings })
}

fn check_order(r: usize, n: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::BadOrder { order: r, states: n });
    }
    Ok(())
}

fn blocks(m: &CMat, r: usize) -> (CMat, CMat, CMat, CMat) {
    let n = m.nrows();
    let k = n - r;
    (
        m.view((0, 0), (r, r)).clone_owned(),
        m.view((0, r), (r, k)).clone_owned(),
        m.view((r, 0), (k, r)).clone_owned(),
        m.view((r, r), (k, k)).clone_owned(),
    )
}

fn ef_result(bal: &BalancedRealization, reduced: StateSpaceModel, r: usize, method: Method) -> Result<ReductionResult> {
    let tail = bal.hankel_sv[r..].to_vec();
    let mut warnings = bal.warnings.clone();
    warnings.extend(stability_warning(&reduced)?);
    Ok(ReductionResult {
        reduced,
        bound: tail_bound(1.0, &tail),
        tail_sv: tail,
        hankel_sv: bal.hankel_sv.clone(),
        scale: 1.0,
        bound_kind: BoundKind::Ef,
        method,
        rho: None,
        band: FrequencyRange::Entire,
        mapped_reduced: None,
        warnings,
    })
}

/// Keeps the leading `r` balanced states; bound `2 Σ_{i>r} σ_i`.
pub fn truncate(bal: &BalancedRealization, r: usize) -> Result<ReductionResult> {
    let m = &bal.model;
    check_order(r, m.n())?;
    let reduced = StateSpaceModel::new(
        m.a().view((0, 0), (r, r)).clone_owned(),
        m.b().rows(0, r).clone_owned(),
        m.c().columns(0, r).clone_owned(),
        m.d().clone(),
        m.time_domain(),
    )?;
    let reduced = if m.is_real() { reduced } else { reduced.into_complex() };
    ef_result(bal, reduced, r, Method::LyaBt)
}

/// Residualizes the trailing `n - r` balanced states. Continuous models
/// keep the DC gain `G(0)`, discrete ones `G(1)`.
pub fn spa(bal: &BalancedRealization, r: usize) -> Result<ReductionResult> {
    let m = &bal.model;
    let n = m.n();
    check_order(r, n)?;
    let (a11, a12, a21, a22) = blocks(m.a(), r);
    let b1 = m.b().rows(0, r).clone_owned();
    let b2 = m.b().rows(r, n - r).clone_owned();
    let c1 = m.c().columns(0, r).clone_owned();
    let c2 = m.c().columns(r, n - r).clone_owned();
    // Continuous: x2 = -A22^-1 (A21 x1 + B2 u). Discrete: x2 = (I - A22)^-1 (...).
    let (pivot, sign) = match m.time_domain() {
        TimeDomain::Continuous => (a22.clone(), -1.0),
        TimeDomain::Discrete => (identity(n - r) - &a22, 1.0),
    };
    let mut rhs = CMat::zeros(n - r, r + m.m());
    rhs.columns_mut(0, r).copy_from(&a21);
    rhs.columns_mut(r, m.m()).copy_from(&b2);
    let (sol, cond) = solve_with_condition(&pivot, &rhs);
    let sol = match sol {
        Some(x) if cond < SINGULAR_CONDITION => x.scale(sign),
        _ => return Err(Error::SingularResidualization { condition: cond }),
    };
    let x_a = sol.columns(0, r).clone_owned();
    let x_b = sol.columns(r, m.m()).clone_owned();
    let reduced = StateSpaceModel::new(
        a11 + &a12 * &x_a,
        b1 + &a12 * &x_b,
        c1 + &c2 * &x_a,
        m.d() + &c2 * &x_b,
        m.time_domain(),
    )?;
    let reduced = if m.is_real() { reduced } else { reduced.into_complex() };
    ef_result(bal, reduced, r, Method::Spa)
}

/// Balances and truncates in one step.
pub fn lyabt(model: &StateSpaceModel, r: usize) -> Result<ReductionResult> {
    check_order(r, model.n())?;
    truncate(&balance(model)?, r)
}

/// Balances and residualizes in one step.
pub fn spa_reduce(model: &StateSpaceModel, r: usize) -> Result<ReductionResult> {
    check_order(r, model.n())?;
    spa(&balance(model)?, r)
}
