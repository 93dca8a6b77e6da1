//! Parameterized frequency-dependent (PFD) system mappings.
//!
//! Each mapping sends a continuous-time model `G` and a finite frequency
//! range to a model `G'` with `G'(x) = G(s(x)) / γ` for a Möbius change of
//! variable `s(x)`. When `G'` is stable, its gain over the whole imaginary
//! axis (or unit circle) times `|γ|` bounds the gain of `G` on the range.
//! Upper and lower maps produce discrete-time models, left and right maps
//! continuous-time ones.
//!
//! [`FormulaVariant::Consistent`] (the default) uses forms for which the
//! transfer identity above holds exactly. [`FormulaVariant::Printed`] keeps
//! an alternative set of published coefficients for the left, right and
//! lower high-frequency maps; those carry no range guarantee for the
//! left/right flavors and exist for comparison.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cplx, eigenvalues_general, identity, inverse, sigma_max, strip_imag, CMat,
};
use crate::model::{FrequencyRange, StateSpaceModel, TimeDomain};

/// Which side of the band correspondence a mapping uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Upper,
    Lower,
    Left,
    Right,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::Upper, Flavor::Lower, Flavor::Left, Flavor::Right];

    /// Upper and lower maps give discrete-time models.
    pub fn time_domain(self) -> TimeDomain {
        match self {
            Flavor::Upper | Flavor::Lower => TimeDomain::Discrete,
            Flavor::Left | Flavor::Right => TimeDomain::Continuous,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flavor::Upper => "upper",
            Flavor::Lower => "lower",
            Flavor::Left => "left",
            Flavor::Right => "right",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaVariant {
    #[default]
    Consistent,
    Printed,
}

/// Full description of an applied mapping; enough to invert it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PfdMapKind {
    pub flavor: Flavor,
    pub band: FrequencyRange,
    pub rho: f64,
    #[serde(default)]
    pub variant: FormulaVariant,
}

/// Coefficients of the continuous-to-continuous form
/// `A' = βI + γR`, `R = (y0 I - A)^-1`, `B' = RB`, `C' = CR`,
/// `D' = c1 CRB + c2 D`.
struct Fractional {
    y0: Complex64,
    beta: f64,
    gamma: Complex64,
    c1: Complex64,
    c2: Complex64,
}

/// Coefficients of the lower high-frequency form `M = aI - bA`,
/// `A' = c A M^-1`, `B' = e M^-1 B`, `C' = e C M^-1`, `D' = (b C M^-1 B + D)/s`.
struct LowerHf {
    a: f64,
    b: f64,
    c: f64,
    e: f64,
    s: f64,
}

enum Form {
    UpperMf { sigma: Complex64, k: f64 },
    LowerMf { wc: f64, wd: f64, rho: f64, k: f64 },
    Fractional(Fractional),
    UpperHf { rho: f64, k: f64 },
    LowerHf(LowerHf),
}

impl PfdMapKind {
    pub fn new(flavor: Flavor, band: FrequencyRange, rho: f64) -> Self {
        Self { flavor, band, rho, variant: FormulaVariant::Consistent }
    }

    pub fn with_variant(mut self, variant: FormulaVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn time_domain(&self) -> TimeDomain {
        self.flavor.time_domain()
    }

    /// Whether a real source model maps to a real model.
    pub fn preserves_real(&self) -> bool {
        match self.band {
            FrequencyRange::High { .. } => matches!(self.flavor, Flavor::Upper | Flavor::Lower),
            _ => {
                matches!(self.flavor, Flavor::Upper | Flavor::Lower)
                    && self.band.center() == Some(0.0)
            }
        }
    }

    fn form(&self) -> Result<Form> {
        let rho = self.rho;
        if !rho.is_finite() {
            return Err(Error::NotAdmissible { rho, detail: "rho must be finite".into() });
        }
        let printed = self.variant == FormulaVariant::Printed;
        match self.band {
            FrequencyRange::Entire => Err(Error::InvalidBand(
                "PFD mappings need a finite frequency range, got ef".into(),
            )),
            FrequencyRange::Low { .. } | FrequencyRange::Middle { .. } => {
                let wc = self.band.center().unwrap();
                let wd = self.band.half_width().unwrap();
                let (w1, w2) = self.band.edges().unwrap();
                let k = rho.hypot(wd);
                Ok(match self.flavor {
                    Flavor::Upper => Form::UpperMf { sigma: cplx(rho, wc), k },
                    Flavor::Lower => Form::LowerMf { wc, wd, rho, k },
                    Flavor::Left if printed => {
                        let d = -1.0 / cplx(rho, -w1);
                        Form::Fractional(Fractional {
                            y0: cplx(0.0, w1),
                            beta: -0.5,
                            gamma: -cplx(rho, -wd),
                            c1: d,
                            c2: d,
                        })
                    }
                    Flavor::Left => {
                        let gamma = -cplx(rho, wd);
                        Form::Fractional(Fractional::consistent(cplx(0.0, w1), -0.5, gamma))
                    }
                    Flavor::Right if printed => Form::Fractional(Fractional {
                        y0: cplx(0.0, w2),
                        beta: -0.5,
                        gamma: -cplx(rho, wd),
                        c1: 1.0 / cplx(rho, wd),
                        c2: 1.0 / cplx(rho, w1),
                    }),
                    Flavor::Right => {
                        let gamma = -cplx(rho, -wd);
                        Form::Fractional(Fractional::consistent(cplx(0.0, w2), -0.5, gamma))
                    }
                })
            }
            FrequencyRange::High { wh } => {
                let k = rho.hypot(wh);
                Ok(match self.flavor {
                    Flavor::Upper => Form::UpperHf { rho, k },
                    Flavor::Lower if printed => {
                        let c = rho.hypot(1.0);
                        Form::LowerHf(LowerHf { a: wh, b: rho, c, e: 1.0, s: wh * c })
                    }
                    Flavor::Lower => Form::LowerHf(LowerHf { a: wh * wh, b: rho, c: k, e: wh, s: k }),
                    Flavor::Left if printed => {
                        let d = -1.0 / cplx(rho, -wh);
                        Form::Fractional(Fractional {
                            y0: cplx(0.0, wh),
                            beta: -0.5,
                            gamma: cplx(rho, wh),
                            c1: d,
                            c2: d,
                        })
                    }
                    Flavor::Left => {
                        Form::Fractional(Fractional::consistent(cplx(0.0, wh), 0.5, -cplx(rho, wh)))
                    }
                    Flavor::Right if printed => {
                        let d = 1.0 / cplx(rho, -wh);
                        Form::Fractional(Fractional {
                            y0: cplx(0.0, -wh),
                            beta: -0.5,
                            gamma: cplx(rho, -wh),
                            c1: d,
                            c2: d,
                        })
                    }
                    Flavor::Right => Form::Fractional(Fractional::consistent(
                        cplx(0.0, -wh),
                        0.5,
                        -cplx(rho, -wh),
                    )),
                })
            }
        }
    }

    /// Gain scale of the mapping: `σ_max(G) ≤ scale · ‖G'‖_∞` on the band.
    ///
    /// Equals `(ρ² + ϖ²)^{1/2}` (ϖ = ϖ_d or ϖ_h) for every consistent map.
    /// For the printed lower high-frequency map it is `ϖ_h (ρ²+1)^{1/2}`;
    /// the printed left/right maps report the nominal `(ρ² + ϖ²)^{1/2}`.
    pub fn scale(&self) -> Result<f64> {
        let nominal = match self.band {
            FrequencyRange::High { wh } => self.rho.hypot(wh),
            _ => self.rho.hypot(self.band.half_width().unwrap_or(0.0)),
        };
        Ok(match self.form()? {
            Form::UpperMf { k, .. } | Form::LowerMf { k, .. } | Form::UpperHf { k, .. } => k,
            Form::LowerHf(h) => h.s,
            Form::Fractional(f) if self.variant == FormulaVariant::Consistent => f.gamma.norm(),
            Form::Fractional(_) => nominal,
        })
    }
}

impl Fractional {
    fn consistent(y0: Complex64, beta: f64, gamma: Complex64) -> Self {
        let c = 1.0 / gamma;
        Self { y0, beta, gamma, c1: c, c2: c }
    }
}

impl fmt::Display for PfdMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} rho={}", self.flavor, self.band, self.rho)?;
        if self.variant == FormulaVariant::Printed {
            write!(f, " (printed)")?;
        }
        Ok(())
    }
}

/// A mapped model together with the mapping that produced it.
#[derive(Debug, Clone)]
pub struct MappedSystem {
    pub model: StateSpaceModel,
    pub kind: PfdMapKind,
    /// Eigenvalues of the source `A`.
    pub source_eigenvalues: Vec<Complex64>,
}

/// Open interval `(lower, upper)` of admissible ρ; one side is infinite for
/// stable sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoInterval {
    pub lower: f64,
    pub upper: f64,
}

impl RhoInterval {
    pub fn contains(&self, rho: f64) -> bool {
        self.lower < rho && rho < self.upper
    }

    pub fn is_empty(&self) -> bool {
        !(self.lower < self.upper)
    }

    /// The finite end of the interval (the admissibility threshold).
    pub fn threshold(&self) -> f64 {
        if self.lower.is_finite() {
            self.lower
        } else {
            self.upper
        }
    }

    /// True when admissible ρ lie above the threshold.
    pub fn opens_upward(&self) -> bool {
        self.upper == f64::INFINITY
    }
}

fn imaginary_axis(l: Complex64) -> bool {
    l.re.abs() <= 1e-14 * l.norm().max(1.0)
}

fn mf_band(band: &FrequencyRange) -> Result<(f64, f64)> {
    match (band.center(), band.half_width()) {
        (Some(c), Some(d)) => Ok((c, d)),
        _ => Err(Error::InvalidBand(format!("expected an lf or mf range, got {band}"))),
    }
}

fn hf_band(band: &FrequencyRange) -> Result<f64> {
    band.high_edge()
        .ok_or_else(|| Error::InvalidBand(format!("expected an hf range, got {band}")))
}

/// Admissibility threshold for the upper/left/right LF-MF maps:
/// `max_i (ϖ_d² - Re(λ_i)² - (ϖ_c - Im(λ_i))²) / (-2 Re(λ_i))`.
/// Admissible ρ lie strictly above it (strictly below its negative for the
/// lower map).
pub fn rho_star_mf(a: &CMat, band: &FrequencyRange) -> Result<f64> {
    let (wc, wd) = mf_band(band)?;
    let mut best = f64::NEG_INFINITY;
    for l in eigenvalues_general(a)? {
        if imaginary_axis(l) {
            return Err(Error::DegenerateSpectrum(format!("{l}")));
        }
        let x = wd * wd - l.re * l.re - (wc - l.im).powi(2);
        best = best.max(x / (-2.0 * l.re));
    }
    Ok(best)
}

/// Admissibility threshold for the HF maps:
/// `max_i (ϖ_h² - |λ_i|²) / (2 Re(λ_i))`.
pub fn rho_star_hf(a: &CMat, band: &FrequencyRange) -> Result<f64> {
    let wh = hf_band(band)?;
    let mut best = f64::NEG_INFINITY;
    for l in eigenvalues_general(a)? {
        if imaginary_axis(l) {
            return Err(Error::DegenerateSpectrum(format!("{l}")));
        }
        best = best.max((wh * wh - l.norm_sqr()) / (2.0 * l.re));
    }
    Ok(best)
}

/// Analytic admissible-ρ interval for a mapping applied to a source with
/// state matrix `a`. Each eigenvalue contributes a linear constraint
/// `c ρ > d`; the intersection is returned.
pub fn admissible_interval(
    a: &CMat,
    flavor: Flavor,
    band: &FrequencyRange,
    variant: FormulaVariant,
) -> Result<RhoInterval> {
    let eigs = eigenvalues_general(a)?;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let hf = band.high_edge();
    if hf.is_none() {
        mf_band(band)?;
    }
    for l in eigs {
        if imaginary_axis(l) {
            return Err(Error::DegenerateSpectrum(format!("{l}")));
        }
        let (c, d) = match hf {
            None => {
                let (wc, wd) = mf_band(band)?;
                let x = wd * wd - l.re * l.re - (wc - l.im).powi(2);
                match flavor {
                    Flavor::Lower => (2.0 * l.re, x),
                    _ => (-2.0 * l.re, x),
                }
            }
            Some(wh) => {
                let d = l.norm_sqr() - wh * wh;
                match (flavor, variant) {
                    (Flavor::Lower, FormulaVariant::Printed) => (-2.0 * wh * l.re, d),
                    _ => (-2.0 * l.re, d),
                }
            }
        };
        if c > 0.0 {
            lower = lower.max(d / c);
        } else {
            upper = upper.min(d / c);
        }
    }
    Ok(RhoInterval { lower, upper })
}

fn check_source(model: &StateSpaceModel) -> Result<()> {
    if model.time_domain() != TimeDomain::Continuous {
        return Err(Error::InvalidModel("PFD mappings take continuous-time models".into()));
    }
    Ok(())
}

fn finish(a: CMat, b: CMat, c: CMat, d: CMat, kind: &PfdMapKind, real: bool) -> Result<StateSpaceModel> {
    let mut mats = [a, b, c, d];
    if real {
        for m in mats.iter_mut() {
            strip_imag(m);
        }
    }
    let [a, b, c, d] = mats;
    let out = StateSpaceModel::new(a, b, c, d, kind.time_domain())?;
    Ok(if real { out } else { out.into_complex() })
}

/// Applies the forward mapping without checking stability of the result.
pub fn forward_unchecked(model: &StateSpaceModel, kind: &PfdMapKind) -> Result<StateSpaceModel> {
    check_source(model)?;
    let n = model.n();
    let (a, b, c, d) = (model.a(), model.b(), model.c(), model.d());
    let eye = identity(n);
    let real = model.is_real() && kind.preserves_real();
    let shift_inverse = |shift: Complex64| -> Result<CMat> {
        inverse(&(&eye * shift - a), || format!("shift {shift} ({kind})"))
    };
    match kind.form()? {
        Form::UpperMf { sigma, k } => {
            let r = shift_inverse(sigma)?;
            let rb = &r * b;
            let cr = c * &r;
            let dd = (c * &rb + d).unscale(k);
            finish(r.scale(k), rb, cr, dd, kind, real)
        }
        Form::LowerMf { wc, wd, rho, k } => {
            let r = shift_inverse(cplx(0.0, wc))?;
            let rb = &r * b;
            let dd = (c * &rb + d).unscale(k);
            let aa = (r.scale(wd * wd) + &eye * cplx(rho, 0.0)).unscale(k);
            let f = wd / k;
            let cr = (c * &r).scale(f);
            finish(aa, rb.scale(f), cr, dd, kind, real)
        }
        Form::Fractional(fr) => {
            let r = shift_inverse(fr.y0)?;
            let rb = &r * b;
            let cr = c * &r;
            let dd = (c * &rb) * fr.c1 + d * fr.c2;
            let aa = &eye * cplx(fr.beta, 0.0) + r * fr.gamma;
            finish(aa, rb, cr, dd, kind, real)
        }
        Form::UpperHf { rho, k } => {
            let aa = (&eye * cplx(rho, 0.0) + a).unscale(k);
            finish(aa, b.unscale(k), c.unscale(k), d.unscale(k), kind, real)
        }
        Form::LowerHf(h) => {
            let m = &eye * cplx(h.a, 0.0) - a * cplx(h.b, 0.0);
            let mi = inverse(&m, || format!("{}I - {}A ({kind})", h.a, h.b))?;
            let aa = (a * &mi).scale(h.c);
            let mib = &mi * b;
            let dd = ((c * &mib).scale(h.b) + d).unscale(h.s);
            let cm = (c * &mi).scale(h.e);
            finish(aa, mib.scale(h.e), cm, dd, kind, real)
        }
    }
}

/// Applies a mapping and verifies the mapped model is stable (Schur for
/// upper/lower, Hurwitz for left/right).
pub fn apply_map(model: &StateSpaceModel, kind: PfdMapKind) -> Result<MappedSystem> {
    check_source(model)?;
    let source_eigenvalues = eigenvalues_general(model.a())?;
    let mapped = forward_unchecked(model, &kind)?;
    let eigs = eigenvalues_general(mapped.a())?;
    let unstable = match kind.time_domain() {
        TimeDomain::Discrete => {
            let r = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max);
            (r >= 1.0 - 1e-9).then(|| format!("mapped spectral radius {r:.6e} >= 1"))
        }
        TimeDomain::Continuous => {
            let s = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
            (s >= -1e-12).then(|| format!("mapped spectral abscissa {s:.6e} >= 0"))
        }
    };
    if let Some(mut detail) = unstable {
        if let Ok(iv) = admissible_interval(model.a(), kind.flavor, &kind.band, kind.variant) {
            detail.push_str(&format!("; admissible interval ({}, {})", iv.lower, iv.upper));
        }
        return Err(Error::NotAdmissible { rho: kind.rho, detail });
    }
    Ok(MappedSystem { model: mapped, kind, source_eigenvalues })
}

pub fn map_upper_mf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    mf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Upper, band, rho))
}

pub fn map_lower_mf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    mf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Lower, band, rho))
}

pub fn map_left_mf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    mf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Left, band, rho))
}

pub fn map_right_mf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    mf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Right, band, rho))
}

pub fn map_upper_hf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    hf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Upper, band, rho))
}

pub fn map_lower_hf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    hf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Lower, band, rho))
}

pub fn map_left_hf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    hf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Left, band, rho))
}

pub fn map_right_hf(model: &StateSpaceModel, band: FrequencyRange, rho: f64) -> Result<MappedSystem> {
    hf_band(&band)?;
    apply_map(model, PfdMapKind::new(Flavor::Right, band, rho))
}

/// Point `s` in the source plane corresponding to `x` in the mapped plane.
pub fn source_point(kind: &PfdMapKind, x: Complex64) -> Result<Complex64> {
    Ok(match kind.form()? {
        Form::UpperMf { sigma, k } => sigma - k / x,
        Form::LowerMf { wc, wd, rho, k } => cplx(0.0, wc) - wd * wd / (x * k - rho),
        Form::Fractional(f) => f.y0 - f.gamma / (x - f.beta),
        Form::UpperHf { rho, k } => x * k - rho,
        Form::LowerHf(h) => x * h.a / (x * h.b + h.c),
    })
}

/// Point in the mapped plane corresponding to `s`; inverse of
/// [`source_point`]. Band frequencies land on or outside the unit circle
/// (upper/lower) or in the closed right half-plane (left/right).
pub fn mapped_point(kind: &PfdMapKind, s: Complex64) -> Result<Complex64> {
    Ok(match kind.form()? {
        Form::UpperMf { sigma, k } => k / (sigma - s),
        Form::LowerMf { wc, wd, rho, k } => (rho + wd * wd / (cplx(0.0, wc) - s)) / k,
        Form::Fractional(f) => f.beta + f.gamma / (f.y0 - s),
        Form::UpperHf { rho, k } => (s + rho) / k,
        Form::LowerHf(h) => s * h.c / (h.a - s * h.b),
    })
}

/// Factor `1/γ` in `G'(x) = G(s(x)) / γ` for the consistent forms.
pub fn transfer_factor(kind: &PfdMapKind) -> Result<Complex64> {
    Ok(match kind.form()? {
        Form::UpperMf { k, .. } | Form::LowerMf { k, .. } | Form::UpperHf { k, .. } => cplx(1.0 / k, 0.0),
        Form::Fractional(f) => 1.0 / f.gamma,
        Form::LowerHf(h) => cplx(1.0 / h.s, 0.0),
    })
}

/// Continuous-time model whose forward image under `kind` is `mapped`.
///
/// The result is verified by mapping it forward again and comparing
/// transfer functions at 50 sample points; a relative deviation above
/// `1e-6` is reported as `RoundTripFailure`.
pub fn invert_map(mapped: &StateSpaceModel, kind: &PfdMapKind) -> Result<StateSpaceModel> {
    if mapped.time_domain() != kind.time_domain() {
        return Err(Error::RoundTripFailure(format!(
            "{kind} produces {:?} models, data is {:?}",
            kind.time_domain(),
            mapped.time_domain()
        )));
    }
    let source = invert_unchecked(mapped, kind)?;
    verify_round_trip(&source, mapped, kind)?;
    Ok(source)
}

fn invert_unchecked(mapped: &StateSpaceModel, kind: &PfdMapKind) -> Result<StateSpaceModel> {
    let n = mapped.n();
    let eye = identity(n);
    let (a, b, c, d) = (mapped.a(), mapped.b(), mapped.c(), mapped.d());
    let real = mapped.is_real() && kind.preserves_real();
    let singular = |what: &str| Error::SingularInversion(format!("{what} ({kind})"));
    let inv = |m: &CMat, what: &str| inverse(m, || what.to_string()).map_err(|_| singular(what));
    let (ra, rb, rc, rd) = match kind.form()? {
        Form::UpperMf { sigma, k } => {
            let x = inv(a, "mapped A")?.scale(k);
            let xb = &x * b;
            let dd = d.scale(k) - c * &xb;
            (&eye * sigma - &x, xb, c * &x, dd)
        }
        Form::LowerMf { wc, wd, rho, k } => {
            let y = inv(&(a.scale(k) - &eye * cplx(rho, 0.0)), "k A - rho I")?.scale(wd * wd);
            let f = k / wd;
            let yb = (&y * b).scale(f);
            let cy = (c * &y).scale(f);
            let dd = d.scale(k) - (c * &yb).scale(f);
            (&eye * cplx(0.0, wc) - &y, yb, cy, dd)
        }
        Form::Fractional(fr) => {
            let y = inv(&(a - &eye * cplx(fr.beta, 0.0)), "A - beta I")? * fr.gamma;
            let yb = &y * b;
            let dd = (d - (c * &yb) * fr.c1) / fr.c2;
            (&eye * fr.y0 - &y, yb, c * &y, dd)
        }
        Form::UpperHf { rho, k } => (a.scale(k) - &eye * cplx(rho, 0.0), b.scale(k), c.scale(k), d.scale(k)),
        Form::LowerHf(h) => {
            let w = inv(&(&eye * cplx(h.c, 0.0) + a.scale(h.b)), "cI + bA")?;
            let ra = (w * a).scale(h.a);
            let m = &eye * cplx(h.a, 0.0) - ra.scale(h.b);
            let rb = (&m * b).unscale(h.e);
            let rc = (c * &m).unscale(h.e);
            let rd = d.scale(h.s) - (c * &m * b).scale(h.b / (h.e * h.e));
            (ra, rb, rc, rd)
        }
    };
    let mut mats = [ra, rb, rc, rd];
    if real {
        for m in mats.iter_mut() {
            strip_imag(m);
        }
    }
    let [ra, rb, rc, rd] = mats;
    let out = StateSpaceModel::new(ra, rb, rc, rd, TimeDomain::Continuous)?;
    Ok(if real || !mapped.is_real() { out } else { out.into_complex() })
}

/// Sample points of the mapped model's boundary used for verification.
fn sample_points(domain: TimeDomain, count: usize) -> Vec<f64> {
    match domain {
        TimeDomain::Discrete => (0..count)
            .map(|i| -std::f64::consts::PI + (i as f64 + 0.5) * 2.0 * std::f64::consts::PI / count as f64)
            .collect(),
        TimeDomain::Continuous => (0..count)
            .map(|i| {
                let half = count / 2;
                let j = i % half.max(1);
                let w = 10f64.powf(-3.0 + 6.0 * j as f64 / (half.max(2) - 1) as f64);
                if i < half { -w } else { w }
            })
            .collect(),
    }
}

fn verify_round_trip(source: &StateSpaceModel, mapped: &StateSpaceModel, kind: &PfdMapKind) -> Result<()> {
    let again = forward_unchecked(source, kind).map_err(|e| {
        Error::RoundTripFailure(format!("forward map of the inverse failed: {e}"))
    })?;
    let mut worst: f64 = 0.0;
    let mut reference: f64 = 0.0;
    let mut evaluated = 0;
    for w in sample_points(kind.time_domain(), 50) {
        let (Ok(g1), Ok(g2)) = (mapped.freq_response(w), again.freq_response(w)) else {
            continue;
        };
        evaluated += 1;
        worst = worst.max(sigma_max(&(&g1 - &g2)));
        reference = reference.max(sigma_max(&g1));
    }
    let rel = worst / reference.max(f64::MIN_POSITIVE);
    if evaluated == 0 || !(rel <= 1e-6 || worst <= 1e-12) {
        return Err(Error::RoundTripFailure(format!(
            "transfer deviation {rel:.3e} relative over {evaluated} points"
        )));
    }
    Ok(())
}
