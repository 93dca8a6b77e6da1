//! LTI state-space models, frequency ranges and σ-max sweeps.

mod io;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use io::{
    load_matrix_market_set, load_model, load_sweep, model_from_json, model_to_json, save_model,
    save_sweep, ModelFormat, SweepFormat,
};

use crate::error::{Error, Result};
use crate::linalg::{cplx, is_real, shifted_solve, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeDomain {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

/// State-space quadruple `(A, B, C, D)`.
///
/// Continuous models evaluate `G(s) = C (sI - A)^-1 B + D`, discrete models
/// the same expression in `z`. Matrices are stored complex; the `Real` tag
/// guarantees every imaginary part is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceModel {
    a: CMat,
    b: CMat,
    c: CMat,
    d: CMat,
    time_domain: TimeDomain,
    scalar_field: ScalarField,
}

fn mismatch(matrix: &str, detail: String) -> Error {
    Error::DimensionMismatch { matrix: matrix.into(), detail }
}

impl StateSpaceModel {
    /// Builds a validated model. The scalar field is `Real` when every
    /// entry has a zero imaginary part.
    pub fn new(a: CMat, b: CMat, c: CMat, d: CMat, time_domain: TimeDomain) -> Result<Self> {
        let n = a.nrows();
        if n == 0 {
            return Err(Error::InvalidModel("model needs at least one state".into()));
        }
        if a.ncols() != n {
            return Err(mismatch("A", format!("expected square, got {}x{}", n, a.ncols())));
        }
        let m = b.ncols();
        let p = c.nrows();
        if m == 0 || p == 0 {
            return Err(Error::InvalidModel("model needs at least one input and one output".into()));
        }
        if b.nrows() != n {
            return Err(mismatch("B", format!("expected {n} rows, got {}", b.nrows())));
        }
        if c.ncols() != n {
            return Err(mismatch("C", format!("expected {n} columns, got {}", c.ncols())));
        }
        if d.nrows() != p || d.ncols() != m {
            return Err(mismatch(
                "D",
                format!("expected {p}x{m}, got {}x{}", d.nrows(), d.ncols()),
            ));
        }
        let all = [&a, &b, &c, &d];
        if all.iter().any(|x| x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::InvalidModel("non-finite entry".into()));
        }
        let scalar_field = if all.iter().all(|x| is_real(x)) {
            ScalarField::Real
        } else {
            ScalarField::Complex
        };
        Ok(Self { a, b, c, d, time_domain, scalar_field })
    }

    /// Builds a model from real matrices.
    pub fn from_real(
        a: nalgebra::DMatrix<f64>,
        b: nalgebra::DMatrix<f64>,
        c: nalgebra::DMatrix<f64>,
        d: nalgebra::DMatrix<f64>,
        time_domain: TimeDomain,
    ) -> Result<Self> {
        use crate::linalg::to_complex;
        Self::new(to_complex(&a), to_complex(&b), to_complex(&c), to_complex(&d), time_domain)
    }

    /// Builds a model from row-major slices; a convenience for small
    /// hand-written systems.
    pub fn from_rows(
        a: &[&[f64]],
        b: &[&[f64]],
        c: &[&[f64]],
        d: &[&[f64]],
        time_domain: TimeDomain,
    ) -> Result<Self> {
        fn mat(name: &str, rows: &[&[f64]]) -> Result<CMat> {
            let r = rows.len();
            let k = rows.first().map_or(0, |row| row.len());
            if rows.iter().any(|row| row.len() != k) {
                return Err(mismatch(name, "ragged rows".into()));
            }
            Ok(CMat::from_fn(r, k, |i, j| cplx(rows[i][j], 0.0)))
        }
        Self::new(mat("A", a)?, mat("B", b)?, mat("C", c)?, mat("D", d)?, time_domain)
    }

    /// Returns the same model tagged `Complex` (no change to the data).
    pub fn into_complex(mut self) -> Self {
        self.scalar_field = ScalarField::Complex;
        self
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn d(&self) -> &CMat {
        &self.d
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Number of inputs.
    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    /// Number of outputs.
    pub fn p(&self) -> usize {
        self.c.nrows()
    }

    pub fn time_domain(&self) -> TimeDomain {
        self.time_domain
    }

    pub fn scalar_field(&self) -> ScalarField {
        self.scalar_field
    }

    pub fn is_real(&self) -> bool {
        self.scalar_field == ScalarField::Real
    }

    /// `C (xI - A)^-1 B + D` at an arbitrary complex point.
    pub fn eval_transfer(&self, x: Complex64) -> Result<CMat> {
        let n = self.n();
        let shifted = CMat::from_fn(n, n, |i, j| if i == j { x - self.a[(i, j)] } else { -self.a[(i, j)] });
        let sol = shifted_solve(&shifted, &self.b, || format!("{x}"))?;
        Ok(&self.c * sol + &self.d)
    }

    /// Evaluation point for a frequency: `jω` in continuous time, `e^{jθ}`
    /// in discrete time.
    pub fn frequency_point(&self, w: f64) -> Complex64 {
        match self.time_domain {
            TimeDomain::Continuous => cplx(0.0, w),
            TimeDomain::Discrete => Complex64::from_polar(1.0, w),
        }
    }

    /// Frequency response at ω (continuous) or θ (discrete).
    pub fn freq_response(&self, w: f64) -> Result<CMat> {
        self.eval_transfer(self.frequency_point(w))
    }

    /// Largest singular value of the frequency response.
    pub fn sigma_at(&self, w: f64) -> Result<f64> {
        Ok(crate::linalg::sigma_max(&self.freq_response(w)?))
    }

    /// State coordinate change `(T^-1 A T, T^-1 B, C T, D)`.
    pub fn similarity(&self, t: &CMat, t_inv: &CMat) -> Result<Self> {
        if t.nrows() != self.n() || t.ncols() != self.n() {
            return Err(mismatch("T", format!("expected {0}x{0}", self.n())));
        }
        let mut out =
            Self::new(t_inv * &self.a * t, t_inv * &self.b, &self.c * t, self.d.clone(), self.time_domain)?;
        if !self.is_real() {
            out.scalar_field = ScalarField::Complex;
        }
        Ok(out)
    }
}

/// Frequency ranges of input signals, all frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FrequencyRange {
    /// Entire range, ω ∈ ℝ.
    Entire,
    /// |ω| ≤ ϖ_l.
    Low { wl: f64 },
    /// ϖ_1 ≤ ω ≤ ϖ_2.
    Middle { w1: f64, w2: f64 },
    /// |ω| ≥ ϖ_h.
    High { wh: f64 },
}

impl FrequencyRange {
    pub fn entire() -> Self {
        FrequencyRange::Entire
    }

    pub fn low(wl: f64) -> Result<Self> {
        if !(wl > 0.0 && wl.is_finite()) {
            return Err(Error::InvalidBand(format!("low-frequency edge must be > 0, got {wl}")));
        }
        Ok(FrequencyRange::Low { wl })
    }

    pub fn middle(w1: f64, w2: f64) -> Result<Self> {
        if !(w1 >= 0.0 && w1 < w2 && w2.is_finite()) {
            return Err(Error::InvalidBand(format!(
                "middle-frequency edges need 0 <= w1 < w2, got [{w1}, {w2}]"
            )));
        }
        Ok(FrequencyRange::Middle { w1, w2 })
    }

    pub fn high(wh: f64) -> Result<Self> {
        if !(wh > 0.0 && wh.is_finite()) {
            return Err(Error::InvalidBand(format!("high-frequency edge must be > 0, got {wh}")));
        }
        Ok(FrequencyRange::High { wh })
    }

    /// ϖ_c: 0 for LF, (ϖ_1+ϖ_2)/2 for MF.
    pub fn center(&self) -> Option<f64> {
        match *self {
            FrequencyRange::Low { .. } => Some(0.0),
            FrequencyRange::Middle { w1, w2 } => Some(0.5 * (w1 + w2)),
            _ => None,
        }
    }

    /// ϖ_d: ϖ_l for LF, (ϖ_2-ϖ_1)/2 for MF.
    pub fn half_width(&self) -> Option<f64> {
        match *self {
            FrequencyRange::Low { wl } => Some(wl),
            FrequencyRange::Middle { w1, w2 } => Some(0.5 * (w2 - w1)),
            _ => None,
        }
    }

    /// Lower and upper band edges ϖ_1, ϖ_2 (LF gives -ϖ_l, ϖ_l).
    pub fn edges(&self) -> Option<(f64, f64)> {
        match *self {
            FrequencyRange::Low { wl } => Some((-wl, wl)),
            FrequencyRange::Middle { w1, w2 } => Some((w1, w2)),
            _ => None,
        }
    }

    /// ϖ_h for HF ranges.
    pub fn high_edge(&self) -> Option<f64> {
        match *self {
            FrequencyRange::High { wh } => Some(wh),
            _ => None,
        }
    }

    /// Whether ω belongs to the range.
    pub fn contains(&self, w: f64) -> bool {
        match *self {
            FrequencyRange::Entire => true,
            FrequencyRange::Low { wl } => w.abs() <= wl,
            FrequencyRange::Middle { w1, w2 } => (w1..=w2).contains(&w),
            FrequencyRange::High { wh } => w.abs() >= wh,
        }
    }

    /// Short tag: `ef`, `lf`, `mf` or `hf`.
    pub fn tag(&self) -> &'static str {
        match self {
            FrequencyRange::Entire => "ef",
            FrequencyRange::Low { .. } => "lf",
            FrequencyRange::Middle { .. } => "mf",
            FrequencyRange::High { .. } => "hf",
        }
    }
}

impl fmt::Display for FrequencyRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyRange::Entire => write!(f, "ef"),
            FrequencyRange::Low { wl } => write!(f, "lf:{wl}"),
            FrequencyRange::Middle { w1, w2 } => write!(f, "mf:{w1},{w2}"),
            FrequencyRange::High { wh } => write!(f, "hf:{wh}"),
        }
    }
}

impl FromStr for FrequencyRange {
    type Err = Error;

    /// Parses `ef`, `lf:W`, `mf:W1,W2` or `hf:W`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, rest) = match s.split_once(':') {
            Some((t, r)) => (t, Some(r)),
            None => (s, None),
        };
        let num = |x: &str| -> Result<f64> {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidBand(format!("bad frequency '{x}' in '{s}'")))
        };
        match (tag.to_ascii_lowercase().as_str(), rest) {
            ("ef", None) => Ok(FrequencyRange::Entire),
            ("lf", Some(r)) => FrequencyRange::low(num(r)?),
            ("hf", Some(r)) => FrequencyRange::high(num(r)?),
            ("mf", Some(r)) => {
                let (a, b) = r
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidBand(format!("expected mf:W1,W2, got '{s}'")))?;
                FrequencyRange::middle(num(a)?, num(b)?)
            }
            _ => Err(Error::InvalidBand(format!(
                "expected ef, lf:W, mf:W1,W2 or hf:W, got '{s}'"
            ))),
        }
    }
}

impl From<FrequencyRange> for String {
    fn from(r: FrequencyRange) -> Self {
        r.to_string()
    }
}

impl TryFrom<String> for FrequencyRange {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Whether sweep abscissae are continuous frequencies or discrete angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepDomain {
    ContinuousFreq,
    DiscreteAngle,
}

impl From<TimeDomain> for SweepDomain {
    fn from(t: TimeDomain) -> Self {
        match t {
            TimeDomain::Continuous => SweepDomain::ContinuousFreq,
            TimeDomain::Discrete => SweepDomain::DiscreteAngle,
        }
    }
}

/// σ_max(G) sampled at strictly increasing frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSweep {
    pub domain: SweepDomain,
    points: Vec<(f64, f64)>,
    /// Frequencies that could not be evaluated, with the reason.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<(f64, String)>,
}

impl SigmaSweep {
    pub fn new(domain: SweepDomain, points: Vec<(f64, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidBand(format!(
                    "sweep frequencies must increase strictly ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(w, s)) = points.iter().find(|(_, s)| !(*s >= 0.0)) {
            return Err(Error::InvalidModel(format!("negative or NaN sigma {s} at {w}")));
        }
        Ok(Self { domain, points, skipped: Vec::new() })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest sampled σ and where it occurs.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.points.iter().copied().fold(None, |best, (w, s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((w, s)),
        })
    }

    pub fn max_sigma(&self) -> f64 {
        self.peak().map_or(0.0, |(_, s)| s)
    }
}
