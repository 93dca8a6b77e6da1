//! Command-line front end: `reduce`, `analyze`, `bounds`, `compare` and
//! `convert`. Every command writes its artifacts into an output directory;
//! reports carry no timestamps so identical invocations give identical bytes.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{band_error, band_gain_bound, band_sup, hinf_norm, sigma_sweep, HinfNorm};
use crate::bt::{lyabt, spa_reduce, stability_margin, BoundKind, Method, ReductionResult, Warning};
use crate::error::{Error, Result};
use crate::mapping::{admissible_interval, Flavor, FormulaVariant, PfdMapKind, RhoInterval};
use crate::model::{load_model, save_model, save_sweep, ModelFormat, SweepFormat};
use crate::pfdbt::{
    auto_rho_grid, bound_curve, mapped_hankel, min_order_ef, min_order_from_hankel, pfdbt_with_kind, sweep_rho,
    MinOrder, RhoSweep, Routing,
};
use crate::{FrequencyRange, SigmaSweep, StateSpaceModel};

/// Environment variable overriding the number of sweep points.
pub const GRID_POINTS_ENV: &str = "FFMOR_GRID_POINTS";
pub const DEFAULT_GRID_POINTS: usize = 600;

#[derive(Debug, Parser)]
#[command(name = "ffmor", version, about = "Finite-frequency model order reduction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a model and write the reduced model, a report and the in-band error sweep.
    Reduce(ReduceArgs),
    /// Band sweep, ∞-norm and PFD band-gain estimates of a model.
    Analyze(AnalyzeArgs),
    /// Error bound against reduced order for each method.
    Bounds(BoundsArgs),
    /// In-band error sweeps of several methods on one frequency axis.
    Compare(CompareArgs),
    /// Convert a model (native JSON or Matrix Market directory) to native JSON.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Lyabt,
    Spa,
    Pfdbt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Consistent,
    Printed,
}

impl From<VariantArg> for FormulaVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Consistent => FormulaVariant::Consistent,
            VariantArg::Printed => FormulaVariant::Printed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Upper,
    Lower,
    Left,
    Right,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Upper => Flavor::Upper,
            FlavorArg::Lower => Flavor::Lower,
            FlavorArg::Left => Flavor::Left,
            FlavorArg::Right => Flavor::Right,
        }
    }
}

/// Methods accepted by `compare`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareMethod {
    Lyabt,
    Spa,
    #[value(name = "pfdbt-r1", alias = "pfdbt")]
    PfdbtR1,
    #[value(name = "pfdbt-r2")]
    PfdbtR2,
}

impl CompareMethod {
    fn column(self) -> &'static str {
        match self {
            CompareMethod::Lyabt => "lyabt",
            CompareMethod::Spa => "spa",
            CompareMethod::PfdbtR1 => "pfdbt-r1",
            CompareMethod::PfdbtR2 => "pfdbt-r2",
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct RhoArgs {
    /// Mapping parameter ρ.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "rho_auto")]
    pub rho: Option<f64>,
    /// Pick ρ from a three-point grid next to the admissibility threshold by smallest bound.
    #[arg(long)]
    pub rho_auto: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// ef | lf:W | mf:W1,W2 | hf:W
    #[arg(long)]
    pub band: FrequencyRange,
    #[arg(long)]
    pub order: usize,
    #[command(flatten)]
    pub rho: RhoArgs,
    #[arg(long, default_value = "r1")]
    pub routing: Routing,
    #[arg(long, value_enum, default_value = "consistent")]
    pub variant: VariantArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub band: FrequencyRange,
    /// ρ values for the band-gain estimates; a spread next to each
    /// flavor's threshold is used when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub rho: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "upper,lower,left,right")]
    pub flavors: Vec<FlavorArg>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub band: FrequencyRange,
    #[command(flatten)]
    pub rho: RhoArgs,
    #[arg(long, default_value = "r1")]
    pub routing: Routing,
    /// Error tolerance for the minimum-order selection.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub band: FrequencyRange,
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "lyabt,spa,pfdbt-r1,pfdbt-r2")]
    pub methods: Vec<CompareMethod>,
    #[command(flatten)]
    pub rho: RhoArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Read a Matrix Market directory as a discrete-time model.
    #[arg(long)]
    pub discrete: bool,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code: 0 success, 2 success with a stability
/// warning, 1 error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Reduce(a) => cmd_reduce(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Convert(a) => cmd_convert(&a),
    };
    match outcome {
        Ok(Outcome::Clean) => 0,
        Ok(Outcome::Warned(messages)) => {
            for m in messages {
                eprintln!("warning: {m}");
            }
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// How a successful command finished.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Clean,
    Warned(Vec<String>),
}

/// Sweep size from the environment, defaulting to 600.
pub fn grid_points() -> Result<usize> {
    match std::env::var(GRID_POINTS_ENV) {
        Err(_) => Ok(DEFAULT_GRID_POINTS),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(Error::Usage(format!("{GRID_POINTS_ENV} must be an integer ≥ 2, got '{v}'"))),
        },
    }
}

fn read_model(path: &Path) -> Result<StateSpaceModel> {
    load_model(path, ModelFormat::detect(path))
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Serialize)]
struct Interval {
    lower: Option<f64>,
    upper: Option<f64>,
}

impl From<RhoInterval> for Interval {
    fn from(iv: RhoInterval) -> Self {
        Interval { lower: finite(iv.lower), upper: finite(iv.upper) }
    }
}

#[derive(Serialize)]
struct ReduceReport {
    method: Method,
    band: FrequencyRange,
    states: usize,
    inputs: usize,
    outputs: usize,
    order: usize,
    routing: Option<String>,
    variant: Option<String>,
    rho: Option<f64>,
    admissible_rho: Option<Interval>,
    rho_sweep: Option<RhoSweep>,
    bound_kind: BoundKind,
    bound: f64,
    scale: f64,
    tail_sv: Vec<f64>,
    hankel_sv: Vec<f64>,
    stable: bool,
    stability_margin: f64,
    warnings: Vec<Warning>,
    max_band_error: f64,
    bound_holds_on_grid: bool,
    grid_points: usize,
    skipped_frequencies: Vec<(f64, String)>,
}

fn pick_rho(
    model: &StateSpaceModel,
    band: FrequencyRange,
    order: usize,
    routing: Routing,
    rho: &RhoArgs,
) -> Result<(f64, Option<RhoSweep>)> {
    match (rho.rho, rho.rho_auto) {
        (Some(x), _) => Ok((x, None)),
        (None, true) => {
            let grid = auto_rho_grid(model, &band, routing)?;
            let sweep = sweep_rho(model, band, order, routing, &grid)?;
            Ok((sweep.best_rho, Some(sweep)))
        }
        (None, false) => Err(Error::Usage("PFDBT needs --rho X or --rho-auto".into())),
    }
}

fn warning_messages(warnings: &[Warning]) -> Vec<String> {
    warnings
        .iter()
        .filter_map(|w| match w {
            Warning::StabilityLost { abscissa } => {
                Some(format!("reduced model is not stable (spectral margin {abscissa:.3e})"))
            }
            _ => None,
        })
        .collect()
}

fn check_finite_band(band: &FrequencyRange) -> Result<()> {
    if *band == FrequencyRange::Entire {
        return Err(Error::Usage("PFDBT needs a finite band (lf, mf or hf)".into()));
    }
    Ok(())
}

/// `reduce`: writes `reduced.json`, `report.json` and `error_sweep.csv`.
pub fn cmd_reduce(args: &ReduceArgs) -> Result<Outcome> {
    let model = read_model(&args.model)?;
    let points = grid_points()?;
    let mut routing = None;
    let mut variant = None;
    let mut admissible = None;
    let mut rho_sweep = None;
    let res: ReductionResult = match args.method {
        MethodArg::Lyabt => lyabt(&model, args.order)?,
        MethodArg::Spa => spa_reduce(&model, args.order)?,
        MethodArg::Pfdbt => {
            check_finite_band(&args.band)?;
            let v = FormulaVariant::from(args.variant);
            admissible = Some(admissible_interval(model.a(), args.routing.flavor(), &args.band, v)?.into());
            let (rho, sweep) = pick_rho(&model, args.band, args.order, args.routing, &args.rho)?;
            rho_sweep = sweep;
            routing = Some(args.routing.to_string());
            variant = Some(format!("{:?}", args.variant).to_lowercase());
            let kind = PfdMapKind::new(args.routing.flavor(), args.band, rho).with_variant(v);
            pfdbt_with_kind(&model, kind, args.order)?
        }
    };
    let sweep = band_error(&model, &res.reduced, &args.band, points)?;
    let max_err = band_sup_of(&sweep, &model, &res.reduced, &args.band)?;
    let report = ReduceReport {
        method: res.method,
        band: args.band,
        states: model.n(),
        inputs: model.m(),
        outputs: model.p(),
        order: args.order,
        routing,
        variant,
        rho: res.rho,
        admissible_rho: admissible,
        rho_sweep,
        bound_kind: res.bound_kind,
        bound: res.bound,
        scale: res.scale,
        tail_sv: res.tail_sv.clone(),
        hankel_sv: res.hankel_sv.clone(),
        stable: res.is_stable(),
        stability_margin: stability_margin(&res.reduced)?,
        warnings: res.warnings.clone(),
        max_band_error: max_err,
        bound_holds_on_grid: max_err <= res.bound * (1.0 + 1e-6) + 1e-12,
        grid_points: points,
        skipped_frequencies: sweep.skipped.clone(),
    };
    prepare_out(&args.out)?;
    save_model(&res.reduced, args.out.join("reduced.json"))?;
    write_json(&args.out.join("report.json"), &report)?;
    save_sweep(&sweep, args.out.join("error_sweep.csv"), SweepFormat::Csv)?;
    let warned = warning_messages(&res.warnings);
    Ok(if warned.is_empty() { Outcome::Clean } else { Outcome::Warned(warned) })
}

// Sweep maximum, plus the ω → ∞ limit where the band is unbounded.
fn band_sup_of(
    sweep: &SigmaSweep,
    model: &StateSpaceModel,
    reduced: &StateSpaceModel,
    band: &FrequencyRange,
) -> Result<f64> {
    let limit = match (model.time_domain(), band) {
        (crate::TimeDomain::Continuous, FrequencyRange::High { .. } | FrequencyRange::Entire) => {
            crate::linalg::sigma_max(&(model.d() - reduced.d()))
        }
        _ => 0.0,
    };
    Ok(sweep.max_sigma().max(limit))
}

#[derive(Serialize)]
struct BandGainRow {
    flavor: String,
    rho: f64,
    estimate: f64,
    actual: f64,
}

#[derive(Serialize)]
struct FlavorSummary {
    flavor: String,
    admissible_rho: Interval,
    skipped: Vec<(f64, String)>,
}

#[derive(Serialize)]
struct AnalysisReport {
    band: FrequencyRange,
    states: usize,
    inputs: usize,
    outputs: usize,
    stability_margin: f64,
    hinf: Option<HinfNorm>,
    band_max: f64,
    grid_points: usize,
    flavors: Vec<FlavorSummary>,
    band_gain: Vec<BandGainRow>,
}

// Six ρ values from just inside the threshold out to 1e3 band widths.
fn default_rho_spread(iv: &RhoInterval, band: &FrequencyRange) -> Vec<f64> {
    let s = match band {
        FrequencyRange::High { wh } => *wh,
        _ => band.half_width().unwrap_or(1.0),
    };
    if iv.lower.is_finite() && iv.upper.is_finite() {
        let w = iv.upper - iv.lower;
        return (1..=6).map(|i| iv.lower + w * i as f64 / 7.0).collect();
    }
    let t = iv.threshold();
    let dir = if iv.opens_upward() { 1.0 } else { -1.0 };
    (-2..=3).map(|k| t + dir * s * 10f64.powi(k)).collect()
}

/// `analyze`: writes `sweep.csv`, `band_gain.csv` and `analysis.json`.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let model = read_model(&args.model)?;
    let points = grid_points()?;
    let sweep = sigma_sweep(&model, &args.band, points)?;
    let actual = band_sup(&model, &args.band, points)?;
    let hinf = match hinf_norm(&model) {
        Ok(h) => Some(h),
        Err(Error::NotStable(_)) => None,
        Err(e) => return Err(e),
    };
    let mut flavors = Vec::new();
    let mut rows = Vec::new();
    if args.band != FrequencyRange::Entire {
        for &f in &args.flavors {
            let flavor = Flavor::from(f);
            let iv = admissible_interval(model.a(), flavor, &args.band, FormulaVariant::Consistent)?;
            let rhos = if args.rho.is_empty() { default_rho_spread(&iv, &args.band) } else { args.rho.clone() };
            let mut skipped = Vec::new();
            for rho in rhos {
                match band_gain_bound(&model, &args.band, rho, flavor) {
                    Ok(estimate) => rows.push(BandGainRow { flavor: flavor.to_string(), rho, estimate, actual }),
                    Err(e) => skipped.push((rho, e.to_string())),
                }
            }
            flavors.push(FlavorSummary { flavor: flavor.to_string(), admissible_rho: iv.into(), skipped });
        }
    }
    let report = AnalysisReport {
        band: args.band,
        states: model.n(),
        inputs: model.m(),
        outputs: model.p(),
        stability_margin: stability_margin(&model)?,
        hinf,
        band_max: actual,
        grid_points: points,
        flavors,
        band_gain: rows,
    };
    prepare_out(&args.out)?;
    save_sweep(&sweep, args.out.join("sweep.csv"), SweepFormat::Csv)?;
    let mut w = csv::Writer::from_path(args.out.join("band_gain.csv"))?;
    w.write_record(["flavor", "rho", "estimate", "actual"])?;
    for r in &report.band_gain {
        w.write_record([r.flavor.clone(), format!("{:.16e}", r.rho), format!("{:.16e}", r.estimate), format!("{:.16e}", r.actual)])?;
    }
    w.flush()?;
    write_json(&args.out.join("analysis.json"), &report)?;
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct RhoMinOrder {
    rho: f64,
    min_order: Option<MinOrder>,
    best_bound: f64,
}

#[derive(Serialize)]
struct MinOrders {
    tol: f64,
    band: FrequencyRange,
    lyabt: Option<MinOrder>,
    spa: Option<MinOrder>,
    pfdbt: Option<MinOrder>,
    pfdbt_rho: Option<f64>,
    routing: Option<String>,
    pfdbt_by_rho: Vec<RhoMinOrder>,
}

fn achievable(r: Result<MinOrder>) -> Result<Option<MinOrder>> {
    match r {
        Ok(m) => Ok(Some(m)),
        Err(Error::NotAchievable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `bounds`: writes `bounds.csv` (`r,lyabt,spa,pfdbt`) and, with `--tol`,
/// `min_orders.json`.
pub fn cmd_bounds(args: &BoundsArgs) -> Result<Outcome> {
    let model = read_model(&args.model)?;
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(Error::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    let ef = crate::bt::balance(&model)?;
    let ef_curve = bound_curve(&ef.hankel_sv, 1.0);

    // Mapped Hankel values for each candidate ρ; the pfdbt column takes the
    // smallest bound over the candidates at each order.
    let mut per_rho: Vec<(f64, Vec<f64>, f64)> = Vec::new();
    if args.band != FrequencyRange::Entire {
        let rhos = match (args.rho.rho, args.rho.rho_auto) {
            (Some(x), _) => vec![x],
            (None, true) => auto_rho_grid(&model, &args.band, args.routing)?,
            (None, false) => return Err(Error::Usage("a finite band needs --rho X or --rho-auto".into())),
        };
        let mut reasons = Vec::new();
        for rho in rhos {
            match mapped_hankel(&model, PfdMapKind::new(args.routing.flavor(), args.band, rho)) {
                Ok((hsv, scale)) => per_rho.push((rho, hsv, scale)),
                Err(e) => reasons.push(format!("rho={rho}: {e}")),
            }
        }
        if per_rho.is_empty() {
            return Err(Error::NoAdmissiblePoint(reasons.join("; ")));
        }
    }

    prepare_out(&args.out)?;
    let mut w = csv::Writer::from_path(args.out.join("bounds.csv"))?;
    w.write_record(["r", "lyabt", "spa", "pfdbt"])?;
    for &(r, b) in &ef_curve {
        let pf = per_rho
            .iter()
            .map(|(_, hsv, scale)| crate::bt::tail_bound(*scale, &hsv[r..]))
            .min_by(f64::total_cmp)
            .map_or(String::new(), |x| format!("{x:.16e}"));
        w.write_record([r.to_string(), format!("{b:.16e}"), format!("{b:.16e}"), pf])?;
    }
    w.flush()?;

    if let Some(tol) = args.tol {
        let ef_min = achievable(min_order_ef(&model, tol))?;
        let mut by_rho = Vec::new();
        for (rho, hsv, scale) in &per_rho {
            let best_bound = crate::bt::tail_bound(*scale, &hsv[hsv.len().saturating_sub(1)..]);
            by_rho.push(RhoMinOrder { rho: *rho, min_order: achievable(min_order_from_hankel(hsv, *scale, tol))?, best_bound });
        }
        let best = by_rho
            .iter()
            .filter_map(|x| x.min_order.map(|m| (x.rho, m)))
            .min_by(|a, b| a.1.order.cmp(&b.1.order).then(a.1.bound.total_cmp(&b.1.bound)));
        let finite_band = args.band != FrequencyRange::Entire;
        let report = MinOrders {
            tol,
            band: args.band,
            lyabt: ef_min,
            spa: ef_min,
            pfdbt: best.map(|b| b.1),
            pfdbt_rho: best.map(|b| b.0),
            routing: finite_band.then(|| args.routing.to_string()),
            pfdbt_by_rho: by_rho,
        };
        write_json(&args.out.join("min_orders.json"), &report)?;
    }
    Ok(Outcome::Clean)
}

#[derive(Serialize)]
struct CompareEntry {
    column: String,
    method: Method,
    rho: Option<f64>,
    bound_kind: BoundKind,
    bound: f64,
    max_band_error: f64,
    stable: bool,
}

#[derive(Serialize)]
struct CompareReport {
    band: FrequencyRange,
    order: usize,
    grid_points: usize,
    methods: Vec<CompareEntry>,
}

fn compare_one(model: &StateSpaceModel, args: &CompareArgs, method: CompareMethod) -> Result<ReductionResult> {
    let routing = match method {
        CompareMethod::Lyabt => return lyabt(model, args.order),
        CompareMethod::Spa => return spa_reduce(model, args.order),
        CompareMethod::PfdbtR1 => Routing::R1,
        CompareMethod::PfdbtR2 => Routing::R2,
    };
    check_finite_band(&args.band)?;
    let (rho, _) = pick_rho(model, args.band, args.order, routing, &args.rho)?;
    pfdbt_with_kind(model, PfdMapKind::new(routing.flavor(), args.band, rho), args.order)
}

/// `compare`: writes `compare.csv` (`omega,<method>...`) and `compare.json`.
/// A method listed twice gets a `_2` suffix on its second column.
pub fn cmd_compare(args: &CompareArgs) -> Result<Outcome> {
    let model = read_model(&args.model)?;
    let points = grid_points()?;
    if args.methods.is_empty() {
        return Err(Error::Usage("--methods is empty".into()));
    }
    let mut columns: Vec<String> = Vec::new();
    let mut sweeps = Vec::new();
    let mut entries = Vec::new();
    let mut warned = Vec::new();
    for &method in &args.methods {
        let base = method.column();
        let count = columns.iter().filter(|c| c.as_str() == base || c.starts_with(&format!("{base}_"))).count();
        let column = if count == 0 { base.to_string() } else { format!("{base}_{}", count + 1) };
        let res = compare_one(&model, args, method)?;
        let sweep = band_error(&model, &res.reduced, &args.band, points)?;
        warned.extend(warning_messages(&res.warnings).into_iter().map(|m| format!("{column}: {m}")));
        entries.push(CompareEntry {
            column: column.clone(),
            method: res.method,
            rho: res.rho,
            bound_kind: res.bound_kind,
            bound: res.bound,
            max_band_error: band_sup_of(&sweep, &model, &res.reduced, &args.band)?,
            stable: res.is_stable(),
        });
        columns.push(column);
        sweeps.push(sweep);
    }
    // All sweeps share the grid; points skipped by any method are dropped.
    let mut grid: Vec<f64> = sweeps[0].points().iter().map(|p| p.0).collect();
    for s in &sweeps[1..] {
        grid.retain(|w| s.points().iter().any(|p| p.0 == *w));
    }
    prepare_out(&args.out)?;
    let mut w = csv::Writer::from_path(args.out.join("compare.csv"))?;
    let mut header = vec!["omega".to_string()];
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for omega in grid {
        let mut row = vec![format!("{omega:.16e}")];
        for s in &sweeps {
            let v = s.points().iter().find(|p| p.0 == omega).map(|p| p.1).unwrap_or(f64::NAN);
            row.push(format!("{v:.16e}"));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    let report = CompareReport { band: args.band, order: args.order, grid_points: points, methods: entries };
    write_json(&args.out.join("compare.json"), &report)?;
    Ok(if warned.is_empty() { Outcome::Clean } else { Outcome::Warned(warned) })
}

/// `convert`: reads any supported model format and writes native JSON.
pub fn cmd_convert(args: &ConvertArgs) -> Result<Outcome> {
    let model = if args.model.is_dir() {
        let td = if args.discrete { crate::TimeDomain::Discrete } else { crate::TimeDomain::Continuous };
        crate::model::load_matrix_market_set(&args.model, td)?
    } else {
        read_model(&args.model)?
    };
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        prepare_out(parent)?;
    }
    save_model(&model, &args.out)?;
    Ok(Outcome::Clean)
}
