//! Model and sweep files.
//!
//! Native models are JSON with row-major nested arrays; entries are plain
//! numbers for real models and `[re, im]` pairs for complex ones. Matrix
//! Market sets are directories holding `A.mtx`, `B.mtx`, `C.mtx` and an
//! optional `D.mtx`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ScalarField, SigmaSweep, StateSpaceModel, SweepDomain, TimeDomain};
use crate::error::{Error, Result};
use crate::linalg::CMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    NativeJson,
    MatrixMarketSet,
}

impl ModelFormat {
    /// Directories are Matrix Market sets, files native JSON.
    pub fn detect(path: &Path) -> Self {
        if path.is_dir() {
            ModelFormat::MatrixMarketSet
        } else {
            ModelFormat::NativeJson
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct ModelFile {
    n: usize,
    m: usize,
    p: usize,
    time_domain: TimeDomain,
    #[serde(default)]
    scalar_field: Option<ScalarField>,
    A: Vec<Vec<Entry>>,
    B: Vec<Vec<Entry>>,
    C: Vec<Vec<Entry>>,
    D: Vec<Vec<Entry>>,
}

fn rows_of(m: &CMat, real: bool) -> Vec<Vec<Entry>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    if real {
                        Entry::Real(z.re)
                    } else {
                        Entry::Complex([z.re, z.im])
                    }
                })
                .collect()
        })
        .collect()
}

fn matrix_of(name: &str, rows: &[Vec<Entry>], shape: (usize, usize)) -> Result<CMat> {
    let (r, c) = shape;
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let got_c = rows.first().map_or(0, |row| row.len());
        return Err(Error::DimensionMismatch {
            matrix: name.into(),
            detail: format!("header says {r}x{c}, data is {}x{got_c}", rows.len()),
        });
    }
    Ok(CMat::from_fn(r, c, |i, j| match rows[i][j] {
        Entry::Real(x) => Complex64::new(x, 0.0),
        Entry::Complex([re, im]) => Complex64::new(re, im),
    }))
}

/// Serializes a model to native JSON.
pub fn model_to_json(model: &StateSpaceModel) -> String {
    let real = model.is_real();
    let file = ModelFile {
        n: model.n(),
        m: model.m(),
        p: model.p(),
        time_domain: model.time_domain(),
        scalar_field: Some(model.scalar_field()),
        A: rows_of(model.a(), real),
        B: rows_of(model.b(), real),
        C: rows_of(model.c(), real),
        D: rows_of(model.d(), real),
    };
    serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
}

/// Parses a native JSON model.
pub fn model_from_json(text: &str) -> Result<StateSpaceModel> {
    from_file(serde_json::from_str(text)?)
}

fn from_file(file: ModelFile) -> Result<StateSpaceModel> {
    let (n, m, p) = (file.n, file.m, file.p);
    let model = StateSpaceModel::new(
        matrix_of("A", &file.A, (n, n))?,
        matrix_of("B", &file.B, (n, m))?,
        matrix_of("C", &file.C, (p, n))?,
        matrix_of("D", &file.D, (p, m))?,
        file.time_domain,
    )?;
    match file.scalar_field {
        Some(ScalarField::Real) if !model.is_real() => Err(Error::InvalidModel(
            "tagged real but has nonzero imaginary parts".into(),
        )),
        Some(ScalarField::Complex) => Ok(model.into_complex()),
        _ => Ok(model),
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message: message.into() }
}

// Unreadable model files are parse failures at line 0.
fn read_model_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_err(path, 0, format!("cannot read: {e}")))
}

/// Loads a model in the given format. Matrix Market sets are read as
/// continuous-time systems.
pub fn load_model(path: impl AsRef<Path>, format: ModelFormat) -> Result<StateSpaceModel> {
    let path = path.as_ref();
    match format {
        ModelFormat::NativeJson => {
            let text = read_model_text(path)?;
            let file = serde_json::from_str::<ModelFile>(&text)
                .map_err(|e| parse_err(path, e.line(), e.to_string()))?;
            from_file(file)
        }
        ModelFormat::MatrixMarketSet => load_matrix_market_set(path, TimeDomain::Continuous),
    }
}

/// Writes a model as native JSON.
pub fn save_model(model: &StateSpaceModel, path: impl AsRef<Path>) -> Result<()> {
    let mut text = model_to_json(model);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
    Hermitian,
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
    Pattern,
}

/// Reads one Matrix Market file (coordinate or array layout).
pub(crate) fn read_matrix_market(path: &Path) -> Result<CMat> {
    let text = read_model_text(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(path, 1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(path, 1, format!("unknown layout '{other}'"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" | "integer" => Field::Real,
        "complex" => Field::Complex,
        "pattern" if coordinate => Field::Pattern,
        other => return Err(parse_err(path, 1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(path, 1, format!("unknown symmetry '{other}'"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or_else(|| parse_err(path, 2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(path, size_line, format!("bad size line: {e}")))?;
    let expected = if coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(parse_err(path, size_line, format!("expected {expected} integers on size line")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(path, size_line, "symmetric layouts need a square matrix"));
    }

    let value = |line: usize, toks: &[&str]| -> Result<Complex64> {
        let num = |t: &str| {
            t.parse::<f64>().map_err(|_| parse_err(path, line, format!("bad number '{t}'")))
        };
        match (field, toks.len()) {
            (Field::Pattern, 0) => Ok(Complex64::new(1.0, 0.0)),
            (Field::Real, 1) => Ok(Complex64::new(num(toks[0])?, 0.0)),
            (Field::Complex, 2) => Ok(Complex64::new(num(toks[0])?, num(toks[1])?)),
            _ => Err(parse_err(path, line, "wrong number of values on entry line")),
        }
    };

    let mut m = CMat::zeros(rows, cols);
    let mut place = |i: usize, j: usize, z: Complex64| {
        m[(i, j)] = z;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] = z,
                Symmetry::Skew => m[(j, i)] = -z,
                Symmetry::Hermitian => m[(j, i)] = z.conj(),
            }
        }
    };

    if coordinate {
        let nnz = dims[2];
        for _ in 0..nnz {
            let (line, l) = data.next().ok_or_else(|| parse_err(path, size_line, "fewer entries than declared"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(parse_err(path, line, "entry needs row and column"));
            }
            let idx = |t: &str| {
                t.parse::<usize>().map_err(|_| parse_err(path, line, format!("bad index '{t}'")))
            };
            let (i, j) = (idx(toks[0])?, idx(toks[1])?);
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(parse_err(path, line, format!("index ({i}, {j}) out of range")));
            }
            place(i - 1, j - 1, value(line, &toks[2..])?);
        }
    } else {
        // Column-major; symmetric layouts list the lower triangle only and
        // skew-symmetric ones omit the diagonal too.
        for j in 0..cols {
            let start = match symmetry {
                Symmetry::General => 0,
                Symmetry::Skew => j + 1,
                _ => j,
            };
            for i in start..rows {
                let (line, l) = data.next().ok_or_else(|| parse_err(path, size_line, "fewer entries than declared"))?;
                let toks: Vec<&str> = l.split_whitespace().collect();
                place(i, j, value(line, &toks)?);
            }
        }
    }
    if let Some((line, _)) = data.next() {
        return Err(parse_err(path, line, "more entries than declared"));
    }
    Ok(m)
}

/// Loads `A.mtx`, `B.mtx`, `C.mtx` and optional `D.mtx` from a directory.
pub fn load_matrix_market_set(dir: impl AsRef<Path>, time_domain: TimeDomain) -> Result<StateSpaceModel> {
    let dir = dir.as_ref();
    let file = |name: &str| -> PathBuf { dir.join(format!("{name}.mtx")) };
    let a = read_matrix_market(&file("A"))?;
    let b = read_matrix_market(&file("B"))?;
    let c = read_matrix_market(&file("C"))?;
    let d_path = file("D");
    let d = if d_path.exists() {
        read_matrix_market(&d_path)?
    } else {
        CMat::zeros(c.nrows(), b.ncols())
    };
    StateSpaceModel::new(a, b, c, d, time_domain)
}

#[derive(Serialize, Deserialize)]
struct SweepFile {
    domain: SweepDomain,
    points: Vec<[f64; 2]>,
}

/// Writes a sweep. CSV uses the header `omega,sigma_max` and 17
/// significant digits so values read back bit-for-bit.
pub fn save_sweep(sweep: &SigmaSweep, path: impl AsRef<Path>, format: SweepFormat) -> Result<()> {
    match format {
        SweepFormat::Csv => {
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(["omega", "sigma_max"])?;
            for &(x, s) in sweep.points() {
                w.write_record([format!("{x:.16e}"), format!("{s:.16e}")])?;
            }
            w.flush()?;
        }
        SweepFormat::Json => {
            let file = SweepFile {
                domain: sweep.domain,
                points: sweep.points().iter().map(|&(x, s)| [x, s]).collect(),
            };
            fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
        }
    }
    Ok(())
}

/// Reads a sweep written by [`save_sweep`]. CSV sweeps carry no domain tag
/// and come back as continuous-frequency sweeps.
pub fn load_sweep(path: impl AsRef<Path>, format: SweepFormat) -> Result<SigmaSweep> {
    let path = path.as_ref();
    match format {
        SweepFormat::Csv => {
            let mut r = csv::Reader::from_path(path)?;
            let mut points = Vec::new();
            for (i, rec) in r.records().enumerate() {
                let rec = rec?;
                let line = i + 2;
                let get = |k: usize| -> Result<f64> {
                    rec.get(k)
                        .ok_or_else(|| parse_err(path, line, "missing column"))?
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| parse_err(path, line, e.to_string()))
                };
                points.push((get(0)?, get(1)?));
            }
            SigmaSweep::new(SweepDomain::ContinuousFreq, points)
        }
        SweepFormat::Json => {
            let file: SweepFile = serde_json::from_str(&fs::read_to_string(path)?)?;
            SigmaSweep::new(file.domain, file.points.into_iter().map(|[x, s]| (x, s)).collect())
        }
    }
}
