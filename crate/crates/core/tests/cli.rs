use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ffmor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmor")).args(args).env_remove("FFMOR_GRID_POINTS").output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn reduce_example2(out: &Path, extra: &[&str]) -> Output {
    let model = fixture("example2.json");
    let mut args = vec!["reduce", "--model", model.to_str().unwrap(), "--method", "pfdbt", "--band", "lf:1", "--order", "3"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", out.to_str().unwrap()]);
    ffmor(&args)
}

#[test]
fn reduce_writes_consistent_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = reduce_example2(&out, &["--rho", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&out.join("report.json"));
    let tail: Vec<f64> = report["tail_sv"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(tail.len(), 3);
    let want = 2.0 * (16.0f64 + 1.0).sqrt() * tail.iter().sum::<f64>();
    assert_eq!(report["bound"].as_f64().unwrap(), want);
    assert_eq!(report["method"], "PFDBT-R1");
    assert_eq!(report["bound_kind"], "LF");
    assert!(report["max_band_error"].as_f64().unwrap() <= want);

    let reduced = ffmor::model::load_model(out.join("reduced.json"), ffmor::model::ModelFormat::NativeJson).unwrap();
    assert_eq!(reduced.n(), 3);
    assert!(reduced.is_real());
    let sweep = fs::read_to_string(out.join("error_sweep.csv")).unwrap();
    assert!(sweep.starts_with("omega,sigma_max\n"));
    assert_eq!(sweep.lines().count(), 601);
}

#[test]
fn zero_width_low_band_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("example2.json");
    let o = ffmor(&["reduce", "--model", model.to_str().unwrap(), "--method", "pfdbt", "--band", "lf:0", "--rho", "4", "--order", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lf:0"));
}

#[test]
fn pfdbt_without_rho_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = reduce_example2(dir.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rho_auto_picks_smallest_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = reduce_example2(dir.path(), &["--rho-auto"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&dir.path().join("report.json"));
    let points = report["rho_sweep"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 3);
    let best = points.iter().min_by(|a, b| a["bound"].as_f64().unwrap().total_cmp(&b["bound"].as_f64().unwrap())).unwrap();
    assert_eq!(report["rho"], best["rho"]);
    assert_eq!(report["bound"], best["bound"]);
}

#[test]
fn bounds_and_min_orders() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("example2.json");
    let o = ffmor(&["bounds", "--model", model.to_str().unwrap(), "--band", "lf:1", "--rho", "4", "--tol", "0.001", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,lyabt,spa,pfdbt");
    assert_eq!(lines.len(), 6);
    let rows: Vec<Vec<f64>> = lines[1..].iter().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    let report = json(&dir.path().join("min_orders.json"));
    for (method, col) in [("lyabt", 1), ("pfdbt", 3)] {
        let order = report[method]["order"].as_u64().unwrap() as usize;
        let first = rows.iter().position(|r| r[col] <= 0.001).unwrap() + 1;
        assert_eq!(order, first, "{method}");
    }
    let m = ffmor::fixtures::example2();
    let band = ffmor::FrequencyRange::low(1.0).unwrap();
    for row in &rows {
        let r = row[0] as usize;
        let res = ffmor::pfdbt::pfdbt(&m, band, 4.0, r, ffmor::pfdbt::Routing::R1).unwrap();
        assert!((row[3] - res.bound).abs() <= 1e-15 * res.bound.max(1e-300) * 10.0);
    }
}

#[test]
fn compare_duplicates_give_identical_columns() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("example2.json");
    let o = ffmor(&["compare", "--model", model.to_str().unwrap(), "--band", "lf:1", "--order", "3", "--rho", "4", "--methods", "pfdbt-r1,lyabt,pfdbt-r1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "omega,pfdbt-r1,lyabt,pfdbt-r1_2");
    let mut count = 0;
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[1], f[3]);
        count += 1;
    }
    assert_eq!(count, 600);
    let report = json(&dir.path().join("compare.json"));
    assert_eq!(report["methods"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_model_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = ffmor(&["reduce", "--model", missing.to_str().unwrap(), "--method", "lyabt", "--band", "ef", "--order", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(reduce_example2(&a, &["--rho-auto"]).status.code(), Some(0));
    assert_eq!(reduce_example2(&b, &["--rho-auto"]).status.code(), Some(0));
    for f in ["report.json", "reduced.json", "error_sweep.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn grid_points_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("example1.json");
    let o = Command::new(env!("CARGO_BIN_EXE_ffmor"))
        .args(["analyze", "--model", model.to_str().unwrap(), "--band", "lf:1", "--out", dir.path().to_str().unwrap()])
        .env("FFMOR_GRID_POINTS", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap().lines().count(), 51);
    let gains = fs::read_to_string(dir.path().join("band_gain.csv")).unwrap();
    let mut lines = gains.lines();
    assert_eq!(lines.next().unwrap(), "flavor,rho,estimate,actual");
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let (est, actual): (f64, f64) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        assert!(est >= actual * (1.0 - 1e-6));
    }
    let report = json(&dir.path().join("analysis.json"));
    assert_eq!(report["flavors"].as_array().unwrap().len(), 4);
}

#[test]
fn convert_matrix_market_directory() {
    let dir = tempfile::tempdir().unwrap();
    let mm = dir.path().join("mm");
    fs::create_dir(&mm).unwrap();
    fs::write(mm.join("A.mtx"), "%%MatrixMarket matrix array real general\n1 1\n-1\n").unwrap();
    fs::write(mm.join("B.mtx"), "%%MatrixMarket matrix array real general\n1 1\n1\n").unwrap();
    fs::write(mm.join("C.mtx"), "%%MatrixMarket matrix array real general\n1 1\n1\n").unwrap();
    let out = dir.path().join("m.json");
    let o = ffmor(&["convert", "--model", mm.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m = ffmor::model::load_model(&out, ffmor::model::ModelFormat::NativeJson).unwrap();
    assert_eq!(m.n(), 1);
}

#[test]
fn help_and_bad_flags() {
    assert_eq!(ffmor(&["--help"]).status.code(), Some(0));
    assert_eq!(ffmor(&["reduce", "--bogus"]).status.code(), Some(1));
}

#[test]
fn stability_loss_exits_with_warning_code() {
    // ρ just inside the admissible region; this reduction is not stable.
    let dir = tempfile::tempdir().unwrap();
    let m = ffmor::random::stable_continuous(6, 1, 1, 9);
    let band = ffmor::FrequencyRange::low(1.0).unwrap();
    let iv = ffmor::pfdbt::admissible_rho(&m, &band, ffmor::pfdbt::Routing::R1).unwrap();
    let rho = iv.threshold() + 0.01;
    let path = dir.path().join("m.json");
    ffmor::model::save_model(&m, &path).unwrap();
    let out = dir.path().join("out");
    let o = ffmor(&["reduce", "--model", path.to_str().unwrap(), "--method", "pfdbt", "--band", "lf:1", "--rho", &rho.to_string(), "--order", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&out.join("report.json"));
    assert_eq!(report["stable"], false);
    assert_eq!(report["warnings"][0]["kind"], "stability_lost");
}
