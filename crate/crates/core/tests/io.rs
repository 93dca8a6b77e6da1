use std::fs;

use ffmor::model::{load_matrix_market_set, load_model, load_sweep, model_from_json, model_to_json, save_model, save_sweep, ModelFormat, SweepFormat};
use ffmor::{fixtures, random, Error, ScalarField, SigmaSweep, StateSpaceModel, SweepDomain, TimeDomain};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn same(a: &StateSpaceModel, b: &StateSpaceModel) -> bool {
    a.a() == b.a() && a.b() == b.b() && a.c() == b.c() && a.d() == b.d() && a.time_domain() == b.time_domain() && a.scalar_field() == b.scalar_field()
}

#[test]
fn example2_fixture_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("example2.json");
    fs::write(&path, fixtures::EXAMPLE2_JSON).unwrap();
    let m = load_model(&path, ModelFormat::NativeJson).unwrap();
    assert_eq!((m.n(), m.m(), m.p()), (6, 1, 1));
    assert!(m.is_real());
    assert_eq!(m.time_domain(), TimeDomain::Continuous);
}

#[test]
fn json_round_trip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let m = random::stable_continuous(4, 2, 3, seed);
        let path = dir.path().join(format!("m{seed}.json"));
        save_model(&m, &path).unwrap();
        assert!(same(&m, &load_model(&path, ModelFormat::NativeJson).unwrap()));
        let d = random::stable_discrete(3, 1, 1, seed);
        assert!(same(&d, &model_from_json(&model_to_json(&d)).unwrap()));
    }
    let c = StateSpaceModel::new(
        DMatrix::from_element(1, 1, Complex64::new(-1.0, 0.3)),
        DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        DMatrix::from_element(1, 1, Complex64::new(0.1, -2.0)),
        DMatrix::from_element(1, 1, Complex64::new(0.0, 0.0)),
        TimeDomain::Continuous,
    )
    .unwrap();
    assert_eq!(c.scalar_field(), ScalarField::Complex);
    assert!(same(&c, &model_from_json(&model_to_json(&c)).unwrap()));
}

#[test]
fn matrix_market_set_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| fs::write(dir.path().join(name), body).unwrap();
    write("A.mtx", "%%MatrixMarket matrix coordinate real general\n% comment\n1 1 1\n1 1 -1.0\n");
    write("B.mtx", "%%MatrixMarket matrix array real general\n1 1\n1.0\n");
    write("C.mtx", "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n");
    write("D.mtx", "%%MatrixMarket matrix array real general\n1 1\n0\n");
    let m = load_model(dir.path(), ModelFormat::detect(dir.path())).unwrap();
    assert_eq!((m.n(), m.m(), m.p()), (1, 1, 1));
    assert_eq!(m.a()[(0, 0)].re, -1.0);
    assert!(m.is_real());

    fs::remove_file(dir.path().join("D.mtx")).unwrap();
    let m = load_matrix_market_set(dir.path(), TimeDomain::Discrete).unwrap();
    assert_eq!(m.d()[(0, 0)].re, 0.0);
    assert_eq!(m.time_domain(), TimeDomain::Discrete);
}

#[test]
fn matrix_market_symmetric_layout() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| fs::write(dir.path().join(name), body).unwrap();
    write("A.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 -2\n2 1 0.5\n2 2 -3\n");
    write("B.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n0\n");
    write("C.mtx", "%%MatrixMarket matrix array real general\n1 2\n1\n1\n");
    let m = load_matrix_market_set(dir.path(), TimeDomain::Continuous).unwrap();
    assert_eq!(m.a()[(0, 1)].re, 0.5);
    assert_eq!(m.a()[(1, 0)].re, 0.5);
}

#[test]
fn wrong_b_rows_is_dimension_mismatch() {
    let text = r#"{"n":2,"m":1,"p":1,"time_domain":"continuous",
        "A":[[-1,0],[0,-2]],"B":[[1],[1],[1]],"C":[[1,1]],"D":[[0]]}"#;
    match model_from_json(text) {
        Err(Error::DimensionMismatch { matrix, .. }) => assert_eq!(matrix, "B"),
        other => panic!("expected DimensionMismatch, got {other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| fs::write(dir.path().join(name), body).unwrap();
    write("A.mtx", "%%MatrixMarket matrix array real general\n1 1\n-1\n");
    write("B.mtx", "%%MatrixMarket matrix array real general\n2 1\n1\n1\n");
    write("C.mtx", "%%MatrixMarket matrix array real general\n1 1\n1\n");
    assert!(matches!(
        load_matrix_market_set(dir.path(), TimeDomain::Continuous),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn parse_errors_carry_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"n\": 1,\n  \"m\": oops\n}\n").unwrap();
    match load_model(&path, ModelFormat::NativeJson) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected Parse, got {other:?}"),
    }
    let mtx = dir.path().join("A.mtx");
    fs::write(&mtx, "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 x\n").unwrap();
    match load_matrix_market_set(dir.path(), TimeDomain::Continuous) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected Parse, got {other:?}"),
    }
    assert!(matches!(
        load_model(dir.path().join("missing.json"), ModelFormat::NativeJson),
        Err(Error::Parse { line: 0, .. })
    ));
}

#[test]
fn sweep_csv_layout_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let pts = vec![(-1.0, 0.1), (0.0, 1.0 / 3.0), (std::f64::consts::PI, 2.0f64.sqrt())];
    let s = SigmaSweep::new(SweepDomain::ContinuousFreq, pts.clone()).unwrap();
    save_sweep(&s, &path, SweepFormat::Csv).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "omega,sigma_max");
    let back = load_sweep(&path, SweepFormat::Csv).unwrap();
    for (a, b) in back.points().iter().zip(&pts) {
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1.to_bits(), b.1.to_bits());
    }

    let json = dir.path().join("s.json");
    let d = SigmaSweep::new(SweepDomain::DiscreteAngle, pts).unwrap();
    save_sweep(&d, &json, SweepFormat::Json).unwrap();
    let back = load_sweep(&json, SweepFormat::Json).unwrap();
    assert_eq!(back.domain, SweepDomain::DiscreteAngle);
    assert_eq!(back.points(), d.points());
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.csv");
    let s = SigmaSweep::new(SweepDomain::ContinuousFreq, vec![]).unwrap();
    save_sweep(&s, &path, SweepFormat::Csv).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "omega,sigma_max\n");
    assert!(load_sweep(&path, SweepFormat::Csv).unwrap().is_empty());
}

#[test]
fn sweep_rejects_bad_points() {
    assert!(SigmaSweep::new(SweepDomain::ContinuousFreq, vec![(1.0, 0.1), (1.0, 0.2)]).is_err());
    assert!(SigmaSweep::new(SweepDomain::ContinuousFreq, vec![(1.0, -0.1)]).is_err());
}
