mod common;

use common::rel_err;
use ffmor::linalg::{cplx, eigenvalues_general, is_real};
use ffmor::mapping::*;
use ffmor::{fixtures, random, Error, FrequencyRange, StateSpaceModel, TimeDomain};
use num_complex::Complex64;

fn scalar(a: f64, b: f64, c: f64, d: f64) -> StateSpaceModel {
    StateSpaceModel::from_rows(&[&[a]], &[&[b]], &[&[c]], &[&[d]], TimeDomain::Continuous).unwrap()
}

fn close(z: Complex64, re: f64, im: f64) -> bool {
    (z - cplx(re, im)).norm() < 1e-14
}

fn bands() -> Vec<FrequencyRange> {
    vec![
        FrequencyRange::low(1.0).unwrap(),
        FrequencyRange::middle(0.5, 3.0).unwrap(),
        FrequencyRange::middle(0.0, 2.0).unwrap(),
        FrequencyRange::high(2.0).unwrap(),
    ]
}

/// A ρ inside the admissible interval, `delta` away from the threshold.
fn admissible_rho(model: &StateSpaceModel, flavor: Flavor, band: &FrequencyRange, delta: f64) -> f64 {
    let iv = admissible_interval(model.a(), flavor, band, FormulaVariant::Consistent).unwrap();
    if iv.opens_upward() {
        iv.lower + delta
    } else {
        iv.upper - delta
    }
}

#[test]
fn upper_lf_scalar_plug_in() {
    let m = map_upper_mf(&scalar(-1.0, 1.0, 1.0, 0.0), FrequencyRange::low(1.0).unwrap(), 1.0).unwrap();
    let h = 2f64.sqrt();
    assert!(close(m.model.a()[(0, 0)], h / 2.0, 0.0));
    assert!(close(m.model.b()[(0, 0)], 0.5, 0.0));
    assert!(close(m.model.c()[(0, 0)], 0.5, 0.0));
    assert!(close(m.model.d()[(0, 0)], h / 4.0, 0.0));
    assert_eq!(m.model.time_domain(), TimeDomain::Discrete);
    assert!(m.model.is_real());
}

#[test]
fn lower_lf_scalar_plug_in() {
    let m = map_lower_mf(&scalar(-1.0, 1.0, 1.0, 0.0), FrequencyRange::low(1.0).unwrap(), -1.0).unwrap();
    let r = 1.0 / 2f64.sqrt();
    assert!(close(m.model.a()[(0, 0)], 0.0, 0.0));
    assert!(close(m.model.b()[(0, 0)], r, 0.0));
    assert!(close(m.model.c()[(0, 0)], r, 0.0));
    assert!(close(m.model.d()[(0, 0)], r, 0.0));
}

#[test]
fn lower_lf_threshold_is_strict() {
    let model = scalar(-1.0, 1.0, 1.0, 0.0);
    let band = FrequencyRange::low(1.0).unwrap();
    assert_eq!(rho_star_mf(model.a(), &band).unwrap(), 0.0);
    assert!(matches!(map_lower_mf(&model, band, 0.0), Err(Error::NotAdmissible { .. })));
}

#[test]
fn rho_star_values() {
    let lf = FrequencyRange::low(1.0).unwrap();
    assert_eq!(rho_star_mf(scalar(-2.0, 1.0, 1.0, 0.0).a(), &lf).unwrap(), -0.75);
    assert_eq!(rho_star_hf(scalar(-1.0, 1.0, 1.0, 0.0).a(), &FrequencyRange::high(1.0).unwrap()).unwrap(), 0.0);
    assert_eq!(rho_star_hf(scalar(-1.0, 1.0, 1.0, 0.0).a(), &FrequencyRange::high(2.0).unwrap()).unwrap(), -1.5);

    // Example 1 against the 2x2 quadratic formula
    let m = fixtures::example1();
    let a = m.a();
    let tr = (a[(0, 0)] + a[(1, 1)]).re;
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).re;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let expected = [(tr - disc) / 2.0, (tr + disc) / 2.0]
        .iter()
        .map(|l| (1.0 - l * l) / (-2.0 * l))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((rho_star_mf(a, &lf).unwrap() - expected).abs() < 1e-12);

    let marginal = StateSpaceModel::from_rows(
        &[&[0.0, 1.0], &[-1.0, 0.0]],
        &[&[1.0], &[0.0]],
        &[&[1.0, 0.0]],
        &[&[0.0]],
        TimeDomain::Continuous,
    )
    .unwrap();
    assert!(matches!(rho_star_mf(marginal.a(), &lf), Err(Error::DegenerateSpectrum(_))));
}

#[test]
fn left_mf_plug_in_both_variants() {
    let model = scalar(-1.0, 1.0, 1.0, 0.0);
    let band = FrequencyRange::middle(0.0, 2.0).unwrap();
    let printed = PfdMapKind::new(Flavor::Left, band, 1.0).with_variant(FormulaVariant::Printed);
    let m = forward_unchecked(&model, &printed).unwrap();
    assert!(close(m.a()[(0, 0)], -1.5, 1.0));
    let m = map_left_mf(&model, band, 1.0).unwrap();
    assert!(close(m.model.a()[(0, 0)], -1.5, -1.0));
    assert!(!m.model.is_real());
}

#[test]
fn right_mf_plug_in() {
    // A' = -1/2 - (rho - j w_d)(j w_2 - A)^-1 with w_2 = 2, w_d = 1, rho = 1
    let m = map_right_mf(&scalar(-1.0, 1.0, 1.0, 0.0), FrequencyRange::middle(0.0, 2.0).unwrap(), 1.0).unwrap();
    let want = -0.5 - cplx(1.0, -1.0) / cplx(1.0, 2.0);
    assert!((m.model.a()[(0, 0)] - want).norm() < 1e-14);
}

#[test]
fn upper_hf_scalar_plug_in() {
    let m = map_upper_hf(&scalar(-1.0, 1.0, 1.0, 1.0), FrequencyRange::high(1.0).unwrap(), 1.0).unwrap();
    let r = 1.0 / 2f64.sqrt();
    assert!(close(m.model.a()[(0, 0)], 0.0, 0.0));
    for x in [m.model.b()[(0, 0)], m.model.c()[(0, 0)], m.model.d()[(0, 0)]] {
        assert!(close(x, r, 0.0));
    }
}

#[test]
fn lower_hf_singular_and_plug_in() {
    let model = scalar(-1.0, 1.0, 1.0, 0.0);
    let band = FrequencyRange::high(1.0).unwrap();
    for variant in [FormulaVariant::Consistent, FormulaVariant::Printed] {
        let kind = PfdMapKind::new(Flavor::Lower, band, -1.0).with_variant(variant);
        assert!(matches!(forward_unchecked(&model, &kind), Err(Error::SingularShift { .. })));
    }
    // printed form at rho = -2: sqrt(5) * (-1) / (1 - (-2)(-1)) = sqrt(5)
    let kind = PfdMapKind::new(Flavor::Lower, band, -2.0).with_variant(FormulaVariant::Printed);
    let m = forward_unchecked(&model, &kind).unwrap();
    assert!(close(m.a()[(0, 0)], 5f64.sqrt(), 0.0));
    assert!(matches!(apply_map(&model, kind), Err(Error::NotAdmissible { .. })));
}

#[test]
fn left_right_hf_plug_in() {
    let model = scalar(-1.0, 1.0, 1.0, 0.0);
    let band = FrequencyRange::high(1.0).unwrap();
    let m = map_left_hf(&model, band, 1.0).unwrap();
    let want = 0.5 - cplx(1.0, 1.0) / cplx(1.0, 1.0);
    assert!((m.model.a()[(0, 0)] - want).norm() < 1e-14);
    let m = map_right_hf(&model, band, 1.0).unwrap();
    let want = 0.5 - cplx(1.0, -1.0) / cplx(1.0, -1.0);
    assert!((m.model.a()[(0, 0)] - want).norm() < 1e-14);
}

#[test]
fn example1_mapped_models_are_stable() {
    let m = fixtures::example1();
    let lf = FrequencyRange::low(1.0).unwrap();
    let up = map_upper_mf(&m, lf, 4.0).unwrap();
    assert!(eigenvalues_general(up.model.a()).unwrap().iter().all(|l| l.norm() < 1.0));
    let lo = map_lower_mf(&m, lf, -4.0).unwrap();
    assert!(eigenvalues_general(lo.model.a()).unwrap().iter().all(|l| l.norm() < 1.0));
    let mf = FrequencyRange::middle(0.0, 2.0).unwrap();
    let left = map_left_mf(&m, mf, 4.0).unwrap();
    assert!(eigenvalues_general(left.model.a()).unwrap().iter().all(|l| l.re < 0.0));
    let hf = FrequencyRange::high(2.0).unwrap();
    let e2 = fixtures::example2();
    let rho = rho_star_hf(e2.a(), &hf).unwrap() + 1.0;
    let uh = map_upper_hf(&e2, hf, rho).unwrap();
    assert!(eigenvalues_general(uh.model.a()).unwrap().iter().all(|l| l.norm() < 1.0));
}

#[test]
fn shift_on_eigenvalue_is_singular() {
    let model = scalar(-1.0, 1.0, 1.0, 0.0);
    let kind = PfdMapKind::new(Flavor::Upper, FrequencyRange::low(1.0).unwrap(), -1.0);
    assert!(matches!(forward_unchecked(&model, &kind), Err(Error::SingularShift { .. })));
}

#[test]
fn transfer_identity_for_every_consistent_kind() {
    let models = [fixtures::example1(), fixtures::example2(), random::stable_continuous(5, 2, 3, 7)];
    for model in &models {
        for band in bands() {
            for flavor in Flavor::ALL {
                let rho = admissible_rho(model, flavor, &band, 0.7);
                let kind = PfdMapKind::new(flavor, band, rho);
                let mapped = apply_map(model, kind).unwrap_or_else(|e| panic!("{kind}: {e}"));
                let f = transfer_factor(&kind).unwrap();
                for i in 0..9 {
                    let w = -2.5 + 0.6 * i as f64;
                    let x = mapped.model.frequency_point(w);
                    let s = source_point(&kind, x).unwrap();
                    let lhs = mapped.model.eval_transfer(x).unwrap();
                    let rhs = model.eval_transfer(s).unwrap() * f;
                    assert!(rel_err(&lhs, &rhs) < 1e-10, "{kind} at {w}");
                }
                assert!((kind.scale().unwrap() - 1.0 / f.norm()).abs() < 1e-12 * kind.scale().unwrap());
            }
        }
    }
}

#[test]
fn band_lands_outside_mapped_stability_region() {
    // Band frequencies map onto or outside the unit circle (discrete) or
    // into the closed right half-plane (continuous), where a stable mapped
    // model is analytic; out-of-band frequencies land inside.
    let model = fixtures::example2();
    for band in bands() {
        for flavor in Flavor::ALL {
            let rho = admissible_rho(&model, flavor, &band, 1.3);
            let kind = PfdMapKind::new(flavor, band, rho);
            for i in 0..121 {
                let w = -6.0 + 0.1 * i as f64;
                let s = cplx(0.0, w);
                let x = mapped_point(&kind, s).unwrap();
                if !x.is_finite() {
                    // s sits on the pole of the mapping, i.e. x = infinity
                    assert!(band.contains(w));
                    continue;
                }
                let back = source_point(&kind, x).unwrap();
                assert!((back - s).norm() < 1e-10 * w.abs().max(1.0), "{kind}: {w} -> {x} -> {back}");
                let outside = match flavor.time_domain() {
                    TimeDomain::Discrete => x.norm() - 1.0,
                    TimeDomain::Continuous => x.re,
                };
                if band.contains(w) {
                    assert!(outside >= -1e-12, "{kind}: {w} -> {x}");
                } else {
                    assert!(outside <= 1e-12, "{kind}: {w} -> {x}");
                }
            }
        }
    }
}

#[test]
fn lf_maps_keep_real_models_real() {
    let m = fixtures::example2();
    let lf = FrequencyRange::low(2.0).unwrap();
    assert!(map_upper_mf(&m, lf, 7.0).unwrap().model.is_real());
    assert!(map_lower_mf(&m, lf, -7.0).unwrap().model.is_real());
    let hf = FrequencyRange::high(2.0).unwrap();
    let rho = rho_star_hf(m.a(), &hf).unwrap() + 1.0;
    assert!(is_real(map_upper_hf(&m, hf, rho).unwrap().model.a()));
    assert!(map_lower_hf(&m, hf, rho).unwrap().model.is_real());
}

#[test]
fn upper_spectrum_correspondence() {
    for seed in 0..10 {
        let m = random::stable_continuous(6, 1, 1, seed);
        let band = FrequencyRange::middle(1.0, 4.0).unwrap();
        let rho = admissible_rho(&m, Flavor::Upper, &band, 0.5);
        let mapped = map_upper_mf(&m, band, rho).unwrap();
        let k = rho.hypot(1.5);
        let mut want: Vec<Complex64> =
            mapped.source_eigenvalues.iter().map(|l| k / (cplx(rho, 2.5) - l)).collect();
        let mut got = eigenvalues_general(mapped.model.a()).unwrap();
        for v in [&mut want, &mut got] {
            v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        }
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-9 * w.norm().max(1.0));
        }
    }
}

#[test]
fn admissible_rho_gives_stable_maps() {
    for seed in 0..200 {
        let n = 1 + (seed as usize % 8);
        let m = random::stable_continuous(n, 1, 1, 1000 + seed);
        for band in bands() {
            for flavor in Flavor::ALL {
                for delta in [1e-3, 1.0, 100.0] {
                    let rho = admissible_rho(&m, flavor, &band, delta);
                    let kind = PfdMapKind::new(flavor, band, rho);
                    if let Err(e) = apply_map(&m, kind) {
                        // near-threshold points can fail only through
                        // roundoff in the stability margin
                        assert!(delta == 1e-3 && matches!(e, Error::NotAdmissible { .. }), "{kind} seed {seed}: {e}");
                    }
                }
            }
        }
    }
}

#[test]
fn round_trip_every_kind_and_variant() {
    let models = [fixtures::example1(), fixtures::example2()];
    for model in &models {
        for band in bands() {
            for flavor in Flavor::ALL {
                for variant in [FormulaVariant::Consistent, FormulaVariant::Printed] {
                    let rho = admissible_rho(model, flavor, &band, 2.0);
                    let kind = PfdMapKind::new(flavor, band, rho).with_variant(variant);
                    let mapped = forward_unchecked(model, &kind).unwrap();
                    let back = invert_map(&mapped, &kind).unwrap();
                    for w in [0.0, 0.5, 1.0, 2.5, 7.0] {
                        let g = model.freq_response(w).unwrap();
                        let gb = back.freq_response(w).unwrap();
                        assert!(rel_err(&gb, &g) < 1e-8, "{kind} at {w}");
                    }
                    if kind.preserves_real() {
                        assert!(back.is_real());
                    }
                }
            }
        }
    }
}

#[test]
fn upper_hf_inverse_is_exact_on_scalars() {
    let model = scalar(-3.0, 2.0, 0.5, 1.5);
    let kind = PfdMapKind::new(Flavor::Upper, FrequencyRange::high(1.0).unwrap(), 4.0);
    let back = invert_map(&forward_unchecked(&model, &kind).unwrap(), &kind).unwrap();
    for (x, y) in [(back.a(), model.a()), (back.b(), model.b()), (back.c(), model.c()), (back.d(), model.d())] {
        assert!((x[(0, 0)] - y[(0, 0)]).norm() < 1e-14);
    }
}

#[test]
fn mismatched_kind_fails_round_trip() {
    let model = fixtures::example1();
    let kind = PfdMapKind::new(Flavor::Upper, FrequencyRange::low(1.0).unwrap(), 4.0);
    let mapped = forward_unchecked(&model, &kind).unwrap();
    let wrong = PfdMapKind::new(Flavor::Left, FrequencyRange::low(1.0).unwrap(), 4.0);
    assert!(matches!(invert_map(&mapped, &wrong), Err(Error::RoundTripFailure(_))));
}

#[test]
fn discrete_source_rejected() {
    let m = random::stable_discrete(3, 1, 1, 1);
    assert!(matches!(map_upper_mf(&m, FrequencyRange::low(1.0).unwrap(), 4.0), Err(Error::InvalidModel(_))));
    assert!(matches!(
        map_upper_mf(&fixtures::example1(), FrequencyRange::high(1.0).unwrap(), 4.0),
        Err(Error::InvalidBand(_))
    ));
}
