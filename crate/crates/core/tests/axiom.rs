mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use approx::assert_abs_diff_eq;
use hermitian_lab::sampling::{random_curvature_tensor, stream_rng, Sampler};
use hermitian_lab::{
    axiom_scan, complex_space_form_tensor, necessary_residuals, real_space_form_tensor, schur_scan,
    theorem_check, CorollaryOutcome, CurvatureTensor, Error, HermitianPoint, Matrix,
    TheoremOutcome,
};
use proptest::prelude::*;
use rand::Rng;

use common::{admissible, complex_space_form, rng, std_j};

fn point(r: CurvatureTensor) -> HermitianPoint {
    let dim = r.dim();
    HermitianPoint::from_parts(Matrix::identity(dim, dim), std_j(dim), r).unwrap()
}

#[test]
fn residuals_of_complex_space_form_match_direct_formula() {
    let j = std_j(6);
    for c in [-3.0, 1.0, 4.0] {
        let p = point(complex_space_form_tensor(c, &Matrix::identity(6, 6), &j).unwrap());
        let mut r = rng(c.to_bits());
        for _ in 0..20 {
            let (x, y) = admissible(&j, &mut r);
            let theta = 0.2 + 1.1 * r.random::<f64>();
            let rec = necessary_residuals(&p, theta, &x, &y).unwrap();
            let (jx, jy) = (&j * &x, &j * &y);
            let w = &jx * theta.cos() + &y * theta.sin();
            let n2 = &jx * theta.sin() - &y * theta.cos();
            let csf = |a, b, cc, d| complex_space_form(c, &j, a, b, cc, d);
            assert_abs_diff_eq!(rec.eq1, csf(&w, &x, &x, &jy), epsilon = 1e-12);
            assert_abs_diff_eq!(rec.eq2, csf(&w, &x, &x, &n2), epsilon = 1e-12);
            assert_abs_diff_eq!(
                rec.eq2,
                0.75 * c * theta.sin() * theta.cos(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(rec.eq3, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rec.eq4, 0.75 * c, epsilon = 1e-12);
            assert_abs_diff_eq!(rec.eq5, 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn open_interval_is_enforced() {
    let p = point(CurvatureTensor::zeros(4));
    let (x, y) = (common::e(4, 0), common::e(4, 2));
    for theta in [0.0, FRAC_PI_2, -0.1, 2.0] {
        assert!(matches!(
            necessary_residuals(&p, theta, &x, &y),
            Err(Error::AngleOutOfRange { .. })
        ));
        assert!(axiom_scan(&p, theta, 10, 0, 1e-9).is_err());
    }
    assert!(matches!(
        necessary_residuals(&p, 0.5, &x, &common::e(4, 1)),
        Err(Error::Inadmissible { .. })
    ));
    assert!(axiom_scan(&p, 0.5, 0, 0, 1e-9).is_err());
}

#[test]
fn scan_is_deterministic_per_seed() {
    let p = point(random_curvature_tensor(4, 5, &mut stream_rng(1, 0)));
    let a = axiom_scan(&p, 0.8, 200, 7, 1e-9).unwrap();
    let b = axiom_scan(&p, 0.8, 200, 7, 1e-9).unwrap();
    let c = axiom_scan(&p, 0.8, 200, 8, 1e-9).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.worst.x, c.worst.x);
    assert!(!a.holds);
}

#[test]
fn theorem_outcomes() {
    let id = Matrix::identity(4, 4);
    let j = std_j(4);

    let sphere = point(real_space_form_tensor(1.0, &id).unwrap());
    let report = theorem_check(&sphere, 0.6, 300, 1, 1e-10, Some(0.5)).unwrap();
    assert_eq!(report.theorem, TheoremOutcome::Confirmed);
    assert_eq!(report.kahler, Some(false));
    assert!(report.corollary.is_none());
    assert!(report.consistent());

    // a Kähler point with a non-flat real space form contradicts the corollary
    let report = theorem_check(&sphere, 0.6, 300, 1, 1e-10, Some(0.0)).unwrap();
    assert_eq!(report.corollary, Some(CorollaryOutcome::Violated));
    assert!(!report.consistent());

    let flat = point(CurvatureTensor::zeros(4));
    let report = theorem_check(&flat, 0.6, 300, 1, 1e-10, Some(0.0)).unwrap();
    assert_eq!(report.corollary, Some(CorollaryOutcome::Flat));

    let cp2 = point(complex_space_form_tensor(4.0, &id, &j).unwrap());
    let report = theorem_check(&cp2, FRAC_PI_4, 300, 1, 1e-10, Some(0.0)).unwrap();
    match &report.theorem {
        TheoremOutcome::Contrapositive { witness } => {
            assert_abs_diff_eq!(witness.eq2.abs(), 1.5, epsilon = 1e-12)
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(report.consistent());
    assert!(report.defect.defect_norm > 1.0);
}

#[test]
fn schur_scan_reports_spread_and_offending_point() {
    let id = Matrix::identity(4, 4);
    let pts: Vec<_> = [1.0, 1.0, 1.0]
        .iter()
        .map(|&c| point(real_space_form_tensor(c, &id).unwrap()))
        .collect();
    let report = schur_scan(&pts, 1e-12).unwrap();
    assert!(report.constant);
    assert_eq!(report.c_values.len(), 3);

    let mixed: Vec<_> = [1.0, 2.0]
        .iter()
        .map(|&c| point(real_space_form_tensor(c, &id).unwrap()))
        .collect();
    let report = schur_scan(&mixed, 1e-12).unwrap();
    assert!(!report.constant);
    assert_abs_diff_eq!(report.spread, 1.0, epsilon = 1e-12);

    let bad = vec![
        pts[0].clone(),
        point(complex_space_form_tensor(4.0, &id, &std_j(4)).unwrap()),
    ];
    assert!(matches!(
        schur_scan(&bad, 1e-9),
        Err(Error::NotSpaceForm { index: 1, .. })
    ));
    assert!(schur_scan(&pts[..1], 1e-9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Expanding eq1 in x: the part odd in x is 2cosθ·eq3.
    #[test]
    fn eq1_odd_part_is_eq3(seed in any::<u64>(), theta in 0.01f64..1.56) {
        let p = point(random_curvature_tensor(4, 6, &mut stream_rng(seed, 0)));
        let sampler = Sampler::new(p.structure()).unwrap();
        let (x, y) = sampler.admissible_pair(&mut stream_rng(seed, 1));
        let plus = necessary_residuals(&p, theta, &x, &y).unwrap();
        let minus = necessary_residuals(&p, theta, &(-&x), &y).unwrap();
        prop_assert!((plus.eq1 - minus.eq1 - 2.0 * theta.cos() * plus.eq3).abs() < 1e-12);
        let even = p.curvature().evaluate(&y, &x, &x, &p.structure().apply_j(&y)).unwrap();
        prop_assert!((plus.eq1 + minus.eq1 - 2.0 * theta.sin() * even).abs() < 1e-12);
    }

    /// Replacing y by Jy (still admissible) turns eq3 into -R(Jx, x, x, y).
    #[test]
    fn eq3_under_y_to_jy(seed in any::<u64>()) {
        let p = point(random_curvature_tensor(4, 6, &mut stream_rng(seed, 0)));
        let s = p.structure();
        let sampler = Sampler::new(s).unwrap();
        let (x, y) = sampler.admissible_pair(&mut stream_rng(seed, 1));
        let jy = s.apply_j(&y);
        let rec = necessary_residuals(&p, 0.7, &x, &jy).unwrap();
        let direct = p.curvature().evaluate(&s.apply_j(&x), &x, &x, &y).unwrap();
        prop_assert!((rec.eq3 + direct).abs() < 1e-12);
    }

    #[test]
    fn real_space_forms_always_pass(c in -5.0f64..5.0, theta in 0.01f64..1.56, seed in any::<u64>()) {
        let p = point(real_space_form_tensor(c, &Matrix::identity(6, 6)).unwrap());
        let scan = axiom_scan(&p, theta, 50, seed, 1e-11).unwrap();
        prop_assert!(scan.holds);
        prop_assert!(scan.max_derived_residual < 1e-11);
    }
}
