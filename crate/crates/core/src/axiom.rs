//! Pointwise necessary conditions of the θ-holomorphic 2-plane axiom.
//!
//! If a totally umbilical submanifold with parallel mean curvature (or a
//! totally geodesic one) is tangent to the plane `span{x, Jx cos θ + y sin θ}`,
//! the Codazzi equation forces the normal component of `R(X, Y)Z` to vanish
//! for tangent `X, Y, Z`. Pairing with the normals `Jy` and
//! `Jx sin θ - y cos θ` gives the two scalar conditions checked here as
//! `eq1` and `eq2`; `eq3..eq5` are their consequences.

use std::f64::consts::FRAC_PI_2;

use crate::curvature::pair_curvature;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::plane::{check_admissible, ADMISSIBILITY_TOL};
use crate::sampling::{stream_rng, Sampler};
use crate::tensor::{CurvatureTensor, HermitianPoint};

pub const DEFAULT_SAMPLES: usize = 1000;

/// Left-hand sides of the five conditions for one `(x, y, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRecord {
    pub theta: f64,
    /// `R(Jx cos θ + y sin θ, x, x, Jy)`
    pub eq1: f64,
    /// `R(Jx cos θ + y sin θ, x, x, Jx sin θ - y cos θ)`
    pub eq2: f64,
    /// `R(Jx, x, x, Jy)`
    pub eq3: f64,
    /// `H(x) - K(x, y)`
    pub eq4: f64,
    /// `H(x) - H(y)`
    pub eq5: f64,
    pub x: Vector,
    pub y: Vector,
}

impl ResidualRecord {
    /// `max(|eq1|, |eq2|)`, the quantity the axiom forces to zero.
    pub fn axiom_residual(&self) -> f64 {
        self.eq1.abs().max(self.eq2.abs())
    }

    pub fn max_abs(&self) -> f64 {
        [self.eq1, self.eq2, self.eq3, self.eq4, self.eq5]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn check_open_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::AngleOutOfRange {
            theta,
            range: "(0, π/2)",
        });
    }
    Ok(())
}

pub fn necessary_residuals(
    p: &HermitianPoint,
    theta: f64,
    x: &Vector,
    y: &Vector,
) -> Result<ResidualRecord> {
    check_open_theta(theta)?;
    let s = p.structure();
    check_admissible(s, x, y)?;
    let (sin, cos) = theta.sin_cos();
    let jx = s.apply_j(x);
    let jy = s.apply_j(y);
    let tangent = &jx * cos + y * sin;
    let normal2 = &jx * sin - y * cos;
    for (n, what) in [
        (&jy, "Jy is not normal to the plane"),
        (&normal2, "second normal is not normal to the plane"),
    ] {
        let residual = s.inner(n, x).abs().max(s.inner(n, &tangent).abs());
        if residual > ADMISSIBILITY_TOL {
            return Err(Error::Inadmissible { what, residual });
        }
    }
    Ok(evaluate_record(
        p, theta, x, y, &jx, &jy, &tangent, &normal2,
    ))
}

#[allow(clippy::too_many_arguments)]
fn evaluate_record(
    p: &HermitianPoint,
    theta: f64,
    x: &Vector,
    y: &Vector,
    jx: &Vector,
    jy: &Vector,
    tangent: &Vector,
    normal2: &Vector,
) -> ResidualRecord {
    let r = p.curvature();
    let hx = pair_curvature(p, x, jx);
    let hy = pair_curvature(p, y, jy);
    ResidualRecord {
        theta,
        eq1: r.contract(tangent, x, x, jy),
        eq2: r.contract(tangent, x, x, normal2),
        eq3: r.contract(jx, x, x, jy),
        eq4: hx - pair_curvature(p, x, y),
        eq5: hx - hy,
        x: x.clone(),
        y: y.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomScan {
    pub holds: bool,
    /// `max(|eq1|, |eq2|)` over all samples.
    pub max_residual: f64,
    /// Largest `|eq3|, |eq4|, |eq5|` seen, for the implication checks.
    pub max_derived_residual: f64,
    /// The sample attaining `max_residual`.
    pub worst: ResidualRecord,
    pub samples: usize,
}

/// Samples admissible pairs and checks `eq1 = eq2 = 0` within `tol`.
pub fn axiom_scan(
    p: &HermitianPoint,
    theta: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<AxiomScan> {
    check_open_theta(theta)?;
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "axiom scan needs at least one sample".into(),
        ));
    }
    let s = p.structure();
    let sampler = Sampler::new(s).ok_or(Error::IndefiniteMetric {
        min_eigenvalue: crate::linalg::min_eigenvalue(s.g()),
    })?;
    let mut worst: Option<ResidualRecord> = None;
    let mut max_derived = 0.0_f64;
    for i in 0..samples as u64 {
        let (x, y) = sampler.admissible_pair(&mut stream_rng(seed, i));
        let rec = necessary_residuals(p, theta, &x, &y)?;
        max_derived = max_derived
            .max(rec.eq3.abs())
            .max(rec.eq4.abs())
            .max(rec.eq5.abs());
        // strict comparison keeps the first argmax, independent of evaluation order ties
        if worst
            .as_ref()
            .is_none_or(|w| rec.axiom_residual() > w.axiom_residual())
        {
            worst = Some(rec);
        }
    }
    let worst = worst.expect("at least one sample");
    let max_residual = worst.axiom_residual();
    Ok(AxiomScan {
        holds: max_residual <= tol,
        max_residual,
        max_derived_residual: max_derived,
        worst,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormDefect {
    /// Least-squares coefficient of `R` along `π₁`.
    pub c_star: f64,
    /// Max-abs component of `R - c_star·π₁` in a g-orthonormal J-adapted frame.
    pub defect_norm: f64,
}

/// Projects `R` onto `π₁` in an orthonormal adapted frame. `defect_norm = 0`
/// means the point has constant sectional curvature `c_star`.
pub fn space_form_defect(p: &HermitianPoint) -> Result<SpaceFormDefect> {
    let frame = p
        .structure()
        .adapted_frame()
        .ok_or(Error::IndefiniteMetric {
            min_eigenvalue: crate::linalg::min_eigenvalue(p.g()),
        })?;
    let r = p.curvature().transform(&frame);
    let dim = p.dim();
    let pi1 = CurvatureTensor::pi1(&Matrix::identity(dim, dim))?;
    let c_star = r.dot(&pi1) / pi1.dot(&pi1);
    let defect_norm = r.sub(&pi1.scaled(c_star)).max_abs();
    Ok(SpaceFormDefect {
        c_star,
        defect_norm,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum TheoremOutcome {
    /// Axiom holds and the point is a real space form.
    Confirmed,
    /// Axiom holds but the point is not a real space form.
    Violated,
    /// Axiom fails; the witness is the sample with the largest residual.
    Contrapositive { witness: ResidualRecord },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryOutcome {
    /// Kähler, axiom holds, and the curvature vanishes.
    Flat,
    /// Kähler, axiom holds, but `c_star` is not zero.
    Violated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub scan: AxiomScan,
    pub defect: SpaceFormDefect,
    pub theorem: TheoremOutcome,
    /// `Some` only when a Kähler residual was supplied.
    pub kahler: Option<bool>,
    /// `Some` only for Kähler points where the axiom holds.
    pub corollary: Option<CorollaryOutcome>,
}

impl TheoremReport {
    /// True when nothing contradicts the theorem or its corollary.
    pub fn consistent(&self) -> bool {
        !matches!(self.theorem, TheoremOutcome::Violated)
            && !matches!(self.corollary, Some(CorollaryOutcome::Violated))
    }
}

/// Runs the scan and checks the conclusion at this point. `kahler_residual`
/// is `|∇J|` at the point if known; the point counts as Kähler when it is at
/// most `tol`.
pub fn theorem_check(
    p: &HermitianPoint,
    theta: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    kahler_residual: Option<f64>,
) -> Result<TheoremReport> {
    let scan = axiom_scan(p, theta, samples, seed, tol)?;
    let defect = space_form_defect(p)?;
    let kahler = kahler_residual.map(|r| r <= tol);
    let (theorem, corollary) = if scan.holds {
        let theorem = if defect.defect_norm <= tol {
            TheoremOutcome::Confirmed
        } else {
            TheoremOutcome::Violated
        };
        let corollary = (kahler == Some(true)).then(|| {
            if defect.c_star.abs() <= tol {
                CorollaryOutcome::Flat
            } else {
                CorollaryOutcome::Violated
            }
        });
        (theorem, corollary)
    } else {
        (
            TheoremOutcome::Contrapositive {
                witness: scan.worst.clone(),
            },
            None,
        )
    };
    Ok(TheoremReport {
        scan,
        defect,
        theorem,
        kahler,
        corollary,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurReport {
    pub c_values: Vec<f64>,
    /// `max c - min c`.
    pub spread: f64,
    pub constant: bool,
}

/// Collects `c_star` at several points that are each real space forms and
/// reports whether the constant is the same everywhere.
pub fn schur_scan(points: &[HermitianPoint], tol: f64) -> Result<SchurReport> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "Schur scan needs at least 2 points, got {}",
            points.len()
        )));
    }
    let mut c_values = Vec::with_capacity(points.len());
    for (index, p) in points.iter().enumerate() {
        let d = space_form_defect(p)?;
        if d.defect_norm > tol {
            return Err(Error::NotSpaceForm {
                index,
                defect: d.defect_norm,
            });
        }
        c_values.push(d.c_star);
    }
    let (lo, hi) = c_values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
            (lo.min(c), hi.max(c))
        });
    let spread = hi - lo;
    Ok(SchurReport {
        c_values,
        spread,
        constant: spread <= tol,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;
    use crate::linalg::basis_vector;
    use crate::tensor::{complex_space_form_tensor, real_space_form_tensor, HermitianStructure};

    fn point(r: impl FnOnce(&HermitianStructure) -> CurvatureTensor) -> HermitianPoint {
        let s = HermitianStructure::standard(4).unwrap();
        let t = r(&s);
        HermitianPoint::new(s, t).unwrap()
    }

    fn e(i: usize) -> Vector {
        basis_vector(4, i)
    }

    #[test]
    fn space_form_has_zero_residuals() {
        let p = point(|s| real_space_form_tensor(3.0, s.g()).unwrap());
        let y = (e(2) - e(3)) / 2f64.sqrt();
        let rec = necessary_residuals(&p, 0.7, &e(0), &y).unwrap();
        assert!(rec.max_abs() < 1e-14);
        let flat = point(|_| CurvatureTensor::zeros(4));
        assert_eq!(
            necessary_residuals(&flat, 0.7, &e(0), &y)
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn complex_space_form_residuals() {
        let p = point(|s| complex_space_form_tensor(4.0, s.g(), s.j()).unwrap());
        let rec = necessary_residuals(&p, FRAC_PI_4, &e(0), &e(2)).unwrap();
        assert!((rec.eq4 - 3.0).abs() < 1e-12);
        assert!((rec.eq2 - 1.5).abs() < 1e-12);
        assert!(rec.eq1.abs() < 1e-14 && rec.eq3.abs() < 1e-14 && rec.eq5.abs() < 1e-14);
    }

    #[test]
    fn endpoints_and_bad_pairs_are_rejected() {
        let p = point(|_| CurvatureTensor::zeros(4));
        for theta in [0.0, FRAC_PI_2, -0.1] {
            assert!(matches!(
                necessary_residuals(&p, theta, &e(0), &e(2)),
                Err(Error::AngleOutOfRange { .. })
            ));
            assert!(axiom_scan(&p, theta, 10, 0, 1e-12).is_err());
        }
        assert!(matches!(
            necessary_residuals(&p, 0.5, &e(0), &e(1)),
            Err(Error::Inadmissible { .. })
        ));
    }

    #[test]
    fn scans_on_models() {
        let sp = point(|s| real_space_form_tensor(1.0, s.g()).unwrap());
        let scan = axiom_scan(&sp, FRAC_PI_4, 1000, 3, 1e-12).unwrap();
        assert!(scan.holds);
        let cp = point(|s| complex_space_form_tensor(4.0, s.g(), s.j()).unwrap());
        let scan = axiom_scan(&cp, FRAC_PI_4, 1000, 3, 1e-12).unwrap();
        assert!(!scan.holds);
        assert!((scan.worst.eq2.abs() - 1.5).abs() < 1e-9);
        let flat = point(|_| CurvatureTensor::zeros(4));
        assert!(axiom_scan(&flat, 0.3, 50, 3, 0.0).unwrap().holds);
    }

    #[test]
    fn defect_examples() {
        let p = point(|s| real_space_form_tensor(5.0, s.g()).unwrap());
        let d = space_form_defect(&p).unwrap();
        assert!((d.c_star - 5.0).abs() < 1e-14);
        assert!(d.defect_norm < 1e-14);
        let z = space_form_defect(&point(|_| CurvatureTensor::zeros(4))).unwrap();
        assert_eq!((z.c_star, z.defect_norm), (0.0, 0.0));
    }

    #[test]
    fn theorem_check_outcomes() {
        let sp = point(|s| real_space_form_tensor(2.0, s.g()).unwrap());
        let rep = theorem_check(&sp, 0.9, 200, 1, 1e-12, None).unwrap();
        assert_eq!(rep.theorem, TheoremOutcome::Confirmed);
        assert!(rep.corollary.is_none());

        let cp = point(|s| complex_space_form_tensor(4.0, s.g(), s.j()).unwrap());
        let rep = theorem_check(&cp, FRAC_PI_4, 200, 1, 1e-12, Some(0.0)).unwrap();
        assert!(matches!(rep.theorem, TheoremOutcome::Contrapositive { .. }));
        assert!(rep.consistent());

        let flat = point(|_| CurvatureTensor::zeros(4));
        let rep = theorem_check(&flat, 0.4, 200, 1, 1e-12, Some(0.0)).unwrap();
        assert_eq!(rep.corollary, Some(CorollaryOutcome::Flat));
        assert_eq!(rep.defect.c_star, 0.0);

        // A Kähler flag on a curved space form contradicts the corollary.
        let rep = theorem_check(&sp, 0.4, 50, 1, 1e-12, Some(0.0)).unwrap();
        assert_eq!(rep.corollary, Some(CorollaryOutcome::Violated));
        assert!(!rep.consistent());
    }

    #[test]
    fn schur_examples() {
        let twice = point(|s| real_space_form_tensor(2.0, s.g()).unwrap());
        let rep = schur_scan(&[twice.clone(), twice.clone(), twice.clone()], 1e-12).unwrap();
        assert_eq!(rep.spread, 0.0);
        assert!(rep.constant);

        let once = point(|s| real_space_form_tensor(1.0, s.g()).unwrap());
        let rep = schur_scan(&[once, twice], 1e-12).unwrap();
        assert!((rep.spread - 1.0).abs() < 1e-14);
        assert!(!rep.constant);

        let cp = point(|s| complex_space_form_tensor(4.0, s.g(), s.j()).unwrap());
        let flat = point(|_| CurvatureTensor::zeros(4));
        let err = schur_scan(&[flat.clone(), cp], 1e-9).unwrap_err();
        assert!(matches!(err, Error::NotSpaceForm { index: 1, .. }));
        assert!(schur_scan(&[flat], 1e-9).is_err());
    }
}
