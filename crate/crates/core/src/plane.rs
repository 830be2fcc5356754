//! 2-planes in a tangent space, their Kähler angle, and the θ-holomorphic
//! constructions.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::tensor::HermitianStructure;

/// Gram determinants at or below this are degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Tolerance for the unit-norm and orthogonality preconditions.
pub const ADMISSIBILITY_TOL: f64 = 1e-10;
/// Below this `sin φ` a plane is reported in its holomorphic form.
const HOLOMORPHIC_SIN_TOL: f64 = 1e-8;

/// A 2-dimensional subspace of one tangent space.
#[derive(Debug, Clone)]
pub struct TwoPlane<'a> {
    structure: &'a HermitianStructure,
    basis: [Vector; 2],
}

impl<'a> TwoPlane<'a> {
    pub fn new(structure: &'a HermitianStructure, b1: Vector, b2: Vector) -> Result<Self> {
        structure.check_vector(&b1)?;
        structure.check_vector(&b2)?;
        let plane = Self {
            structure,
            basis: [b1, b2],
        };
        let gram_det = plane.gram_determinant();
        if gram_det <= DEGENERACY_TOL {
            return Err(Error::DegeneratePlane { gram_det });
        }
        Ok(plane)
    }

    pub fn structure(&self) -> &'a HermitianStructure {
        self.structure
    }

    pub fn basis(&self) -> &[Vector; 2] {
        &self.basis
    }

    pub fn gram_determinant(&self) -> f64 {
        let s = self.structure;
        let [a, b] = &self.basis;
        s.inner(a, a) * s.inner(b, b) - s.inner(a, b).powi(2)
    }

    /// Gram–Schmidt with respect to g.
    pub fn orthonormalize(&self) -> Result<Self> {
        let gram_det = self.gram_determinant();
        if gram_det <= DEGENERACY_TOL {
            return Err(Error::DegeneratePlane { gram_det });
        }
        let s = self.structure;
        let [a, b] = &self.basis;
        let x = a / s.norm(a);
        let mut w = b.clone();
        for _ in 0..2 {
            let c = s.inner(&w, &x);
            w.axpy(-c, &x, 1.0);
        }
        let y = &w / s.norm(&w);
        Ok(Self {
            structure: s,
            basis: [x, y],
        })
    }

    /// Angle between the plane and its image under J, in `[0, π/2]`.
    pub fn kahler_angle(&self) -> Result<f64> {
        let on = self.orthonormalize()?;
        let [x, y] = &on.basis;
        let s = self.structure;
        let cos = s.inner(x, &s.apply_j(y)).abs().clamp(0.0, 1.0);
        Ok(cos.acos())
    }

    /// Decomposes the plane as `span{x, Jx cos φ + y sin φ}` with
    /// `x ⊥ y, Jy`. For a holomorphic plane `y` is absent and the basis is `{x, Jx}`.
    pub fn canonical_basis(&self) -> Result<CanonicalBasis> {
        let on = self.orthonormalize()?;
        let s = self.structure;
        let [u, w] = &on.basis;
        let jx_dot_w = s.inner(&s.apply_j(u), w);
        let cos_phi = jx_dot_w.abs().clamp(0.0, 1.0);
        // sign chosen so that g(Jx, w) = cos φ >= 0
        let x = if jx_dot_w < 0.0 { -u } else { u.clone() };
        let jx = s.apply_j(&x);
        let mut rest = w - &jx * cos_phi;
        let sin_phi = s.norm(&rest);
        if sin_phi <= HOLOMORPHIC_SIN_TOL {
            return Ok(CanonicalBasis {
                x,
                y: None,
                phi: 0.0,
            });
        }
        rest /= sin_phi;
        Ok(CanonicalBasis {
            x,
            y: Some(rest),
            phi: sin_phi.atan2(cos_phi),
        })
    }
}

/// Result of [`TwoPlane::canonical_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalBasis {
    pub x: Vector,
    pub y: Option<Vector>,
    pub phi: f64,
}

impl CanonicalBasis {
    /// The second basis vector `Jx cos φ + y sin φ` (or `Jx` when holomorphic).
    pub fn second(&self, structure: &HermitianStructure) -> Vector {
        let jx = structure.apply_j(&self.x);
        match &self.y {
            Some(y) => jx * self.phi.cos() + y * self.phi.sin(),
            None => jx,
        }
    }
}

/// Checks `‖x‖ = ‖y‖ = 1`, `g(x, y) = 0`, `g(x, Jy) = 0` within [`ADMISSIBILITY_TOL`].
pub fn check_admissible(s: &HermitianStructure, x: &Vector, y: &Vector) -> Result<()> {
    s.check_vector(x)?;
    s.check_vector(y)?;
    let checks = [
        ("x is not a unit vector", (s.norm(x) - 1.0).abs()),
        ("y is not a unit vector", (s.norm(y) - 1.0).abs()),
        ("x is not orthogonal to y", s.inner(x, y).abs()),
        ("x is not orthogonal to Jy", s.inner(x, &s.apply_j(y)).abs()),
    ];
    for (what, residual) in checks {
        if residual > ADMISSIBILITY_TOL {
            return Err(Error::Inadmissible { what, residual });
        }
    }
    Ok(())
}

/// The plane `span{x, Jx cos θ + y sin θ}`, whose Kähler angle is `θ`.
pub fn make_theta_plane<'a>(
    s: &'a HermitianStructure,
    x: &Vector,
    y: &Vector,
    theta: f64,
) -> Result<TwoPlane<'a>> {
    check_admissible(s, x, y)?;
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::AngleOutOfRange {
            theta,
            range: "[0, π/2]",
        });
    }
    let second = s.apply_j(x) * theta.cos() + y * theta.sin();
    TwoPlane::new(s, x.clone(), second)
}

/// Principal angles between two planes, ascending.
///
/// Computed from both the cosines (singular values of the cross Gram matrix)
/// and the sines (residual after projecting one plane onto the other), so that
/// angles near zero are resolved to working precision.
pub fn principal_angles(a: &TwoPlane<'_>, b: &TwoPlane<'_>) -> Result<[f64; 2]> {
    let s = a.structure;
    let a = a.orthonormalize()?;
    let b = b.orthonormalize()?;
    let cross = nalgebra::Matrix2::from_fn(|i, j| s.inner(&a.basis[i], &b.basis[j]));
    let residuals: Vec<Vector> = b
        .basis
        .iter()
        .map(|v| {
            let mut r = v.clone();
            for e in &a.basis {
                let c = s.inner(&r, e);
                r.axpy(-c, e, 1.0);
            }
            r
        })
        .collect();
    let res_gram = nalgebra::Matrix2::from_fn(|i, j| s.inner(&residuals[i], &residuals[j]));
    let mut cos2: Vec<f64> = (cross.transpose() * cross)
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    let mut sin2: Vec<f64> = res_gram
        .symmetric_eigenvalues()
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    cos2.sort_by(|p, q| q.total_cmp(p));
    sin2.sort_by(|p, q| p.total_cmp(q));
    Ok([
        sin2[0].sqrt().atan2(cos2[0].sqrt()),
        sin2[1].sqrt().atan2(cos2[1].sqrt()),
    ])
}
