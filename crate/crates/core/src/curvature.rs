//! Sectional and holomorphic sectional curvature, and constancy scans.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::plane::{TwoPlane, ADMISSIBILITY_TOL};
use crate::sampling::{stream_rng, Sampler};
use crate::tensor::HermitianPoint;

/// `K(α) = R(b₁, b₂, b₂, b₁)` on a g-orthonormal basis of the plane.
pub fn sectional_curvature(p: &HermitianPoint, plane: &TwoPlane<'_>) -> Result<f64> {
    let on = plane.orthonormalize()?;
    let [x, y] = on.basis();
    p.curvature().evaluate(x, y, y, x)
}

/// `H(x) = R(x, Jx, Jx, x)`, computed as the sectional curvature of `span{x, Jx}`.
pub fn holomorphic_curvature(p: &HermitianPoint, x: &Vector) -> Result<f64> {
    let s = p.structure();
    s.check_vector(x)?;
    let norm = s.norm(x);
    if (norm - 1.0).abs() > ADMISSIBILITY_TOL {
        return Err(Error::NonUnit { norm });
    }
    let plane = TwoPlane::new(s, x.clone(), s.apply_j(x))?;
    sectional_curvature(p, &plane)
}

/// `K(x, y) = R(x, y, y, x)` evaluated directly (no re-orthonormalization).
pub(crate) fn pair_curvature(p: &HermitianPoint, x: &Vector, y: &Vector) -> f64 {
    p.curvature().contract(x, y, y, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    /// `H(x)` over random unit `x`.
    Holomorphic,
    /// `K(x, y)` over random orthonormal pairs with `x ⊥ y, Jy`.
    Antiholomorphic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstancyScan {
    pub mean: f64,
    /// `max |value - mean|` over the samples.
    pub max_deviation: f64,
}

pub fn constancy_scan(
    p: &HermitianPoint,
    kind: PlaneKind,
    samples: usize,
    seed: u64,
) -> Result<ConstancyScan> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "constancy scan needs at least 2 samples, got {samples}"
        )));
    }
    let s = p.structure();
    let sampler = Sampler::new(s).ok_or(Error::IndefiniteMetric {
        min_eigenvalue: crate::linalg::min_eigenvalue(s.g()),
    })?;
    let values = (0..samples as u64)
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            match kind {
                PlaneKind::Holomorphic => {
                    let x = sampler.unit_vector(&mut rng);
                    holomorphic_curvature(p, &x)
                }
                PlaneKind::Antiholomorphic => {
                    let (x, y) = sampler.admissible_pair(&mut rng);
                    Ok(pair_curvature(p, &x, &y))
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max_deviation = values.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs()));
    Ok(ConstancyScan {
        mean,
        max_deviation,
    })
}
