//! Seeded sampling of unit vectors, admissible pairs and test tensors.
//!
//! Every sample index draws from its own ChaCha stream, so a scan gives the
//! same samples however its indices are partitioned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, Matrix, Vector};
use crate::tensor::{CurvatureTensor, HermitianStructure};

/// RNG for sample `index` of a scan seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    Vector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

/// Draws unit vectors and admissible pairs for one Hermitian structure.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    structure: &'a HermitianStructure,
    frame: Matrix,
}

impl<'a> Sampler<'a> {
    /// `None` if g is not positive definite.
    pub fn new(structure: &'a HermitianStructure) -> Option<Self> {
        let frame =
            linalg::orthonormal_frame(structure.g(), &linalg::coordinate_frame(structure.dim()))?;
        Some(Self { structure, frame })
    }

    /// Uniform on the g-unit sphere.
    pub fn unit_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        loop {
            let z = gaussian_vector(self.structure.dim(), rng);
            let len = z.norm();
            if len > 1e-8 {
                let v = &self.frame * z / len;
                return &v / self.structure.norm(&v);
            }
        }
    }

    /// Unit `x` and unit `y` in the g-orthogonal complement of `span{x, Jx}`,
    /// so that `x ⊥ y` and `x ⊥ Jy`.
    pub fn admissible_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vector, Vector) {
        let s = self.structure;
        let x = self.unit_vector(rng);
        let jx = s.apply_j(&x);
        let jx = &jx / s.norm(&jx);
        loop {
            let cand = self.unit_vector(rng);
            let w = linalg::project_out(s.g(), &cand, &[x.clone(), jx.clone()]);
            let len = s.norm(&w);
            if len > 1e-6 {
                return (x, w / len);
            }
        }
    }
}

/// A generic algebraic curvature tensor: a signed sum of `π₁(h)` over random
/// symmetric forms `h`. Such sums span the space of algebraic curvature tensors.
pub fn random_curvature_tensor<R: Rng + ?Sized>(
    dim: usize,
    terms: usize,
    rng: &mut R,
) -> CurvatureTensor {
    let mut acc = CurvatureTensor::zeros(dim);
    for t in 0..terms {
        let a = Matrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let h = (&a + a.transpose()) * 0.5;
        let term = CurvatureTensor::pi1(&h).expect("symmetric by construction");
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&term.scaled(sign));
    }
    acc
}

/// Random element of U(m) acting on R^{2m} with the standard structure: a
/// product of phase rotations in each complex line and real rotations mixing
/// two complex coordinates. Preserves the identity Gram matrix and commutes
/// with the standard J.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, factors: usize, rng: &mut R) -> Matrix {
    let m = dim / 2;
    let mut u = Matrix::identity(dim, dim);
    for _ in 0..factors {
        let angle: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (s, c) = angle.sin_cos();
        let mut r = Matrix::identity(dim, dim);
        if m < 2 || rng.random_bool(0.5) {
            let k = rng.random_range(0..m);
            let (a, b) = (2 * k, 2 * k + 1);
            r[(a, a)] = c;
            r[(a, b)] = -s;
            r[(b, a)] = s;
            r[(b, b)] = c;
        } else {
            let k = rng.random_range(0..m);
            let mut l = rng.random_range(0..m - 1);
            if l >= k {
                l += 1;
            }
            for off in 0..2 {
                let (a, b) = (2 * k + off, 2 * l + off);
                r[(a, a)] = c;
                r[(a, b)] = -s;
                r[(b, a)] = s;
                r[(b, b)] = c;
            }
        }
        u = r * u;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::check_admissible;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = stream_rng(7, 3).sample(StandardNormal);
        let b: f64 = stream_rng(7, 3).sample(StandardNormal);
        let c: f64 = stream_rng(7, 4).sample(StandardNormal);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn pairs_are_admissible_under_a_nontrivial_metric() {
        // g = diag(2,2,5,5) is compatible with the standard J.
        let g = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 2.0, 5.0, 5.0]));
        let s = HermitianStructure::new(g, linalg::standard_complex_structure(4)).unwrap();
        let sampler = Sampler::new(&s).unwrap();
        for i in 0..200 {
            let (x, y) = sampler.admissible_pair(&mut stream_rng(11, i));
            check_admissible(&s, &x, &y).unwrap();
        }
    }

    #[test]
    fn unitary_commutes_with_j() {
        let j = linalg::standard_complex_structure(6);
        let mut rng = stream_rng(1, 0);
        for _ in 0..20 {
            let u = random_unitary(6, 12, &mut rng);
            assert!(linalg::max_abs(&(&u * &j - &j * &u)) < 1e-14);
            assert!(linalg::max_abs(&(u.transpose() * &u - Matrix::identity(6, 6))) < 1e-13);
        }
    }

    #[test]
    fn random_tensors_have_curvature_symmetries() {
        let mut rng = stream_rng(5, 0);
        let r = random_curvature_tensor(4, 4, &mut rng);
        assert!(r.symmetry_residuals().max() < 1e-12);
        assert!(r.max_abs() > 0.1);
    }
}
