//! Independent oracles: closed-form tensors evaluated straight from their
//! defining formulas, and a sampler that shares no code with the library.

#![allow(dead_code)]

use hermitian_lab::{Matrix, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dot(g: &Matrix, x: &Vector, y: &Vector) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * g[(i, j)] * y[j];
        }
    }
    s
}

/// `J e_{2k} = e_{2k+1}`, `J e_{2k+1} = -e_{2k}`, written out entry by entry.
pub fn std_j(dim: usize) -> Matrix {
    let mut j = Matrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

pub fn pi1(h: &Matrix, x: &Vector, y: &Vector, z: &Vector, u: &Vector) -> f64 {
    dot(h, x, u) * dot(h, y, z) - dot(h, x, z) * dot(h, y, u)
}

pub fn pi2(g: &Matrix, j: &Matrix, x: &Vector, y: &Vector, z: &Vector, u: &Vector) -> f64 {
    let (ju, jz, jy) = (j * u, j * z, j * y);
    dot(g, x, &ju) * dot(g, y, &jz)
        - dot(g, x, &jz) * dot(g, y, &ju)
        - 2.0 * dot(g, x, &jy) * dot(g, z, &ju)
}

/// `(c/4)(π₁ + π₂)` for the identity metric and `j`.
pub fn complex_space_form(
    c: f64,
    j: &Matrix,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    u: &Vector,
) -> f64 {
    let g = Matrix::identity(x.len(), x.len());
    0.25 * c * (pi1(&g, x, y, z, u) + pi2(&g, j, x, y, z, u))
}

pub fn e(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// All components `f(e_a, e_b, e_c, e_d)`.
pub fn components(dim: usize, f: impl Fn(&Vector, &Vector, &Vector, &Vector) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(dim.pow(4));
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    out.push(f(&e(dim, a), &e(dim, b), &e(dim, c), &e(dim, d)));
                }
            }
        }
    }
    out
}

/// Least-squares coefficient along `π₁(Id)` and the max-abs remainder.
pub fn brute_force_defect(dim: usize, r: &[f64]) -> (f64, f64) {
    let id = Matrix::identity(dim, dim);
    let p = components(dim, |x, y, z, u| pi1(&id, x, y, z, u));
    let num: f64 = r.iter().zip(&p).map(|(a, b)| a * b).sum();
    let den: f64 = p.iter().map(|b| b * b).sum();
    let c = num / den;
    let defect = r
        .iter()
        .zip(&p)
        .fold(0.0_f64, |m, (a, b)| m.max((a - c * b).abs()));
    (c, defect)
}

pub fn gaussian(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    Vector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

/// Unit `x`, unit `y` orthogonal to `x` and `Jx` (identity metric).
pub fn admissible(j: &Matrix, rng: &mut ChaCha8Rng) -> (Vector, Vector) {
    let dim = j.nrows();
    let x = gaussian(dim, rng).normalize();
    let jx = j * &x;
    let mut y = gaussian(dim, rng);
    y -= &x * x.dot(&y);
    y -= &jx * jx.dot(&y);
    (x, y.normalize())
}

/// Christoffel symbols of `e^{2φ} δ`: `Γ^k_ij = δ_ki ∂_jφ + δ_kj ∂_iφ - δ_ij ∂_kφ`.
pub fn conformal_christoffel(grad_phi: &[f64], k: usize, i: usize, j: usize) -> f64 {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    d(k, i) * grad_phi[j] + d(k, j) * grad_phi[i] - d(i, j) * grad_phi[k]
}
