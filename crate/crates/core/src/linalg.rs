//! Small dense helpers for inner products taken with respect to an arbitrary
//! Gram matrix. Everything here works in the coordinates of whatever basis the
//! Gram matrix was written in.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Vectors shorter than this (in the g-norm) are treated as lying in the span
/// already built during orthonormalization.
const SPAN_TOL: f64 = 1e-9;

#[inline]
pub fn inner(g: &Matrix, x: &Vector, y: &Vector) -> f64 {
    let n = g.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..n {
            row += g[(i, j)] * y[j];
        }
        acc += x[i] * row;
    }
    acc
}

#[inline]
pub fn norm(g: &Matrix, x: &Vector) -> f64 {
    inner(g, x, x).max(0.0).sqrt()
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// The standard complex structure on R^{2m} in the basis {e1, Je1, ..., em, Jem}:
/// J e_{2k} = e_{2k+1}, J e_{2k+1} = -e_{2k}.
pub fn standard_complex_structure(dim: usize) -> Matrix {
    let mut j = Matrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Removes the components of `v` along an already g-orthonormal family. Two
/// passes, so the result stays orthogonal to working precision.
pub fn project_out(g: &Matrix, v: &Vector, orthonormal: &[Vector]) -> Vector {
    let mut w = v.clone();
    for _ in 0..2 {
        for e in orthonormal {
            let c = inner(g, &w, e);
            w.axpy(-c, e, 1.0);
        }
    }
    w
}

/// g-orthonormal frame adapted to J: {f1, Jf1, f2, Jf2, ...}. Candidate vectors
/// are consumed in order; candidates falling in the span built so far are skipped.
/// Returns `None` if the candidates do not span the whole space.
pub fn adapted_frame(g: &Matrix, j: &Matrix, candidates: &[Vector]) -> Option<Matrix> {
    let dim = g.nrows();
    let mut frame: Vec<Vector> = Vec::with_capacity(dim);
    for cand in candidates {
        if frame.len() >= dim {
            break;
        }
        let w = project_out(g, cand, &frame);
        let len = norm(g, &w);
        if len < SPAN_TOL * norm(g, cand).max(1.0) {
            continue;
        }
        let f = w / len;
        let jf = project_out(g, &(j * &f), &frame);
        let jf = project_out(g, &jf, std::slice::from_ref(&f));
        let jlen = norm(g, &jf);
        if jlen < SPAN_TOL {
            return None;
        }
        frame.push(f);
        frame.push(jf / jlen);
    }
    if frame.len() != dim {
        return None;
    }
    Some(Matrix::from_columns(&frame))
}

/// Plain g-orthonormal frame (no J-adaptation) from candidate vectors.
pub fn orthonormal_frame(g: &Matrix, candidates: &[Vector]) -> Option<Matrix> {
    let dim = g.nrows();
    let mut frame: Vec<Vector> = Vec::with_capacity(dim);
    for cand in candidates {
        if frame.len() >= dim {
            break;
        }
        let w = project_out(g, cand, &frame);
        let len = norm(g, &w);
        if len < SPAN_TOL * norm(g, cand).max(1.0) {
            continue;
        }
        frame.push(w / len);
    }
    (frame.len() == dim).then(|| Matrix::from_columns(&frame))
}

pub fn coordinate_frame(dim: usize) -> Vec<Vector> {
    (0..dim).map(|i| basis_vector(dim, i)).collect()
}

pub fn min_eigenvalue(sym: &Matrix) -> f64 {
    let s = (sym + sym.transpose()) * 0.5;
    s.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn symmetry_residual(m: &Matrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_structure_squares_to_minus_identity() {
        let j = standard_complex_structure(6);
        let sq = &j * &j + Matrix::identity(6, 6);
        assert_eq!(max_abs(&sq), 0.0);
    }

    #[test]
    fn adapted_frame_is_orthonormal_and_paired() {
        let g = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 2.0, 3.0, 3.0]));
        let j = standard_complex_structure(4);
        let f = adapted_frame(&g, &j, &coordinate_frame(4)).unwrap();
        let gram = f.transpose() * &g * &f;
        assert!(max_abs(&(gram - Matrix::identity(4, 4))) < 1e-14);
        let jf = &j * &f;
        for k in 0..2 {
            assert!((jf.column(2 * k) - f.column(2 * k + 1)).amax() < 1e-14);
        }
    }

    #[test]
    fn orthonormal_frame_rejects_deficient_candidates() {
        let g = Matrix::identity(3, 3);
        let cands = vec![
            basis_vector(3, 0),
            basis_vector(3, 0) * 2.0,
            basis_vector(3, 1),
        ];
        assert!(orthonormal_frame(&g, &cands).is_none());
    }
}
