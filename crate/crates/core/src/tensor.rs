//! Pointwise almost Hermitian data and algebraic curvature tensors.
//!
//! Curvature is stored as the fully covariant form
//! `R(X, Y, Z, U) = g(R(X, Y)Z, U)` with `R(X, Y) = [∇_X, ∇_Y] - ∇_[X,Y]`,
//! so that `R(x, y, y, x)` is the sectional curvature of an orthonormal pair
//! and the unit sphere has `R = π₁`.

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs, Matrix, Vector};

/// Default tolerance for exact algebraic constructions.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Compatibility tolerance used by constructors that require (g, J) to be Hermitian.
const COMPAT_TOL: f64 = 1e-10;

/// Rank-4 covariant tensor on a `dim`-dimensional space, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    data: Vec<f64>,
}

impl CurvatureTensor {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { dim, data }
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.offset(i, j, k, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let o = self.offset(i, j, k, l);
        self.data[o] = value;
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    /// `π₁(x, y, z, u) = h(x, u) h(y, z) - h(x, z) h(y, u)` for a symmetric form `h`.
    ///
    /// With `h = g` this is the curvature of the unit sphere. Degenerate or
    /// indefinite symmetric forms are accepted; the result is still an algebraic
    /// curvature tensor.
    pub fn pi1(h: &Matrix) -> Result<Self> {
        check_square(h)?;
        let sym = linalg::symmetry_residual(h);
        if sym > COMPAT_TOL {
            return Err(Error::InvalidArgument(format!(
                "form is not symmetric (residual {sym:e})"
            )));
        }
        let n = h.nrows();
        Ok(Self::from_fn(n, |i, j, k, l| {
            h[(i, l)] * h[(j, k)] - h[(i, k)] * h[(j, l)]
        }))
    }

    /// `π₂(x, y, z, u) = g(x, Ju) g(y, Jz) - g(x, Jz) g(y, Ju) - 2 g(x, Jy) g(z, Ju)`.
    pub fn pi2(g: &Matrix, j: &Matrix) -> Result<Self> {
        check_square(g)?;
        check_same_dim(g, j)?;
        let residual = compatibility_residual(g, j);
        if residual > COMPAT_TOL {
            return Err(Error::Incompatible { residual });
        }
        // omega(x, y) = g(x, Jy)
        let omega = g * j;
        let n = g.nrows();
        Ok(Self::from_fn(n, |a, b, c, d| {
            omega[(a, d)] * omega[(b, c)]
                - omega[(a, c)] * omega[(b, d)]
                - 2.0 * omega[(a, b)] * omega[(c, d)]
        }))
    }

    /// Multilinear contraction `R(x, y, z, u)`.
    pub fn evaluate(&self, x: &Vector, y: &Vector, z: &Vector, u: &Vector) -> Result<f64> {
        for v in [x, y, z, u] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        Ok(self.contract(x, y, z, u))
    }

    /// Unchecked contraction; callers guarantee matching lengths.
    pub(crate) fn contract(&self, x: &Vector, y: &Vector, z: &Vector, u: &Vector) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            let mut si = 0.0;
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let mut sj = 0.0;
                for k in 0..n {
                    if z[k] == 0.0 {
                        continue;
                    }
                    let base = self.offset(i, j, k, 0);
                    let row = &self.data[base..base + n];
                    let sk: f64 = row.iter().zip(u.iter()).map(|(r, v)| r * v).sum();
                    sj += z[k] * sk;
                }
                si += y[j] * sj;
            }
            acc += x[i] * si;
        }
        acc
    }

    /// Components in a new basis whose vectors are the columns of `frame`:
    /// `R'(a, b, c, d) = R(f_a, f_b, f_c, f_d)`.
    pub fn transform(&self, frame: &Matrix) -> Self {
        let n = self.dim;
        let m = frame.ncols();
        assert_eq!(frame.nrows(), n, "frame rows must match tensor dimension");
        // Contract one slot at a time; the intermediate array keeps the already
        // transformed slots in front.
        let mut cur = self.data.clone();
        let mut dims = [n, n, n, n];
        for slot in 0..4 {
            let mut next_dims = dims;
            next_dims[slot] = m;
            let mut next = vec![0.0; next_dims.iter().product()];
            let idx = |d: &[usize; 4], a: usize, b: usize, c: usize, e: usize| {
                ((a * d[1] + b) * d[2] + c) * d[3] + e
            };
            for a in 0..next_dims[0] {
                for b in 0..next_dims[1] {
                    for c in 0..next_dims[2] {
                        for e in 0..next_dims[3] {
                            let out = [a, b, c, e];
                            let mut s = 0.0;
                            for old in 0..n {
                                let mut src = out;
                                src[slot] = old;
                                let f = frame[(old, out[slot])];
                                if f != 0.0 {
                                    s += f * cur[idx(&dims, src[0], src[1], src[2], src[3])];
                                }
                            }
                            next[idx(&next_dims, a, b, c, e)] = s;
                        }
                    }
                }
            }
            cur = next;
            dims = next_dims;
        }
        Self { dim: m, data: cur }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1.0))
    }

    /// Component-wise inner product.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Max-abs deviation from each of the algebraic curvature symmetries.
    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let n = self.dim;
        let mut res = SymmetryResiduals::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        res.antisymmetry_first =
                            res.antisymmetry_first.max((r + self.get(j, i, k, l)).abs());
                        res.antisymmetry_second = res
                            .antisymmetry_second
                            .max((r + self.get(i, j, l, k)).abs());
                        res.pair_symmetry = res.pair_symmetry.max((r - self.get(k, l, i, j)).abs());
                        let b = r + self.get(j, k, i, l) + self.get(k, i, j, l);
                        res.bianchi = res.bianchi.max(b.abs());
                    }
                }
            }
        }
        res
    }

    /// Checks `R(X, Y, Z, U) = R(JX, JY, JZ, JU)` on all basis 4-tuples.
    pub fn rk_check(&self, j: &Matrix, tol: f64) -> RkCheck {
        let rotated = self.transform(j);
        let residual = self.sub(&rotated).max_abs();
        RkCheck {
            holds: residual <= tol,
            residual,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SymmetryResiduals {
    /// `R(x,y,z,u) + R(y,x,z,u)`
    pub antisymmetry_first: f64,
    /// `R(x,y,z,u) + R(x,y,u,z)`
    pub antisymmetry_second: f64,
    /// `R(x,y,z,u) - R(z,u,x,y)`
    pub pair_symmetry: f64,
    /// first Bianchi identity
    pub bianchi: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.antisymmetry_first
            .max(self.antisymmetry_second)
            .max(self.pair_symmetry)
            .max(self.bianchi)
    }

    pub fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("curvature_antisymmetry_first", self.antisymmetry_first),
            ("curvature_antisymmetry_second", self.antisymmetry_second),
            ("curvature_pair_symmetry", self.pair_symmetry),
            ("curvature_bianchi", self.bianchi),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkCheck {
    pub holds: bool,
    pub residual: f64,
}

/// Metric and almost complex structure on one tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianStructure {
    g: Matrix,
    j: Matrix,
}

impl HermitianStructure {
    /// Shape checks only; use [`HermitianPoint::validate`] for the invariants.
    pub fn new(g: Matrix, j: Matrix) -> Result<Self> {
        check_square(&g)?;
        check_same_dim(&g, &j)?;
        Ok(Self { g, j })
    }

    /// Identity Gram matrix with the standard J in the basis {e1, Je1, ..., em, Jem}.
    pub fn standard(dim: usize) -> Result<Self> {
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::Hypothesis { dim });
        }
        Ok(Self {
            g: Matrix::identity(dim, dim),
            j: linalg::standard_complex_structure(dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }

    #[inline]
    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        linalg::inner(&self.g, x, y)
    }

    #[inline]
    pub fn norm(&self, x: &Vector) -> f64 {
        linalg::norm(&self.g, x)
    }

    #[inline]
    pub fn apply_j(&self, x: &Vector) -> Vector {
        &self.j * x
    }

    /// g-orthonormal frame {f1, Jf1, ...} built from the coordinate basis.
    pub fn adapted_frame(&self) -> Option<Matrix> {
        linalg::adapted_frame(&self.g, &self.j, &linalg::coordinate_frame(self.dim()))
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// `(g, J, R)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPoint {
    structure: HermitianStructure,
    curvature: CurvatureTensor,
}

impl HermitianPoint {
    pub fn new(structure: HermitianStructure, curvature: CurvatureTensor) -> Result<Self> {
        if curvature.dim() != structure.dim() {
            return Err(Error::DimensionMismatch {
                expected: structure.dim(),
                found: curvature.dim(),
            });
        }
        Ok(Self {
            structure,
            curvature,
        })
    }

    pub fn from_parts(g: Matrix, j: Matrix, curvature: CurvatureTensor) -> Result<Self> {
        Self::new(HermitianStructure::new(g, j)?, curvature)
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn structure(&self) -> &HermitianStructure {
        &self.structure
    }

    pub fn g(&self) -> &Matrix {
        self.structure.g()
    }

    pub fn j(&self) -> &Matrix {
        self.structure.j()
    }

    pub fn curvature(&self) -> &CurvatureTensor {
        &self.curvature
    }

    pub fn with_curvature(&self, curvature: CurvatureTensor) -> Result<Self> {
        Self::new(self.structure.clone(), curvature)
    }

    /// Residual report for the standing hypotheses: g symmetric positive
    /// definite, `J² = -Id`, `g(J·, J·) = g`, and the curvature symmetries.
    ///
    /// Residuals are max-abs matrix/tensor entries, so a J scaled by 2 reports
    /// `|(-4 + 1)| = 3` for the `J² + Id` entry.
    pub fn validate(&self, tol: f64) -> Result<ValidationReport> {
        let dim = self.dim();
        if dim < 4 || !dim.is_multiple_of(2) {
            return Err(Error::Hypothesis { dim });
        }
        let g = self.g();
        let j = self.j();
        let mut residuals = vec![
            ("metric_symmetry", linalg::symmetry_residual(g)),
            (
                "complex_structure_square",
                max_abs(&(j * j + Matrix::identity(dim, dim))),
            ),
            ("hermitian_compatibility", compatibility_residual(g, j)),
        ];
        residuals.extend(self.curvature.symmetry_residuals().named());
        let min_eigenvalue = linalg::min_eigenvalue(g);
        let valid = min_eigenvalue > 0.0 && residuals.iter().all(|(_, r)| *r <= tol);
        Ok(ValidationReport {
            residuals,
            min_eigenvalue,
            valid,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub residuals: Vec<(&'static str, f64)>,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

impl ValidationReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, r)| *r)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0_f64, |m, (_, r)| m.max(*r))
    }
}

/// `R = c·π₁`: constant sectional curvature `c`.
pub fn real_space_form_tensor(c: f64, g: &Matrix) -> Result<CurvatureTensor> {
    Ok(CurvatureTensor::pi1(g)?.scaled(c))
}

/// `R = (c/4)(π₁ + π₂)`: constant holomorphic sectional curvature `c`.
pub fn complex_space_form_tensor(c: f64, g: &Matrix, j: &Matrix) -> Result<CurvatureTensor> {
    let p1 = CurvatureTensor::pi1(g)?;
    let p2 = CurvatureTensor::pi2(g, j)?;
    Ok(p1.add(&p2).scaled(c / 4.0))
}

/// Max-abs entry of `Jᵀ g J - g`.
pub fn compatibility_residual(g: &Matrix, j: &Matrix) -> f64 {
    max_abs(&(j.transpose() * g * j - g))
}

fn check_square(m: &Matrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(())
}

fn check_same_dim(a: &Matrix, b: &Matrix) -> Result<()> {
    if b.nrows() != a.nrows() || b.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, standard_complex_structure};

    fn e(i: usize) -> Vector {
        basis_vector(4, i)
    }

    fn flat_point() -> HermitianPoint {
        HermitianPoint::new(
            HermitianStructure::standard(4).unwrap(),
            CurvatureTensor::zeros(4),
        )
        .unwrap()
    }

    #[test]
    fn flat_point_is_valid_with_zero_residuals() {
        let report = flat_point().validate(ALGEBRAIC_TOL).unwrap();
        assert!(report.valid);
        assert_eq!(report.max_residual(), 0.0);
    }

    #[test]
    fn scaled_structure_reports_three() {
        let j = standard_complex_structure(4) * 2.0;
        let p = HermitianPoint::from_parts(Matrix::identity(4, 4), j, CurvatureTensor::zeros(4))
            .unwrap();
        let report = p.validate(ALGEBRAIC_TOL).unwrap();
        assert!(!report.valid);
        assert_eq!(report.residual("complex_structure_square"), Some(3.0));
    }

    #[test]
    fn odd_or_small_dimensions_are_rejected() {
        for dim in [2, 3, 5] {
            let p = HermitianPoint::from_parts(
                Matrix::identity(dim, dim),
                Matrix::zeros(dim, dim),
                CurvatureTensor::zeros(dim),
            )
            .unwrap();
            assert!(matches!(p.validate(1e-12), Err(Error::Hypothesis { .. })));
        }
    }

    #[test]
    fn indefinite_metric_is_invalid() {
        let mut g = Matrix::identity(4, 4);
        g[(0, 0)] = -1.0;
        g[(1, 1)] = -1.0;
        let p =
            HermitianPoint::from_parts(g, standard_complex_structure(4), CurvatureTensor::zeros(4))
                .unwrap();
        let report = p.validate(1e-12).unwrap();
        assert!(!report.valid);
        assert!(report.min_eigenvalue < 0.0);
    }

    #[test]
    fn pi1_point_is_valid() {
        let p = flat_point();
        let p = p
            .with_curvature(CurvatureTensor::pi1(p.g()).unwrap())
            .unwrap();
        assert!(p.validate(ALGEBRAIC_TOL).unwrap().valid);
    }

    #[test]
    fn pi1_normalization() {
        let g = Matrix::identity(4, 4);
        let p1 = CurvatureTensor::pi1(&g).unwrap();
        assert_eq!(p1.evaluate(&e(0), &e(1), &e(1), &e(0)).unwrap(), 1.0);
        for k in 0..4 {
            for l in 0..4 {
                assert_eq!(p1.get(0, 0, k, l), 0.0);
            }
        }
        // Gram diag(2,2,2,2): unit vectors are e_i / sqrt 2.
        let g2 = Matrix::identity(4, 4) * 2.0;
        let p1 = CurvatureTensor::pi1(&g2).unwrap();
        let x = e(0) / 2f64.sqrt();
        let y = e(2) / 2f64.sqrt();
        assert!((p1.evaluate(&x, &y, &y, &x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pi2_values() {
        let s = HermitianStructure::standard(4).unwrap();
        let p2 = CurvatureTensor::pi2(s.g(), s.j()).unwrap();
        let x = Vector::from_vec(vec![0.5, -0.5, 0.5, 0.5]);
        let jx = s.apply_j(&x);
        assert!((p2.evaluate(&x, &jx, &jx, &x).unwrap() - 3.0).abs() < 1e-14);
        // e1 is orthogonal to e3 and J e3 = e4.
        assert_eq!(p2.evaluate(&e(0), &e(2), &e(2), &e(0)).unwrap(), 0.0);
        let y = Vector::from_vec(vec![0.1, 0.2, 0.3, 0.4]);
        let z = Vector::from_vec(vec![-1.0, 0.0, 2.0, 0.5]);
        assert!(p2.evaluate(&x, &x, &y, &z).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pi2_rejects_incompatible_structure() {
        let mut g = Matrix::identity(4, 4);
        g[(0, 0)] = 3.0;
        let err = CurvatureTensor::pi2(&g, &standard_complex_structure(4)).unwrap_err();
        assert!(matches!(err, Error::Incompatible { .. }));
    }

    #[test]
    fn model_tensors() {
        let s = HermitianStructure::standard(4).unwrap();
        assert_eq!(real_space_form_tensor(0.0, s.g()).unwrap().max_abs(), 0.0);
        let r = real_space_form_tensor(1.0, s.g()).unwrap();
        assert_eq!(r.evaluate(&e(0), &e(3), &e(3), &e(0)).unwrap(), 1.0);

        let csf = complex_space_form_tensor(4.0, s.g(), s.j()).unwrap();
        let jx = s.apply_j(&e(0));
        assert!((csf.evaluate(&e(0), &jx, &jx, &e(0)).unwrap() - 4.0).abs() < 1e-14);
        assert!((csf.evaluate(&e(0), &e(2), &e(2), &e(0)).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(
            complex_space_form_tensor(0.0, s.g(), s.j())
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn evaluate_checks_dimensions_and_is_linear() {
        let r = real_space_form_tensor(2.0, &Matrix::identity(4, 4)).unwrap();
        let short = Vector::zeros(3);
        assert!(matches!(
            r.evaluate(&short, &e(0), &e(0), &e(0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let v = r.evaluate(&(e(0) * 2.0), &e(1), &e(1), &e(0)).unwrap();
        assert_eq!(v, 4.0);
        assert_eq!(r.evaluate(&e(2), &e(2), &e(1), &e(3)).unwrap(), 0.0);
    }

    #[test]
    fn symmetry_residuals_of_models_and_single_component() {
        let s = HermitianStructure::standard(4).unwrap();
        assert_eq!(
            CurvatureTensor::pi1(s.g())
                .unwrap()
                .symmetry_residuals()
                .max(),
            0.0
        );
        assert_eq!(CurvatureTensor::zeros(4).symmetry_residuals().max(), 0.0);
        assert!(
            CurvatureTensor::pi2(s.g(), s.j())
                .unwrap()
                .symmetry_residuals()
                .max()
                <= 1e-12
        );

        let mut single = CurvatureTensor::zeros(4);
        single.set(0, 1, 2, 3, 1.0);
        let res = single.symmetry_residuals();
        assert_eq!(res.antisymmetry_first, 1.0);
        assert_eq!(res.antisymmetry_second, 1.0);
    }

    #[test]
    fn rk_property() {
        let s = HermitianStructure::standard(4).unwrap();
        let r = real_space_form_tensor(3.0, s.g()).unwrap();
        let check = r.rk_check(s.j(), ALGEBRAIC_TOL);
        assert!(check.holds);
        assert_eq!(check.residual, 0.0);
        assert!(
            complex_space_form_tensor(4.0, s.g(), s.j())
                .unwrap()
                .rk_check(s.j(), ALGEBRAIC_TOL)
                .holds
        );

        // π₁ of the degenerate form diag(1, 0, 1, 0) in the adapted basis.
        let a = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 0.0, 1.0, 0.0]));
        let delta = CurvatureTensor::pi1(&a).unwrap();
        assert_eq!(delta.evaluate(&e(0), &e(2), &e(2), &e(0)).unwrap(), 1.0);
        let check = delta.rk_check(s.j(), ALGEBRAIC_TOL);
        assert!(!check.holds);
        assert_eq!(check.residual, 1.0);
    }

    #[test]
    fn transform_matches_direct_evaluation() {
        let s = HermitianStructure::standard(4).unwrap();
        let r = complex_space_form_tensor(2.0, s.g(), s.j()).unwrap();
        let f = Matrix::from_fn(4, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let t = r.transform(&f);
        let cols: Vec<Vector> = (0..4).map(|c| f.column(c).into_owned()).collect();
        for (a, b, c, d) in [(0, 1, 2, 3), (1, 1, 0, 2), (3, 2, 2, 3)] {
            let direct = r.evaluate(&cols[a], &cols[b], &cols[c], &cols[d]).unwrap();
            assert!((t.get(a, b, c, d) - direct).abs() < 1e-12);
        }
    }
}
