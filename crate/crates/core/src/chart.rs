//! Coordinate charts: metric and almost complex structure given as expression
//! trees, with Christoffel symbols, curvature and `∇J` by central differences.

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{self, Matrix, Vector};
use crate::sampling::{gaussian_vector, stream_rng};
use crate::tensor::{CurvatureTensor, HermitianPoint, HermitianStructure};

/// Default tolerance for quantities obtained by differencing.
pub const CHART_TOL: f64 = 1e-5;

/// Central difference scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub step: f64,
    /// 2 or 4.
    pub order: u8,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            order: 2,
        }
    }
}

impl DiffConfig {
    pub fn new(step: f64, order: u8) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "difference step {step} must be positive"
            )));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidArgument(format!(
                "difference order must be 2 or 4, got {order}"
            )));
        }
        Ok(Self { step, order })
    }

    /// Widest offset a nested (second) derivative reaches.
    pub fn margin(&self) -> f64 {
        self.step * self.order as f64
    }

    /// `∂f/∂u_k` for a vector-valued `f`.
    pub fn partial(&self, f: &dyn Fn(&[f64]) -> Vec<f64>, u: &[f64], k: usize) -> Vec<f64> {
        let h = self.step;
        let at = |offset: f64| {
            let mut v = u.to_vec();
            v[k] += offset;
            f(&v)
        };
        match self.order {
            4 => {
                let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
                (0..p1.len())
                    .map(|i| (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h))
                    .collect()
            }
            _ => {
                let (p1, m1) = (at(h), at(-h));
                (0..p1.len()).map(|i| (p1[i] - m1[i]) / (2.0 * h)).collect()
            }
        }
    }
}

/// Christoffel symbols of the second kind, `Γ^k_{ij}` at `[k][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    /// Vector with components `Γ^k_{ij} X^i Y^j`.
    pub fn contract(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        Vector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += self.get(k, i, j) * x[i] * y[j];
                }
            }
            s
        })
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut m = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    m = m.max((self.get(k, i, j) - self.get(k, j, i)).abs());
                }
            }
        }
        m
    }
}

/// What a catalog entry is expected to be.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Expected {
    /// `real_space_form`, `complex_space_form` or `none`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kahler: Option<bool>,
}

/// Metric (and optionally J) over an open coordinate box.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartMetric {
    pub(crate) name: String,
    pub(crate) dim: usize,
    /// row-major `g_{ij}`
    pub(crate) g: Vec<Expr>,
    /// row-major `J^i_j` (column j is the image of the j-th coordinate vector)
    pub(crate) j: Option<Vec<Expr>>,
    pub(crate) domain: Vec<[f64; 2]>,
    pub(crate) diff: DiffConfig,
    pub(crate) tol: f64,
    pub(crate) expected: Option<Expected>,
    pub(crate) reference_point: Option<Vec<f64>>,
}

impl ChartMetric {
    pub fn new(
        name: impl Into<String>,
        g: Vec<Vec<Expr>>,
        j: Option<Vec<Vec<Expr>>>,
        domain: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let dim = g.len();
        let flatten = |rows: Vec<Vec<Expr>>, what: &str| -> Result<Vec<Expr>> {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidArgument(format!(
                    "{what} must be a {dim}x{dim} matrix"
                )));
            }
            let flat: Vec<Expr> = rows.into_iter().flatten().collect();
            if flat.iter().any(|e| e.max_var().is_some_and(|v| v >= dim)) {
                return Err(Error::InvalidArgument(format!(
                    "{what} references a coordinate beyond {dim}"
                )));
            }
            Ok(flat)
        };
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "chart dimension must be positive".into(),
            ));
        }
        let g = flatten(g, "g")?;
        let j = j.map(|j| flatten(j, "J")).transpose()?;
        if domain.len() != dim || domain.iter().any(|[lo, hi]| !(lo < hi)) {
            return Err(Error::InvalidArgument(format!(
                "domain must list {dim} intervals with lo < hi"
            )));
        }
        Ok(Self {
            name: name.into(),
            dim,
            g,
            j,
            domain,
            diff: DiffConfig::default(),
            tol: CHART_TOL,
            expected: None,
            reference_point: None,
        })
    }

    pub fn with_diff(mut self, diff: DiffConfig) -> Self {
        self.diff = diff;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_expected(mut self, expected: Expected) -> Self {
        self.expected = Some(expected);
        self
    }

    pub fn with_reference_point(mut self, u: Vec<f64>) -> Self {
        self.reference_point = Some(u);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has_structure(&self) -> bool {
        self.j.is_some()
    }

    pub fn domain(&self) -> &[[f64; 2]] {
        &self.domain
    }

    pub fn diff(&self) -> DiffConfig {
        self.diff
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn expected(&self) -> Option<&Expected> {
        self.expected.as_ref()
    }

    /// Documented reference point, or the center of the domain box.
    pub fn reference_point(&self) -> Vec<f64> {
        self.reference_point
            .clone()
            .unwrap_or_else(|| self.domain.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect())
    }

    /// Seeded points drawn uniformly from the central 80% of the domain box.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        (0..count as u64)
            .map(|i| {
                let mut rng = stream_rng(seed, i);
                self.domain
                    .iter()
                    .map(|[lo, hi]| {
                        let mid = 0.5 * (lo + hi);
                        let half = 0.4 * (hi - lo);
                        mid + half * rng.random_range(-1.0..=1.0)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn check_point(&self, u: &[f64]) -> Result<()> {
        self.check_point_with(u, self.diff)
    }

    pub(crate) fn check_point_with(&self, u: &[f64], diff: DiffConfig) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.len(),
            });
        }
        let m = diff.margin();
        let inside = u
            .iter()
            .zip(&self.domain)
            .all(|(x, [lo, hi])| x.is_finite() && *x >= lo + m && *x <= hi - m);
        if !inside {
            return Err(Error::OutsideDomain { point: u.to_vec() });
        }
        Ok(())
    }

    fn eval_flat(&self, exprs: &[Expr], u: &[f64]) -> Vec<f64> {
        exprs.iter().map(|e| e.eval(u)).collect()
    }

    /// `g(u)` without a domain check.
    pub fn metric_at(&self, u: &[f64]) -> Matrix {
        Matrix::from_row_slice(self.dim, self.dim, &self.eval_flat(&self.g, u))
    }

    pub fn structure_at(&self, u: &[f64]) -> Option<Matrix> {
        self.j
            .as_ref()
            .map(|j| Matrix::from_row_slice(self.dim, self.dim, &self.eval_flat(j, u)))
    }

    fn christoffel_raw(&self, u: &[f64], diff: DiffConfig) -> Result<Christoffel> {
        let n = self.dim;
        let g = self.metric_at(u);
        let ginv = g.clone().try_inverse().ok_or(Error::IndefiniteMetric {
            min_eigenvalue: linalg::min_eigenvalue(&g),
        })?;
        let eval_g = |v: &[f64]| self.eval_flat(&self.g, v);
        // dg[k][i*n + j] = ∂_k g_ij
        let dg: Vec<Vec<f64>> = (0..n).map(|k| diff.partial(&eval_g, u, k)).collect();
        let d = |k: usize, i: usize, j: usize| dg[k][i * n + j];
        let mut data = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(k, l)] * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                    }
                    data[(k * n + i) * n + j] = 0.5 * s;
                }
            }
        }
        Ok(Christoffel { dim: n, data })
    }

    /// Levi-Civita symbols `Γ^k_{ij}` at `u`.
    pub fn christoffel(&self, u: &[f64]) -> Result<Christoffel> {
        self.christoffel_with(u, self.diff)
    }

    pub fn christoffel_with(&self, u: &[f64], diff: DiffConfig) -> Result<Christoffel> {
        self.check_point_with(u, diff)?;
        self.positive_metric(u)?;
        self.christoffel_raw(u, diff)
    }

    fn positive_metric(&self, u: &[f64]) -> Result<Matrix> {
        let g = self.metric_at(u);
        let min_eigenvalue = linalg::min_eigenvalue(&g);
        if !(min_eigenvalue > 0.0) {
            return Err(Error::IndefiniteMetric { min_eigenvalue });
        }
        Ok(g)
    }

    /// Max-abs component of `∇g` (zero up to differencing for Levi-Civita).
    pub fn metric_compatibility_residual(&self, u: &[f64]) -> Result<f64> {
        let gamma = self.christoffel(u)?;
        let n = self.dim;
        let g = self.metric_at(u);
        let eval_g = |v: &[f64]| self.eval_flat(&self.g, v);
        let mut worst = 0.0_f64;
        for k in 0..n {
            let dg = self.diff.partial(&eval_g, u, k);
            for i in 0..n {
                for j in 0..n {
                    let mut r = dg[i * n + j];
                    for l in 0..n {
                        r -= gamma.get(l, k, i) * g[(l, j)] + gamma.get(l, k, j) * g[(i, l)];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        Ok(worst)
    }

    /// `R(∂_i, ∂_j, ∂_k, ∂_l)` in the coordinate basis.
    pub fn riemann_coordinates(&self, u: &[f64]) -> Result<CurvatureTensor> {
        self.riemann_coordinates_with(u, self.diff)
    }

    pub fn riemann_coordinates_with(&self, u: &[f64], diff: DiffConfig) -> Result<CurvatureTensor> {
        self.check_point_with(u, diff)?;
        let g = self.positive_metric(u)?;
        let n = self.dim;
        let gamma = self.christoffel_raw(u, diff)?;
        let eval_gamma = |v: &[f64]| -> Vec<f64> {
            // shifted points stay inside the domain by the margin check above
            self.christoffel_raw(v, diff)
                .map(|c| c.data)
                .unwrap_or_else(|_| vec![f64::NAN; n * n * n])
        };
        // dgamma[i][(m*n + j)*n + k] = ∂_i Γ^m_{jk}
        let dgamma: Vec<Vec<f64>> = (0..n).map(|i| diff.partial(&eval_gamma, u, i)).collect();
        let dg = |i: usize, m: usize, j: usize, k: usize| dgamma[i][(m * n + j) * n + k];
        // up[m] = R(∂_i,∂_j)∂_k component m
        Ok(CurvatureTensor::from_fn(n, |i, j, k, l| {
            let mut acc = 0.0;
            for m in 0..n {
                let glm = g[(l, m)];
                if glm == 0.0 {
                    continue;
                }
                let mut up = dg(i, m, j, k) - dg(j, m, i, k);
                for p in 0..n {
                    up += gamma.get(p, j, k) * gamma.get(m, i, p)
                        - gamma.get(p, i, k) * gamma.get(m, j, p);
                }
                acc += glm * up;
            }
            acc
        }))
    }

    /// g-orthonormal frame at `u` (columns), J-adapted when J is present.
    /// `seed = None` runs Gram–Schmidt on the coordinate frame; a seed uses
    /// random starting vectors instead.
    pub fn orthonormal_frame(&self, u: &[f64], seed: Option<u64>) -> Result<Matrix> {
        let g = self.positive_metric(u)?;
        let candidates = match seed {
            None => linalg::coordinate_frame(self.dim),
            Some(seed) => {
                let mut rng = stream_rng(seed, 0);
                (0..2 * self.dim)
                    .map(|_| gaussian_vector(self.dim, &mut rng))
                    .collect()
            }
        };
        let frame = match self.structure_at(u) {
            Some(j) => linalg::adapted_frame(&g, &j, &candidates),
            None => linalg::orthonormal_frame(&g, &candidates),
        };
        frame.ok_or(Error::IndefiniteMetric {
            min_eigenvalue: linalg::min_eigenvalue(&g),
        })
    }

    /// Curvature at `u` in the orthonormal frame from the coordinate basis.
    pub fn riemann_tensor(&self, u: &[f64]) -> Result<CurvatureTensor> {
        let r = self.riemann_coordinates(u)?;
        Ok(r.transform(&self.orthonormal_frame(u, None)?))
    }

    /// `(g, J, R)` at `u` in the coordinate basis, as written in the chart.
    pub fn coordinate_point(&self, u: &[f64]) -> Result<HermitianPoint> {
        let j = self.structure_at(u).ok_or(Error::MissingStructure)?;
        let r = self.riemann_coordinates(u)?;
        HermitianPoint::from_parts(self.metric_at(u), j, r)
    }

    pub fn hermitian_point(&self, u: &[f64]) -> Result<HermitianPoint> {
        self.hermitian_point_in_frame(u, None)
    }

    /// `(g, J, R)` at `u` expressed in an orthonormal adapted frame, so `g ≈ Id`
    /// and `J ≈` the standard structure.
    pub fn hermitian_point_in_frame(&self, u: &[f64], seed: Option<u64>) -> Result<HermitianPoint> {
        let j = self.structure_at(u).ok_or(Error::MissingStructure)?;
        let r = self.riemann_coordinates(u)?;
        let f = self.orthonormal_frame(u, seed)?;
        let finv = f.clone().try_inverse().ok_or(Error::IndefiniteMetric {
            min_eigenvalue: 0.0,
        })?;
        let g = f.transpose() * self.metric_at(u) * &f;
        let g = (&g + g.transpose()) * 0.5;
        let jf = finv * j * &f;
        HermitianPoint::new(HermitianStructure::new(g, jf)?, r.transform(&f))
    }

    /// Max-abs component of `∇J` in the orthonormal frame at `u`.
    pub fn nabla_j_residual(&self, u: &[f64]) -> Result<f64> {
        let jexprs = self.j.as_ref().ok_or(Error::MissingStructure)?;
        let gamma = self.christoffel(u)?;
        let n = self.dim;
        let j = self.structure_at(u).expect("checked above");
        let eval_j = |v: &[f64]| self.eval_flat(jexprs, v);
        let f = self.orthonormal_frame(u, None)?;
        let finv = f.clone().try_inverse().ok_or(Error::IndefiniteMetric {
            min_eigenvalue: 0.0,
        })?;
        // nabla[k] = ∇_{∂_k} J as a matrix
        let nabla: Vec<Matrix> = (0..n)
            .map(|k| {
                let dj = self.diff.partial(&eval_j, u, k);
                Matrix::from_fn(n, n, |a, b| {
                    let mut v = dj[a * n + b];
                    for l in 0..n {
                        v += gamma.get(a, k, l) * j[(l, b)] - gamma.get(l, k, b) * j[(a, l)];
                    }
                    v
                })
            })
            .collect();
        let mut worst = 0.0_f64;
        for a in 0..n {
            let mut dir = Matrix::zeros(n, n);
            for (k, nk) in nabla.iter().enumerate() {
                dir += nk * f[(k, a)];
            }
            worst = worst.max(linalg::max_abs(&(&finv * dir * &f)));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_rows(rows: &[&[&str]], dim: usize) -> Vec<Vec<Expr>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|s| Expr::parse(s, 'x', dim).unwrap())
                    .collect()
            })
            .collect()
    }

    fn polar() -> ChartMetric {
        let g = parse_rows(&[&["1", "0"], &["0", "x0^2"]], 2);
        ChartMetric::new("polar", g, None, vec![[0.1, 5.0], [-3.0, 3.0]]).unwrap()
    }

    #[test]
    fn polar_christoffel_symbols() {
        let chart = polar();
        let r = 1.7;
        let gamma = chart.christoffel(&[r, 0.4]).unwrap();
        assert!((gamma.get(0, 1, 1) + r).abs() < 1e-7);
        assert!((gamma.get(1, 0, 1) - 1.0 / r).abs() < 1e-7);
        assert!((gamma.get(1, 1, 0) - 1.0 / r).abs() < 1e-7);
        assert!(gamma.get(0, 0, 0).abs() < 1e-12);
        assert!(gamma.max_asymmetry() < 1e-12);
        assert!(chart.metric_compatibility_residual(&[r, 0.4]).unwrap() < 1e-6);
        // polar coordinates of the flat plane have no curvature
        assert!(chart.riemann_tensor(&[r, 0.4]).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn domain_is_enforced() {
        let chart = polar();
        assert!(matches!(
            chart.christoffel(&[0.1, 0.0]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            chart.christoffel(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            chart.nabla_j_residual(&[1.0, 0.0]),
            Err(Error::MissingStructure)
        ));
    }

    #[test]
    fn indefinite_metric_is_rejected() {
        let g = parse_rows(&[&["-1", "0"], &["0", "1"]], 2);
        let chart = ChartMetric::new("bad", g, None, vec![[-1.0, 1.0], [-1.0, 1.0]]).unwrap();
        assert!(matches!(
            chart.riemann_tensor(&[0.0, 0.0]),
            Err(Error::IndefiniteMetric { .. })
        ));
    }

    #[test]
    fn diff_config_validation() {
        assert!(DiffConfig::new(1e-3, 3).is_err());
        assert!(DiffConfig::new(0.0, 2).is_err());
        let d = DiffConfig::new(1e-3, 4).unwrap();
        let f = |v: &[f64]| vec![v[0].powi(5)];
        let der = d.partial(&f, &[1.0], 0);
        assert!((der[0] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn malformed_definitions_are_rejected() {
        let g = parse_rows(&[&["1", "0"], &["0", "1"]], 2);
        assert!(ChartMetric::new("bad", g.clone(), None, vec![[0.0, 1.0]]).is_err());
        assert!(ChartMetric::new("bad", g.clone(), None, vec![[0.0, 1.0], [1.0, 1.0]]).is_err());
        let j = parse_rows(&[&["0", "1"]], 2);
        assert!(ChartMetric::new("bad", g, Some(j), vec![[0.0, 1.0], [0.0, 1.0]]).is_err());
    }
}
