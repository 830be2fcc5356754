//! Immersed patches inside a chart: second fundamental form, mean curvature,
//! umbilicity, the Weingarten split of normal fields, parallel normals and
//! the Codazzi residual.
//!
//! Conventions: `∇̃_X Y = ∇_X Y + σ(X, Y)` and `∇̃_X ξ = -A_ξ X + D_X ξ`.
//! Vector fields along the patch are constant-coefficient combinations of the
//! parameter directions `∂_a f`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{ChartDocument, DiffDocument, Space};
use crate::chart::{ChartMetric, Christoffel, DiffConfig};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::{self, Matrix, Vector};

/// Differencing used for patches: third derivatives of the immersion enter the
/// Codazzi residual, so a fourth-order stencil with a wider step keeps
/// round-off below the truncation error.
pub const PATCH_DIFF: DiffConfig = DiffConfig {
    step: 1e-3,
    order: 4,
};

/// Smallest singular value of the pushforward accepted as full rank.
pub const RANK_TOL: f64 = 1e-8;
/// Relative tolerance for "this vector is normal / tangent".
pub const SPLIT_TOL: f64 = 1e-8;

/// A vector field along the patch, in ambient coordinates, as a function of
/// the patch parameters.
pub trait VectorField {
    fn value(&self, t: &[f64]) -> Vector;
}

impl<F: Fn(&[f64]) -> Vector> VectorField for F {
    fn value(&self, t: &[f64]) -> Vector {
        self(t)
    }
}

/// Field given by expressions in the parameters `t0 .. t{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprField(Vec<Expr>);

impl ExprField {
    pub fn parse(components: &[&str], params: usize) -> Result<Self> {
        components
            .iter()
            .map(|s| Expr::parse(s, 't', params).map_err(Error::from))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl VectorField for ExprField {
    fn value(&self, t: &[f64]) -> Vector {
        Vector::from_iterator(self.0.len(), self.0.iter().map(|e| e.eval(t)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImmersedPatch {
    name: String,
    ambient: ChartMetric,
    n: usize,
    f: Vec<Expr>,
    domain: Vec<[f64; 2]>,
    diff: DiffConfig,
    reference_point: Option<Vec<f64>>,
}

/// Geometry at one parameter point.
struct Frame {
    point: Vec<f64>,
    g: Matrix,
    gamma: Christoffel,
    /// `∂_a f` as columns
    tangents: Matrix,
    /// orthonormal tangent frame as columns
    e: Matrix,
    /// `E = T · coeffs`
    coeffs: Matrix,
    normals: Matrix,
    /// `(TᵀgT)⁻¹`
    tangent_gram_inv: Matrix,
}

impl Frame {
    fn tangential(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(v.len());
        for a in 0..self.e.ncols() {
            let ea = self.e.column(a).into_owned();
            out.axpy(linalg::inner(&self.g, v, &ea), &ea, 1.0);
        }
        out
    }

    fn normal(&self, v: &Vector) -> Vector {
        v - self.tangential(v)
    }

    /// Coefficients of the tangential part of `v` in the `∂_a f` basis.
    fn param_coords(&self, v: &Vector) -> Vector {
        &self.tangent_gram_inv * (self.tangents.transpose() * &self.g * v)
    }

    fn norm(&self, v: &Vector) -> f64 {
        linalg::norm(&self.g, v)
    }
}

impl ImmersedPatch {
    pub fn new(
        name: impl Into<String>,
        ambient: ChartMetric,
        n: usize,
        f: Vec<Expr>,
        domain: Vec<[f64; 2]>,
    ) -> Result<Self> {
        if f.len() != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                found: f.len(),
            });
        }
        if n == 0 || n >= ambient.dim() {
            return Err(Error::InvalidArgument(format!(
                "patch dimension {n} must lie in 1..{}",
                ambient.dim()
            )));
        }
        if f.iter().any(|e| e.max_var().is_some_and(|v| v >= n)) {
            return Err(Error::InvalidArgument(format!(
                "immersion references a parameter beyond t{}",
                n - 1
            )));
        }
        if domain.len() != n || domain.iter().any(|[lo, hi]| !(lo < hi)) {
            return Err(Error::InvalidArgument(format!(
                "parameter domain must list {n} intervals"
            )));
        }
        Ok(Self {
            name: name.into(),
            ambient,
            n,
            f,
            domain,
            diff: PATCH_DIFF,
            reference_point: None,
        })
    }

    /// Parses immersion components written in `t0 .. t{n-1}`.
    pub fn parse(
        name: impl Into<String>,
        ambient: ChartMetric,
        n: usize,
        f: &[&str],
        domain: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let f = f
            .iter()
            .map(|s| Expr::parse(s, 't', n).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, ambient, n, f, domain)
    }

    pub fn with_diff(mut self, diff: DiffConfig) -> Self {
        self.diff = diff;
        self
    }

    pub fn with_reference_point(mut self, t: Vec<f64>) -> Self {
        self.reference_point = Some(t);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &ChartMetric {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn reference_point(&self) -> Vec<f64> {
        self.reference_point
            .clone()
            .unwrap_or_else(|| self.domain.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect())
    }

    /// `f(t)` in ambient coordinates.
    pub fn position(&self, t: &[f64]) -> Vec<f64> {
        self.f.iter().map(|e| e.eval(t)).collect()
    }

    fn check_param(&self, t: &[f64]) -> Result<()> {
        if t.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: t.len(),
            });
        }
        // third derivatives nest three stencils
        let m = self.diff.margin() * 1.5;
        let inside = t
            .iter()
            .zip(&self.domain)
            .all(|(x, [lo, hi])| x.is_finite() && *x >= lo + m && *x <= hi - m);
        if !inside {
            return Err(Error::OutsideDomain { point: t.to_vec() });
        }
        Ok(())
    }

    fn tangents_at(&self, t: &[f64]) -> Matrix {
        let pos = |v: &[f64]| self.position(v);
        let cols: Vec<Vector> = (0..self.n)
            .map(|a| Vector::from_vec(self.diff.partial(&pos, t, a)))
            .collect();
        Matrix::from_columns(&cols)
    }

    /// `∂_a ∂_b f`, symmetric by construction.
    fn second_derivatives(&self, t: &[f64]) -> Vec<Vector> {
        let n = self.n;
        let mut out = vec![Vector::zeros(self.ambient.dim()); n * n];
        for a in 0..n {
            for b in a..n {
                let inner = |v: &[f64]| self.diff.partial(&|w: &[f64]| self.position(w), v, b);
                let d = Vector::from_vec(self.diff.partial(&inner, t, a));
                out[b * n + a] = d.clone();
                out[a * n + b] = d;
            }
        }
        out
    }

    fn frame(&self, t: &[f64]) -> Result<Frame> {
        self.check_param(t)?;
        let point = self.position(t);
        let gamma = self.ambient.christoffel_with(&point, self.diff)?;
        let g = self.ambient.metric_at(&point);
        let tangents = self.tangents_at(t);
        let gram = tangents.transpose() * &g * &tangents;
        let smallest = linalg::min_eigenvalue(&gram).max(0.0).sqrt();
        if smallest <= RANK_TOL {
            return Err(Error::RankDeficient {
                singular_value: smallest,
            });
        }
        let tangent_gram_inv = gram.try_inverse().ok_or(Error::RankDeficient {
            singular_value: 0.0,
        })?;
        let tcols: Vec<Vector> = (0..self.n)
            .map(|a| tangents.column(a).into_owned())
            .collect();
        let mut ecols: Vec<Vector> = Vec::with_capacity(self.n);
        for c in &tcols {
            let w = linalg::project_out(&g, c, &ecols);
            let len = linalg::norm(&g, &w);
            ecols.push(w / len);
        }
        let e = Matrix::from_columns(&ecols);
        let coeffs = &tangent_gram_inv * (tangents.transpose() * &g * &e);
        let mut normals: Vec<Vector> = Vec::new();
        for cand in linalg::coordinate_frame(self.ambient.dim()) {
            if normals.len() + self.n == self.ambient.dim() {
                break;
            }
            let mut basis = ecols.clone();
            basis.extend(normals.iter().cloned());
            let w = linalg::project_out(&g, &cand, &basis);
            let len = linalg::norm(&g, &w);
            if len > 1e-6 {
                normals.push(w / len);
            }
        }
        Ok(Frame {
            point,
            g,
            gamma,
            tangents,
            e,
            coeffs,
            normals: Matrix::from_columns(&normals),
            tangent_gram_inv,
        })
    }

    /// `σ(∂_a, ∂_b)` for all parameter pairs, ambient coordinates, `[a*n + b]`.
    fn sigma_params(&self, fr: &Frame, second: &[Vector]) -> Vec<Vector> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let ta = fr.tangents.column(a).into_owned();
                let tb = fr.tangents.column(b).into_owned();
                let acc = &second[a * n + b] + fr.gamma.contract(&ta, &tb);
                out.push(fr.normal(&acc));
            }
        }
        out
    }

    fn sigma_flat(&self, t: &[f64]) -> Vec<f64> {
        let dim = self.ambient.dim();
        match self.frame(t) {
            Ok(fr) => {
                let second = self.second_derivatives(t);
                self.sigma_params(&fr, &second)
                    .iter()
                    .flat_map(|v| v.iter().copied().collect::<Vec<_>>())
                    .collect()
            }
            Err(_) => vec![f64::NAN; self.n * self.n * dim],
        }
    }

    pub fn second_fundamental_form(&self, t: &[f64]) -> Result<SecondFundamentalForm> {
        let fr = self.frame(t)?;
        let second = self.second_derivatives(t);
        let params = self.sigma_params(&fr, &second);
        let n = self.n;
        let frame_values = (0..n * n)
            .map(|ab| {
                let (al, be) = (ab / n, ab % n);
                let mut v = Vector::zeros(self.ambient.dim());
                for a in 0..n {
                    for b in 0..n {
                        v.axpy(
                            fr.coeffs[(a, al)] * fr.coeffs[(b, be)],
                            &params[a * n + b],
                            1.0,
                        );
                    }
                }
                v
            })
            .collect();
        Ok(SecondFundamentalForm {
            n,
            g: fr.g.clone(),
            tangents: fr.tangents.clone(),
            tangent_gram_inv: fr.tangent_gram_inv.clone(),
            tangent_frame: fr.e.clone(),
            normal_frame: fr.normals.clone(),
            param_values: params,
            frame_values,
        })
    }

    /// `H = (1/n) Σ σ(E_α, E_α)`.
    pub fn mean_curvature(&self, t: &[f64]) -> Result<Vector> {
        Ok(self.second_fundamental_form(t)?.mean_curvature())
    }

    /// Max-abs normal-frame component of `σ(E_α, E_β) - δ_αβ H`.
    pub fn umbilic_residual(&self, t: &[f64]) -> Result<f64> {
        let sff = self.second_fundamental_form(t)?;
        let h = sff.mean_curvature();
        let mut worst = 0.0_f64;
        for al in 0..self.n {
            for be in 0..self.n {
                let mut d = sff.frame_values[al * self.n + be].clone();
                if al == be {
                    d -= &h;
                }
                worst = worst.max(sff.normal_components(&d).amax());
            }
        }
        Ok(worst)
    }

    fn check_normal(&self, fr: &Frame, xi: &Vector) -> Result<()> {
        let residual = fr.norm(&fr.tangential(xi));
        if residual > SPLIT_TOL * fr.norm(xi).max(1.0) {
            return Err(Error::NonNormal { residual });
        }
        Ok(())
    }

    /// `∇̃_{∂_a} ξ` for each parameter direction.
    fn ambient_derivatives(&self, fr: &Frame, t: &[f64], xi: &dyn VectorField) -> Vec<Vector> {
        let xi_t = xi.value(t);
        let eval = |v: &[f64]| xi.value(v).iter().copied().collect::<Vec<f64>>();
        (0..self.n)
            .map(|a| {
                let d = Vector::from_vec(self.diff.partial(&eval, t, a));
                d + fr
                    .gamma
                    .contract(&fr.tangents.column(a).into_owned(), &xi_t)
            })
            .collect()
    }

    /// Splits `∇̃_X ξ` into `-A_ξ X` and `D_X ξ` along the orthonormal tangent frame.
    pub fn weingarten_split(&self, t: &[f64], xi: &dyn VectorField) -> Result<WeingartenSplit> {
        let fr = self.frame(t)?;
        let xi_t = xi.value(t);
        if xi_t.len() != self.ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.dim(),
                found: xi_t.len(),
            });
        }
        self.check_normal(&fr, &xi_t)?;
        let by_param = self.ambient_derivatives(&fr, t, xi);
        let n = self.n;
        let covariant: Vec<Vector> = (0..n)
            .map(|al| {
                let mut v = Vector::zeros(self.ambient.dim());
                for (a, d) in by_param.iter().enumerate() {
                    v.axpy(fr.coeffs[(a, al)], d, 1.0);
                }
                v
            })
            .collect();
        let shape_operator = Matrix::from_fn(n, n, |be, al| {
            -linalg::inner(&fr.g, &covariant[al], &fr.e.column(be).into_owned())
        });
        let normal_derivatives = covariant.iter().map(|v| fr.normal(v)).collect();
        Ok(WeingartenSplit {
            tangent_frame: fr.e.clone(),
            shape_operator,
            normal_derivatives,
            covariant_derivatives: covariant,
        })
    }

    /// `max_α ‖D_{E_α} ξ‖`.
    pub fn parallel_normal_residual(&self, t: &[f64], xi: &dyn VectorField) -> Result<f64> {
        let split = self.weingarten_split(t, xi)?;
        let fr = self.frame(t)?;
        Ok(split
            .normal_derivatives
            .iter()
            .fold(0.0_f64, |m, d| m.max(fr.norm(d))))
    }

    fn tangent_coords(&self, fr: &Frame, v: &Vector) -> Result<Vector> {
        if v.len() != self.ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.dim(),
                found: v.len(),
            });
        }
        let residual = fr.norm(&fr.normal(v));
        if residual > SPLIT_TOL * fr.norm(v).max(1.0) {
            return Err(Error::NonTangent { residual });
        }
        Ok(fr.param_coords(v))
    }

    /// `R(X, Y)Z` in ambient coordinates.
    fn curvature_vector(&self, fr: &Frame, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        let r = self
            .ambient
            .riemann_coordinates_with(&fr.point, self.diff)?;
        let dim = self.ambient.dim();
        let lowered = Vector::from_fn(dim, |l, _| {
            r.evaluate(x, y, z, &linalg::basis_vector(dim, l))
                .unwrap_or(f64::NAN)
        });
        let ginv = fr.g.clone().try_inverse().ok_or(Error::IndefiniteMetric {
            min_eigenvalue: 0.0,
        })?;
        Ok(ginv * lowered)
    }

    /// Max-abs normal-frame component of `{R(E_α, E_β)E_γ}^⊥` over the
    /// orthonormal tangent frame.
    pub fn normal_curvature_residual(&self, t: &[f64]) -> Result<f64> {
        let fr = self.frame(t)?;
        let sff = self.second_fundamental_form(t)?;
        let cols: Vec<Vector> = (0..self.n).map(|a| fr.e.column(a).into_owned()).collect();
        let mut worst = 0.0_f64;
        for x in &cols {
            for y in &cols {
                for z in &cols {
                    let v = fr.normal(&self.curvature_vector(&fr, x, y, z)?);
                    worst = worst.max(sff.normal_components(&v).amax());
                }
            }
        }
        Ok(worst)
    }

    /// `{R(X,Y)Z}^⊥ - [(∇̄_X σ)(Y,Z) - (∇̄_Y σ)(X,Z)]` for tangent `X, Y, Z`
    /// (ambient coordinates). Codazzi is an identity, so this is pure
    /// discretization error.
    pub fn codazzi_residual(
        &self,
        t: &[f64],
        x: &Vector,
        y: &Vector,
        z: &Vector,
    ) -> Result<Vector> {
        let fr = self.frame(t)?;
        let n = self.n;
        let cx = self.tangent_coords(&fr, x)?;
        let cy = self.tangent_coords(&fr, y)?;
        let cz = self.tangent_coords(&fr, z)?;
        let second = self.second_derivatives(t);
        let sigma = self.sigma_params(&fr, &second);
        let dim = self.ambient.dim();

        // Γ̂^d_{ab}: tangential part of ∇̃_{∂_a}∂_b in the ∂_d basis
        let intrinsic: Vec<Vector> = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                let acc = &second[ab]
                    + fr.gamma.contract(
                        &fr.tangents.column(a).into_owned(),
                        &fr.tangents.column(b).into_owned(),
                    );
                fr.param_coords(&acc)
            })
            .collect();

        let sigma_eval = |v: &[f64]| self.sigma_flat(v);
        let dsigma: Vec<Vec<f64>> = (0..n)
            .map(|a| self.diff.partial(&sigma_eval, t, a))
            .collect();
        // (∇̄_a σ)(b, c)
        let nabla_sigma = |a: usize, b: usize, c: usize| -> Vector {
            let raw = Vector::from_fn(dim, |k, _| dsigma[a][(b * n + c) * dim + k]);
            let ta = fr.tangents.column(a).into_owned();
            let mut v = fr.normal(&(raw + fr.gamma.contract(&ta, &sigma[b * n + c])));
            for d in 0..n {
                v.axpy(-intrinsic[a * n + b][d], &sigma[d * n + c], 1.0);
                v.axpy(-intrinsic[a * n + c][d], &sigma[b * n + d], 1.0);
            }
            v
        };

        let mut rhs = Vector::zeros(dim);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let w = cx[a] * cy[b] * cz[c];
                    if w == 0.0 {
                        continue;
                    }
                    rhs.axpy(w, &(nabla_sigma(a, b, c) - nabla_sigma(b, a, c)), 1.0);
                }
            }
        }
        let lhs = fr.normal(&self.curvature_vector(&fr, x, y, z)?);
        Ok(lhs - rhs)
    }

    /// Largest g-norm of the Codazzi residual over all triples of the
    /// orthonormal tangent frame.
    pub fn max_codazzi_residual(&self, t: &[f64]) -> Result<f64> {
        let fr = self.frame(t)?;
        let cols: Vec<Vector> = (0..self.n).map(|a| fr.e.column(a).into_owned()).collect();
        let mut worst = 0.0_f64;
        for x in &cols {
            for y in &cols {
                for z in &cols {
                    worst = worst.max(fr.norm(&self.codazzi_residual(t, x, y, z)?));
                }
            }
        }
        Ok(worst)
    }

    /// Orthonormal tangent frame at `t` (columns, ambient coordinates).
    pub fn tangent_frame(&self, t: &[f64]) -> Result<Matrix> {
        Ok(self.frame(t)?.e)
    }
}

/// `σ` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    n: usize,
    g: Matrix,
    tangents: Matrix,
    tangent_gram_inv: Matrix,
    tangent_frame: Matrix,
    normal_frame: Matrix,
    param_values: Vec<Vector>,
    frame_values: Vec<Vector>,
}

impl SecondFundamentalForm {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn tangent_frame(&self) -> &Matrix {
        &self.tangent_frame
    }

    pub fn normal_frame(&self) -> &Matrix {
        &self.normal_frame
    }

    pub fn metric(&self) -> &Matrix {
        &self.g
    }

    /// `σ(E_α, E_β)` in ambient coordinates.
    pub fn frame_value(&self, alpha: usize, beta: usize) -> &Vector {
        &self.frame_values[alpha * self.n + beta]
    }

    /// `σ(X, Y)` for tangent vectors in ambient coordinates.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Vector {
        let coords =
            |v: &Vector| &self.tangent_gram_inv * (self.tangents.transpose() * &self.g * v);
        let (cx, cy) = (coords(x), coords(y));
        let mut out = Vector::zeros(x.len());
        for a in 0..self.n {
            for b in 0..self.n {
                out.axpy(cx[a] * cy[b], &self.param_values[a * self.n + b], 1.0);
            }
        }
        out
    }

    pub fn mean_curvature(&self) -> Vector {
        let mut h = Vector::zeros(self.g.nrows());
        for a in 0..self.n {
            h += self.frame_value(a, a);
        }
        h / self.n as f64
    }

    /// Components `g(v, ν_k)` along the orthonormal normal frame.
    pub fn normal_components(&self, v: &Vector) -> Vector {
        let k = self.normal_frame.ncols();
        Vector::from_fn(k, |i, _| {
            linalg::inner(&self.g, v, &self.normal_frame.column(i).into_owned())
        })
    }

    /// `max ‖σ(E_α, E_β) - σ(E_β, E_α)‖`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for a in 0..self.n {
            for b in 0..self.n {
                let d = self.frame_value(a, b) - self.frame_value(b, a);
                worst = worst.max(linalg::norm(&self.g, &d));
            }
        }
        worst
    }

    /// `max |g(σ(E_α, E_β), E_γ)|`.
    pub fn normality_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for v in &self.frame_values {
            for c in 0..self.n {
                let e = self.tangent_frame.column(c).into_owned();
                worst = worst.max(linalg::inner(&self.g, v, &e).abs());
            }
        }
        worst
    }
}

/// Result of [`ImmersedPatch::weingarten_split`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeingartenSplit {
    /// Orthonormal tangent frame `E_α` (columns).
    pub tangent_frame: Matrix,
    /// `g(A_ξ E_α, E_β)` at `[(β, α)]`.
    pub shape_operator: Matrix,
    /// `D_{E_α} ξ`.
    pub normal_derivatives: Vec<Vector>,
    /// `∇̃_{E_α} ξ`.
    pub covariant_derivatives: Vec<Vector>,
}

impl WeingartenSplit {
    /// `-A_ξ E_α + D_{E_α} ξ`.
    pub fn reconstruct(&self, alpha: usize) -> Vector {
        let mut v = self.normal_derivatives[alpha].clone();
        for beta in 0..self.shape_operator.nrows() {
            v.axpy(
                -self.shape_operator[(beta, alpha)],
                &self.tangent_frame.column(beta).into_owned(),
                1.0,
            );
        }
        v
    }
}

/// Named test patches.
pub const PATCH_NAMES: [&str; 7] = [
    "affine_plane",
    "circle",
    "round_sphere",
    "cylinder",
    "great_sphere",
    "small_sphere",
    "complex_line",
];

/// Builds a named patch; `params[0]` is the radius where one applies
/// (defaults: 0.5 for flat-space patches, 0.4 for `small_sphere`).
pub fn patch(name: &str, params: &[f64]) -> Result<ImmersedPatch> {
    let r = params.first().copied();
    if let Some(r) = r {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {r}"
            )));
        }
    }
    let flat = || Space::Flat { dim: 4 }.chart();
    let sphere = || Space::Sphere { c: 1.0, dim: 4 }.chart();
    let sphere_param = |r: f64| {
        vec![
            format!("{r:?} * sin(t0) * cos(t1)"),
            format!("{r:?} * sin(t0) * sin(t1)"),
            format!("{r:?} * cos(t0)"),
            "0".to_string(),
        ]
    };
    let p = match name {
        "affine_plane" => ImmersedPatch::parse(
            name,
            flat()?,
            2,
            &[
                "t0",
                "t1",
                "0.5 * t0 + 0.3 * t1 + 0.2",
                "-0.4 * t0 + 0.7 * t1 - 0.1",
            ],
            vec![[-0.5, 0.5]; 2],
        )?,
        "circle" => {
            let r = r.unwrap_or(0.5);
            let f = [
                format!("{r:?} * cos(t0)"),
                format!("{r:?} * sin(t0)"),
                "0".into(),
                "0".into(),
            ];
            ImmersedPatch::parse(name, flat()?, 1, &as_refs(&f), vec![[-3.0, 3.0]])?
        }
        "round_sphere" => ImmersedPatch::parse(
            name,
            flat()?,
            2,
            &as_refs(&sphere_param(r.unwrap_or(0.5))),
            vec![[0.3, 2.8], [-3.0, 3.0]],
        )?
        .with_reference_point(vec![1.2, 0.4]),
        "cylinder" => {
            let r = r.unwrap_or(0.5);
            let f = [
                format!("{r:?} * cos(t0)"),
                format!("{r:?} * sin(t0)"),
                "t1".into(),
                "0".into(),
            ];
            ImmersedPatch::parse(
                name,
                flat()?,
                2,
                &as_refs(&f),
                vec![[-3.0, 3.0], [-0.5, 0.5]],
            )?
        }
        "great_sphere" => ImmersedPatch::parse(
            name,
            sphere()?,
            2,
            &["t0", "t1", "0", "0"],
            vec![[-0.6, 0.6]; 2],
        )?
        .with_reference_point(vec![0.2, -0.1]),
        "small_sphere" => ImmersedPatch::parse(
            name,
            sphere()?,
            2,
            &as_refs(&sphere_param(r.unwrap_or(0.4))),
            vec![[0.3, 2.8], [-3.0, 3.0]],
        )?
        .with_reference_point(vec![1.1, 0.7]),
        "complex_line" => ImmersedPatch::parse(
            name,
            Space::FubiniStudy { c: 4.0, m: 2 }.chart()?,
            2,
            &["t0", "t1", "0", "0"],
            vec![[-0.6, 0.6]; 2],
        )?
        .with_reference_point(vec![0.3, 0.2]),
        other => return Err(Error::UnknownSpace(other.to_string())),
    };
    Ok(p)
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Ambient reference inside a patch document: a catalog name or an inline chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmbientDocument {
    Named(String),
    Inline(Box<ChartDocument>),
}

/// Patch definition file. Shares the expression grammar of chart documents,
/// with immersion components written in the parameters `t0 .. t{n-1}`:
///
/// ```text
/// {
///   "name": "round_sphere",
///   "ambient": "flat:4",               (or an inline chart document)
///   "n": 2,
///   "f": ["0.5 * sin(t0) * cos(t1)", "0.5 * sin(t0) * sin(t1)", "0.5 * cos(t0)", "0"],
///   "domain": [[0.3, 2.8], [-3, 3]],
///   "reference_point": [1.2, 0.4],     (optional)
///   "diff": {"step": 0.001, "order": 4} (optional)
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchDocument {
    pub name: String,
    pub ambient: AmbientDocument,
    pub n: usize,
    pub f: Vec<String>,
    pub domain: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffDocument>,
}

impl PatchDocument {
    pub fn into_patch(self) -> Result<ImmersedPatch> {
        let ambient = match self.ambient {
            AmbientDocument::Named(s) => s.parse::<Space>()?.chart()?,
            AmbientDocument::Inline(doc) => doc.into_chart()?,
        };
        let f: Vec<&str> = self.f.iter().map(String::as_str).collect();
        let mut patch = ImmersedPatch::parse(self.name, ambient, self.n, &f, self.domain)?;
        if let Some(d) = self.diff {
            patch = patch.with_diff(DiffConfig::new(d.step, d.order)?);
        }
        if let Some(t) = self.reference_point {
            if t.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: t.len(),
                });
            }
            patch = patch.with_reference_point(t);
        }
        Ok(patch)
    }
}

impl ImmersedPatch {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<PatchDocument>(text)?.into_patch()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_plane_is_totally_geodesic() {
        let p = patch("affine_plane", &[]).unwrap();
        let t = p.reference_point();
        let sff = p.second_fundamental_form(&t).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(sff.frame_value(a, b).amax() < 1e-9);
            }
        }
        assert!(p.mean_curvature(&t).unwrap().amax() < 1e-9);
        assert!(p.umbilic_residual(&t).unwrap() < 1e-9);
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        for r in [0.3, 0.5, 0.8] {
            let p = patch("circle", &[r]).unwrap();
            let t = [0.7];
            let sff = p.second_fundamental_form(&t).unwrap();
            let k = linalg::norm(sff.metric(), sff.frame_value(0, 0));
            assert!((k - 1.0 / r).abs() < 1e-8, "r = {r}: {k}");
        }
    }

    #[test]
    fn outside_parameter_domain() {
        let p = patch("cylinder", &[]).unwrap();
        assert!(matches!(
            p.mean_curvature(&[0.0, 0.5]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            p.mean_curvature(&[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_deficient_immersion() {
        let flat = Space::Flat { dim: 4 }.chart().unwrap();
        let p = ImmersedPatch::parse(
            "fold",
            flat,
            2,
            &["t0", "t0", "0", "0"],
            vec![[-0.5, 0.5]; 2],
        )
        .unwrap();
        assert!(matches!(
            p.mean_curvature(&[0.0, 0.0]),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn non_normal_and_non_tangent_inputs() {
        let p = patch("affine_plane", &[]).unwrap();
        let t = p.reference_point();
        let tangent = ExprField::parse(&["1", "0", "0.5", "-0.4"], 2).unwrap();
        assert!(matches!(
            p.weingarten_split(&t, &tangent),
            Err(Error::NonNormal { .. })
        ));
        let e2 = linalg::basis_vector(4, 2);
        let e0 = linalg::basis_vector(4, 0);
        assert!(matches!(
            p.codazzi_residual(&t, &e2, &e0, &e0),
            Err(Error::NonTangent { .. })
        ));
    }

    #[test]
    fn bad_patch_definitions() {
        let flat = || Space::Flat { dim: 4 }.chart().unwrap();
        assert!(
            ImmersedPatch::parse("x", flat(), 2, &["t0", "t1", "0"], vec![[0.0, 1.0]; 2]).is_err()
        );
        assert!(
            ImmersedPatch::parse("x", flat(), 2, &["t0", "t2", "0", "0"], vec![[0.0, 1.0]; 2])
                .is_err()
        );
        assert!(ImmersedPatch::parse(
            "x",
            flat(),
            4,
            &["t0", "t1", "t2", "t3"],
            vec![[0.0, 1.0]; 4]
        )
        .is_err());
        assert!(patch("torus", &[]).is_err());
        assert!(patch("circle", &[-1.0]).is_err());
    }
}
