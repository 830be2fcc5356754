//! Model spaces and the JSON chart document format.
//!
//! A chart document is one JSON object:
//!
//! ```text
//! {
//!   "name": "sphere",
//!   "dim": 4,
//!   "g": [["4 / (1 + x0^2 + x1^2 + x2^2 + x3^2)^2", "0", "0", "0"], ...],
//!   "J": [["0", "-1", "0", "0"], ...],                        (optional)
//!   "domain": [[-1, 1], [-1, 1], [-1, 1], [-1, 1]],
//!   "expected": {"kind": "real_space_form", "c": 1, "kahler": false},   (optional)
//!   "reference_point": [0, 0, 0, 0],                          (optional)
//!   "diff": {"step": 0.0001, "order": 2},                     (optional)
//!   "tolerance": 1e-5                                         (optional)
//! }
//! ```
//!
//! `g` holds `g_{ij}` row by row and `J` holds `J^i_j` row by row, so column
//! `j` of `J` is the image of `∂_j`. Entries are expressions in the
//! coordinates `x0 .. x{dim-1}` (see [`crate::expr`]). `kind` is one of
//! `real_space_form`, `complex_space_form` or `none`. Unknown fields are
//! rejected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chart::{ChartMetric, DiffConfig, Expected, CHART_TOL};
use crate::error::{Error, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    Flat {
        dim: usize,
    },
    /// Stereographic chart, sectional curvature `c > 0`.
    Sphere {
        c: f64,
        dim: usize,
    },
    /// Poincaré ball chart, sectional curvature `-c`.
    RealHyperbolic {
        c: f64,
        dim: usize,
    },
    /// Affine chart of CP^m, holomorphic sectional curvature `c > 0`.
    FubiniStudy {
        c: f64,
        m: usize,
    },
    /// Ball chart, holomorphic sectional curvature `-c`.
    ComplexHyperbolic {
        c: f64,
        m: usize,
    },
    /// Product of two unit 2-spheres with the product complex structure.
    ProductS2xS2,
    /// Flat R^4 with a J that rotates along `x0`.
    NonKahlerFlatJ,
}

pub const CATALOG_NAMES: [&str; 7] = [
    "flat",
    "sphere",
    "real_hyperbolic",
    "fubini_study",
    "complex_hyperbolic",
    "product_s2xs2",
    "non_kahler_flat_j",
];

/// Builds a catalog chart by name. Parameters are `[c, dim]` for the real
/// families, `[c, m]` for the complex ones and `[dim]` for `flat`; trailing
/// ones may be omitted (defaults: `c = 1` or `4`, `dim = 4`, `m = 2`).
pub fn catalog(name: &str, params: &[f64]) -> Result<ChartMetric> {
    Space::from_name(name, params)?.chart()
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v.fract() != 0.0 || v < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "{what} must be a positive integer, got {v}"
        )));
    }
    Ok(v as usize)
}

fn positive(c: f64, name: &str) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{name} needs c > 0, got {c}"
        )));
    }
    Ok(c)
}

impl Space {
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let p = |i: usize| params.get(i).copied();
        let max_params = match name {
            "flat" => 1,
            "product_s2xs2" | "non_kahler_flat_j" => 0,
            _ => 2,
        };
        if params.len() > max_params {
            return Err(Error::InvalidArgument(format!(
                "{name} takes at most {max_params} parameters"
            )));
        }
        let space = match name {
            "flat" => Space::Flat {
                dim: p(0).map(|d| as_count(d, "dim")).transpose()?.unwrap_or(4),
            },
            "sphere" => Space::Sphere {
                c: positive(p(0).unwrap_or(1.0), name)?,
                dim: p(1).map(|d| as_count(d, "dim")).transpose()?.unwrap_or(4),
            },
            "real_hyperbolic" => Space::RealHyperbolic {
                c: positive(p(0).unwrap_or(1.0), name)?,
                dim: p(1).map(|d| as_count(d, "dim")).transpose()?.unwrap_or(4),
            },
            "fubini_study" => Space::FubiniStudy {
                c: positive(p(0).unwrap_or(4.0), name)?,
                m: p(1).map(|d| as_count(d, "m")).transpose()?.unwrap_or(2),
            },
            "complex_hyperbolic" => Space::ComplexHyperbolic {
                c: positive(p(0).unwrap_or(4.0), name)?,
                m: p(1).map(|d| as_count(d, "m")).transpose()?.unwrap_or(2),
            },
            "product_s2xs2" => Space::ProductS2xS2,
            "non_kahler_flat_j" => Space::NonKahlerFlatJ,
            other => return Err(Error::UnknownSpace(other.to_string())),
        };
        if let Space::Flat { dim } | Space::Sphere { dim, .. } | Space::RealHyperbolic { dim, .. } =
            space
        {
            if dim < 2 {
                return Err(Error::InvalidArgument(format!("{name} needs dim >= 2")));
            }
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        match *self {
            Space::Flat { dim } | Space::Sphere { dim, .. } | Space::RealHyperbolic { dim, .. } => {
                dim
            }
            Space::FubiniStudy { m, .. } | Space::ComplexHyperbolic { m, .. } => 2 * m,
            Space::ProductS2xS2 | Space::NonKahlerFlatJ => 4,
        }
    }

    pub fn expected(&self) -> Expected {
        let (kind, c, kahler) = match *self {
            Space::Flat { .. } => ("real_space_form", Some(0.0), true),
            Space::Sphere { c, .. } => ("real_space_form", Some(c), false),
            Space::RealHyperbolic { c, .. } => ("real_space_form", Some(-c), false),
            Space::FubiniStudy { c, .. } => ("complex_space_form", Some(c), true),
            Space::ComplexHyperbolic { c, .. } => ("complex_space_form", Some(-c), true),
            Space::ProductS2xS2 => ("none", None, true),
            Space::NonKahlerFlatJ => ("real_space_form", Some(0.0), false),
        };
        Expected {
            kind: kind.to_string(),
            c,
            kahler: Some(kahler),
        }
    }

    /// Expression sources for `g`, `J` and the domain box.
    fn sources(&self) -> (Vec<Vec<String>>, Option<Vec<Vec<String>>>, Vec<[f64; 2]>) {
        let n = self.dim();
        let r2 = (0..n)
            .map(|i| format!("x{i}^2"))
            .collect::<Vec<_>>()
            .join(" + ");
        let conformal = |factor: String| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { factor.clone() } else { "0".into() })
                        .collect()
                })
                .collect::<Vec<Vec<String>>>()
        };
        let standard_j = n.is_multiple_of(2).then(|| standard_j_sources(n));
        let cube = |half: f64| vec![[-half, half]; n];
        match *self {
            Space::Flat { .. } => (conformal("1".into()), standard_j, cube(1.0)),
            Space::Sphere { c, .. } => (
                conformal(format!("4 / (1 + {c:?} * ({r2}))^2")),
                standard_j,
                cube(1.0 / c.sqrt()),
            ),
            Space::RealHyperbolic { c, .. } => (
                conformal(format!("4 / (1 - {c:?} * ({r2}))^2")),
                standard_j,
                cube(0.8 / (c * n as f64).sqrt()),
            ),
            Space::FubiniStudy { c, .. } => {
                (kahler_potential_metric(n, c, 1.0), standard_j, cube(1.0))
            }
            Space::ComplexHyperbolic { c, .. } => (
                kahler_potential_metric(n, c, -1.0),
                standard_j,
                cube(0.8 / (n as f64).sqrt()),
            ),
            Space::ProductS2xS2 => {
                let a = "4 / (1 + x0^2 + x1^2)^2".to_string();
                let b = "4 / (1 + x2^2 + x3^2)^2".to_string();
                let g = (0..4)
                    .map(|i| {
                        (0..4)
                            .map(|j| match (i == j, i < 2) {
                                (false, _) => "0".to_string(),
                                (true, true) => a.clone(),
                                (true, false) => b.clone(),
                            })
                            .collect()
                    })
                    .collect();
                (g, standard_j, cube(1.0))
            }
            Space::NonKahlerFlatJ => {
                let rows: [[&str; 4]; 4] = [
                    ["0", "-cos(x0)", "-sin(x0)", "0"],
                    ["cos(x0)", "0", "0", "sin(x0)"],
                    ["sin(x0)", "0", "0", "-cos(x0)"],
                    ["0", "-sin(x0)", "cos(x0)", "0"],
                ];
                let j = rows
                    .iter()
                    .map(|r| r.iter().map(|s| s.to_string()).collect())
                    .collect();
                (conformal("1".into()), Some(j), cube(1.0))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Space::Flat { .. } => "flat",
            Space::Sphere { .. } => "sphere",
            Space::RealHyperbolic { .. } => "real_hyperbolic",
            Space::FubiniStudy { .. } => "fubini_study",
            Space::ComplexHyperbolic { .. } => "complex_hyperbolic",
            Space::ProductS2xS2 => "product_s2xs2",
            Space::NonKahlerFlatJ => "non_kahler_flat_j",
        }
    }

    pub fn document(&self) -> ChartDocument {
        let (g, j, domain) = self.sources();
        ChartDocument {
            name: self.to_string(),
            dim: self.dim(),
            g,
            j,
            domain,
            expected: Some(self.expected()),
            reference_point: Some(vec![0.0; self.dim()]),
            diff: None,
            tolerance: None,
        }
    }

    pub fn chart(&self) -> Result<ChartMetric> {
        self.document().into_chart()
    }
}

fn standard_j_sources(n: usize) -> Vec<Vec<String>> {
    let j = crate::linalg::standard_complex_structure(n);
    (0..n)
        .map(|r| (0..n).map(|c| format!("{}", j[(r, c)] as i64)).collect())
        .collect()
}

/// `(4/c)[δ/(1 + εs) - ε(PPᵀ + QQᵀ)/(1 + εs)²]` with `s = |x|²`, `P = x`,
/// `Q = J₀x`; `ε = 1` is Fubini–Study, `ε = -1` the complex hyperbolic ball.
fn kahler_potential_metric(n: usize, c: f64, eps: f64) -> Vec<Vec<String>> {
    let s = (0..n)
        .map(|i| format!("x{i}^2"))
        .collect::<Vec<_>>()
        .join(" + ");
    let (op, minus) = if eps > 0.0 { ("+", "-") } else { ("-", "+") };
    let denom = format!("(1 {op} ({s}))");
    let p = |i: usize| format!("x{i}");
    // Q = J0 x: Q_{2a} = -x_{2a+1}, Q_{2a+1} = x_{2a}
    let q = |i: usize| {
        if i.is_multiple_of(2) {
            format!("(-x{})", i + 1)
        } else {
            format!("x{}", i - 1)
        }
    };
    let scale = 4.0 / c;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let outer = format!("({} * {} + {} * {})", p(i), p(j), q(i), q(j));
                    if i == j {
                        format!("{scale:?} * (1 / {denom} {minus} {outer} / {denom}^2)")
                    } else {
                        format!("{scale:?} * ({minus}{outer} / {denom}^2)")
                    }
                })
                .collect()
        })
        .collect()
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Space::Flat { dim } => write!(f, "flat:{dim}"),
            Space::Sphere { c, dim } | Space::RealHyperbolic { c, dim } => {
                write!(f, "{}:{c}:{dim}", self.name())
            }
            Space::FubiniStudy { c, m } | Space::ComplexHyperbolic { c, m } => {
                write!(f, "{}:{c}:{m}", self.name())
            }
            Space::ProductS2xS2 | Space::NonKahlerFlatJ => f.write_str(self.name()),
        }
    }
}

/// Parses `name[:p1[:p2]]`, e.g. `sphere:1`, `fubini_study:4:2`.
impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let params = parts
            .map(|p| {
                p.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad parameter '{p}' in '{s}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Space::from_name(name, &params)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffDocument {
    pub step: f64,
    pub order: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDocument {
    pub name: String,
    pub dim: usize,
    pub g: Vec<Vec<String>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
    pub domain: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

pub(crate) fn parse_matrix(rows: &[Vec<String>], dim: usize) -> Result<Vec<Vec<Expr>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|s| Expr::parse(s, 'x', dim).map_err(Error::from))
                .collect()
        })
        .collect()
}

impl ChartDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn into_chart(self) -> Result<ChartMetric> {
        if self.g.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "'dim' is {} but g has {} rows",
                self.dim,
                self.g.len()
            )));
        }
        let g = parse_matrix(&self.g, self.dim)?;
        let j = self
            .j
            .as_ref()
            .map(|j| parse_matrix(j, self.dim))
            .transpose()?;
        let mut chart = ChartMetric::new(self.name, g, j, self.domain)?
            .with_tolerance(self.tolerance.unwrap_or(CHART_TOL));
        if let Some(d) = self.diff {
            chart = chart.with_diff(DiffConfig::new(d.step, d.order)?);
        }
        if let Some(e) = self.expected {
            chart = chart.with_expected(e);
        }
        if let Some(u) = self.reference_point {
            if u.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: u.len(),
                });
            }
            chart = chart.with_reference_point(u);
        }
        Ok(chart)
    }
}

impl ChartMetric {
    pub fn from_json(text: &str) -> Result<Self> {
        ChartDocument::from_json(text)?.into_chart()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Serializes back to a chart document.
    pub fn to_document(&self) -> ChartDocument {
        let n = self.dim;
        let rows = |flat: &[Expr]| -> Vec<Vec<String>> {
            flat.chunks(n)
                .map(|r| r.iter().map(|e| e.display('x').to_string()).collect())
                .collect()
        };
        let diff = self.diff;
        ChartDocument {
            name: self.name.clone(),
            dim: n,
            g: rows(&self.g),
            j: self.j.as_deref().map(rows),
            domain: self.domain.clone(),
            expected: self.expected.clone(),
            reference_point: self.reference_point.clone(),
            diff: (diff != DiffConfig::default()).then_some(DiffDocument {
                step: diff.step,
                order: diff.order,
            }),
            tolerance: (self.tol != CHART_TOL).then_some(self.tol),
        }
    }
}

/// Resolves a command-line space argument: an existing file path is read as
/// a chart document, anything else is parsed as `name[:params]`.
pub fn resolve_space(arg: &str) -> Result<ChartMetric> {
    let path = Path::new(arg);
    if path.is_file() {
        return ChartMetric::from_file(path);
    }
    arg.parse::<Space>()?.chart()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_params() {
        assert_eq!(
            "sphere:2".parse::<Space>().unwrap(),
            Space::Sphere { c: 2.0, dim: 4 }
        );
        assert_eq!("flat:6".parse::<Space>().unwrap(), Space::Flat { dim: 6 });
        assert_eq!(
            "fubini_study".parse::<Space>().unwrap(),
            Space::FubiniStudy { c: 4.0, m: 2 }
        );
        assert!(matches!(
            "torus".parse::<Space>(),
            Err(Error::UnknownSpace(_))
        ));
        assert!(matches!(
            catalog("sphere", &[0.0]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            catalog("sphere", &[-1.0]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(catalog("flat", &[2.5]).is_err());
        assert!(catalog("product_s2xs2", &[1.0]).is_err());
        assert!("sphere:x".parse::<Space>().is_err());
    }

    #[test]
    fn every_catalog_entry_builds() {
        for name in CATALOG_NAMES {
            let chart = catalog(name, &[]).unwrap();
            assert_eq!(chart.dim(), 4);
            assert!(chart.expected().is_some());
            let g = chart.metric_at(&chart.reference_point());
            assert!(crate::linalg::min_eigenvalue(&g) > 0.0);
        }
    }

    #[test]
    fn document_round_trip() {
        for name in CATALOG_NAMES {
            let chart = catalog(name, &[]).unwrap();
            let json = chart.to_document().to_json().unwrap();
            let back = ChartMetric::from_json(&json).unwrap();
            let u = [0.1, -0.2, 0.15, 0.05];
            assert!((back.metric_at(&u) - chart.metric_at(&u)).amax() < 1e-15);
            assert_eq!(back.expected(), chart.expected());
        }
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(ChartMetric::from_json("{"), Err(Error::Json(_))));
        let unknown =
            r#"{"name":"a","dim":2,"g":[["1","0"],["0","1"]],"domain":[[0,1],[0,1]],"extra":1}"#;
        assert!(matches!(
            ChartMetric::from_json(unknown),
            Err(Error::Json(_))
        ));
        let bad_expr = r#"{"name":"a","dim":2,"g":[["1","0"],["0","x5"]],"domain":[[0,1],[0,1]]}"#;
        assert!(matches!(
            ChartMetric::from_json(bad_expr),
            Err(Error::Parse(_))
        ));
        let bad_dim = r#"{"name":"a","dim":3,"g":[["1","0"],["0","1"]],"domain":[[0,1],[0,1]]}"#;
        assert!(ChartMetric::from_json(bad_dim).is_err());
    }
}
