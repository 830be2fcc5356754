//! Numerical laboratory for almost Hermitian curvature.
//!
//! The crate builds pointwise data `(g, J, R)`, constructs θ-holomorphic
//! 2-planes, evaluates the curvature conditions that a θ-holomorphic plane
//! axiom imposes through the Codazzi equation, and checks whether a point is a
//! real space form (`R = c·π₁`). Chart-level machinery (Christoffel symbols,
//! curvature and `∇J` by finite differences) and a submanifold toolkit
//! (second fundamental form, Weingarten split, Codazzi residual) feed the
//! same checks from concrete model spaces.

pub mod axiom;
pub mod catalog;
pub mod chart;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod plane;
pub mod sampling;
pub mod submanifold;
pub mod tensor;

pub use axiom::{
    axiom_scan, necessary_residuals, schur_scan, space_form_defect, theorem_check, AxiomScan,
    CorollaryOutcome, ResidualRecord, SchurReport, SpaceFormDefect, TheoremOutcome, TheoremReport,
};
pub use catalog::{catalog, resolve_space, ChartDocument, Space};
pub use chart::{ChartMetric, Christoffel, DiffConfig, Expected};
pub use curvature::{
    constancy_scan, holomorphic_curvature, sectional_curvature, ConstancyScan, PlaneKind,
};
pub use error::{Error, Result};
pub use expr::Expr;
pub use linalg::{Matrix, Vector};
pub use plane::{make_theta_plane, principal_angles, CanonicalBasis, TwoPlane};
pub use submanifold::{
    patch, ExprField, ImmersedPatch, SecondFundamentalForm, VectorField, WeingartenSplit,
    PATCH_NAMES,
};
pub use tensor::{
    complex_space_form_tensor, real_space_form_tensor, CurvatureTensor, HermitianPoint,
    HermitianStructure, ValidationReport,
};
