//! Curves and surfaces of Galilean 3-space: invariants, translation surface
//! families with closed-form curvature, and grid verification of constancy.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common choice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod curves;
pub mod error;
pub mod expr;
pub mod galilean;
pub mod jets;
pub mod scalar;
pub mod surfaces;
pub mod translation;
pub mod verify;

pub use curves::{curvature, torsion, Curve};
pub use error::GeometryError;
pub use expr::Expr;
pub use galilean::{GalileanMotion, Point3, Vector3};
pub use jets::{Jet1, Jet2};
pub use scalar::Scalar;
pub use surfaces::{Curvatures, Rect, Surface};
pub use translation::{AffineMatrix, FamilyKind, FamilyParams, SurfaceFamily};
pub use verify::{certify_theorem, probe_nonexistence, sample, sample_family, Certificate, CurvatureReport, TheoremId};

pub type Curve64 = Curve<f64>;
pub type Curve32 = Curve<f32>;
pub type Surface64 = Surface<f64>;
pub type Surface32 = Surface<f32>;
pub type Family64 = SurfaceFamily<f64>;
pub type Family32 = SurfaceFamily<f32>;
pub type Motion64 = GalileanMotion<f64>;
pub type Motion32 = GalileanMotion<f32>;
pub type Jet1F64 = Jet1<f64>;
pub type Jet2F64 = Jet2<f64>;
