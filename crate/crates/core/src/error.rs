use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Failures of curve, surface and constructor operations.
///
/// Parameter locations are widened to `f64` so the error type does not
/// depend on the scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("evaluation failed at {at:?}: {source}")]
    Eval { at: Vec<f64>, source: EvalError },
    #[error("coordinate functions must take {expected} variable(s), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("curve is not unit speed at s = {s}: |x'| = {speed}")]
    NonUnitSpeed { s: f64, speed: f64 },
    #[error("curvature vanishes at s = {s}")]
    VanishingCurvature { s: f64 },
    #[error("degenerate surface at ({u}, {v}): W = {w}")]
    DegenerateW { u: f64, v: f64, w: f64 },
    #[error("surface has a Euclidean tangent plane at ({u}, {v})")]
    Inadmissible { u: f64, v: f64 },
    #[error("singular matrix: det = {det}")]
    SingularMatrix { det: f64 },
    #[error("precondition failed: {reason} (witness {witness:?})")]
    Precondition { reason: String, witness: Vec<f64> },
}

impl GeometryError {
    pub(crate) fn eval(at: &[f64], source: EvalError) -> Self {
        GeometryError::Eval {
            at: at.to_vec(),
            source,
        }
    }

    pub(crate) fn precondition(reason: impl Into<String>, witness: &[f64]) -> Self {
        GeometryError::Precondition {
            reason: reason.into(),
            witness: witness.to_vec(),
        }
    }

    /// True for failures caused by the geometry at a point (degenerate or
    /// inadmissible), as opposed to malformed input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            GeometryError::DegenerateW { .. }
                | GeometryError::Inadmissible { .. }
                | GeometryError::VanishingCurvature { .. }
                | GeometryError::Eval { .. }
        )
    }
}
