//! Floating-point scalar abstraction.
//!
//! All geometry in this crate is written against [`Scalar`], which is
//! implemented for `f32` and `f64`. Expression constants and sampled tables
//! are stored as `f64` and converted on evaluation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast};

/// Real scalar usable by jets, geometry and verification.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumCast
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + crate::jets::Taylor<Self>
    + 'static
{
    /// Converts an `f64` literal or threshold into `Self`.
    fn lit(x: f64) -> Self;

    /// Widens to `f64` for reporting and serialization.
    fn to_f64_lossy(self) -> f64;

    /// A tolerance on pure rounding residuals: `x`, raised to 64 ulps of one
    /// for types too narrow to resolve it.
    fn rounding_tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Evenly spaced samples of `[lo, hi]`, endpoints included.
///
/// Nodes are computed as `lo + (hi - lo) * i / (n - 1)` so that symmetric
/// intervals hit their midpoint exactly when `n` is odd.
pub fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = T::lit((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * T::lit(i as f64) / last
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_midpoint_and_endpoints() {
        let xs = linspace(-1.0_f64, 1.0, 101);
        assert_eq!(xs.len(), 101);
        assert_eq!(xs[0], -1.0);
        assert_eq!(xs[50], 0.0);
        assert_eq!(xs[100], 1.0);
    }

    #[test]
    fn lit_round_trips_for_f32() {
        assert_eq!(f32::lit(0.5), 0.5_f32);
        assert_eq!(0.25_f32.to_f64_lossy(), 0.25);
    }
}
