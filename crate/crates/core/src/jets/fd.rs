//! Central finite differences, packed into jets.
//!
//! This is the independent check on jet arithmetic: it only ever calls the
//! black-box function on a stencil and never looks at derivative rules.

use super::{Jet1, Jet2};
use crate::scalar::Scalar;

/// Default step for first derivatives.
pub const FIRST_STEP: f64 = 1e-5;
/// Default step for second and mixed derivatives.
pub const SECOND_STEP: f64 = 1e-4;
/// Default step for the five-point third-derivative stencil.
pub const THIRD_STEP: f64 = 1e-3;

/// Stencil half-widths per derivative order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps<T> {
    pub first: T,
    pub second: T,
    pub third: T,
}

impl<T: Scalar> Default for FdSteps<T> {
    fn default() -> Self {
        Self {
            first: T::lit(FIRST_STEP),
            second: T::lit(SECOND_STEP),
            third: T::lit(THIRD_STEP),
        }
    }
}

impl<T: Scalar> FdSteps<T> {
    /// Same step for first and second derivatives, default third step.
    pub fn uniform(h: T) -> Self {
        Self {
            first: h,
            second: h,
            third: T::lit(THIRD_STEP),
        }
    }
}

/// Value and derivative estimates up to order three.
///
/// `c1` and `c2` use three-point central differences; `c3` uses the
/// five-point stencil `[f(x+2h) - 2f(x+h) + 2f(x-h) - f(x-2h)] / (2h^3)`.
/// Any error from `f` on the stencil is returned unchanged.
pub fn univariate<T, E, F>(f: F, x: T, steps: FdSteps<T>) -> Result<Jet1<T>, E>
where
    T: Scalar,
    F: Fn(T) -> Result<T, E>,
{
    let two = T::lit(2.0);
    let f0 = f(x)?;

    let h = steps.first;
    let c1 = (f(x + h)? - f(x - h)?) / (two * h);

    let h = steps.second;
    let c2 = (f(x + h)? - two * f0 + f(x - h)?) / (h * h);

    let h = steps.third;
    let p1 = f(x + h)?;
    let m1 = f(x - h)?;
    let p2 = f(x + two * h)?;
    let m2 = f(x - two * h)?;
    let c3 = (p2 - two * p1 + two * m1 - m2) / (two * h * h * h);

    Ok(Jet1::new(f0, c1, c2, c3))
}

/// Value, gradient and Hessian estimates of `f(u, v)`.
pub fn bivariate<T, E, F>(f: F, u: T, v: T, steps: FdSteps<T>) -> Result<Jet2<T>, E>
where
    T: Scalar,
    F: Fn(T, T) -> Result<T, E>,
{
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let f0 = f(u, v)?;

    let h = steps.first;
    let c10 = (f(u + h, v)? - f(u - h, v)?) / (two * h);
    let c01 = (f(u, v + h)? - f(u, v - h)?) / (two * h);

    let h = steps.second;
    let c20 = (f(u + h, v)? - two * f0 + f(u - h, v)?) / (h * h);
    let c02 = (f(u, v + h)? - two * f0 + f(u, v - h)?) / (h * h);
    let c11 = (f(u + h, v + h)? - f(u + h, v - h)? - f(u - h, v + h)? + f(u - h, v - h)?) / (four * h * h);

    Ok(Jet2::new(f0, c10, c01, c20, c11, c02))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok<T>(x: T) -> Result<T, Infallible> {
        Ok(x)
    }

    #[test]
    fn cubic_second_derivative() {
        let d = univariate(|u: f64| ok(u * u * u), 1.0, FdSteps::uniform(1e-4)).unwrap();
        assert!((d.c2 - 6.0).abs() < 1e-4);
        assert!((d.c3 - 6.0).abs() < 1e-4);
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let d = univariate(|_u: f64| ok(7.0), 0.3, FdSteps::default()).unwrap();
        assert_eq!(d.c0, 7.0);
        for c in [d.c1, d.c2, d.c3] {
            assert!(c.abs() < 1e-9);
        }
        let d = bivariate(|_u: f64, _v| ok(7.0), 0.3, 0.1, FdSteps::default()).unwrap();
        for c in [d.c10, d.c01, d.c20, d.c11, d.c02] {
            assert!(c.abs() < 1e-9);
        }
    }

    #[test]
    fn sine_first_derivative() {
        let d = univariate(|u: f64| ok(u.sin()), 0.5, FdSteps::uniform(1e-5)).unwrap();
        assert!((d.c1 - 0.5_f64.cos()).abs() < 1e-9);
        assert!((0.5_f64.cos() - 0.877583).abs() < 1e-6);
    }

    #[test]
    fn stencil_errors_propagate() {
        let sqrt = |u: f64| if u >= 0.0 { Ok(u.sqrt()) } else { Err("outside") };
        assert_eq!(univariate(sqrt, 0.0, FdSteps::default()), Err("outside"));
    }

    #[test]
    fn bilinear_mixed_partial() {
        let d = bivariate(|u: f64, v: f64| ok(u * v), 1.0, 2.0, FdSteps::default()).unwrap();
        assert!((d.c11 - 1.0).abs() < 1e-9);
        assert!((d.c10 - 2.0).abs() < 1e-9);
        assert!((d.c01 - 1.0).abs() < 1e-9);
    }
}
