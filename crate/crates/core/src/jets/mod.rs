//! Truncated-Taylor arithmetic.
//!
//! [`Jet1`] carries a value and its first three derivatives in one variable,
//! [`Jet2`] a value with all partial derivatives up to order two in two
//! variables. Both implement [`Taylor`], which is the interface expression
//! evaluation is written against; the plain scalars implement it too so the
//! same evaluator produces values, curve jets and surface jets.
//!
//! Elementary functions enter through [`Taylor::chain`]: the caller supplies
//! the outer function's derivatives at the inner value and the jet applies
//! the chain rule (Faà di Bruno) up to its order.
//!
//! [`fd`] holds the finite-difference oracle used to check all of this.

mod jet1;
mod jet2;

pub mod fd;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

pub use jet1::Jet1;
pub use jet2::Jet2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{function} is undefined (or not differentiable) at {argument}")]
    Domain { function: &'static str, argument: f64 },
    #[error("non-finite jet component")]
    NonFinite,
}

/// Binary arithmetic selector for [`Taylor::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Elementary functions with closed-form derivative tables up to order 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elementary {
    Sin,
    Cos,
    Tan,
    Asin,
    Atan,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Recip,
    /// `x^p` for a real, non-integer exponent; requires `x > 0`.
    Powf(f64),
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Asin => "asin",
            Elementary::Atan => "atan",
            Elementary::Exp => "exp",
            Elementary::Ln => "log",
            Elementary::Sqrt => "sqrt",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Recip => "recip",
            Elementary::Powf(_) => "pow",
        }
    }

    /// `[f(x), f'(x), f''(x), f'''(x)]`.
    ///
    /// Points where the function or one of its first three derivatives is
    /// undefined are rejected as domain errors.
    pub fn derivatives<T: Scalar>(self, x: T) -> Result<[T; 4], JetError> {
        let domain = || JetError::Domain {
            function: self.name(),
            argument: x.to_f64_lossy(),
        };
        let one = T::one();
        let two = T::lit(2.0);
        let d = match self {
            Elementary::Sin => {
                let (s, c) = x.sin_cos();
                [s, c, -s, -c]
            }
            Elementary::Cos => {
                let (s, c) = x.sin_cos();
                [c, -s, -c, s]
            }
            Elementary::Tan => {
                if x.cos() == T::zero() {
                    return Err(domain());
                }
                let t = x.tan();
                let sec2 = one + t * t;
                [t, sec2, two * t * sec2, sec2 * (two + T::lit(6.0) * t * t)]
            }
            Elementary::Asin => {
                if !(x.abs() < one) {
                    return Err(domain());
                }
                let q = one - x * x;
                let r = q.sqrt();
                [x.asin(), one / r, x / (q * r), (one + two * x * x) / (q * q * r)]
            }
            Elementary::Atan => {
                let q = one + x * x;
                [
                    x.atan(),
                    one / q,
                    -two * x / (q * q),
                    (T::lit(6.0) * x * x - two) / (q * q * q),
                ]
            }
            Elementary::Exp => {
                let e = x.exp();
                [e, e, e, e]
            }
            Elementary::Ln => {
                if !(x > T::zero()) {
                    return Err(domain());
                }
                let r = one / x;
                [x.ln(), r, -r * r, two * r * r * r]
            }
            Elementary::Sqrt => {
                if !(x > T::zero()) {
                    return Err(domain());
                }
                let s = x.sqrt();
                [
                    s,
                    one / (two * s),
                    -one / (T::lit(4.0) * s * x),
                    T::lit(3.0) / (T::lit(8.0) * s * x * x),
                ]
            }
            Elementary::Sinh => {
                let (sh, ch) = (x.sinh(), x.cosh());
                [sh, ch, sh, ch]
            }
            Elementary::Cosh => {
                let (sh, ch) = (x.sinh(), x.cosh());
                [ch, sh, ch, sh]
            }
            Elementary::Recip => {
                if x == T::zero() {
                    return Err(JetError::DivisionByZero);
                }
                let r = one / x;
                let r2 = r * r;
                [r, -r2, two * r2 * r, -T::lit(6.0) * r2 * r2]
            }
            Elementary::Powf(p) => {
                if !(x > T::zero()) {
                    return Err(domain());
                }
                let p = T::lit(p);
                let v = x.powf(p);
                let d1 = p * v / x;
                let d2 = (p - one) * d1 / x;
                let d3 = (p - two) * d2 / x;
                [v, d1, d2, d3]
            }
        };
        if d.iter().all(|c| c.is_finite()) {
            Ok(d)
        } else {
            Err(JetError::NonFinite)
        }
    }
}

/// Values that carry derivatives through arithmetic.
pub trait Taylor<T: Scalar>:
    Copy + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: T) -> Self;

    fn value(&self) -> T;

    /// Composes an outer function, given as `[f, f', f'', f''']` at
    /// `self.value()`, with this jet.
    fn chain(&self, outer: [T; 4]) -> Self;

    fn scale(&self, k: T) -> Self;

    fn all_finite(&self) -> bool;

    fn apply(&self, f: Elementary) -> Result<Self, JetError> {
        let d = f.derivatives(self.value())?;
        finite(self.chain(d))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, JetError> {
        if rhs.value() == T::zero() {
            return Err(JetError::DivisionByZero);
        }
        finite(*self * rhs.apply(Elementary::Recip)?)
    }

    fn arith(&self, rhs: &Self, op: ArithOp) -> Result<Self, JetError> {
        match op {
            ArithOp::Add => finite(*self + *rhs),
            ArithOp::Sub => finite(*self - *rhs),
            ArithOp::Mul => finite(*self * *rhs),
            ArithOp::Div => self.checked_div(rhs),
        }
    }

    /// Integer power by square-and-multiply in jet space.
    fn powi(&self, n: i64) -> Result<Self, JetError> {
        let mut base = *self;
        let mut acc = Self::constant(T::one());
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        let acc = finite(acc)?;
        if n < 0 {
            Self::constant(T::one()).checked_div(&acc)
        } else {
            Ok(acc)
        }
    }
}

fn finite<T: Scalar, J: Taylor<T>>(j: J) -> Result<J, JetError> {
    if j.all_finite() {
        Ok(j)
    } else {
        Err(JetError::NonFinite)
    }
}

macro_rules! impl_taylor_for_float {
    ($t:ty) => {
        impl Taylor<$t> for $t {
            #[inline]
            fn constant(c: $t) -> Self {
                c
            }

            #[inline]
            fn value(&self) -> $t {
                *self
            }

            #[inline]
            fn chain(&self, outer: [$t; 4]) -> Self {
                outer[0]
            }

            #[inline]
            fn scale(&self, k: $t) -> Self {
                self * k
            }

            #[inline]
            fn all_finite(&self) -> bool {
                self.is_finite()
            }
        }
    };
}

impl_taylor_for_float!(f32);
impl_taylor_for_float!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: Elementary, x: f64) {
        let d = f.derivatives(x).unwrap();
        let h = 1e-4;
        let g = |t: f64| f.derivatives(t).unwrap();
        let d1 = (g(x + h)[0] - g(x - h)[0]) / (2.0 * h);
        let d2 = (g(x + h)[1] - g(x - h)[1]) / (2.0 * h);
        let d3 = (g(x + h)[2] - g(x - h)[2]) / (2.0 * h);
        for (got, want) in [(d[1], d1), (d[2], d2), (d[3], d3)] {
            assert!(
                (got - want).abs() <= 1e-6 * (1.0 + want.abs()),
                "{f:?} at {x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn derivative_tables_match_differences() {
        for f in [
            Elementary::Sin,
            Elementary::Cos,
            Elementary::Tan,
            Elementary::Asin,
            Elementary::Atan,
            Elementary::Exp,
            Elementary::Ln,
            Elementary::Sqrt,
            Elementary::Sinh,
            Elementary::Cosh,
            Elementary::Recip,
            Elementary::Powf(2.5),
            Elementary::Powf(-0.3),
        ] {
            fd_check(f, 0.37);
        }
        fd_check(Elementary::Asin, -0.8);
        fd_check(Elementary::Powf(1.5), 3.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            Elementary::Sqrt.derivatives(0.0_f64),
            Err(JetError::Domain { function: "sqrt", .. })
        ));
        assert!(Elementary::Ln.derivatives(-1.0_f64).is_err());
        assert!(Elementary::Asin.derivatives(1.0_f64).is_err());
        assert!(Elementary::Powf(0.5).derivatives(-2.0_f64).is_err());
        assert_eq!(Elementary::Recip.derivatives(0.0_f64), Err(JetError::DivisionByZero));
        assert_eq!(Elementary::Exp.derivatives(1000.0_f64), Err(JetError::NonFinite));
    }

    #[test]
    fn scalar_powi() {
        assert_eq!(Taylor::powi(&2.0_f64, 10).unwrap(), 1024.0);
        assert_eq!(Taylor::powi(&2.0_f64, -2).unwrap(), 0.25);
        assert_eq!(Taylor::powi(&0.0_f64, 0).unwrap(), 1.0);
        assert_eq!(Taylor::powi(&0.0_f64, -1), Err(JetError::DivisionByZero));
    }
}
