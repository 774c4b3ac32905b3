use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::Taylor;
use crate::scalar::Scalar;

/// Value and first three derivatives of a function of one variable.
///
/// Components are derivatives, not Taylor coefficients: `c2` is `f''`, not
/// `f''/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet1<T> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

impl<T: Scalar> Jet1<T> {
    pub fn new(c0: T, c1: T, c2: T, c3: T) -> Self {
        Self { c0, c1, c2, c3 }
    }

    /// The identity map evaluated at `x`.
    pub fn seed(x: T) -> Self {
        Self::new(x, T::one(), T::zero(), T::zero())
    }

    pub fn to_array(self) -> [T; 4] {
        [self.c0, self.c1, self.c2, self.c3]
    }
}

impl<T: Scalar> Add for Jet1<T> {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self::new(self.c0 + b.c0, self.c1 + b.c1, self.c2 + b.c2, self.c3 + b.c3)
    }
}

impl<T: Scalar> Sub for Jet1<T> {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self::new(self.c0 - b.c0, self.c1 - b.c1, self.c2 - b.c2, self.c3 - b.c3)
    }
}

impl<T: Scalar> Neg for Jet1<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1, -self.c2, -self.c3)
    }
}

impl<T: Scalar> Mul for Jet1<T> {
    type Output = Self;

    // Leibniz rule to third order.
    fn mul(self, b: Self) -> Self {
        let a = self;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Self::new(
            a.c0 * b.c0,
            a.c1 * b.c0 + a.c0 * b.c1,
            a.c2 * b.c0 + two * a.c1 * b.c1 + a.c0 * b.c2,
            a.c3 * b.c0 + three * a.c2 * b.c1 + three * a.c1 * b.c2 + a.c0 * b.c3,
        )
    }
}

impl<T: Scalar> Taylor<T> for Jet1<T> {
    fn constant(c: T) -> Self {
        Self::new(c, T::zero(), T::zero(), T::zero())
    }

    fn value(&self) -> T {
        self.c0
    }

    // Faà di Bruno to third order.
    fn chain(&self, f: [T; 4]) -> Self {
        let (a1, a2, a3) = (self.c1, self.c2, self.c3);
        Self::new(
            f[0],
            f[1] * a1,
            f[2] * a1 * a1 + f[1] * a2,
            f[3] * a1 * a1 * a1 + T::lit(3.0) * f[2] * a1 * a2 + f[1] * a3,
        )
    }

    fn scale(&self, k: T) -> Self {
        Self::new(self.c0 * k, self.c1 * k, self.c2 * k, self.c3 * k)
    }

    fn all_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite()
    }
}
