use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::Taylor;
use crate::scalar::Scalar;

/// Value and all partial derivatives up to order two of a function of
/// `(u, v)`. The mixed partial has a single slot, so symmetry is structural.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet2<T> {
    pub c00: T,
    pub c10: T,
    pub c01: T,
    pub c20: T,
    pub c11: T,
    pub c02: T,
}

impl<T: Scalar> Jet2<T> {
    pub fn new(c00: T, c10: T, c01: T, c20: T, c11: T, c02: T) -> Self {
        Self {
            c00,
            c10,
            c01,
            c20,
            c11,
            c02,
        }
    }

    /// The coordinate function `u` at `x`.
    pub fn seed_u(x: T) -> Self {
        let z = T::zero();
        Self::new(x, T::one(), z, z, z, z)
    }

    /// The coordinate function `v` at `y`.
    pub fn seed_v(y: T) -> Self {
        let z = T::zero();
        Self::new(y, z, T::one(), z, z, z)
    }

    /// First partial with respect to parameter `i` (0 for u, 1 for v).
    pub fn d1(&self, i: usize) -> T {
        if i == 0 {
            self.c10
        } else {
            self.c01
        }
    }

    /// Second partial with respect to parameters `i` and `j`.
    pub fn d2(&self, i: usize, j: usize) -> T {
        match (i, j) {
            (0, 0) => self.c20,
            (1, 1) => self.c02,
            _ => self.c11,
        }
    }
}

impl<T: Scalar> Add for Jet2<T> {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self::new(
            self.c00 + b.c00,
            self.c10 + b.c10,
            self.c01 + b.c01,
            self.c20 + b.c20,
            self.c11 + b.c11,
            self.c02 + b.c02,
        )
    }
}

impl<T: Scalar> Sub for Jet2<T> {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self::new(
            self.c00 - b.c00,
            self.c10 - b.c10,
            self.c01 - b.c01,
            self.c20 - b.c20,
            self.c11 - b.c11,
            self.c02 - b.c02,
        )
    }
}

impl<T: Scalar> Neg for Jet2<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.c00, -self.c10, -self.c01, -self.c20, -self.c11, -self.c02)
    }
}

impl<T: Scalar> Mul for Jet2<T> {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let a = self;
        let two = T::lit(2.0);
        Self::new(
            a.c00 * b.c00,
            a.c10 * b.c00 + a.c00 * b.c10,
            a.c01 * b.c00 + a.c00 * b.c01,
            a.c20 * b.c00 + two * a.c10 * b.c10 + a.c00 * b.c20,
            a.c11 * b.c00 + a.c10 * b.c01 + a.c01 * b.c10 + a.c00 * b.c11,
            a.c02 * b.c00 + two * a.c01 * b.c01 + a.c00 * b.c02,
        )
    }
}

impl<T: Scalar> Taylor<T> for Jet2<T> {
    fn constant(c: T) -> Self {
        let z = T::zero();
        Self::new(c, z, z, z, z, z)
    }

    fn value(&self) -> T {
        self.c00
    }

    fn chain(&self, f: [T; 4]) -> Self {
        let (a10, a01) = (self.c10, self.c01);
        Self::new(
            f[0],
            f[1] * a10,
            f[1] * a01,
            f[2] * a10 * a10 + f[1] * self.c20,
            f[2] * a10 * a01 + f[1] * self.c11,
            f[2] * a01 * a01 + f[1] * self.c02,
        )
    }

    fn scale(&self, k: T) -> Self {
        Self::new(
            self.c00 * k,
            self.c10 * k,
            self.c01 * k,
            self.c20 * k,
            self.c11 * k,
            self.c02 * k,
        )
    }

    fn all_finite(&self) -> bool {
        [self.c00, self.c10, self.c01, self.c20, self.c11, self.c02]
            .iter()
            .all(|c| c.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_seeds() {
        let p = Jet2::seed_u(1.0_f64) * Jet2::seed_v(2.0);
        assert_eq!(p, Jet2::new(2.0, 2.0, 1.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn sum_of_same_seed() {
        let s = Jet2::seed_u(3.0_f64) + Jet2::seed_u(3.0);
        assert_eq!(s, Jet2::new(6.0, 2.0, 0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn separable_functions_have_no_mixed_term() {
        use crate::jets::Elementary;
        let u = Jet2::seed_u(0.4_f64).apply(Elementary::Sin).unwrap();
        let v = Jet2::seed_v(-1.3_f64).apply(Elementary::Exp).unwrap();
        assert_eq!((u + v).c11, 0.0);
        assert_eq!((u.powi(3).unwrap() - v.scale(2.0)).c11, 0.0);
    }

    #[test]
    fn accessors() {
        let j = Jet2::new(1.0_f64, 2.0, 3.0, 4.0, 5.0, 6.0);
        assert_eq!((j.d1(0), j.d1(1)), (2.0, 3.0));
        assert_eq!((j.d2(0, 0), j.d2(0, 1), j.d2(1, 0), j.d2(1, 1)), (4.0, 5.0, 5.0, 6.0));
    }
}
