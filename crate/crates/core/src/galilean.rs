//! Points, vectors, isotropy and the motion group of the affine model of
//! Galilean 3-space.
//!
//! The absolute figure (plane, line and elliptic involution at infinity) is
//! not represented; every computation here happens in affine coordinates
//! `(x, y, z)`, where the planes `x = const` are the Euclidean planes and a
//! vector is isotropic when it lies in one of them.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::Node;
use crate::scalar::Scalar;

/// Tolerance for treating numerically produced x-components as zero.
pub const ISOTROPY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalileanError {
    #[error("the zero vector has no isotropy class")]
    ZeroVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

impl<T: Scalar> Vector3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// Euclidean dot product.
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn euclidean_norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

impl<T: Scalar> Sub for Point3<T> {
    type Output = Vector3<T>;

    fn sub(self, o: Self) -> Vector3<T> {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Add<Vector3<T>> for Point3<T> {
    type Output = Point3<T>;

    fn add(self, v: Vector3<T>) -> Point3<T> {
        Point3::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }
}

impl<T: Scalar> Add for Vector3<T> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Vector3<T> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Vector3<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Scalar> Mul<T> for Vector3<T> {
    type Output = Self;

    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Isotropy {
    Isotropic,
    NonIsotropic,
}

/// Exact classification: isotropic iff `v.x == 0`.
pub fn classify_vector<T: Scalar>(v: Vector3<T>) -> Result<Isotropy, GalileanError> {
    classify_vector_tol(v, T::zero())
}

/// Classification with `|v.x| <= tol` counted as isotropic, for tangents
/// that come out of numerical evaluation.
pub fn classify_vector_tol<T: Scalar>(v: Vector3<T>, tol: T) -> Result<Isotropy, GalileanError> {
    if v.x == T::zero() && v.y == T::zero() && v.z == T::zero() {
        return Err(GalileanError::ZeroVector);
    }
    Ok(if v.x.abs() <= tol {
        Isotropy::Isotropic
    } else {
        Isotropy::NonIsotropic
    })
}

/// Galilean distance: `|Δx|` for points in different Euclidean planes,
/// otherwise the Euclidean distance of the `(y, z)` parts.
pub fn distance<T: Scalar>(p: Point3<T>, q: Point3<T>) -> T {
    if p.x != q.x {
        (q.x - p.x).abs()
    } else {
        (q.y - p.y).hypot(q.z - p.z)
    }
}

/// `x' = a + x`,
/// `y' = b + c x + cos θ y + sin θ z`,
/// `z' = d + e x - sin θ y + cos θ z`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GalileanMotion<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub theta: T,
}

impl<T: Scalar> GalileanMotion<T> {
    pub fn new(a: T, b: T, c: T, d: T, e: T, theta: T) -> Self {
        Self { a, b, c, d, e, theta }
    }

    pub fn identity() -> Self {
        let z = T::zero();
        Self::new(z, z, z, z, z, z)
    }

    fn rotate(&self, y: T, z: T) -> (T, T) {
        let (s, c) = self.theta.sin_cos();
        (c * y + s * z, -s * y + c * z)
    }

    pub fn apply(&self, p: Point3<T>) -> Point3<T> {
        let (ry, rz) = self.rotate(p.y, p.z);
        Point3::new(self.a + p.x, self.b + self.c * p.x + ry, self.d + self.e * p.x + rz)
    }

    /// The linear part, acting on displacement vectors.
    pub fn apply_vector(&self, v: Vector3<T>) -> Vector3<T> {
        let (ry, rz) = self.rotate(v.y, v.z);
        Vector3::new(v.x, self.c * v.x + ry, self.e * v.x + rz)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (b2, d2) = self.rotate(other.b, other.d);
        let (c2, e2) = self.rotate(other.c, other.e);
        Self::new(
            self.a + other.a,
            self.b + other.a * self.c + b2,
            self.c + c2,
            self.d + other.a * self.e + d2,
            self.e + e2,
            self.theta + other.theta,
        )
    }

    /// Applies the motion to coordinate functions `(x, y, z)`.
    pub fn apply_nodes(&self, [x, y, z]: [Node; 3]) -> [Node; 3] {
        let f = |t: T| t.to_f64_lossy();
        let (s, c) = self.theta.sin_cos();
        let (s, c) = (f(s), f(c));
        [
            Node::sum([Node::c(f(self.a)), x.clone()]),
            Node::sum([
                Node::c(f(self.b)),
                Node::scaled(f(self.c), x.clone()),
                Node::scaled(c, y.clone()),
                Node::scaled(s, z.clone()),
            ]),
            Node::sum([
                Node::c(f(self.d)),
                Node::scaled(f(self.e), x),
                Node::scaled(-s, y),
                Node::scaled(c, z),
            ]),
        ]
    }

    pub fn inverse(&self) -> Self {
        let back = Self::new(T::zero(), T::zero(), T::zero(), T::zero(), T::zero(), -self.theta);
        let (rb, rd) = back.rotate(self.b, self.d);
        let (rc, re) = back.rotate(self.c, self.e);
        Self::new(-self.a, -rb + self.a * rc, -rc, -rd + self.a * re, -re, -self.theta)
    }
}
