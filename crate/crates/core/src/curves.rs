//! Curves `s -> (x(s), y(s), z(s))` and their invariants.

use serde::Serialize;

use crate::error::GeometryError;
use crate::expr::{Expr, Node};
use crate::galilean::{GalileanMotion, Point3, Vector3};
use crate::jets::Jet1;
use crate::scalar::{linspace, Scalar};

pub const DEFAULT_SAMPLES: usize = 101;
/// Below this `|x'|` the tangent counts as isotropic.
pub const ADMISSIBLE_TOL: f64 = 1e-12;
pub const UNIT_SPEED_TOL: f64 = 1e-9;
pub const CURVATURE_TOL: f64 = 1e-12;
pub const TORSION_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Curve<T> {
    coords: [Expr; 3],
    lo: T,
    hi: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Admissibility<T> {
    pub admissible: bool,
    /// A parameter with isotropic tangent, when not admissible.
    pub witness: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Planarity {
    Planar,
    Space,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarityReport<T> {
    pub class: Planarity,
    pub max_abs_torsion: T,
    pub min_abs_torsion: T,
    /// Samples where κ vanished and τ was taken as zero.
    pub flat_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSpeedCheck<T> {
    pub unit_speed: bool,
    /// max |p'² + q'² - 1|
    pub max_residual: T,
    /// max |p'p'' + q'q''|
    pub max_identity_residual: T,
}

fn at<T: Scalar>(s: T) -> Vec<f64> {
    vec![s.to_f64_lossy()]
}

impl<T: Scalar> Curve<T> {
    pub fn new(x: Expr, y: Expr, z: Expr, lo: T, hi: T) -> Result<Self, GeometryError> {
        for e in [&x, &y, &z] {
            if e.arity() != 1 {
                return Err(GeometryError::Arity {
                    expected: 1,
                    got: e.arity(),
                });
            }
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeometryError::InvalidDomain(format!(
                "need finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        let c = Self {
            coords: [x, y, z],
            lo,
            hi,
        };
        for s in c.grid(DEFAULT_SAMPLES) {
            c.point(s)?;
        }
        Ok(c)
    }

    /// Parses three coordinate strings in the variable `var`.
    pub fn parse(var: &str, coords: [&str; 3], lo: T, hi: T) -> Result<Self, GeometryError> {
        let [x, y, z] = coords.map(|src| Expr::parse(src, &[var]));
        Self::new(x?, y?, z?, lo, hi)
    }

    pub fn coords(&self) -> &[Expr; 3] {
        &self.coords
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn grid(&self, samples: usize) -> Vec<T> {
        linspace(self.lo, self.hi, samples)
    }

    pub fn jets(&self, s: T) -> Result<[Jet1<T>; 3], GeometryError> {
        let mut out = [Jet1::seed(s); 3];
        for (o, e) in out.iter_mut().zip(&self.coords) {
            *o = e.eval_jet1(s).map_err(|err| GeometryError::eval(&at(s), err))?;
        }
        Ok(out)
    }

    pub fn point(&self, s: T) -> Result<Point3<T>, GeometryError> {
        let mut p = [T::zero(); 3];
        for (o, e) in p.iter_mut().zip(&self.coords) {
            *o = e.eval_value(&[s]).map_err(|err| GeometryError::eval(&at(s), err))?;
        }
        Ok(Point3::new(p[0], p[1], p[2]))
    }

    pub fn tangent(&self, s: T) -> Result<Vector3<T>, GeometryError> {
        let [x, y, z] = self.jets(s)?;
        Ok(Vector3::new(x.c1, y.c1, z.c1))
    }

    fn map_nodes(&self, f: impl FnOnce([Node; 3]) -> [Node; 3], lo: T, hi: T) -> Result<Self, GeometryError> {
        let vars = self.coords[0].vars().to_vec();
        let nodes = self.coords.clone().map(|e| e.root().clone());
        let [x, y, z] = f(nodes).map(|n| Expr::from_node(n, &vars));
        Self::new(x?, y?, z?, lo, hi)
    }

    /// The image of the curve under a motion, at the same parameters.
    pub fn transformed(&self, m: &GalileanMotion<T>) -> Result<Self, GeometryError> {
        self.map_nodes(|n| m.apply_nodes(n), self.lo, self.hi)
    }

    /// `t -> c(scale * t + offset)`, with the domain pulled back.
    pub fn reparametrize_affine(&self, scale: T, offset: T) -> Result<Self, GeometryError> {
        if scale == T::zero() || !scale.is_finite() || !offset.is_finite() {
            return Err(GeometryError::InvalidDomain(format!(
                "bad affine reparametrization scale {scale}, offset {offset}"
            )));
        }
        let arg = Node::affine(&[scale.to_f64_lossy()], offset.to_f64_lossy());
        let a = (self.lo - offset) / scale;
        let b = (self.hi - offset) / scale;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.map_nodes(|n| n.map(|e| e.substitute(std::slice::from_ref(&arg))), lo, hi)
    }

    /// The shift `t -> c(t + s0)`.
    pub fn shifted(&self, s0: T) -> Result<Self, GeometryError> {
        self.reparametrize_affine(T::one(), s0)
    }
}

/// True iff `|x'| > 1e-12` at every sample. A failing sample, or a root of
/// `x'` bracketed by a sign change between samples, is returned as witness.
pub fn is_admissible<T: Scalar>(c: &Curve<T>, samples: usize) -> Result<Admissibility<T>, GeometryError> {
    if samples < 2 {
        return Err(GeometryError::InvalidDomain("need at least two samples".into()));
    }
    let tol = T::lit(ADMISSIBLE_TOL);
    let speed = |s: T| c.jets(s).map(|j| j[0].c1);
    let grid = c.grid(samples);
    let mut prev: Option<(T, T)> = None;
    for &s in &grid {
        let d = speed(s)?;
        if d.abs() <= tol {
            return Ok(Admissibility {
                admissible: false,
                witness: Some(s),
            });
        }
        if let Some((ps, pd)) = prev {
            if pd.signum() != d.signum() {
                let w = bisect(&speed, ps, s, pd)?;
                return Ok(Admissibility {
                    admissible: false,
                    witness: Some(w),
                });
            }
        }
        prev = Some((s, d));
    }
    Ok(Admissibility {
        admissible: true,
        witness: None,
    })
}

fn bisect<T: Scalar>(
    f: &impl Fn(T) -> Result<T, GeometryError>,
    mut a: T,
    mut b: T,
    fa: T,
) -> Result<T, GeometryError> {
    let two = T::lit(2.0);
    for _ in 0..200 {
        let m = (a + b) / two;
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == T::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a + b) / two)
}

fn unit_speed_jets<T: Scalar>(c: &Curve<T>, s: T) -> Result<[Jet1<T>; 3], GeometryError> {
    let j = c.jets(s)?;
    let speed = j[0].c1.abs();
    if (speed - T::one()).abs() > T::rounding_tol(UNIT_SPEED_TOL) {
        return Err(GeometryError::NonUnitSpeed {
            s: s.to_f64_lossy(),
            speed: speed.to_f64_lossy(),
        });
    }
    Ok(j)
}

/// `κ = sqrt(y''² + z''²)` on a unit-speed curve.
pub fn curvature<T: Scalar>(c: &Curve<T>, s: T) -> Result<T, GeometryError> {
    let [_, y, z] = unit_speed_jets(c, s)?;
    Ok(y.c2.hypot(z.c2))
}

/// `τ = det(α', α'', α''') / κ²` on a unit-speed curve.
pub fn torsion<T: Scalar>(c: &Curve<T>, s: T) -> Result<T, GeometryError> {
    let j = unit_speed_jets(c, s)?;
    torsion_from_jets(&j, s)
}

fn torsion_from_jets<T: Scalar>(j: &[Jet1<T>; 3], s: T) -> Result<T, GeometryError> {
    let [x, y, z] = j;
    let k2 = y.c2 * y.c2 + z.c2 * z.c2;
    if k2.sqrt() <= T::lit(CURVATURE_TOL) {
        return Err(GeometryError::VanishingCurvature { s: s.to_f64_lossy() });
    }
    let det =
        x.c1 * (y.c2 * z.c3 - z.c2 * y.c3) - y.c1 * (x.c2 * z.c3 - z.c2 * x.c3) + z.c1 * (x.c2 * y.c3 - y.c2 * x.c3);
    Ok(det / k2)
}

/// Three-valued planarity over a grid. Samples with vanishing curvature
/// contribute τ = 0.
pub fn classify_planarity<T: Scalar>(c: &Curve<T>, samples: usize) -> Result<PlanarityReport<T>, GeometryError> {
    if samples < 2 {
        return Err(GeometryError::InvalidDomain("need at least two samples".into()));
    }
    let mut max = T::zero();
    let mut min = T::infinity();
    let mut flat = 0;
    for s in c.grid(samples) {
        let j = unit_speed_jets(c, s)?;
        let t = match torsion_from_jets(&j, s) {
            Ok(t) => t.abs(),
            Err(GeometryError::VanishingCurvature { .. }) => {
                flat += 1;
                T::zero()
            }
            Err(e) => return Err(e),
        };
        max = max.max(t);
        min = min.min(t);
    }
    let tol = T::rounding_tol(TORSION_TOL);
    let class = if max < tol {
        Planarity::Planar
    } else if min > tol {
        Planarity::Space
    } else {
        Planarity::Mixed
    };
    Ok(PlanarityReport {
        class,
        max_abs_torsion: max,
        min_abs_torsion: min,
        flat_samples: flat,
    })
}

pub fn is_planar<T: Scalar>(c: &Curve<T>, samples: usize) -> Result<bool, GeometryError> {
    Ok(classify_planarity(c, samples)?.class == Planarity::Planar)
}

pub fn is_space_curve<T: Scalar>(c: &Curve<T>, samples: usize) -> Result<bool, GeometryError> {
    Ok(classify_planarity(c, samples)?.class == Planarity::Space)
}

/// For an isotropic curve `(0, p, q)`: the largest deviation of `p'² + q'²`
/// from 1 and of `p'p'' + q'q''` from 0 over the grid.
pub fn check_isotropic_unit_speed<T: Scalar>(c: &Curve<T>, samples: usize) -> Result<UnitSpeedCheck<T>, GeometryError> {
    if samples < 2 {
        return Err(GeometryError::InvalidDomain("need at least two samples".into()));
    }
    let tol = T::lit(ADMISSIBLE_TOL);
    let mut res = T::zero();
    let mut ident = T::zero();
    for s in c.grid(samples) {
        let [x, p, q] = c.jets(s)?;
        if x.c0.abs() > tol || x.c1.abs() > tol {
            return Err(GeometryError::precondition(
                "x coordinate of an isotropic curve must vanish",
                &at(s),
            ));
        }
        res = res.max((p.c1 * p.c1 + q.c1 * q.c1 - T::one()).abs());
        ident = ident.max((p.c1 * p.c2 + q.c1 * q.c2).abs());
    }
    Ok(UnitSpeedCheck {
        unit_speed: res < T::rounding_tol(UNIT_SPEED_TOL),
        max_residual: res,
        max_identity_residual: ident,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn curve(src: [&str; 3], lo: f64, hi: f64) -> Curve<f64> {
        Curve::parse("u", src, lo, hi).unwrap()
    }

    #[test]
    fn helix() {
        let c = curve(["u", "cos(u)", "sin(u)"], 0.0, 2.0 * PI);
        assert!(is_admissible(&c, 101).unwrap().admissible);
        for s in [0.0, 0.4, 2.0, 5.5] {
            assert!((curvature(&c, s).unwrap() - 1.0).abs() < 1e-12);
            assert!((torsion(&c, s).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(classify_planarity(&c, 101).unwrap().class, Planarity::Space);
    }

    #[test]
    fn twisted_cubic() {
        let c = curve(["u", "u^2", "u^3"], 0.5, 2.0);
        assert!((curvature(&c, 1.0).unwrap() - 40f64.sqrt()).abs() < 1e-12);
        assert!((torsion(&c, 1.0).unwrap() - 0.3).abs() < 1e-12);
        assert!(is_space_curve(&c, 101).unwrap());
    }

    #[test]
    fn lines_and_planar_curves() {
        let line = curve(["u", "3*u+1", "7"], -1.0, 1.0);
        assert_eq!(curvature(&line, 0.3).unwrap(), 0.0);
        assert!(matches!(
            torsion(&line, 0.3),
            Err(GeometryError::VanishingCurvature { .. })
        ));
        let r = classify_planarity(&line, 11).unwrap();
        assert_eq!((r.class, r.flat_samples), (Planarity::Planar, 11));

        let parabola = curve(["u", "u^2", "0"], -1.0, 1.0);
        assert_eq!(torsion(&parabola, 0.25).unwrap(), 0.0);
        assert!(is_planar(&parabola, 101).unwrap());
    }

    #[test]
    fn mixed_curve() {
        let c = curve(["u", "u^2", "u^4"], -1.0, 1.0);
        assert_eq!(torsion(&c, 0.0).unwrap(), 0.0);
        assert!(torsion(&c, 1.0).unwrap().abs() > 1e-3);
        assert_eq!(classify_planarity(&c, 101).unwrap().class, Planarity::Mixed);
    }

    #[test]
    fn isotropic_tangents() {
        let c = curve(["sin(u)", "u", "0"], -1.0, 2.0);
        let a = is_admissible(&c, 101).unwrap();
        assert!(!a.admissible);
        assert!((a.witness.unwrap() - FRAC_PI_2).abs() < 1e-9);

        let c = curve(["0", "sin(u)", "cos(u)"], 0.0, 1.0);
        let a = is_admissible(&c, 5).unwrap();
        assert_eq!(a.witness, Some(0.0));
    }

    #[test]
    fn unit_speed_required() {
        let c = curve(["2*u", "u^2", "0"], 0.0, 1.0);
        assert!(matches!(curvature(&c, 0.5), Err(GeometryError::NonUnitSpeed { .. })));
        let flipped = curve(["-u", "u^2", "0"], 0.0, 1.0);
        assert_eq!(curvature(&flipped, 0.5).unwrap(), 2.0);
    }

    #[test]
    fn isotropic_unit_speed() {
        let c = curve(["0", "sin(u)", "cos(u)"], 0.0, 6.0);
        let r = check_isotropic_unit_speed(&c, 101).unwrap();
        assert!(r.unit_speed && r.max_residual < 1e-15 && r.max_identity_residual < 1e-15);

        let c = curve(["0", "u", "u"], 0.0, 1.0);
        let r = check_isotropic_unit_speed(&c, 101).unwrap();
        assert!(!r.unit_speed);
        assert_eq!(r.max_residual, 1.0);

        let c = curve(["0", "u/2*sqrt(1-u^2)+asin(u)/2", "u^2/2"], -0.9, 0.9);
        let r = check_isotropic_unit_speed(&c, 101).unwrap();
        assert!(r.unit_speed, "{r:?}");
        assert!(r.max_identity_residual < 1e-9);

        let c = curve(["u", "u", "u"], 0.0, 1.0);
        assert!(matches!(
            check_isotropic_unit_speed(&c, 11),
            Err(GeometryError::Precondition { .. })
        ));
    }

    #[test]
    fn motions_preserve_invariants() {
        let c = curve(["u", "u^2", "u^3"], 0.5, 2.0);
        let m = GalileanMotion::new(0.3, -1.0, 2.5, 0.7, -0.4, 1.1);
        let t = c.transformed(&m).unwrap();
        for s in [0.5, 1.0, 1.7] {
            assert!((curvature(&c, s).unwrap() - curvature(&t, s).unwrap()).abs() < 1e-9);
            assert!((torsion(&c, s).unwrap() - torsion(&t, s).unwrap()).abs() < 1e-9);
            let p = m.apply(c.point(s).unwrap());
            let q = t.point(s).unwrap();
            assert!((p - q).euclidean_norm() < 1e-12);
        }
    }

    #[test]
    fn reparametrization() {
        let c = curve(["u", "u^2", "u^3"], 0.5, 2.0);
        let r = c.shifted(1.0).unwrap();
        assert_eq!(r.domain(), (-0.5, 1.0));
        assert!((torsion(&r, 0.0).unwrap() - 0.3).abs() < 1e-12);
        let flip = c.reparametrize_affine(-1.0, 0.0).unwrap();
        assert_eq!(flip.domain(), (-2.0, -0.5));
        assert!((curvature(&flip, -1.0).unwrap() - 40f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Curve::<f64>::parse("u", ["u", "u", "u"], 1.0, 1.0),
            Err(GeometryError::InvalidDomain(_))
        ));
        assert!(matches!(
            Curve::<f64>::parse("u", ["u", "sqrt(u)", "0"], -1.0, 1.0),
            Err(GeometryError::Eval { .. })
        ));
        let two = Expr::parse("u*v", &["u", "v"]).unwrap();
        let one = Expr::parse("u", &["u"]).unwrap();
        assert!(matches!(
            Curve::<f64>::new(one.clone(), two, one, 0.0, 1.0),
            Err(GeometryError::Arity { expected: 1, got: 2 })
        ));
    }
}
