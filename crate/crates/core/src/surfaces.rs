//! Surfaces `(u, v) -> (x, y, z)`: fundamental forms, Gaussian and mean
//! curvature.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::expr::{Expr, Node};
use crate::galilean::{GalileanMotion, Point3, Vector3};
use crate::jets::{fd, Jet2};
use crate::scalar::{linspace, Scalar};

/// Below this `W` the normal is undefined.
pub const W_TOL: f64 = 1e-12;
/// Below this `max(|g1|, |g2|)` the tangent plane is Euclidean.
pub const ADMISSIBLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub u: (T, T),
    pub v: (T, T),
}

impl<T: Scalar> Rect<T> {
    pub fn new(u: (T, T), v: (T, T)) -> Result<Self, GeometryError> {
        for (name, (lo, hi)) in [("u", u), ("v", v)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(GeometryError::InvalidDomain(format!(
                    "{name} range needs finite lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { u, v })
    }

    pub fn contains(&self, u: T, v: T) -> bool {
        u >= self.u.0 && u <= self.u.1 && v >= self.v.0 && v <= self.v.1
    }

    /// Nodes of an `nu x nv` grid, `u` index outermost.
    pub fn grid(&self, nu: usize, nv: usize) -> Vec<(T, T)> {
        let us = linspace(self.u.0, self.u.1, nu);
        let vs = linspace(self.v.0, self.v.1, nv);
        us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
    }

    pub fn to_f64(&self) -> Rect<f64> {
        let f = |(a, b): (T, T)| (a.to_f64_lossy(), b.to_f64_lossy());
        Rect {
            u: f(self.u),
            v: f(self.v),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Surface<T> {
    coords: [Expr; 3],
    domain: Rect<T>,
}

/// Which denominator the second fundamental form was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    G1,
    G2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalData<T> {
    pub g1: T,
    pub g2: T,
    pub h11: T,
    pub h12: T,
    pub h22: T,
    pub w: T,
    pub normal: Vector3<T>,
    pub l11: T,
    pub l12: T,
    pub l22: T,
    pub branch: Branch,
}

impl<T: Scalar> FundamentalData<T> {
    /// The isotropic tangent direction `du1 : du2 = g2 : -g1`.
    pub fn isotropic_direction(&self) -> (T, T) {
        let n = self.g1.hypot(self.g2);
        (self.g2 / n, -self.g1 / n)
    }

    /// 0 if `du1 : du2` is the isotropic direction, 1 otherwise.
    pub fn epsilon(&self, du1: T, du2: T) -> u8 {
        let dx = self.g1 * du1 + self.g2 * du2;
        let scale = (self.g1.abs() + self.g2.abs()) * (du1.abs() + du2.abs());
        if dx.abs() <= T::lit(ADMISSIBLE_TOL) * scale {
            0
        } else {
            1
        }
    }

    /// `ds² = ε (g1 du1 + g2 du2)² + (1 - ε) Σ h_ij du_i du_j`.
    pub fn first_form(&self, du1: T, du2: T) -> T {
        if self.epsilon(du1, du2) == 1 {
            let dx = self.g1 * du1 + self.g2 * du2;
            dx * dx
        } else {
            let two = T::lit(2.0);
            self.h11 * du1 * du1 + two * self.h12 * du1 * du2 + self.h22 * du2 * du2
        }
    }

    pub fn curvatures(&self) -> Curvatures<T> {
        let w2 = self.w * self.w;
        let k = (self.l11 * self.l22 - self.l12 * self.l12) / w2;
        let (g1, g2) = (self.g1, self.g2);
        let two = T::lit(2.0);
        let num = g2 * g2 * self.l11 - two * g1 * g2 * self.l12 + g1 * g1 * self.l22;
        let h = num / (two * w2);
        Curvatures {
            k,
            h_canonical: h,
            h_paper: two * h,
        }
    }
}

/// `H_paper = 2 H_canonical`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Curvatures<T> {
    pub k: T,
    pub h_canonical: T,
    pub h_paper: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceAdmissibility<T> {
    pub admissible: bool,
    pub witness: Option<(T, T)>,
}

fn at<T: Scalar>(u: T, v: T) -> Vec<f64> {
    vec![u.to_f64_lossy(), v.to_f64_lossy()]
}

fn first_order<T: Scalar>(j: &[Jet2<T>; 3]) -> Result<(T, T, T), (T, T)> {
    let [x, y, z] = j;
    let (x1, x2) = (x.c10, x.c01);
    let (y1, y2) = (y.c10, y.c01);
    let (z1, z2) = (z.c10, z.c01);
    let a = x1 * z2 - x2 * z1;
    let b = x2 * y1 - x1 * y2;
    let w = a.hypot(b);
    if x1.abs().max(x2.abs()) <= T::lit(ADMISSIBLE_TOL) {
        return Err((x1, x2));
    }
    Ok((w, -a, -b))
}

/// `L_ij = (0, y_ij, z_ij)·N - (x_ij / g_k) (0, y_k, z_k)·N` for the branch
/// `k`. `None` if the branch denominator or `W` vanishes.
pub fn second_form_branch<T: Scalar>(j: &[Jet2<T>; 3], branch: Branch) -> Option<[T; 3]> {
    let (w, ny, nz) = first_order(j).ok()?;
    if w <= T::lit(W_TOL) {
        return None;
    }
    let (ny, nz) = (ny / w, nz / w);
    let k = match branch {
        Branch::G1 => 0,
        Branch::G2 => 1,
    };
    let [x, y, z] = j;
    let g = x.d1(k);
    if g == T::zero() {
        return None;
    }
    let tn = y.d1(k) * ny + z.d1(k) * nz;
    let l = |i, jj| y.d2(i, jj) * ny + z.d2(i, jj) * nz - x.d2(i, jj) / g * tn;
    Some([l(0, 0), l(0, 1), l(1, 1)])
}

/// All first- and second-order quantities from the coordinate jets.
pub fn fundamental_from_jets<T: Scalar>(j: &[Jet2<T>; 3], u: T, v: T) -> Result<FundamentalData<T>, GeometryError> {
    let (w, ny, nz) = first_order(j).map_err(|_| GeometryError::Inadmissible {
        u: u.to_f64_lossy(),
        v: v.to_f64_lossy(),
    })?;
    if !(w > T::lit(W_TOL)) {
        return Err(GeometryError::DegenerateW {
            u: u.to_f64_lossy(),
            v: v.to_f64_lossy(),
            w: w.to_f64_lossy(),
        });
    }
    let [x, y, z] = j;
    let (g1, g2) = (x.c10, x.c01);
    let branch = if g1.abs() >= g2.abs() { Branch::G1 } else { Branch::G2 };
    let [l11, l12, l22] = second_form_branch(j, branch).ok_or(GeometryError::DegenerateW {
        u: u.to_f64_lossy(),
        v: v.to_f64_lossy(),
        w: w.to_f64_lossy(),
    })?;
    Ok(FundamentalData {
        g1,
        g2,
        h11: y.c10 * y.c10 + z.c10 * z.c10,
        h12: y.c10 * y.c01 + z.c10 * z.c01,
        h22: y.c01 * y.c01 + z.c01 * z.c01,
        w,
        normal: Vector3::new(T::zero(), ny / w, nz / w),
        l11,
        l12,
        l22,
        branch,
    })
}

impl<T: Scalar> Surface<T> {
    pub fn new(x: Expr, y: Expr, z: Expr, domain: Rect<T>) -> Result<Self, GeometryError> {
        for e in [&x, &y, &z] {
            if e.arity() != 2 {
                return Err(GeometryError::Arity {
                    expected: 2,
                    got: e.arity(),
                });
            }
        }
        let domain = Rect::new(domain.u, domain.v)?;
        let s = Self {
            coords: [x, y, z],
            domain,
        };
        for (u, v) in domain.grid(11, 11) {
            s.point(u, v)?;
        }
        Ok(s)
    }

    pub fn parse(vars: [&str; 2], coords: [&str; 3], domain: Rect<T>) -> Result<Self, GeometryError> {
        let [x, y, z] = coords.map(|src| Expr::parse(src, &vars));
        Self::new(x?, y?, z?, domain)
    }

    pub fn coords(&self) -> &[Expr; 3] {
        &self.coords
    }

    pub fn domain(&self) -> Rect<T> {
        self.domain
    }

    /// The same coordinate functions over another rectangle.
    pub fn with_domain(&self, domain: Rect<T>) -> Result<Self, GeometryError> {
        let [x, y, z] = self.coords.clone();
        Self::new(x, y, z, domain)
    }

    pub fn jets(&self, u: T, v: T) -> Result<[Jet2<T>; 3], GeometryError> {
        let mut out = [Jet2::seed_u(u); 3];
        for (o, e) in out.iter_mut().zip(&self.coords) {
            *o = e.eval_jet2(u, v).map_err(|err| GeometryError::eval(&at(u, v), err))?;
        }
        Ok(out)
    }

    pub fn point(&self, u: T, v: T) -> Result<Point3<T>, GeometryError> {
        let mut p = [T::zero(); 3];
        for (o, e) in p.iter_mut().zip(&self.coords) {
            *o = e
                .eval_value(&[u, v])
                .map_err(|err| GeometryError::eval(&at(u, v), err))?;
        }
        Ok(Point3::new(p[0], p[1], p[2]))
    }

    pub fn fundamental(&self, u: T, v: T) -> Result<FundamentalData<T>, GeometryError> {
        fundamental_from_jets(&self.jets(u, v)?, u, v)
    }

    pub fn curvatures(&self, u: T, v: T) -> Result<Curvatures<T>, GeometryError> {
        Ok(self.fundamental(u, v)?.curvatures())
    }

    pub fn gaussian_curvature(&self, u: T, v: T) -> Result<T, GeometryError> {
        Ok(self.curvatures(u, v)?.k)
    }

    /// `(H_canonical, H_paper)`.
    pub fn mean_curvature(&self, u: T, v: T) -> Result<(T, T), GeometryError> {
        let c = self.curvatures(u, v)?;
        Ok((c.h_canonical, c.h_paper))
    }

    /// Curvatures from finite-difference derivatives of the coordinate
    /// values, independent of the jet arithmetic.
    pub fn curvatures_fd(&self, u: T, v: T, steps: fd::FdSteps<T>) -> Result<Curvatures<T>, GeometryError> {
        let mut j = [Jet2::seed_u(u); 3];
        for (o, e) in j.iter_mut().zip(&self.coords) {
            *o = fd::bivariate(|a, b| e.eval_value(&[a, b]), u, v, steps)
                .map_err(|err| GeometryError::eval(&at(u, v), err))?;
        }
        Ok(fundamental_from_jets(&j, u, v)?.curvatures())
    }

    pub fn transformed(&self, m: &GalileanMotion<T>) -> Result<Self, GeometryError> {
        let vars = self.coords[0].vars().to_vec();
        let nodes: [Node; 3] = self.coords.clone().map(|e| e.root().clone());
        let [x, y, z] = m.apply_nodes(nodes).map(|n| Expr::from_node(n, &vars));
        Self::new(x?, y?, z?, self.domain)
    }
}

/// True iff `max(|g1|, |g2|) > 1e-12` at every node of the grid.
pub fn is_admissible_surface<T: Scalar>(
    s: &Surface<T>,
    nu: usize,
    nv: usize,
) -> Result<SurfaceAdmissibility<T>, GeometryError> {
    if nu < 2 || nv < 2 {
        return Err(GeometryError::InvalidDomain("grid must be at least 2x2".into()));
    }
    let tol = T::lit(ADMISSIBLE_TOL);
    for (u, v) in s.domain.grid(nu, nv) {
        let [x, _, _] = s.jets(u, v)?;
        if x.c10.abs().max(x.c01.abs()) <= tol {
            return Ok(SurfaceAdmissibility {
                admissible: false,
                witness: Some((u, v)),
            });
        }
    }
    Ok(SurfaceAdmissibility {
        admissible: true,
        witness: None,
    })
}
