//! Type 4 surfaces of constant mean curvature with `g = c1 v`.
//!
//! Setting the type 4 mean curvature to `H0` gives
//!
//! ```text
//! f1'' = [H0 ((f2' - a)² + (f1' - c1)²)^{3/2} + (f1' - c1) f2''] / (f2' - a)
//! ```
//!
//! which is integrated with classical RK4 on a fixed grid. The samples of
//! `f1`, `f1'` and `f1''` at the grid nodes become a quintic Hermite table.
//! Along an exact solution `σ = (f1' - c1)/(f2' - a)` satisfies
//! `H0 sgn(f2' - a)(f2 - a u) + C = σ / sqrt(1 + σ²)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::GeometryError;
use crate::expr::{Expr, HermiteTable, Node};
use crate::jets::Jet1;

pub const MIN_STEPS: usize = 100;
/// Smallest admissible `|f2' - a|` along the integration interval.
pub const MIN_DENOMINATOR: f64 = 1e-6;
/// Threshold on `|f1''f2''' - f1'''f2''|` for the post-hoc space-curve check.
pub const SPACE_CURVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct OdeParams {
    pub h0: f64,
    pub f2: Expr,
    pub a: f64,
    pub c1: f64,
    pub u0: f64,
    pub u_end: f64,
    pub f1_0: f64,
    pub f1p_0: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub knots: Vec<f64>,
    pub f1: Vec<f64>,
    pub f1p: Vec<f64>,
    pub f1pp: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeDiagnostics {
    pub steps: usize,
    pub f1_end: f64,
    /// Largest deviation from the first-integral identity over the knots.
    pub identity_residual: f64,
    /// `|f1(u_end)|` change when the step is halved.
    pub step_halving_drift: f64,
    /// Smallest `|f1''f2''' - f1'''f2''|` over the knots.
    pub space_curve_margin: f64,
}

fn f2_jet(p: &OdeParams, u: f64) -> Result<Jet1<f64>, GeometryError> {
    p.f2.eval_jet1(u).map_err(|e| GeometryError::eval(&[u], e))
}

/// `f1''` as a function of `u` and `f1'`.
fn rhs(p: &OdeParams, u: f64, f1p: f64) -> Result<f64, GeometryError> {
    let f2 = f2_jet(p, u)?;
    let d = f2.c1 - p.a;
    if !(d.abs() > MIN_DENOMINATOR) {
        return Err(GeometryError::precondition("f2' - a vanishes on the interval", &[u]));
    }
    let q = f1p - p.c1;
    let w = d.hypot(q);
    let out = (p.h0 * w * w * w + q * f2.c2) / d;
    if !out.is_finite() {
        return Err(GeometryError::precondition("solution left the finite range", &[u]));
    }
    Ok(out)
}

fn check(p: &OdeParams) -> Result<(), GeometryError> {
    if p.steps < MIN_STEPS {
        return Err(GeometryError::precondition(
            format!("need at least {MIN_STEPS} steps"),
            &[p.steps as f64],
        ));
    }
    let finite = [p.h0, p.a, p.c1, p.u0, p.u_end, p.f1_0, p.f1p_0]
        .iter()
        .all(|x| x.is_finite());
    if !finite || p.h0 == 0.0 || p.u0 == p.u_end {
        return Err(GeometryError::precondition(
            "need finite parameters, nonzero H0 and u0 != u_end",
            &[p.h0, p.u0, p.u_end],
        ));
    }
    if p.f2.arity() != 1 {
        return Err(GeometryError::Arity {
            expected: 1,
            got: p.f2.arity(),
        });
    }
    Ok(())
}

/// Fixed-step RK4 from `u0` to `u_end`, knots in increasing order.
pub fn solve(p: &OdeParams) -> Result<OdeSolution, GeometryError> {
    check(p)?;
    let n = p.steps;
    let h = (p.u_end - p.u0) / n as f64;
    let mut us = Vec::with_capacity(n + 1);
    let mut y = Vec::with_capacity(n + 1);
    let mut yp = Vec::with_capacity(n + 1);
    let mut ypp = Vec::with_capacity(n + 1);
    let (mut f, mut fp) = (p.f1_0, p.f1p_0);
    for i in 0..=n {
        let u = if i == n { p.u_end } else { p.u0 + h * i as f64 };
        let k1 = rhs(p, u, fp)?;
        us.push(u);
        y.push(f);
        yp.push(fp);
        ypp.push(k1);
        if i == n {
            break;
        }
        let half = u + h / 2.0;
        let k2 = rhs(p, half, fp + h / 2.0 * k1)?;
        let k3 = rhs(p, half, fp + h / 2.0 * k2)?;
        let k4 = rhs(p, u + h, fp + h * k3)?;
        // f1' advances by the slopes k_i; f1 by the corresponding f1' stages
        let df = fp + (fp + h / 2.0 * k1) * 2.0 + (fp + h / 2.0 * k2) * 2.0 + (fp + h * k3);
        f += h / 6.0 * df;
        fp += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(f.is_finite() && fp.is_finite()) {
            return Err(GeometryError::precondition("solution left the finite range", &[u + h]));
        }
    }
    if h < 0.0 {
        for v in [&mut us, &mut y, &mut yp, &mut ypp] {
            v.reverse();
        }
    }
    Ok(OdeSolution {
        knots: us,
        f1: y,
        f1p: yp,
        f1pp: ypp,
    })
}

impl OdeSolution {
    pub fn table(&self) -> Result<HermiteTable, GeometryError> {
        HermiteTable::new("f1", self.knots.clone(), &self.f1, &self.f1p, &self.f1pp)
            .map_err(|e| GeometryError::precondition(e, &[]))
    }

    /// `f1` as an expression in `u`, backed by the Hermite table.
    pub fn f1_expr(&self) -> Result<Expr, GeometryError> {
        let node = Node::Sampled(Arc::new(self.table()?), Box::new(Node::var(0)));
        Ok(Expr::from_node(node, &["u"])?)
    }

    /// `f1''' ` at the knots from differences of the `f1''` samples.
    pub fn third_derivative(&self) -> Vec<f64> {
        let (x, y) = (&self.knots, &self.f1pp);
        let n = x.len();
        (0..n)
            .map(|i| {
                if i == 0 {
                    let (h1, h2) = (x[1] - x[0], x[2] - x[0]);
                    // second-order one-sided difference on possibly uneven spacing
                    let c = h2 / h1;
                    (c * c * (y[1] - y[0]) - (y[2] - y[0])) / (h2 * (c - 1.0))
                } else if i == n - 1 {
                    let (h1, h2) = (x[n - 1] - x[n - 2], x[n - 1] - x[n - 3]);
                    let c = h2 / h1;
                    (c * c * (y[n - 1] - y[n - 2]) - (y[n - 1] - y[n - 3])) / (h2 * (c - 1.0))
                } else {
                    (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1])
                }
            })
            .collect()
    }
}

/// Largest deviation of `σ/sqrt(1+σ²)` from `H0 sgn(f2' - a)(f2 - a u) + C`
/// over the knots, with `C` fixed at `u0`.
pub fn identity_residual(p: &OdeParams, sol: &OdeSolution) -> Result<f64, GeometryError> {
    let side = |u: f64, f1p: f64| -> Result<(f64, f64), GeometryError> {
        let f2 = f2_jet(p, u)?;
        let d = f2.c1 - p.a;
        let s = (f1p - p.c1) / d;
        Ok((p.h0 * d.signum() * (f2.c0 - p.a * u), s / (1.0 + s * s).sqrt()))
    };
    let (l0, r0) = side(p.u0, p.f1p_0)?;
    let c = r0 - l0;
    let mut worst = 0.0f64;
    for (&u, &f1p) in sol.knots.iter().zip(&sol.f1p) {
        let (l, r) = side(u, f1p)?;
        worst = worst.max((l + c - r).abs());
    }
    Ok(worst)
}

/// `|f1(u_end)|` difference between `steps` and `2 steps`.
pub fn step_halving_drift(p: &OdeParams) -> Result<f64, GeometryError> {
    let coarse = solve(p)?;
    let fine = solve(&OdeParams {
        steps: 2 * p.steps,
        ..p.clone()
    })?;
    let end = |s: &OdeSolution| if p.u_end > p.u0 { *s.f1.last().unwrap() } else { s.f1[0] };
    Ok((end(&coarse) - end(&fine)).abs())
}

/// Smallest `|f1''f2''' - f1'''f2''|` over the knots, with `f1'''` from
/// [`OdeSolution::third_derivative`], and where it occurs.
pub fn space_curve_margin(p: &OdeParams, sol: &OdeSolution) -> Result<(f64, f64), GeometryError> {
    let d3 = sol.third_derivative();
    let mut best = (f64::INFINITY, sol.knots[0]);
    for ((&u, &f1pp), &f1ppp) in sol.knots.iter().zip(&sol.f1pp).zip(&d3) {
        let f2 = f2_jet(p, u)?;
        let m = (f1pp * f2.c3 - f1ppp * f2.c2).abs();
        if m < best.0 {
            best = (m, u);
        }
    }
    Ok(best)
}

/// All certificates for a solution; fails if the post-hoc space-curve
/// check does.
pub fn diagnostics(p: &OdeParams, sol: &OdeSolution) -> Result<OdeDiagnostics, GeometryError> {
    let (margin, at) = space_curve_margin(p, sol)?;
    if !(margin > SPACE_CURVE_TOL) {
        return Err(GeometryError::precondition(
            "f1''f2''' - f1'''f2'' vanishes along the solution",
            &[at],
        ));
    }
    let f1_end = if p.u_end > p.u0 {
        *sol.f1.last().unwrap()
    } else {
        sol.f1[0]
    };
    Ok(OdeDiagnostics {
        steps: p.steps,
        f1_end,
        identity_residual: identity_residual(p, sol)?,
        step_halving_drift: step_halving_drift(p)?,
        space_curve_margin: margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> OdeParams {
        OdeParams {
            h0: 0.1,
            f2: Expr::parse("u^2", &["u"]).unwrap(),
            a: 0.0,
            c1: 0.0,
            u0: 1.0,
            u_end: 2.0,
            f1_0: 0.0,
            f1p_0: 1.0,
            steps: 1000,
        }
    }

    #[test]
    fn first_integral_holds() {
        let p = example();
        let sol = solve(&p).unwrap();
        assert_eq!(sol.knots.len(), 1001);
        assert_eq!(sol.knots[0], 1.0);
        assert_eq!(*sol.knots.last().unwrap(), 2.0);
        assert!(identity_residual(&p, &sol).unwrap() < 1e-10);
    }

    #[test]
    fn fourth_order_convergence() {
        let p = example();
        assert!(step_halving_drift(&p).unwrap() < 1e-8);
        let coarse = OdeParams {
            steps: 100,
            ..example()
        };
        let d1 = step_halving_drift(&coarse).unwrap();
        let d2 = step_halving_drift(&OdeParams {
            steps: 200,
            ..example()
        })
        .unwrap();
        // halving h shrinks the error by about 2^4
        assert!(d1 / d2 > 10.0 && d1 / d2 < 25.0, "{d1} {d2}");
    }

    #[test]
    fn backwards_integration() {
        let fwd = solve(&example()).unwrap();
        let back = solve(&OdeParams {
            u0: 2.0,
            u_end: 1.0,
            f1_0: *fwd.f1.last().unwrap(),
            f1p_0: *fwd.f1p.last().unwrap(),
            ..example()
        })
        .unwrap();
        assert_eq!(back.knots[0], 1.0);
        assert!((back.f1[0] - 0.0).abs() < 1e-10);
        assert!((back.f1p[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn preconditions() {
        assert!(solve(&OdeParams { steps: 10, ..example() }).is_err());
        assert!(solve(&OdeParams { h0: 0.0, ..example() }).is_err());
        // f2' - a = 2u - 3 crosses zero at 1.5
        let err = solve(&OdeParams { a: 3.0, ..example() }).unwrap_err();
        assert!(matches!(err, GeometryError::Precondition { .. }), "{err:?}");
    }

    #[test]
    fn blow_up_is_reported() {
        // σ/sqrt(1+σ²) would have to exceed 1
        let err = solve(&OdeParams { h0: 5.0, ..example() }).unwrap_err();
        assert!(matches!(err, GeometryError::Precondition { .. }), "{err:?}");
    }

    #[test]
    fn third_derivative_of_a_cubic() {
        let knots: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
        let sol = OdeSolution {
            f1: knots.iter().map(|x| x.powi(5) / 20.0).collect(),
            f1p: knots.iter().map(|x| x.powi(4) / 4.0).collect(),
            f1pp: knots.iter().map(|x| x.powi(3)).collect(),
            knots: knots.clone(),
        };
        for (x, d) in knots.iter().zip(sol.third_derivative()) {
            assert!((d - 3.0 * x * x).abs() < 0.05, "{x} {d}");
        }
    }
}
