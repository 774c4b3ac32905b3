//! Grid sampling of curvature, constancy verdicts, theorem certificates
//! and non-existence probes.

mod certify;
mod probe;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::GeometryError;
use crate::scalar::{linspace, Scalar};
use crate::surfaces::{Curvatures, Rect, Surface};
use crate::translation::{FamilyKind, SurfaceFamily};

pub use certify::{certify_family, certify_theorem, Certificate, Check, TheoremId};
pub use probe::{probe_nonexistence, probe_registry, ProbeId, ProbeReport, ProbeSpec};

pub const DEFAULT_GRID: usize = 21;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default tolerance for surfaces with a numerically integrated profile.
pub const ODE_TOL: f64 = 1e-6;
/// Above this fraction of failed nodes a report is unusable.
pub const MAX_FAILURE_FRACTION: f64 = 0.2;

pub fn default_tol(kind: FamilyKind) -> f64 {
    match kind {
        FamilyKind::Type4CmcOde => ODE_TOL,
        _ => DEFAULT_TOL,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeValues {
    pub u: f64,
    pub v: f64,
    pub k: f64,
    pub h_canonical: f64,
    pub h_paper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub u: f64,
    pub v: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Constant { value: f64 },
    NonConstant { low: Witness, high: Witness },
}

impl Verdict {
    pub fn is_constant(&self) -> bool {
        matches!(self, Verdict::Constant { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantityReport {
    #[serde(flatten)]
    pub stats: Stats,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Largest |closed form - general| over the successful nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub max_k_residual: f64,
    pub max_h_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeFailure {
    pub u: f64,
    pub v: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub grid: (usize, usize),
    pub tol: f64,
    pub usable: bool,
    /// `None` when no node could be evaluated.
    pub k: Option<QuantityReport>,
    pub h_canonical: Option<QuantityReport>,
    pub h_paper: Option<QuantityReport>,
    pub cross_check: Option<CrossCheck>,
    pub failures: Vec<NodeFailure>,
    pub nodes: Vec<NodeValues>,
}

impl CurvatureReport {
    /// True when the report is usable and every quantity is constant.
    pub fn all_constant(&self) -> bool {
        self.usable
            && [&self.k, &self.h_canonical, &self.h_paper]
                .iter()
                .all(|q| q.is_some_and(|q| q.verdict.is_constant()))
    }
}

fn quantity(nodes: &[NodeValues], tol: f64, pick: impl Fn(&NodeValues) -> f64) -> Option<QuantityReport> {
    let first = nodes.first()?;
    let (mut lo, mut hi) = (first, first);
    let mut sum = 0.0;
    for n in nodes {
        let x = pick(n);
        if x < pick(lo) {
            lo = n;
        }
        if x > pick(hi) {
            hi = n;
        }
        sum += x;
    }
    let (min, max) = (pick(lo), pick(hi));
    let stats = Stats {
        min,
        max,
        mean: sum / nodes.len() as f64,
        spread: max - min,
    };
    let verdict = if stats.spread < tol {
        Verdict::Constant { value: stats.mean }
    } else {
        let w = |n: &NodeValues| Witness {
            u: n.u,
            v: n.v,
            value: pick(n),
        };
        Verdict::NonConstant {
            low: w(lo),
            high: w(hi),
        }
    };
    Some(QuantityReport { stats, verdict })
}

/// The nodes of an `nu x nv` grid, `u` outermost. With a seed, interior
/// nodes are moved by up to a quarter of the spacing in each direction.
pub fn grid_nodes<T: Scalar>(domain: &Rect<T>, nu: usize, nv: usize, seed: Option<u64>) -> Vec<(T, T)> {
    let Some(seed) = seed else {
        return domain.grid(nu, nv);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axis = |lo: T, hi: T, n: usize| -> Vec<T> {
        let mut xs = linspace(lo, hi, n);
        let h = (hi - lo) / T::lit((n - 1) as f64);
        let last = n - 1;
        for x in xs.iter_mut().take(last).skip(1) {
            *x = *x + h * T::lit(rng.gen_range(-0.25..0.25));
        }
        xs
    };
    let us = axis(domain.u.0, domain.u.1, nu);
    let vs = axis(domain.v.0, domain.v.1, nv);
    us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
}

fn check_grid(nu: usize, nv: usize, tol: f64) -> Result<(), GeometryError> {
    if nu < 2 || nv < 2 {
        return Err(GeometryError::InvalidDomain(format!(
            "grid must be at least 2x2, got {nu}x{nv}"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(GeometryError::InvalidDomain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

type ClosedFormFn<'a, T> = &'a dyn Fn(T, T) -> Result<crate::translation::ClosedForm<T>, GeometryError>;

fn sample_nodes<T: Scalar>(
    surface: &Surface<T>,
    nodes: &[(T, T)],
    grid: (usize, usize),
    tol: f64,
    closed: Option<ClosedFormFn<'_, T>>,
) -> Result<CurvatureReport, GeometryError> {
    let mut ok = Vec::with_capacity(nodes.len());
    let mut failures = Vec::new();
    let mut cross: Option<CrossCheck> = closed.map(|_| CrossCheck {
        max_k_residual: 0.0,
        max_h_residual: 0.0,
    });
    for &(u, v) in nodes {
        let (uf, vf) = (u.to_f64_lossy(), v.to_f64_lossy());
        let c: Curvatures<T> = match surface.curvatures(u, v) {
            Ok(c) => c,
            Err(e) if e.is_degeneracy() => {
                failures.push(NodeFailure {
                    u: uf,
                    v: vf,
                    error: e.to_string(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let values = NodeValues {
            u: uf,
            v: vf,
            k: c.k.to_f64_lossy(),
            h_canonical: c.h_canonical.to_f64_lossy(),
            h_paper: c.h_paper.to_f64_lossy(),
        };
        if let (Some(f), Some(cc)) = (closed, cross.as_mut()) {
            match f(u, v) {
                Ok(cf) => {
                    cc.max_k_residual = cc.max_k_residual.max((cf.k.to_f64_lossy() - values.k).abs());
                    cc.max_h_residual = cc.max_h_residual.max((cf.h.to_f64_lossy() - values.h_paper).abs());
                }
                Err(e) => {
                    failures.push(NodeFailure {
                        u: uf,
                        v: vf,
                        error: format!("closed form: {e}"),
                    });
                    continue;
                }
            }
        }
        ok.push(values);
    }
    let usable = (failures.len() as f64) <= MAX_FAILURE_FRACTION * nodes.len() as f64 && !ok.is_empty();
    Ok(CurvatureReport {
        grid,
        tol,
        usable,
        k: quantity(&ok, tol, |n| n.k),
        h_canonical: quantity(&ok, tol, |n| n.h_canonical),
        h_paper: quantity(&ok, tol, |n| n.h_paper),
        cross_check: cross,
        failures,
        nodes: ok,
    })
}

/// K and both H at every node of an `nu x nv` grid over the surface's
/// domain. Nodes raising degeneracy errors are recorded and skipped.
pub fn sample<T: Scalar>(
    surface: &Surface<T>,
    nu: usize,
    nv: usize,
    tol: f64,
) -> Result<CurvatureReport, GeometryError> {
    check_grid(nu, nv, tol)?;
    sample_nodes(surface, &surface.domain().grid(nu, nv), (nu, nv), tol, None)
}

/// As [`sample`], on the grid jittered by `seed` (see [`grid_nodes`]).
pub fn sample_seeded<T: Scalar>(
    surface: &Surface<T>,
    nu: usize,
    nv: usize,
    tol: f64,
    seed: Option<u64>,
) -> Result<CurvatureReport, GeometryError> {
    check_grid(nu, nv, tol)?;
    sample_nodes(
        surface,
        &grid_nodes(&surface.domain(), nu, nv, seed),
        (nu, nv),
        tol,
        None,
    )
}

/// As [`sample`], with the family's closed forms cross-checked at every
/// node and an optional seeded jitter of the grid.
pub fn sample_family<T: Scalar>(
    family: &SurfaceFamily<T>,
    nu: usize,
    nv: usize,
    tol: f64,
    seed: Option<u64>,
) -> Result<CurvatureReport, GeometryError> {
    check_grid(nu, nv, tol)?;
    let nodes = grid_nodes(&family.surface().domain(), nu, nv, seed);
    let closed = |u: T, v: T| family.closed_form(u, v);
    sample_nodes(family.surface(), &nodes, (nu, nv), tol, Some(&closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::translation::{make_type3_circle, make_type4_cmc_ode, OdeParams};

    fn surface(src: [&str; 3], u: (f64, f64), v: (f64, f64)) -> Surface<f64> {
        Surface::parse(["u", "v"], src, Rect::new(u, v).unwrap()).unwrap()
    }

    #[test]
    fn plane_is_constant() {
        let s = surface(["u", "v", "0"], (-1.0, 1.0), (-1.0, 1.0));
        let r = sample(&s, 5, 5, 1e-9).unwrap();
        assert!(r.usable && r.all_constant());
        assert_eq!(r.k.unwrap().stats.spread, 0.0);
        assert_eq!(r.nodes.len(), 25);
    }

    #[test]
    fn paraboloid_is_not() {
        let s = surface(["u", "v", "u^2+v^2"], (-1.0, 1.0), (-1.0, 1.0));
        let r = sample(&s, 11, 11, 1e-9).unwrap();
        match r.k.unwrap().verdict {
            Verdict::NonConstant { low, high } => {
                // K = 4/(1+4v^2)^2, first hit in grid order wins
                assert_eq!((high.u, high.v, high.value), (-1.0, 0.0, 4.0));
                assert!((low.value - 0.16).abs() < 1e-15);
                assert_eq!((low.u, low.v.abs()), (-1.0, 1.0));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn circle_surface_report() {
        let d = Rect::new((-1.0, 1.0), (-1.2, 1.2)).unwrap();
        let u = |s| Expr::parse(s, &["u"]).unwrap();
        let f = make_type3_circle(1.0, &u("u^2"), &u("u^3"), d).unwrap();
        let r = sample_family(&f, 21, 21, 1e-9, None).unwrap();
        let h = r.h_paper.unwrap();
        assert!(h.stats.spread < 1e-9);
        assert!(matches!(h.verdict, Verdict::Constant { value } if (value + 1.0).abs() < 1e-12));
        let cc = r.cross_check.unwrap();
        assert!(cc.max_k_residual < 1e-9 && cc.max_h_residual < 1e-9);
    }

    #[test]
    fn failures_are_recorded() {
        // W = 0 along the line u = v
        let s = surface(["u+v", "u*v", "(u-v)^3"], (-1.0, 1.0), (-1.0, 1.0));
        let r = sample(&s, 5, 5, 1e-9).unwrap();
        assert_eq!((r.failures.len(), r.nodes.len()), (5, 20));
        assert!(r.usable);
        let r = sample(&s, 3, 3, 1e-9).unwrap();
        assert_eq!(r.failures.len(), 3);
        assert!(!r.usable);
        let r = sample(&s, 4, 5, 1e-9).unwrap();
        assert_eq!(r.failures.len(), 2);
    }

    #[test]
    fn deterministic() {
        let s = surface(["u", "sin(u*v)", "exp(v)*u"], (-1.0, 1.0), (-1.0, 1.0));
        let a = serde_json::to_string(&sample(&s, 9, 7, 1e-8).unwrap()).unwrap();
        let b = serde_json::to_string(&sample(&s, 9, 7, 1e-8).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn seeded_grids() {
        let d = Rect::new((0.0, 1.0), (0.0, 2.0)).unwrap();
        let a = grid_nodes(&d, 5, 5, Some(7));
        assert_eq!(a, grid_nodes(&d, 5, 5, Some(7)));
        assert_ne!(a, grid_nodes(&d, 5, 5, Some(8)));
        assert_ne!(a, d.grid(5, 5));
        assert!(a.iter().all(|&(u, v)| d.contains(u, v)));
        assert_eq!(a[0], (0.0, 0.0));
        assert_eq!(a[24], (1.0, 2.0));
    }

    #[test]
    fn ode_tolerance() {
        let p = OdeParams {
            h0: 0.1,
            f2: Expr::parse("u^2", &["u"]).unwrap(),
            a: 0.0,
            c1: 0.0,
            u0: 1.0,
            u_end: 2.0,
            f1_0: 0.0,
            f1p_0: 1.0,
            steps: 1000,
        };
        let f = make_type4_cmc_ode(&p, Rect::new((1.0, 2.0), (-1.0, 1.0)).unwrap()).unwrap();
        let r = sample_family(&f, 21, 21, default_tol(f.kind()), None).unwrap();
        assert!(r.h_paper.unwrap().verdict.is_constant());
    }

    #[test]
    fn bad_grid() {
        let s = surface(["u", "v", "0"], (-1.0, 1.0), (-1.0, 1.0));
        assert!(sample(&s, 1, 5, 1e-9).is_err());
        assert!(sample(&s, 5, 5, 0.0).is_err());
    }
}
