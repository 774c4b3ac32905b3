//! Translation surfaces `α(u) + β(v)` and the constant-curvature families.
//!
//! Every constructor returns a [`SurfaceFamily`]: the realized surface in
//! the variables `(u, v)`, its parameter record, and enough structure to
//! evaluate the specialized closed-form curvature formulas.

pub mod ode;

use serde::{Deserialize, Serialize};

use crate::curves::{check_isotropic_unit_speed, Curve};
use crate::error::GeometryError;
use crate::expr::{Expr, Node};
use crate::jets::Jet1;
use crate::scalar::{linspace, Scalar};
use crate::surfaces::{fundamental_from_jets, is_admissible_surface, Rect, Surface};

pub use ode::{OdeDiagnostics, OdeParams, OdeSolution};

/// Grid used to validate constructor output.
pub const VALIDATION_GRID: usize = 21;
/// Samples for one-variable preconditions along a profile.
pub const PROFILE_SAMPLES: usize = 101;
pub const SINGULAR_TOL: f64 = 1e-12;
/// Threshold for `f1''f2''' - f1'''f2''` and for `|g1'|`.
pub const NONDEGENERACY_TOL: f64 = 1e-9;
/// Fraction of the arcsine/square-root validity region used by default.
pub const SHRINK: f64 = 0.9;

const SURFACE_VARS: [&str; 2] = ["u", "v"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMatrix {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl AffineMatrix {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Result<Self, GeometryError> {
        let m = Self { a11, a12, a21, a22 };
        let w = m.w();
        if !(w.abs() > SINGULAR_TOL) || ![a11, a12, a21, a22].iter().all(|x| x.is_finite()) {
            return Err(GeometryError::SingularMatrix { det: w });
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a11: 1.0,
            a12: 0.0,
            a21: 0.0,
            a22: 1.0,
        }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Result<Self, GeometryError> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn w(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[serde(rename = "type1_2_standard")]
    Standard,
    Affine,
    Type3,
    Type4,
    #[serde(rename = "constant_k_type1")]
    ConstantKType1,
    #[serde(rename = "cmc_cylinder_b_i")]
    CmcCylinderBI,
    #[serde(rename = "cmc_cylinder_b_ii_1")]
    CmcCylinderBII1,
    ParabolicRuled,
    Type3Circle,
    Type4CmcOde,
    #[serde(rename = "ruled_type_c")]
    RuledTypeC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardType {
    Type1,
    Type2,
}

/// Which translating curve of an affine surface lies in a Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSide {
    Alpha,
    Beta,
}

/// Serializable constructor input. Profiles of `α` are written in `u`,
/// profiles of `β` in `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyParams {
    Type1 {
        f: String,
        g: String,
    },
    Type2 {
        f: String,
        g: String,
    },
    Affine {
        matrix: [[f64; 2]; 2],
        f: String,
        g: String,
    },
    Type3 {
        f1: String,
        f2: String,
        g1: String,
        g2: String,
    },
    Type4 {
        f1: String,
        f2: String,
        g: String,
        a: f64,
    },
    #[serde(rename = "constant_k_type1")]
    ConstantKType1 {
        k0: f64,
        c: f64,
    },
    #[serde(rename = "cmc_cylinder_b_i")]
    CmcCylinderBI {
        h0: f64,
        matrix: [[f64; 2]; 2],
        f: String,
    },
    #[serde(rename = "cmc_cylinder_b_ii_1")]
    CmcCylinderBII1 {
        h0: f64,
        matrix: [[f64; 2]; 2],
        c1: f64,
    },
    ParabolicRuled {
        matrix: [[f64; 2]; 2],
        c1: f64,
    },
    Type3Circle {
        h0: f64,
        f1: String,
        f2: String,
    },
    Type4CmcOde {
        h0: f64,
        f2: String,
        a: f64,
        c1: f64,
        u0: f64,
        u_end: f64,
        f1_0: f64,
        f1p_0: f64,
        steps: usize,
    },
    #[serde(rename = "ruled_type_c")]
    RuledTypeC {
        x: String,
        y: String,
        z: String,
    },
}

fn alpha(src: &str) -> Result<Expr, GeometryError> {
    Ok(Expr::parse(src, &["u"])?)
}

fn beta(src: &str) -> Result<Expr, GeometryError> {
    Ok(Expr::parse(src, &["v"])?)
}

impl FamilyParams {
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyParams::Type1 { .. } | FamilyParams::Type2 { .. } => FamilyKind::Standard,
            FamilyParams::Affine { .. } => FamilyKind::Affine,
            FamilyParams::Type3 { .. } => FamilyKind::Type3,
            FamilyParams::Type4 { .. } => FamilyKind::Type4,
            FamilyParams::ConstantKType1 { .. } => FamilyKind::ConstantKType1,
            FamilyParams::CmcCylinderBI { .. } => FamilyKind::CmcCylinderBI,
            FamilyParams::CmcCylinderBII1 { .. } => FamilyKind::CmcCylinderBII1,
            FamilyParams::ParabolicRuled { .. } => FamilyKind::ParabolicRuled,
            FamilyParams::Type3Circle { .. } => FamilyKind::Type3Circle,
            FamilyParams::Type4CmcOde { .. } => FamilyKind::Type4CmcOde,
            FamilyParams::RuledTypeC { .. } => FamilyKind::RuledTypeC,
        }
    }

    /// A domain on which the family is defined, used when none is given.
    pub fn default_domain(&self) -> Rect<f64> {
        let unit = (-1.0, 1.0);
        match *self {
            FamilyParams::ConstantKType1 { k0, c } => {
                let r = SHRINK * (c / k0).abs();
                Rect { u: unit, v: (-r, r) }
            }
            FamilyParams::CmcCylinderBI { h0, matrix, .. } | FamilyParams::CmcCylinderBII1 { h0, matrix, .. } => {
                let [[_, _], [a21, a22]] = matrix;
                // |a21 x + a22 y| <= SHRINK |a22 / h0| on a square
                let r = SHRINK * (a22 / h0).abs() / (a21.abs() + a22.abs());
                Rect { u: (-r, r), v: (-r, r) }
            }
            FamilyParams::Type3Circle { h0, .. } => {
                let r = 1.2 / h0.abs();
                Rect { u: unit, v: (-r, r) }
            }
            FamilyParams::Type4CmcOde { u0, u_end, .. } => Rect {
                u: (u0.min(u_end), u0.max(u_end)),
                v: unit,
            },
            _ => Rect { u: unit, v: unit },
        }
    }

    /// Builds the family on `domain`, or on [`Self::default_domain`].
    pub fn build<T: Scalar>(&self, domain: Option<Rect<T>>) -> Result<SurfaceFamily<T>, GeometryError> {
        let domain = match domain {
            Some(d) => d,
            None => {
                let d = self.default_domain();
                Rect::new((T::lit(d.u.0), T::lit(d.u.1)), (T::lit(d.v.0), T::lit(d.v.1)))?
            }
        };
        match self {
            FamilyParams::Type1 { f, g } => make_standard(StandardType::Type1, &alpha(f)?, &beta(g)?, domain),
            FamilyParams::Type2 { f, g } => make_standard(StandardType::Type2, &alpha(f)?, &beta(g)?, domain),
            FamilyParams::Affine { matrix, f, g } => {
                make_affine(AffineMatrix::from_rows(*matrix)?, &alpha(f)?, &beta(g)?, domain)
            }
            FamilyParams::Type3 { f1, f2, g1, g2 } => {
                make_type3(&alpha(f1)?, &alpha(f2)?, &beta(g1)?, &beta(g2)?, domain)
            }
            FamilyParams::Type4 { f1, f2, g, a } => make_type4(&alpha(f1)?, &alpha(f2)?, &beta(g)?, *a, domain),
            FamilyParams::ConstantKType1 { k0, c } => make_constant_k_type1(*k0, *c, domain),
            FamilyParams::CmcCylinderBI { h0, matrix, f } => make_cmc_cylinder(
                *h0,
                CmcVariant::BI(alpha(f)?),
                AffineMatrix::from_rows(*matrix)?,
                domain,
            ),
            FamilyParams::CmcCylinderBII1 { h0, matrix, c1 } => {
                make_cmc_cylinder(*h0, CmcVariant::BII1(*c1), AffineMatrix::from_rows(*matrix)?, domain)
            }
            FamilyParams::ParabolicRuled { matrix, c1 } => {
                make_parabolic_ruled(AffineMatrix::from_rows(*matrix)?, *c1, domain)
            }
            FamilyParams::Type3Circle { h0, f1, f2 } => make_type3_circle(*h0, &alpha(f1)?, &alpha(f2)?, domain),
            FamilyParams::Type4CmcOde {
                h0,
                f2,
                a,
                c1,
                u0,
                u_end,
                f1_0,
                f1p_0,
                steps,
            } => make_type4_cmc_ode(
                &OdeParams {
                    h0: *h0,
                    f2: alpha(f2)?,
                    a: *a,
                    c1: *c1,
                    u0: *u0,
                    u_end: *u_end,
                    f1_0: *f1_0,
                    f1p_0: *f1p_0,
                    steps: *steps,
                },
                domain,
            ),
            FamilyParams::RuledTypeC { x, y, z } => make_ruled_type_c(&alpha(x)?, &alpha(y)?, &alpha(z)?, domain),
        }
    }
}

/// Closed-form curvatures; `h` uses the same convention as `H_paper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm<T> {
    pub k: T,
    pub h: T,
}

/// The profile functions a family was assembled from.
#[derive(Debug, Clone)]
enum Structure {
    /// `(x, y, f(a11 x + a12 y) + g(a21 x + a22 y))`
    Affine { m: AffineMatrix, f: Expr, g: Expr },
    /// `(u, f1(u) + g1(v), f2(u) + g2(v))`
    Type3 { f1: Expr, f2: Expr, g1: Expr, g2: Expr },
    /// `(u + v, f1(u) + g(v), f2(u) + a v)`
    Type4 { f1: Expr, f2: Expr, g: Expr, a: f64 },
    /// `(u, x(u) + v y(u), v z(u))`
    RuledC { y: Expr, z: Expr },
}

#[derive(Debug, Clone)]
pub struct SurfaceFamily<T> {
    kind: FamilyKind,
    params: FamilyParams,
    surface: Surface<T>,
    structure: Structure,
    isotropic_curve: Option<CurveSide>,
    ode: Option<OdeDiagnostics>,
}

impl<T: Scalar> SurfaceFamily<T> {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn surface(&self) -> &Surface<T> {
        &self.surface
    }

    /// For affine families: the translating curve that is isotropic, if any.
    pub fn isotropic_curve(&self) -> Option<CurveSide> {
        self.isotropic_curve
    }

    pub fn ode_diagnostics(&self) -> Option<&OdeDiagnostics> {
        self.ode.as_ref()
    }

    /// The family's specialized curvature formulas at `(u, v)`.
    pub fn closed_form(&self, u: T, v: T) -> Result<ClosedForm<T>, GeometryError> {
        let j = |e: &Expr, t: T| -> Result<Jet1<T>, GeometryError> {
            e.eval_jet1(t)
                .map_err(|err| GeometryError::eval(&[u.to_f64_lossy(), v.to_f64_lossy()], err))
        };
        match &self.structure {
            Structure::Affine { m, f, g } => {
                let l = |a: f64, b: f64| T::lit(a) * u + T::lit(b) * v;
                Ok(closed_form_affine(m, j(f, l(m.a11, m.a12))?, j(g, l(m.a21, m.a22))?))
            }
            Structure::Type3 { f1, f2, g1, g2 } => closed_form_type3(j(f1, u)?, j(f2, u)?, j(g1, v)?, j(g2, v)?)
                .ok_or_else(|| GeometryError::precondition("g1' vanishes", &[u.to_f64_lossy(), v.to_f64_lossy()])),
            Structure::Type4 { f1, f2, g, a } => {
                closed_form_type4(j(f1, u)?, j(f2, u)?, j(g, v)?, T::lit(*a)).ok_or(GeometryError::DegenerateW {
                    u: u.to_f64_lossy(),
                    v: v.to_f64_lossy(),
                    w: 0.0,
                })
            }
            Structure::RuledC { y, z } => closed_form_ruled_c(j(y, u)?, j(z, u)?).ok_or(GeometryError::DegenerateW {
                u: u.to_f64_lossy(),
                v: v.to_f64_lossy(),
                w: 0.0,
            }),
        }
    }
}

/// `K = w² f'' g'' / B²`, `H = (a12² f'' + a22² g'') / B^{3/2}` with
/// `B = 1 + (a12 f' + a22 g')²`; `f` and `g` are jets at `a11 x + a12 y`
/// and `a21 x + a22 y`.
pub fn closed_form_affine<T: Scalar>(m: &AffineMatrix, f: Jet1<T>, g: Jet1<T>) -> ClosedForm<T> {
    let [a12, a22, w] = [m.a12, m.a22, m.w()].map(T::lit);
    let s = a12 * f.c1 + a22 * g.c1;
    let b = T::one() + s * s;
    ClosedForm {
        k: w * w * f.c2 * g.c2 / (b * b),
        h: (a12 * a12 * f.c2 + a22 * a22 * g.c2) / (b * b.sqrt()),
    }
}

/// `K = -(g2''/g1')(f1'' g2' - f2'' g1')`, `H = g2''/g1'`. `None` when
/// `|g1'| <= 1e-9`.
pub fn closed_form_type3<T: Scalar>(f1: Jet1<T>, f2: Jet1<T>, g1: Jet1<T>, g2: Jet1<T>) -> Option<ClosedForm<T>> {
    if g1.c1.abs() <= T::lit(NONDEGENERACY_TOL) {
        return None;
    }
    let h = g2.c2 / g1.c1;
    Some(ClosedForm {
        k: -h * (f1.c2 * g2.c1 - f2.c2 * g1.c1),
        h,
    })
}

/// With `p = f2' - a`, `q = f1' - g'`, `W² = p² + q²`:
/// `K = g''(f1'' p² - f2'' p q) / W⁴`,
/// `H = (p g'' + p f1'' - q f2'') / W³`. `None` when `W` vanishes.
pub fn closed_form_type4<T: Scalar>(f1: Jet1<T>, f2: Jet1<T>, g: Jet1<T>, a: T) -> Option<ClosedForm<T>> {
    let p = f2.c1 - a;
    let q = f1.c1 - g.c1;
    let w2 = p * p + q * q;
    if w2.sqrt() <= T::lit(SINGULAR_TOL) {
        return None;
    }
    Some(ClosedForm {
        k: g.c2 * (f1.c2 * p * p - f2.c2 * p * q) / (w2 * w2),
        h: (p * g.c2 + p * f1.c2 - q * f2.c2) / (w2 * w2.sqrt()),
    })
}

/// `K = -(y z' - z y')² / (y² + z²)²`, `H = 0`.
pub fn closed_form_ruled_c<T: Scalar>(y: Jet1<T>, z: Jet1<T>) -> Option<ClosedForm<T>> {
    let w2 = y.c0 * y.c0 + z.c0 * z.c0;
    if w2.sqrt() <= T::lit(SINGULAR_TOL) {
        return None;
    }
    let d = y.c0 * z.c1 - z.c0 * y.c1;
    Some(ClosedForm {
        k: -d * d / (w2 * w2),
        h: T::zero(),
    })
}

fn unary(e: &Expr) -> Result<(), GeometryError> {
    if e.arity() != 1 {
        return Err(GeometryError::Arity {
            expected: 1,
            got: e.arity(),
        });
    }
    Ok(())
}

/// The same tree written in `var`, so its printed form follows the
/// parameter-record convention.
fn renamed(e: &Expr, var: &str) -> Expr {
    Expr::from_node(e.root().clone(), &[var]).expect("arity checked")
}

fn lit(x: f64) -> String {
    if x < 0.0 {
        format!("({x:?})")
    } else {
        format!("{x:?}")
    }
}

fn surface<T: Scalar>(nodes: [Node; 3], domain: Rect<T>) -> Result<Surface<T>, GeometryError> {
    let [x, y, z] = nodes.map(|n| Expr::from_node(n, &SURFACE_VARS));
    Surface::new(x?, y?, z?, domain)
}

fn u() -> Node {
    Node::var(0)
}

fn v() -> Node {
    Node::var(1)
}

/// Rejects surfaces with a Euclidean tangent plane or vanishing `W` at a
/// validation node.
fn validate<T: Scalar>(s: &Surface<T>) -> Result<(), GeometryError> {
    let a = is_admissible_surface(s, VALIDATION_GRID, VALIDATION_GRID)?;
    if let Some((u, v)) = a.witness {
        return Err(GeometryError::Inadmissible {
            u: u.to_f64_lossy(),
            v: v.to_f64_lossy(),
        });
    }
    for (u, v) in s.domain().grid(VALIDATION_GRID, VALIDATION_GRID) {
        fundamental_from_jets(&s.jets(u, v)?, u, v)?;
    }
    Ok(())
}

fn finish<T: Scalar>(
    kind: FamilyKind,
    params: FamilyParams,
    surface: Surface<T>,
    structure: Structure,
) -> Result<SurfaceFamily<T>, GeometryError> {
    validate(&surface)?;
    Ok(SurfaceFamily {
        kind,
        params,
        surface,
        structure,
        isotropic_curve: None,
        ode: None,
    })
}

/// Type 1 `(x, y, f(x) + g(y))` or type 2 `(x + y, g(y), f(x))`.
pub fn make_standard<T: Scalar>(
    kind: StandardType,
    f: &Expr,
    g: &Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    unary(f)?;
    unary(g)?;
    let (f, g) = (renamed(f, "u"), renamed(g, "v"));
    let (fu, gv) = (f.substitute(&[u()]), g.substitute(&[v()]));
    let (nodes, structure, params) = match kind {
        StandardType::Type1 => (
            [u(), v(), Node::sum([fu, gv])],
            Structure::Affine {
                m: AffineMatrix::identity(),
                f: f.clone(),
                g: g.clone(),
            },
            FamilyParams::Type1 {
                f: f.to_string(),
                g: g.to_string(),
            },
        ),
        StandardType::Type2 => (
            [u() + v(), gv, fu],
            Structure::Type4 {
                f1: Expr::constant(0.0, &["u"]),
                f2: f.clone(),
                g: g.clone(),
                a: 0.0,
            },
            FamilyParams::Type2 {
                f: f.to_string(),
                g: g.to_string(),
            },
        ),
    };
    finish(FamilyKind::Standard, params, surface(nodes, domain)?, structure)
}

fn affine_nodes(m: &AffineMatrix, f: &Expr, g: &Expr) -> [Node; 3] {
    let a = Node::affine(&[m.a11, m.a12], 0.0);
    let b = Node::affine(&[m.a21, m.a22], 0.0);
    [u(), v(), Node::sum([f.substitute(&[a]), g.substitute(&[b])])]
}

fn affine_side(m: &AffineMatrix) -> Option<CurveSide> {
    if m.a22 == 0.0 {
        Some(CurveSide::Alpha)
    } else if m.a12 == 0.0 {
        Some(CurveSide::Beta)
    } else {
        None
    }
}

fn affine_family<T: Scalar>(
    kind: FamilyKind,
    params: FamilyParams,
    m: AffineMatrix,
    f: Expr,
    g: Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    let s = surface(affine_nodes(&m, &f, &g), domain)?;
    let mut fam = finish(kind, params, s, Structure::Affine { m, f, g })?;
    fam.isotropic_curve = affine_side(&m);
    Ok(fam)
}

/// `(x, y, f(a11 x + a12 y) + g(a21 x + a22 y))`.
pub fn make_affine<T: Scalar>(
    m: AffineMatrix,
    f: &Expr,
    g: &Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    let m = AffineMatrix::new(m.a11, m.a12, m.a21, m.a22)?;
    unary(f)?;
    unary(g)?;
    let (f, g) = (renamed(f, "u"), renamed(g, "v"));
    let params = FamilyParams::Affine {
        matrix: m.rows(),
        f: f.to_string(),
        g: g.to_string(),
    };
    affine_family(FamilyKind::Affine, params, m, f, g, domain)
}

/// `(u, p(s), c u²/2 + q(s))` with `q = K0 s²/(2c)` and `p' = sqrt(1 - q'²)`,
/// so that `K = c q'' = K0`. The domain must satisfy `|s| <= 0.9 |c/K0|`.
pub fn make_constant_k_type1<T: Scalar>(k0: f64, c: f64, domain: Rect<T>) -> Result<SurfaceFamily<T>, GeometryError> {
    if !(k0 != 0.0 && c != 0.0 && k0.is_finite() && c.is_finite()) {
        return Err(GeometryError::precondition(
            "K0 and c must be finite and nonzero",
            &[k0, c],
        ));
    }
    let r = SHRINK * (c / k0).abs();
    let (lo, hi) = (domain.v.0.to_f64_lossy(), domain.v.1.to_f64_lossy());
    if lo < -r * (1.0 + 1e-12) || hi > r * (1.0 + 1e-12) {
        return Err(GeometryError::InvalidDomain(format!(
            "s range [{lo}, {hi}] leaves |s| <= {r}"
        )));
    }
    let k = k0 / c;
    let (kl, cl) = (lit(k), lit(c));
    let p = beta(&format!("v/2*sqrt(1 - ({kl}*v)^2) + asin({kl}*v)/(2*{kl})"))?;
    let q = beta(&format!("{}*v^2", lit(k0 / (2.0 * c))))?;
    let f2 = alpha(&format!("{cl}*u^2/2"))?;
    let nodes = [
        u(),
        p.substitute(&[v()]),
        Node::sum([f2.substitute(&[u()]), q.substitute(&[v()])]),
    ];
    finish(
        FamilyKind::ConstantKType1,
        FamilyParams::ConstantKType1 { k0, c },
        surface(nodes, domain)?,
        Structure::Type3 {
            f1: Expr::constant(0.0, &["u"]),
            f2,
            g1: p,
            g2: q,
        },
    )
}

/// The isotropic profile `(0, p(s), q(s))` of a constant-K family.
pub fn constant_k_profile<T: Scalar>(fam: &SurfaceFamily<T>) -> Option<Curve<T>> {
    match (&fam.structure, fam.kind) {
        (Structure::Type3 { g1, g2, .. }, FamilyKind::ConstantKType1 | FamilyKind::Type3Circle | FamilyKind::Type3) => {
            let d = fam.surface.domain();
            Curve::new(Expr::constant(0.0, &["v"]), g1.clone(), g2.clone(), d.v.0, d.v.1).ok()
        }
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub enum CmcVariant {
    /// `a12 = 0`, arbitrary `f`.
    BI(Expr),
    /// `f = c1 u` with the drift `-c1 a12 v / a22` in `g`.
    BII1(f64),
}

/// `g(v) = -(1/H0) sqrt(1 - (H0 v / a22)²)` combined with `f` per variant;
/// `H_paper ≡ H0`.
pub fn make_cmc_cylinder<T: Scalar>(
    h0: f64,
    variant: CmcVariant,
    m: AffineMatrix,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    let m = AffineMatrix::new(m.a11, m.a12, m.a21, m.a22)?;
    if !(h0 != 0.0 && h0.is_finite()) {
        return Err(GeometryError::precondition("H0 must be finite and nonzero", &[h0]));
    }
    if m.a22 == 0.0 {
        return Err(GeometryError::precondition("a22 must be nonzero", &[m.a22]));
    }
    let d = domain.to_f64();
    for (x, y) in [(d.u.0, d.v.0), (d.u.0, d.v.1), (d.u.1, d.v.0), (d.u.1, d.v.1)] {
        let t = h0 * (m.a21 * x + m.a22 * y) / m.a22;
        if !(t.abs() < 1.0) {
            return Err(GeometryError::precondition("|H0 v / a22| must stay below 1", &[x, y]));
        }
    }
    let circle = format!("-sqrt(1 - ({}*v)^2)/{}", lit(h0 / m.a22), lit(h0));
    let (kind, f, g, params) = match variant {
        CmcVariant::BI(f) => {
            unary(&f)?;
            if m.a12 != 0.0 {
                return Err(GeometryError::precondition("variant B_i needs a12 = 0", &[m.a12]));
            }
            let f = renamed(&f, "u");
            let params = FamilyParams::CmcCylinderBI {
                h0,
                matrix: m.rows(),
                f: f.to_string(),
            };
            (FamilyKind::CmcCylinderBI, f, beta(&circle)?, params)
        }
        CmcVariant::BII1(c1) => {
            let f = alpha(&format!("{}*u", lit(c1)))?;
            let drift = -c1 * m.a12 / m.a22;
            let g = beta(&format!("{circle} + {}*v", lit(drift)))?;
            let params = FamilyParams::CmcCylinderBII1 {
                h0,
                matrix: m.rows(),
                c1,
            };
            (FamilyKind::CmcCylinderBII1, f, g, params)
        }
    };
    affine_family(kind, params, m, f, g, domain)
}

/// `f = c1 u²/(2 a12²)`, `g = -c1 v²/(2 a22²)`: a minimal surface.
pub fn make_parabolic_ruled<T: Scalar>(
    m: AffineMatrix,
    c1: f64,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    let m = AffineMatrix::new(m.a11, m.a12, m.a21, m.a22)?;
    if m.a12 == 0.0 || m.a22 == 0.0 {
        return Err(GeometryError::precondition(
            "a12 and a22 must be nonzero",
            &[m.a12, m.a22],
        ));
    }
    let f = alpha(&format!("{}*u^2", lit(c1 / (2.0 * m.a12 * m.a12))))?;
    let g = beta(&format!("{}*v^2", lit(-c1 / (2.0 * m.a22 * m.a22))))?;
    let params = FamilyParams::ParabolicRuled { matrix: m.rows(), c1 };
    affine_family(FamilyKind::ParabolicRuled, params, m, f, g, domain)
}

/// The parabolic ruled surface written as a ruled surface of type C.
///
/// With `α = a11/a12`, `β = a21/a22`, the surface is
/// `z = Q x² + c1 D x y`, `Q = c1 (α² - β²)/2`, `D = α - β`. The motion
/// `θ = π/2` followed by `v = -y` turns it into `(u, Q u² - c1 D u v, v)`.
/// Returns the profiles `(x, y, z)` of that type C surface.
pub fn parabolic_ruled_as_type_c(m: &AffineMatrix, c1: f64) -> Result<[Expr; 3], GeometryError> {
    if m.a12 == 0.0 || m.a22 == 0.0 {
        return Err(GeometryError::precondition(
            "a12 and a22 must be nonzero",
            &[m.a12, m.a22],
        ));
    }
    let (al, be) = (m.a11 / m.a12, m.a21 / m.a22);
    let q = c1 * (al * al - be * be) / 2.0;
    let d = al - be;
    Ok([
        alpha(&format!("{}*u^2", lit(q)))?,
        alpha(&format!("{}*u", lit(-c1 * d)))?,
        alpha("1")?,
    ])
}

fn profile_grid<T: Scalar>(lo: T, hi: T) -> Vec<T> {
    linspace(lo, hi, PROFILE_SAMPLES)
}

/// Smallest `|f1'' f2''' - f1''' f2''|` over the u-range, and where.
pub fn space_curve_margin<T: Scalar>(f1: &Expr, f2: &Expr, lo: T, hi: T) -> Result<(T, T), GeometryError> {
    let mut best = (T::infinity(), lo);
    for s in profile_grid(lo, hi) {
        let a = f1
            .eval_jet1(s)
            .map_err(|e| GeometryError::eval(&[s.to_f64_lossy()], e))?;
        let b = f2
            .eval_jet1(s)
            .map_err(|e| GeometryError::eval(&[s.to_f64_lossy()], e))?;
        let d = (a.c2 * b.c3 - a.c3 * b.c2).abs();
        if d < best.0 {
            best = (d, s);
        }
    }
    Ok(best)
}

fn require_space_curve<T: Scalar>(f1: &Expr, f2: &Expr, lo: T, hi: T) -> Result<(), GeometryError> {
    let (m, at) = space_curve_margin(f1, f2, lo, hi)?;
    if !(m > T::lit(NONDEGENERACY_TOL)) {
        return Err(GeometryError::precondition(
            "f1''f2''' - f1'''f2'' vanishes: α is not a space curve",
            &[at.to_f64_lossy()],
        ));
    }
    Ok(())
}

/// `(u, f1(u) + g1(v), f2(u) + g2(v))` with `(0, g1, g2)` isotropic unit
/// speed and `(u, f1, f2)` a space curve.
pub fn make_type3<T: Scalar>(
    f1: &Expr,
    f2: &Expr,
    g1: &Expr,
    g2: &Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    for e in [f1, f2, g1, g2] {
        unary(e)?;
    }
    let (f1, f2) = (renamed(f1, "u"), renamed(f2, "u"));
    let (g1, g2) = (renamed(g1, "v"), renamed(g2, "v"));
    let params = FamilyParams::Type3 {
        f1: f1.to_string(),
        f2: f2.to_string(),
        g1: g1.to_string(),
        g2: g2.to_string(),
    };
    type3_family(FamilyKind::Type3, params, f1, f2, g1, g2, domain)
}

fn type3_family<T: Scalar>(
    kind: FamilyKind,
    params: FamilyParams,
    f1: Expr,
    f2: Expr,
    g1: Expr,
    g2: Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    let (vlo, vhi) = domain.v;
    let beta = Curve::new(Expr::constant(0.0, &["v"]), g1.clone(), g2.clone(), vlo, vhi)?;
    let check = check_isotropic_unit_speed(&beta, PROFILE_SAMPLES)?;
    if !check.unit_speed {
        return Err(GeometryError::precondition(
            "(0, g1, g2) is not unit speed",
            &[check.max_residual.to_f64_lossy()],
        ));
    }
    let mut prev: Option<(T, T)> = None;
    for s in profile_grid(vlo, vhi) {
        let d = g1
            .eval_jet1(s)
            .map_err(|e| GeometryError::eval(&[s.to_f64_lossy()], e))?
            .c1;
        let flipped = prev.is_some_and(|(_, p)| p.signum() != d.signum());
        if !(d.abs() > T::lit(NONDEGENERACY_TOL)) || flipped {
            let at = match prev {
                Some((ps, _)) if flipped => (ps + s) / T::lit(2.0),
                _ => s,
            };
            return Err(GeometryError::precondition("g1' vanishes", &[at.to_f64_lossy()]));
        }
        prev = Some((s, d));
    }
    require_space_curve(&f1, &f2, domain.u.0, domain.u.1)?;
    let nodes = [
        u(),
        Node::sum([f1.substitute(&[u()]), g1.substitute(&[v()])]),
        Node::sum([f2.substitute(&[u()]), g2.substitute(&[v()])]),
    ];
    finish(
        kind,
        params,
        surface(nodes, domain)?,
        Structure::Type3 { f1, f2, g1, g2 },
    )
}

/// Type 3 with the circle `g1 = sin(|H0| v)/|H0|`, `g2 = cos(|H0| v)/|H0|`,
/// for which `H_paper ≡ -|H0|`.
pub fn make_type3_circle<T: Scalar>(
    h0: f64,
    f1: &Expr,
    f2: &Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    if !(h0 != 0.0 && h0.is_finite()) {
        return Err(GeometryError::precondition("H0 must be finite and nonzero", &[h0]));
    }
    unary(f1)?;
    unary(f2)?;
    let (f1, f2) = (renamed(f1, "u"), renamed(f2, "u"));
    let k = lit(h0.abs());
    let g1 = beta(&format!("sin({k}*v)/{k}"))?;
    let g2 = beta(&format!("cos({k}*v)/{k}"))?;
    let params = FamilyParams::Type3Circle {
        h0,
        f1: f1.to_string(),
        f2: f2.to_string(),
    };
    type3_family(FamilyKind::Type3Circle, params, f1, f2, g1, g2, domain)
}

/// For type 3 families: the profiles `(g1, g2)` of `β`.
pub fn beta_profiles<T: Scalar>(fam: &SurfaceFamily<T>) -> Option<(&Expr, &Expr)> {
    match &fam.structure {
        Structure::Type3 { g1, g2, .. } => Some((g1, g2)),
        _ => None,
    }
}

/// `(u + v, f1(u) + g(v), f2(u) + a v)` with `(u, f1, f2)` a space curve.
pub fn make_type4<T: Scalar>(
    f1: &Expr,
    f2: &Expr,
    g: &Expr,
    a: f64,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    for e in [f1, f2, g] {
        unary(e)?;
    }
    let (f1, f2, g) = (renamed(f1, "u"), renamed(f2, "u"), renamed(g, "v"));
    require_space_curve(&f1, &f2, domain.u.0, domain.u.1)?;
    let params = FamilyParams::Type4 {
        f1: f1.to_string(),
        f2: f2.to_string(),
        g: g.to_string(),
        a,
    };
    type4_family(FamilyKind::Type4, params, f1, f2, g, a, domain)
}

fn type4_family<T: Scalar>(
    kind: FamilyKind,
    params: FamilyParams,
    f1: Expr,
    f2: Expr,
    g: Expr,
    a: f64,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    if !a.is_finite() {
        return Err(GeometryError::precondition("a must be finite", &[a]));
    }
    let nodes = [
        u() + v(),
        Node::sum([f1.substitute(&[u()]), g.substitute(&[v()])]),
        Node::sum([f2.substitute(&[u()]), Node::scaled(a, v())]),
    ];
    finish(kind, params, surface(nodes, domain)?, Structure::Type4 { f1, f2, g, a })
}

/// Type 4 with `g = c1 v` and `f1` integrated numerically so that
/// `H_paper ≡ H0`.
pub fn make_type4_cmc_ode<T: Scalar>(p: &OdeParams, domain: Rect<T>) -> Result<SurfaceFamily<T>, GeometryError> {
    unary(&p.f2)?;
    let d = domain.to_f64();
    let (lo, hi) = (p.u0.min(p.u_end), p.u0.max(p.u_end));
    if d.u.0 < lo || d.u.1 > hi {
        return Err(GeometryError::InvalidDomain(format!(
            "u range [{}, {}] must lie in the integration interval [{lo}, {hi}]",
            d.u.0, d.u.1
        )));
    }
    let sol = ode::solve(p)?;
    let diagnostics = ode::diagnostics(p, &sol)?;
    let f2 = renamed(&p.f2, "u");
    let params = FamilyParams::Type4CmcOde {
        h0: p.h0,
        f2: f2.to_string(),
        a: p.a,
        c1: p.c1,
        u0: p.u0,
        u_end: p.u_end,
        f1_0: p.f1_0,
        f1p_0: p.f1p_0,
        steps: p.steps,
    };
    let g = beta(&format!("{}*v", lit(p.c1)))?;
    let mut fam = type4_family(FamilyKind::Type4CmcOde, params, sol.f1_expr()?, f2, g, p.a, domain)?;
    fam.ode = Some(diagnostics);
    Ok(fam)
}

/// `(u, x(u) + v y(u), v z(u))`.
pub fn make_ruled_type_c<T: Scalar>(
    x: &Expr,
    y: &Expr,
    z: &Expr,
    domain: Rect<T>,
) -> Result<SurfaceFamily<T>, GeometryError> {
    for e in [x, y, z] {
        unary(e)?;
    }
    let [x, y, z] = [x, y, z].map(|e| renamed(e, "u"));
    let nodes = [
        u(),
        Node::sum([x.substitute(&[u()]), v() * y.substitute(&[u()])]),
        v() * z.substitute(&[u()]),
    ];
    let params = FamilyParams::RuledTypeC {
        x: x.to_string(),
        y: y.to_string(),
        z: z.to_string(),
    };
    finish(
        FamilyKind::RuledTypeC,
        params,
        surface(nodes, domain)?,
        Structure::RuledC { y, z },
    )
}
