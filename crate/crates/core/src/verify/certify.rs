use serde::{Deserialize, Serialize};

use super::{default_tol, sample_family, CurvatureReport, MAX_FAILURE_FRACTION};
use crate::error::GeometryError;
use crate::scalar::{linspace, Scalar};
use crate::surfaces::Rect;
use crate::translation::{beta_profiles, FamilyKind, FamilyParams, SurfaceFamily};

/// Bound on closed form vs. general machinery.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
pub const FLAT_TOL: f64 = 1e-12;
pub const MINIMAL_TOL: f64 = 1e-9;
pub const CIRCLE_H_TOL: f64 = 1e-9;
pub const RADIUS_TOL: f64 = 1e-12;
pub const IDENTITY_TOL: f64 = 1e-5;
pub const DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "K_affine")]
    KAffine,
    #[serde(rename = "H_affine")]
    HAffine,
    #[serde(rename = "K_type3")]
    KType3,
    #[serde(rename = "H_type3")]
    HType3,
    #[serde(rename = "K_type4")]
    KType4,
    #[serde(rename = "H_type4_cmc")]
    HType4Cmc,
    #[serde(rename = "minimal_ruled")]
    MinimalRuled,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::KAffine,
        TheoremId::HAffine,
        TheoremId::KType3,
        TheoremId::HType3,
        TheoremId::KType4,
        TheoremId::HType4Cmc,
        TheoremId::MinimalRuled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::KAffine => "K_affine",
            TheoremId::HAffine => "H_affine",
            TheoremId::KType3 => "K_type3",
            TheoremId::HType3 => "H_type3",
            TheoremId::KType4 => "K_type4",
            TheoremId::HType4Cmc => "H_type4_cmc",
            TheoremId::MinimalRuled => "minimal_ruled",
        }
    }

    pub fn from_name(name: &str) -> Option<TheoremId> {
        Self::ALL.into_iter().find(|t| t.name() == name)
    }

    fn kinds(self) -> &'static [FamilyKind] {
        match self {
            TheoremId::KAffine => &[FamilyKind::ConstantKType1, FamilyKind::Affine, FamilyKind::Standard],
            TheoremId::HAffine => &[FamilyKind::CmcCylinderBI, FamilyKind::CmcCylinderBII1],
            TheoremId::KType3 => &[FamilyKind::Type3],
            TheoremId::HType3 => &[FamilyKind::Type3Circle],
            TheoremId::KType4 => &[FamilyKind::Type4, FamilyKind::Standard],
            TheoremId::HType4Cmc => &[FamilyKind::Type4CmcOde],
            TheoremId::MinimalRuled => &[FamilyKind::ParabolicRuled, FamilyKind::RuledTypeC],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// One of `<`, `>`, `<=`.
    pub relation: &'static str,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, "<", bound, value < bound)
    }

    fn above(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, ">", bound, value > bound)
    }

    fn new(name: &str, value: f64, relation: &'static str, bound: f64, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            value,
            relation,
            bound,
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub claim: String,
    pub family: FamilyParams,
    pub domain: Rect<f64>,
    pub grid: (usize, usize),
    pub checks: Vec<Check>,
    pub pass: bool,
    pub report: CurvatureReport,
}

/// Builds the family from `params` and certifies it.
pub fn certify_theorem(
    id: TheoremId,
    params: &FamilyParams,
    domain: Option<Rect<f64>>,
    nu: usize,
    nv: usize,
) -> Result<Certificate, GeometryError> {
    let family = params.build::<f64>(domain)?;
    certify_family(id, &family, nu, nv)
}

fn max_abs(r: &CurvatureReport, pick: impl Fn(&super::NodeValues) -> f64) -> f64 {
    r.nodes.iter().map(|n| pick(n).abs()).fold(0.0, f64::max)
}

fn spread(q: &Option<super::QuantityReport>) -> f64 {
    q.map_or(f64::NAN, |q| q.stats.spread)
}

/// Samples the family and checks the theorem's quantitative claim.
pub fn certify_family<T: Scalar>(
    id: TheoremId,
    family: &SurfaceFamily<T>,
    nu: usize,
    nv: usize,
) -> Result<Certificate, GeometryError> {
    let kind = family.kind();
    if !id.kinds().contains(&kind) {
        return Err(GeometryError::precondition(
            format!("theorem {} does not apply to a {kind:?} family", id.name()),
            &[],
        ));
    }
    let report = sample_family(family, nu, nv, default_tol(kind), None)?;
    let total = (nu * nv) as f64;
    let mut checks = vec![Check::new(
        "failed_node_fraction",
        report.failures.len() as f64 / total,
        "<=",
        MAX_FAILURE_FRACTION,
        report.usable,
    )];
    if let Some(cc) = report.cross_check {
        checks.push(Check::below(
            "closed_form_k_residual",
            cc.max_k_residual,
            CLOSED_FORM_TOL,
        ));
        checks.push(Check::below(
            "closed_form_h_residual",
            cc.max_h_residual,
            CLOSED_FORM_TOL,
        ));
    }
    let tol = report.tol;
    let k_abs = max_abs(&report, |n| n.k);
    let h_abs = max_abs(&report, |n| n.h_paper);
    let claim = match (id, family.params()) {
        (TheoremId::KAffine, &FamilyParams::ConstantKType1 { k0, .. }) => {
            checks.push(Check::below("spread_k", spread(&report.k), tol));
            checks.push(Check::below("max_abs_k_minus_k0", max_abs(&report, |n| n.k - k0), tol));
            format!("K is constant and equal to K0 = {k0}")
        }
        (TheoremId::KAffine | TheoremId::KType3 | TheoremId::KType4, _) => {
            checks.push(Check::below("max_abs_k", k_abs, FLAT_TOL));
            "K vanishes identically (generalized cylinder)".to_string()
        }
        (TheoremId::HAffine, &FamilyParams::CmcCylinderBI { h0, .. } | &FamilyParams::CmcCylinderBII1 { h0, .. }) => {
            checks.push(Check::below("spread_h_paper", spread(&report.h_paper), tol));
            checks.push(Check::below(
                "max_abs_h_minus_h0",
                max_abs(&report, |n| n.h_paper - h0),
                tol,
            ));
            format!("H is constant and equal to H0 = {h0}")
        }
        (TheoremId::HType3, &FamilyParams::Type3Circle { h0, .. }) => {
            checks.push(Check::below("spread_h_paper", spread(&report.h_paper), CIRCLE_H_TOL));
            checks.push(Check::below(
                "max_abs_h_minus_abs_h0",
                max_abs(&report, |n| n.h_paper.abs() - h0.abs()),
                CIRCLE_H_TOL,
            ));
            let (radius, ode) = circle_residuals(family, h0)?;
            checks.push(Check::below("radius_error", radius, RADIUS_TOL));
            checks.push(Check::below("circle_ode_residual", ode, CIRCLE_H_TOL));
            format!(
                "H is constant, |H| = {}, and β is a circle of radius {}",
                h0.abs(),
                1.0 / h0.abs()
            )
        }
        (TheoremId::HType4Cmc, &FamilyParams::Type4CmcOde { h0, .. }) => {
            checks.push(Check::below("spread_h_paper", spread(&report.h_paper), tol));
            checks.push(Check::below(
                "max_abs_h_minus_h0",
                max_abs(&report, |n| n.h_paper - h0),
                tol,
            ));
            let d = family
                .ode_diagnostics()
                .ok_or_else(|| GeometryError::precondition("family carries no ODE diagnostics", &[]))?;
            checks.push(Check::below("identity_residual", d.identity_residual, IDENTITY_TOL));
            checks.push(Check::below("step_halving_drift", d.step_halving_drift, DRIFT_TOL));
            format!("H is constant and equal to H0 = {h0}")
        }
        (TheoremId::MinimalRuled, _) => {
            checks.push(Check::below("max_abs_h_paper", h_abs, MINIMAL_TOL));
            checks.push(Check::above("max_abs_k", k_abs, 0.0));
            "H vanishes identically and K does not".to_string()
        }
        _ => unreachable!("kinds() filters the combinations"),
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(Certificate {
        theorem: id,
        claim,
        family: family.params().clone(),
        domain: family.surface().domain().to_f64(),
        grid: (nu, nv),
        checks,
        pass,
        report,
    })
}

/// Distance of `(g1, g2)` from the origin versus `1/|H0|`, and the
/// residual of `g''' + H0² g' = 0` for both profiles, over the v-range.
fn circle_residuals<T: Scalar>(family: &SurfaceFamily<T>, h0: f64) -> Result<(f64, f64), GeometryError> {
    let (g1, g2) =
        beta_profiles(family).ok_or_else(|| GeometryError::precondition("family has no isotropic profile", &[]))?;
    let d = family.surface().domain();
    let mut radius = 0.0f64;
    let mut ode = 0.0f64;
    let h2 = T::lit(h0 * h0);
    for v in linspace(d.v.0, d.v.1, 201) {
        let a = g1
            .eval_jet1(v)
            .map_err(|e| GeometryError::eval(&[v.to_f64_lossy()], e))?;
        let b = g2
            .eval_jet1(v)
            .map_err(|e| GeometryError::eval(&[v.to_f64_lossy()], e))?;
        let r = a.c0.hypot(b.c0).to_f64_lossy();
        radius = radius.max((r - 1.0 / h0.abs()).abs());
        ode = ode.max((a.c3 + h2 * a.c1).abs().to_f64_lossy());
        ode = ode.max((b.c3 + h2 * b.c1).abs().to_f64_lossy());
    }
    Ok((radius, ode))
}
