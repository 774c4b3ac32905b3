use serde::{Deserialize, Serialize};

use super::{default_tol, sample_family, CurvatureReport};
use crate::error::GeometryError;
use crate::surfaces::Rect;
use crate::translation::FamilyParams;

/// Registry lower bound on spread for the non-constancy probes.
pub const PROBE_MIN_SPREAD: f64 = 0.1;
/// Registry upper bound on spread(H_paper) for the control.
pub const CONTROL_MAX_SPREAD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeId {
    Type4,
    Type3NonCircle,
    Type3CircleControl,
}

impl ProbeId {
    pub const ALL: [ProbeId; 3] = [ProbeId::Type4, ProbeId::Type3NonCircle, ProbeId::Type3CircleControl];

    pub fn name(self) -> &'static str {
        match self {
            ProbeId::Type4 => "type4",
            ProbeId::Type3NonCircle => "type3_non_circle",
            ProbeId::Type3CircleControl => "type3_circle_control",
        }
    }

    pub fn from_name(name: &str) -> Option<ProbeId> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "expect", rename_all = "snake_case")]
pub enum Expectation {
    /// spread(K) and spread(H_paper) both above the bound.
    NonConstant { min_spread: f64 },
    /// spread(H_paper) below the bound.
    ConstantH { max_spread: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSpec {
    pub id: ProbeId,
    pub description: &'static str,
    pub params: FamilyParams,
    pub domain: Rect<f64>,
    pub expectation: Expectation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub probe: ProbeId,
    pub description: &'static str,
    pub grid: (usize, usize),
    pub seed: Option<u64>,
    pub spread_k: f64,
    pub spread_h_paper: f64,
    pub min_abs_h_paper: f64,
    pub expectation: Expectation,
    pub pass: bool,
    pub report: CurvatureReport,
}

pub fn probe_registry() -> Vec<ProbeSpec> {
    let rect = |u, v| Rect::new(u, v).expect("registry domain");
    vec![
        ProbeSpec {
            id: ProbeId::Type4,
            description: "type 4 with f1 = u^2, f2 = u^3, g = v^2, a = 0",
            params: FamilyParams::Type4 {
                f1: "u^2".into(),
                f2: "u^3".into(),
                g: "v^2".into(),
                a: 0.0,
            },
            domain: rect((0.5, 2.0), (-1.0, 1.0)),
            expectation: Expectation::NonConstant {
                min_spread: PROBE_MIN_SPREAD,
            },
        },
        ProbeSpec {
            id: ProbeId::Type3NonCircle,
            description: "type 3 with f = (u^2, u^3) and a non-circular unit-speed g",
            params: FamilyParams::Type3 {
                f1: "u^2".into(),
                f2: "u^3".into(),
                g1: "v/2*sqrt(1-v^2)+asin(v)/2".into(),
                g2: "v^2/2".into(),
            },
            domain: rect((-1.0, 1.0), (-0.9, 0.9)),
            expectation: Expectation::NonConstant {
                min_spread: PROBE_MIN_SPREAD,
            },
        },
        ProbeSpec {
            id: ProbeId::Type3CircleControl,
            description: "type 3 with f = (u^2, u^3) and g a circle of radius 1",
            params: FamilyParams::Type3Circle {
                h0: 1.0,
                f1: "u^2".into(),
                f2: "u^3".into(),
            },
            domain: rect((-1.0, 1.0), (-1.0, 1.0)),
            expectation: Expectation::ConstantH {
                max_spread: CONTROL_MAX_SPREAD,
            },
        },
    ]
}

/// Samples a registered probe family and checks its registry bound.
pub fn probe_nonexistence(id: ProbeId, nu: usize, nv: usize, seed: Option<u64>) -> Result<ProbeReport, GeometryError> {
    let spec = probe_registry()
        .into_iter()
        .find(|p| p.id == id)
        .ok_or_else(|| GeometryError::precondition(format!("probe {} is not registered", id.name()), &[]))?;
    let family = spec.params.build::<f64>(Some(spec.domain))?;
    let report = sample_family(&family, nu, nv, default_tol(family.kind()), seed)?;
    let spread_k = report.k.map_or(f64::NAN, |q| q.stats.spread);
    let spread_h_paper = report.h_paper.map_or(f64::NAN, |q| q.stats.spread);
    let min_abs_h_paper = report
        .nodes
        .iter()
        .map(|n| n.h_paper.abs())
        .fold(f64::INFINITY, f64::min);
    let pass = report.usable
        && match spec.expectation {
            Expectation::NonConstant { min_spread } => spread_k > min_spread && spread_h_paper > min_spread,
            Expectation::ConstantH { max_spread } => spread_h_paper < max_spread,
        };
    Ok(ProbeReport {
        probe: id,
        description: spec.description,
        grid: (nu, nv),
        seed,
        spread_k,
        spread_h_paper,
        min_abs_h_paper,
        expectation: spec.expectation,
        pass,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_passes() {
        for id in ProbeId::ALL {
            let r = probe_nonexistence(id, 21, 21, None).unwrap();
            assert!(r.pass, "{id:?}: K {} H {}", r.spread_k, r.spread_h_paper);
            assert!(r.report.failures.is_empty());
        }
    }

    #[test]
    fn seeded_probe() {
        let a = probe_nonexistence(ProbeId::Type4, 11, 11, Some(7)).unwrap();
        let b = probe_nonexistence(ProbeId::Type4, 11, 11, Some(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
        let c = probe_nonexistence(ProbeId::Type3CircleControl, 11, 11, Some(3)).unwrap();
        assert!(c.pass);
    }

    #[test]
    fn names() {
        for id in ProbeId::ALL {
            assert_eq!(ProbeId::from_name(id.name()), Some(id));
        }
        assert_eq!(ProbeId::from_name("type5"), None);
    }
}
