use std::fmt::Write as _;
use std::path::Path;

use galileo_core::galilean::Point3;
use galileo_core::surfaces::FundamentalData;
use galileo_core::verify::{self, certify_family, probe_nonexistence, CurvatureReport, ProbeId, TheoremId};
use galileo_core::{Curvatures, FamilyKind};
use serde::Serialize;

use crate::scene::{Built, Scene};
use crate::{exit, CliError};

pub const DEFAULT_GRID: (usize, usize) = (verify::DEFAULT_GRID, verify::DEFAULT_GRID);

/// Result of a command: the text to write and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
    /// One line for standard error.
    pub summary: String,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct EvalOutput {
    u: f64,
    v: f64,
    point: Point3<f64>,
    #[serde(flatten)]
    fundamental: FundamentalData<f64>,
    #[serde(flatten)]
    curvatures: Curvatures<f64>,
}

pub fn eval(scene: &Scene, u: f64, v: f64) -> Result<Outcome, CliError> {
    let built = scene.build()?;
    let s = built.surface();
    if !s.domain().contains(u, v) {
        let d = s.domain();
        return Err(CliError::Invalid(format!(
            "({u}, {v}) lies outside the domain [{}, {}] x [{}, {}]",
            d.u.0, d.u.1, d.v.0, d.v.1
        )));
    }
    let fundamental = s.fundamental(u, v)?;
    let out = EvalOutput {
        u,
        v,
        point: s.point(u, v)?,
        fundamental,
        curvatures: fundamental.curvatures(),
    };
    Ok(Outcome {
        body: json(&out),
        code: exit::OK,
        summary: format!("K = {:e}, H = {:e}", out.curvatures.k, out.curvatures.h_paper),
    })
}

/// What a plain `verify` run requires to be constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// K or H_paper.
    #[default]
    Any,
    K,
    H,
    Both,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub grid: Option<(usize, usize)>,
    pub tol: Option<f64>,
    pub theorem: Option<TheoremId>,
    pub expect: Expect,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    kind: String,
    expect: Expect,
    pass: bool,
    #[serde(flatten)]
    report: &'a CurvatureReport,
}

fn constant(q: &Option<verify::QuantityReport>) -> bool {
    q.is_some_and(|q| q.verdict.is_constant())
}

pub fn verify(scene: &Scene, opts: &VerifyOptions) -> Result<Outcome, CliError> {
    let (nu, nv) = opts.grid.or(scene.grid).unwrap_or(DEFAULT_GRID);
    let built = scene.build()?;
    if let Some(id) = opts.theorem {
        if opts.tol.is_some() {
            return Err(CliError::Invalid("--tol cannot be combined with --theorem".into()));
        }
        let Built::Family(fam) = &built else {
            return Err(CliError::Invalid(format!(
                "theorem {} needs a surface family scene, not a parametric one",
                id.name()
            )));
        };
        let cert = certify_family(id, fam, nu, nv)?;
        let failed: Vec<&str> = cert
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        let summary = if cert.pass {
            format!("{}: certified on {nu}x{nv}", id.name())
        } else {
            format!("{}: failed checks {}", id.name(), failed.join(", "))
        };
        return Ok(Outcome {
            body: json(&cert),
            code: if cert.pass { exit::OK } else { exit::FAILED },
            summary,
        });
    }
    let kind = match &built {
        Built::Family(f) => f.kind(),
        Built::Surface(_) => FamilyKind::Standard,
    };
    let tol = opts.tol.or(scene.tol).unwrap_or_else(|| match &built {
        Built::Family(_) => verify::default_tol(kind),
        Built::Surface(_) => verify::DEFAULT_TOL,
    });
    let seed = opts.seed.or(scene.seed);
    let report = match &built {
        Built::Family(f) => verify::sample_family(f, nu, nv, tol, seed)?,
        Built::Surface(s) => verify::sample_seeded(s, nu, nv, tol, seed)?,
    };
    let (k, h) = (constant(&report.k), constant(&report.h_paper));
    let pass = report.usable
        && match opts.expect {
            Expect::Any => k || h,
            Expect::K => k,
            Expect::H => h,
            Expect::Both => k && h,
        };
    let summary = if !report.usable {
        format!("unusable report: {} of {} nodes failed", report.failures.len(), nu * nv)
    } else {
        format!(
            "K {}, H {} on {nu}x{nv} (tol {tol:e})",
            if k { "constant" } else { "not constant" },
            if h { "constant" } else { "not constant" }
        )
    };
    Ok(Outcome {
        body: json(&VerifyOutput {
            kind: scene.kind_name(),
            expect: opts.expect,
            pass,
            report: &report,
        }),
        code: if pass { exit::OK } else { exit::FAILED },
        summary,
    })
}

pub fn probe(id: ProbeId, grid: Option<(usize, usize)>, seed: Option<u64>) -> Result<Outcome, CliError> {
    let (nu, nv) = grid.unwrap_or(DEFAULT_GRID);
    let r = probe_nonexistence(id, nu, nv, seed)?;
    Ok(Outcome {
        summary: format!(
            "probe {}: spread(K) = {:e}, spread(H) = {:e}, {}",
            id.name(),
            r.spread_k,
            r.spread_h_paper,
            if r.pass { "as expected" } else { "bound violated" }
        ),
        code: if r.pass { exit::OK } else { exit::FAILED },
        body: json(&r),
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// OBJ with one vertex per grid node (u outermost) and quad faces.
pub fn mesh(scene: &Scene, grid: Option<(usize, usize)>) -> Result<Outcome, CliError> {
    let (nu, nv) = grid.or(scene.grid).unwrap_or(DEFAULT_GRID);
    let built = scene.build()?;
    let s = built.surface();
    let mut out = format!("# galileo mesh {nu}x{nv}\n");
    for (u, v) in s.domain().grid(nu, nv) {
        let p = s.point(u, v)?;
        writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z)).unwrap();
    }
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j + 1;
            writeln!(out, "f {} {} {} {}", a, a + nv, a + nv + 1, a + 1).unwrap();
        }
    }
    Ok(Outcome {
        body: out,
        code: exit::OK,
        summary: format!("{} vertices, {} faces", nu * nv, (nu - 1) * (nv - 1)),
    })
}

pub const HEATMAP_HEADER: &str = "u,v,x,y,z,K,H_canonical,H_paper";

/// CSV of position and curvature per grid node; degenerate nodes get NaN curvature.
pub fn heatmap(scene: &Scene, grid: Option<(usize, usize)>) -> Result<Outcome, CliError> {
    let (nu, nv) = grid.or(scene.grid).unwrap_or(DEFAULT_GRID);
    let built = scene.build()?;
    let s = built.surface();
    let mut out = format!("{HEATMAP_HEADER}\n");
    let mut degenerate = 0;
    for (u, v) in s.domain().grid(nu, nv) {
        let p = s.point(u, v)?;
        let c = match s.curvatures(u, v) {
            Ok(c) => c,
            Err(e) if e.is_degeneracy() => {
                degenerate += 1;
                Curvatures {
                    k: f64::NAN,
                    h_canonical: f64::NAN,
                    h_paper: f64::NAN,
                }
            }
            Err(e) => return Err(e.into()),
        };
        let row = [u, v, p.x, p.y, p.z, c.k, c.h_canonical, c.h_paper].map(num);
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(Outcome {
        body: out,
        code: exit::OK,
        summary: format!("{} rows, {degenerate} degenerate", nu * nv),
    })
}

/// Writes to `path`, or to standard output when `None`.
pub fn emit(body: &str, path: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Unwritable {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Unwritable {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
