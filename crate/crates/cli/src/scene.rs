//! Scene files: one surface plus sampling and output options, as JSON.

use std::path::PathBuf;

use galileo_core::{FamilyParams, GeometryError, Rect, Surface64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// A surface given directly by its coordinate functions of `(u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parametric {
    pub x: String,
    pub y: String,
    pub z: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneSurface {
    Parametric(Parametric),
    Family(FamilyParams),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Where `verify`, `mesh` and `heatmap` write; `--out` overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub surface: SceneSurface,
    pub domain: Option<Rect<f64>>,
    pub grid: Option<(usize, usize)>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub description: Option<String>,
    pub output: OutputOptions,
}

const OPTION_KEYS: [&str; 6] = ["domain", "grid", "tol", "seed", "description", "output"];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Options {
    #[serde(default)]
    domain: Option<Rect<f64>>,
    #[serde(default)]
    grid: Option<(usize, usize)>,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    output: OutputOptions,
}

fn invalid(msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("scene: {msg}"))
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene, CliError> {
        let value: Value = serde_json::from_str(text).map_err(invalid)?;
        let Value::Object(mut map) = value else {
            return Err(invalid("expected a JSON object"));
        };
        let mut options = serde_json::Map::new();
        for key in OPTION_KEYS {
            if let Some(v) = map.remove(key) {
                options.insert(key.to_string(), v);
            }
        }
        let options: Options = serde_json::from_value(Value::Object(options)).map_err(invalid)?;
        let surface = match map.get("kind").and_then(Value::as_str) {
            Some("parametric") => {
                map.remove("kind");
                SceneSurface::Parametric(serde_json::from_value(Value::Object(map)).map_err(invalid)?)
            }
            Some(_) => SceneSurface::Family(serde_json::from_value(Value::Object(map)).map_err(invalid)?),
            None => return Err(invalid("missing string field `kind`")),
        };
        if let Some((nu, nv)) = options.grid {
            if nu < 2 || nv < 2 {
                return Err(invalid(format!("grid must be at least 2x2, got {nu}x{nv}")));
            }
        }
        if let Some(t) = options.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid(format!("tol must be positive, got {t}")));
            }
        }
        if let Some(d) = options.domain {
            Rect::new(d.u, d.v).map_err(CliError::from)?;
        }
        Ok(Scene {
            surface,
            domain: options.domain,
            grid: options.grid,
            tol: options.tol,
            seed: options.seed,
            description: options.description,
            output: options.output,
        })
    }

    pub fn to_json(&self) -> String {
        let mut map = match &self.surface {
            SceneSurface::Parametric(p) => {
                let mut m = serde_json::Map::new();
                m.insert("kind".into(), "parametric".into());
                if let Value::Object(rest) = serde_json::to_value(p).expect("plain strings") {
                    m.extend(rest);
                }
                m
            }
            SceneSurface::Family(f) => match serde_json::to_value(f).expect("family params serialize") {
                Value::Object(m) => m,
                _ => unreachable!(),
            },
        };
        let options = Options {
            domain: self.domain,
            grid: self.grid,
            tol: self.tol,
            seed: self.seed,
            description: self.description.clone(),
            output: self.output.clone(),
        };
        if let Value::Object(o) = serde_json::to_value(options).expect("options serialize") {
            map.extend(o.into_iter().filter(|(_, v)| !v.is_null()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
        s.push('\n');
        s
    }

    pub fn kind_name(&self) -> String {
        match &self.surface {
            SceneSurface::Parametric(_) => "parametric".into(),
            SceneSurface::Family(f) => match serde_json::to_value(f.kind()) {
                Ok(Value::String(s)) => s,
                _ => format!("{:?}", f.kind()),
            },
        }
    }

    /// Domain of the scene, falling back to the family default or the unit square.
    pub fn effective_domain(&self) -> Rect<f64> {
        match (&self.domain, &self.surface) {
            (Some(d), _) => *d,
            (None, SceneSurface::Family(f)) => f.default_domain(),
            (None, SceneSurface::Parametric(_)) => Rect {
                u: (-1.0, 1.0),
                v: (-1.0, 1.0),
            },
        }
    }

    pub fn build(&self) -> Result<Built, GeometryError> {
        match &self.surface {
            SceneSurface::Parametric(p) => {
                let s = Surface64::parse(["u", "v"], [&p.x, &p.y, &p.z], self.effective_domain())?;
                Ok(Built::Surface(s))
            }
            SceneSurface::Family(f) => Ok(Built::Family(Box::new(f.build::<f64>(self.domain)?))),
        }
    }
}

pub enum Built {
    Surface(Surface64),
    Family(Box<galileo_core::Family64>),
}

impl Built {
    pub fn surface(&self) -> &Surface64 {
        match self {
            Built::Surface(s) => s,
            Built::Family(f) => f.surface(),
        }
    }
}
