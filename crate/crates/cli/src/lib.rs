//! Scene-driven front end for `galileo-core`: evaluation, verification,
//! OBJ meshes and curvature tables.

pub mod commands;
pub mod scene;

use std::path::PathBuf;

use galileo_core::GeometryError;

pub use scene::{Built, Parametric, Scene, SceneSurface};

pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const INVALID: u8 = 2;
    pub const DEGENERATE: u8 = 3;
    pub const UNWRITABLE: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("degenerate evaluation: {0}")]
    Degenerate(GeometryError),
    #[error("cannot write {path}: {source}")]
    Unwritable { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => exit::INVALID,
            CliError::Degenerate(_) => exit::DEGENERATE,
            CliError::Unwritable { .. } => exit::UNWRITABLE,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        if e.is_degeneracy() {
            CliError::Degenerate(e)
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

/// Parses `NxM` with both sides at least 2.
pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let n: usize = a.trim().parse().map_err(|_| format!("bad grid size `{a}`"))?;
    let m: usize = b.trim().parse().map_err(|_| format!("bad grid size `{b}`"))?;
    if n < 2 || m < 2 {
        return Err(format!("grid must be at least 2x2, got {n}x{m}"));
    }
    Ok((n, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("21x21"), Ok((21, 21)));
        assert_eq!(parse_grid("3X101"), Ok((3, 101)));
        assert!(parse_grid("1x5").is_err());
        assert!(parse_grid("5").is_err());
        assert!(parse_grid("ax5").is_err());
    }
}
