use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use galileo_cli::commands::{self, Expect, Outcome, VerifyOptions};
use galileo_cli::{exit, parse_grid, CliError, Scene};
use galileo_core::verify::{ProbeId, TheoremId};

/// Curvature of surfaces in Galilean 3-space, driven by JSON scene files.
#[derive(Parser)]
#[command(name = "galileo", version)]
struct Cli {
    /// Suppress the summary line on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sampling {
    /// Grid size as NxM.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<(usize, usize)>,
    /// Output path; defaults to the scene's output path, then standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Point, frame data and curvatures at one parameter point.
    #[command(allow_negative_numbers = true)]
    Eval { scene: PathBuf, u: f64, v: f64 },
    /// Constancy report, theorem certificate or probe report.
    Verify {
        /// Scene file; omit with --probe.
        #[arg(required_unless_present = "probe")]
        scene: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        /// Constancy tolerance on the spread.
        #[arg(long)]
        tol: Option<f64>,
        /// Certify a theorem: K_affine, H_affine, K_type3, H_type3, K_type4, H_type4_cmc, minimal_ruled.
        #[arg(long, value_parser = theorem, conflicts_with = "probe")]
        theorem: Option<TheoremId>,
        /// Run a registered probe: type4, type3_non_circle, type3_circle_control.
        #[arg(long, value_parser = probe, conflicts_with = "scene")]
        probe: Option<ProbeId>,
        /// Quantity that must be constant for exit code 0.
        #[arg(long, value_enum, default_value_t = Expect::Any)]
        expect: Expect,
        /// Jitters interior grid nodes reproducibly.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Triangulable quad mesh as OBJ.
    Mesh {
        scene: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Curvature table as CSV.
    Heatmap {
        scene: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
}

fn theorem(s: &str) -> Result<TheoremId, String> {
    TheoremId::from_name(s).ok_or_else(|| format!("unknown theorem `{s}`"))
}

fn probe(s: &str) -> Result<ProbeId, String> {
    ProbeId::from_name(s).ok_or_else(|| format!("unknown probe `{s}`"))
}

fn load(path: &Path) -> Result<Scene, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Scene::from_json(&text)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let scene_path = match &cli.command {
        Command::Eval { scene, .. } | Command::Mesh { scene, .. } | Command::Heatmap { scene, .. } => Some(scene),
        Command::Verify { scene, .. } => scene.as_ref(),
    };
    let (outcome, out, scene) = match &cli.command {
        Command::Eval { scene, u, v } => (commands::eval(&load(scene)?, *u, *v)?, None, None),
        Command::Verify {
            scene,
            sampling,
            tol,
            theorem,
            probe,
            expect,
            seed,
        } => match (probe, scene) {
            (Some(id), _) => (commands::probe(*id, sampling.grid, *seed)?, sampling.out.clone(), None),
            (None, Some(path)) => {
                let scene = load(path)?;
                let opts = VerifyOptions {
                    grid: sampling.grid,
                    tol: *tol,
                    theorem: *theorem,
                    expect: *expect,
                    seed: *seed,
                };
                (commands::verify(&scene, &opts)?, sampling.out.clone(), Some(scene))
            }
            (None, None) => unreachable!("clap requires one of scene and --probe"),
        },
        Command::Mesh { scene, sampling } => {
            let scene = load(scene)?;
            (
                commands::mesh(&scene, sampling.grid)?,
                sampling.out.clone(),
                Some(scene),
            )
        }
        Command::Heatmap { scene, sampling } => {
            let scene = load(scene)?;
            (
                commands::heatmap(&scene, sampling.grid)?,
                sampling.out.clone(),
                Some(scene),
            )
        }
    };
    // scene output paths are relative to the scene file
    let dest = out.or_else(|| {
        let p = scene?.output.path?;
        let dir = scene_path?.parent().unwrap_or(Path::new(""));
        Some(dir.join(p))
    });
    commands::emit(&outcome.body, dest.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID } else { exit::OK });
        }
    };
    match run(&cli) {
        Ok(o) => {
            if !cli.quiet {
                eprintln!("{}", o.summary);
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
