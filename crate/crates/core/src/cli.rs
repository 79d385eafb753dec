//! Command-line front end: `verify`, `mesh`, `obstruction`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::curve::trigonal_obstruction;
use crate::error::{Error, Result};
use crate::lattice::LatticeData;
use crate::mesh::{build_mesh_with, export_obj, MeshOptions, Projection, DEFAULT_RADIUS};
use crate::report::{run_all, ReportConfig, Section};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "trigonal",
    version,
    about = "Verify and mesh the trigonal genus-10 minimal surface w^3 = z^12 - 1"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Build an immersed mesh and write OBJ plus an attribute side-car.
    Mesh(MeshArgs),
    /// Decide whether a trigonal genus admits the construction.
    Obstruction(ObstructionArgs),
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Quadrature tolerance for every integrated item.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report path (default: report.json).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Glob over item names, e.g. 'lattice.*'.
    #[arg(long)]
    pub only: Option<String>,
    /// TOML file with defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads; 1 gives bitwise-reproducible reports.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Leave per-item runtimes out of the report.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, clap::Args)]
pub struct MeshArgs {
    /// Associate-family angle in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Outer radius of the planar disk in the z-plane.
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    /// Refinement level; each level doubles the ring count.
    #[arg(long, default_value_t = 1)]
    pub refine: u32,
    /// Three of the four coordinates to keep, e.g. 124.
    #[arg(long, default_value = "123")]
    pub project: String,
    /// OBJ path; the side-car is written next to it with extension .attr.
    #[arg(long, default_value = "surface.obj")]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct ObstructionArgs {
    #[arg(long)]
    pub genus: u64,
}

/// Contents of `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
    pub jobs: Option<usize>,
    pub timings: Option<bool>,
    /// Alternative matrix file in the bundled format.
    pub lattice_matrices: Option<PathBuf>,
    pub sections: Option<Vec<String>>,
    pub sweep_bound: Option<i64>,
    pub symmetry_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

fn parse_section(s: &str) -> Result<Section> {
    Ok(match s {
        "periods" => Section::Periods,
        "lattice" => Section::Lattice,
        "associate" => Section::Associate,
        "homology" => Section::Homology,
        "symmetry" => Section::Symmetry,
        "curve" => Section::Curve,
        "obstruction" => Section::Obstruction,
        _ => return Err(Error::Parse(format!("unknown section {s:?}"))),
    })
}

/// Verify settings after merging the config file under the flags.
#[derive(Debug)]
pub struct VerifyPlan {
    pub report: ReportConfig,
    pub out: PathBuf,
    pub jobs: Option<usize>,
}

pub fn plan_verify(args: &VerifyArgs) -> Result<VerifyPlan> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut report = ReportConfig {
        tolerance: args.tol.or(file.tol),
        only: args.only.clone().or(file.only),
        timings: !args.no_timings && file.timings.unwrap_or(true),
        ..ReportConfig::default()
    };
    if let Some(p) = &file.lattice_matrices {
        // relative to the config file
        let base = args.config.as_deref().and_then(Path::parent).unwrap_or(Path::new(""));
        report.lattice_data = LatticeData::parse(&std::fs::read_to_string(base.join(p))?)?;
    }
    if let Some(s) = &file.sections {
        report.sections = s.iter().map(|x| parse_section(x)).collect::<Result<_>>()?;
    }
    if let Some(b) = file.sweep_bound {
        report.sweep_bound = b;
    }
    if let Some(n) = file.symmetry_samples {
        report.symmetry_samples = n;
    }
    if let Some(s) = file.seed {
        report.seed = s;
    }
    report.validate()?;
    let jobs = args.jobs.or(file.jobs);
    if jobs == Some(0) {
        return Err(Error::Domain("--jobs must be at least 1".into()));
    }
    Ok(VerifyPlan {
        report,
        out: args
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("report.json")),
        jobs,
    })
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let plan = match plan_verify(args) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let run = || run_all(&plan.report);
    let result = match plan.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                let _ = writeln!(err, "config error: {e}");
                return EXIT_CONFIG;
            }
        },
        None => run(),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    if let Err(e) = report.write(&plan.out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAILURE;
    }
    for it in &report.items {
        let status = if it.status == crate::report::Status::Pass {
            "PASS"
        } else {
            "FAIL"
        };
        let _ = writeln!(out, "{status} {}", it.name);
    }
    let failed = report.failed().len();
    let _ = writeln!(
        out,
        "{} of {} items passed; report written to {}",
        report.items.len() - failed,
        report.items.len(),
        plan.out.display()
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn mesh(args: &MeshArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let projection = match Projection::parse(&args.project) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "config error: {e}");
            return EXIT_CONFIG;
        }
    };
    if !(args.radius > 0.0 && args.radius.is_finite()) || !args.theta.is_finite() {
        let _ = writeln!(err, "config error: need radius > 0 and finite theta");
        return EXIT_CONFIG;
    }
    let opts = MeshOptions {
        radius: args.radius,
        refinement: args.refine,
        theta: args.theta,
        ..MeshOptions::default()
    };
    let m = match build_mesh_with(&opts) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    for w in &m.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match export_obj(&m, projection, &args.out) {
        Ok(side) => {
            let _ = writeln!(
                out,
                "{} vertices, {} triangles ({} omitted across monodromy); wrote {} and {}",
                m.vertices.len(),
                m.triangles.len(),
                m.omitted_triangles,
                args.out.display(),
                side.display()
            );
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match &cli.command {
        Command::Verify(a) => verify(a, out, err),
        Command::Mesh(a) => mesh(a, out, err),
        Command::Obstruction(a) => {
            let _ = writeln!(out, "{}", trigonal_obstruction(a.genus));
            EXIT_OK
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run(std::iter::once("trigonal").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn obstruction_examples() {
        assert_eq!(call(&["obstruction", "--genus", "10"]).1.trim(), "Admissible(3)");
        let (c, o, _) = call(&["obstruction", "--genus", "2"]);
        assert_eq!(c, 0);
        assert!(o.contains("not trigonal"), "{o}");
        assert!(call(&["obstruction", "--genus", "8"]).1.contains("2 mod 3"));
        assert_eq!(call(&["obstruction", "--genus", "ten"]).0, EXIT_CONFIG);
        assert_eq!(call(&["obstruction", "--genus", "-1"]).0, EXIT_CONFIG);
    }

    #[test]
    fn bad_projection_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.obj");
        let (c, _, e) = call(&["mesh", "--project", "125", "--out", p.to_str().unwrap()]);
        assert_eq!(c, EXIT_CONFIG, "{e}");
        assert!(!p.exists());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(
            &cfg,
            "tol = 1e-9\nonly = \"curve.*\"\njobs = 2\nsections = [\"curve\"]\n",
        )
        .unwrap();
        let args = VerifyArgs {
            tol: None,
            out: None,
            only: Some("lattice.*".into()),
            config: Some(cfg),
            jobs: None,
            no_timings: true,
        };
        let plan = plan_verify(&args).unwrap();
        assert_eq!(plan.report.tolerance, Some(1e-9));
        assert_eq!(plan.report.only.as_deref(), Some("lattice.*"));
        assert_eq!(plan.report.sections, vec![Section::Curve]);
        assert_eq!(plan.jobs, Some(2));
        assert!(!plan.report.timings);
    }

    #[test]
    fn malformed_config_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "tolerance = 3\n").unwrap();
        let out = dir.path().join("r.json");
        let (c, _, e) = call(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(c, EXIT_CONFIG);
        assert!(e.contains("config error"), "{e}");
        std::fs::write(&cfg, "sections = [\"nonsense\"]\n").unwrap();
        let (c, _, _) = call(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(c, EXIT_CONFIG);
        assert_eq!(
            call(&["verify", "--tol", "2", "--out", out.to_str().unwrap()]).0,
            EXIT_CONFIG
        );
        assert_eq!(
            call(&["verify", "--jobs", "0", "--out", out.to_str().unwrap()]).0,
            EXIT_CONFIG
        );
    }

    #[test]
    fn help_documents_every_flag() {
        let (c, o, _) = call(&["verify", "--help"]);
        assert_eq!(c, 0);
        for f in ["--tol", "--out", "--only", "--config", "--jobs", "--no-timings"] {
            assert!(o.contains(f), "{f}");
        }
        let (_, o, _) = call(&["mesh", "--help"]);
        for f in ["--theta", "--radius", "--refine", "--project", "--out"] {
            assert!(o.contains(f), "{f}");
        }
    }
}
