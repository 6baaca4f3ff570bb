//! `helmholtz-bench`: reproduces the convergence, iteration-count and
//! spectral-bound tables of the compact Helmholtz solvers.
//!
//! Exit codes: 0 success, 2 configuration error, 3 no convergence,
//! 4 resonance, 1 anything else (I/O, failed self-test).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod format;
mod run;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use compact_helmholtz::{Error, Family, Method};

use crate::format::{Format, Table};
use crate::spec::{parse_bytes, parse_complex, parse_list, parse_step, ExperimentSpec};

#[derive(Parser, Debug)]
#[command(name = "helmholtz-bench", version, about = "Benchmarks for the sixth-order compact Helmholtz solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

/// Overrides shared by every verb; each also exists as a spec-file key.
#[derive(Args, Debug, Default)]
struct Flags {
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    /// Comma-separated methods (gmres, sks, chebyshev).
    #[arg(long, alias = "methods", global = true)]
    method: Option<String>,
    /// GMRES restart length; full GMRES when absent.
    #[arg(long, global = true)]
    restart: Option<usize>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Output path stem; writes `<out>.csv`, `<out>.md` and `<out>.timing.csv`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Memory budget in bytes, with optional K/M/G suffix.
    #[arg(long = "mem-budget", global = true)]
    mem_budget: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    problem: Option<String>,
    /// Comma-separated wavenumbers.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<String>,
    /// Comma-separated grid steps such as `1/64`.
    #[arg(long, global = true)]
    h: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs the experiment described by a key = value file.
    Table { spec: PathBuf },
    /// Eigenvalue bounds of the preconditioned all-Dirichlet operator.
    Spectrum,
    /// Order of the preconditioned operator from two grids `h` and `gamma h`.
    Psi {
        problem: String,
        #[arg(allow_hyphen_values = true)]
        k: String,
        h: String,
        gamma: f64,
    },
    /// One solve with a single method.
    Solve {
        problem: String,
        #[arg(allow_hyphen_values = true)]
        k: String,
        h: String,
        method: String,
    },
    /// Matrix-free operators and fast solver against dense assembly.
    Selftest,
}

/// Marks a solve that stopped without meeting the tolerance.
#[derive(Debug)]
struct NotConverged(String);

impl std::fmt::Display for NotConverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "solver did not converge: {}", self.0)
    }
}

impl std::error::Error for NotConverged {}

impl Flags {
    fn apply(&self, spec: &mut ExperimentSpec) -> Result<(), Error> {
        if let Some(v) = self.tol {
            spec.tol = v;
        }
        if let Some(v) = self.max_iter {
            spec.max_iter = v;
        }
        if let Some(v) = &self.method {
            spec.methods = parse_list(v, |m| m.parse())?;
        }
        if let Some(v) = self.restart {
            spec.restart = Some(v);
        }
        if let Some(v) = self.format {
            spec.format = v;
        }
        if let Some(v) = &self.out {
            spec.out = Some(v.clone());
        }
        if let Some(v) = &self.mem_budget {
            spec.mem_budget = parse_bytes(v)?;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = &self.problem {
            spec.problem = v.parse()?;
        }
        if let Some(v) = &self.k {
            spec.k = parse_list(v, parse_complex)?;
        }
        if let Some(v) = &self.h {
            spec.grids = parse_list(v, parse_step)?;
        }
        Ok(())
    }
}

fn with_extension(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

/// Prints the chosen format and, with `--out`, writes both formats plus
/// the timing table next to each other.
fn emit(table: &Table, timing: Option<&Table>, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    print!("{}", table.render(format));
    if let Some(stem) = out {
        if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let write = |ext: &str, body: String| {
            let path = with_extension(stem, ext);
            std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
        };
        write(".csv", table.csv())?;
        write(".md", table.markdown())?;
        if let Some(t) = timing {
            write(".timing.csv", t.csv())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let flags = &cli.flags;
    match &cli.command {
        Command::Table { spec: path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut spec = ExperimentSpec::from_text(&text)?;
            flags.apply(&mut spec)?;
            let result = run::run_table(&spec)?;
            emit(&result.table, Some(&result.timing), spec.format, spec.out.as_deref())?;
        }
        Command::Spectrum => {
            let ks = flags
                .k
                .as_deref()
                .map(|v| parse_list(v, |s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad k `{s}`")))))
                .transpose()?;
            let hs = flags.h.as_deref().map(|v| parse_list(v, parse_step)).transpose()?;
            let table = run::run_spectrum(ks.as_deref(), hs.as_deref());
            emit(&table, None, flags.format.unwrap_or(Format::Csv), flags.out.as_deref())?;
        }
        Command::Psi { problem, k, h, gamma } => {
            let family: Family = problem.parse()?;
            let table = run::run_psi(family, parse_complex(k)?, parse_step(h)?, *gamma)?;
            emit(&table, None, flags.format.unwrap_or(Format::Csv), flags.out.as_deref())?;
        }
        Command::Solve { problem, k, h, method } => {
            let mut spec = ExperimentSpec {
                problem: problem.parse()?,
                k: vec![parse_complex(k)?],
                grids: vec![parse_step(h)?],
                ..ExperimentSpec::default()
            };
            let method: Method = method.parse()?;
            flags.apply(&mut spec)?;
            let result = run::run_solve(&spec, method)?;
            emit(&result.table, None, spec.format, spec.out.as_deref())?;
            if !result.report.converged() {
                return Err(NotConverged(run::status_name(result.report.status).into()).into());
            }
        }
        Command::Selftest => {
            let report = compact_helmholtz::oracle::selftest(flags.seed.unwrap_or(0), 3..=8)?;
            let mut table = Table::new(&["check", "max_rel_err", "tol", "passed"]);
            for c in &report.checks {
                table.push(vec![
                    c.name.clone(),
                    format::sig6(c.max_rel_err),
                    format::sig6(c.tol),
                    c.passed.to_string(),
                ]);
            }
            emit(&table, None, flags.format.unwrap_or(Format::Csv), flags.out.as_deref())?;
            if !report.passed() {
                anyhow::bail!("self-test failed");
            }
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<NotConverged>().is_some() {
        return 3;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Resonance { .. }) => 4,
        Some(
            Error::Config(_)
            | Error::PointsPerWavelength { .. }
            | Error::InvalidParameter(_)
            | Error::MissingDerivative { .. }
            | Error::MissingFaceDerivative { .. }
            | Error::ShapeMismatch { .. }
            | Error::SizeGuard { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
