//! Command line front end: `sample-paths`, `verify` and `plotdata`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! configuration and I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::analytic::{g_snob, g_thinlayer, psi_ebm, psi_thinlayer_unstretched};
use crate::error::{invalid, Result, SnobError};
use crate::random::StreamFactory;
use crate::sim::snob_path;
use crate::space::{GPoint, Side, SnobParams, TimeGrid};
use crate::verify::{run_suite, Suite, SuiteReport, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "snob", version, about = "Snapping out Brownian motion: sampling and verification")]
pub struct Cli {
    /// Worker threads (default: all cores). Does not change any output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate trajectories on a uniform grid and write them as CSV.
    SamplePaths(SamplePathsArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Write kernel curves or thin-layer convergence tables as CSV.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "plus", alias = "+")]
    Plus,
    #[value(name = "minus", alias = "-")]
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

/// Starting point: distance from the barrier and side.
#[derive(Debug, Clone, Args)]
pub struct StartArgs {
    #[arg(long, default_value_t = 0.5)]
    pub x0: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Plus)]
    pub side: SideArg,
}

impl StartArgs {
    fn point(&self) -> Result<GPoint> {
        GPoint::new(self.side.into(), self.x0)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplePathsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Number of steps per path.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = 10)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// One of: ebm-lifetime, resolvent, semigroup, interface, thin-layer, ck, distributions, or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 100_000)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl VerifyArgs {
    pub fn config(&self) -> Result<VerifyConfig> {
        let cfg = VerifyConfig {
            kappa: self.kappa,
            alpha: self.alpha,
            dt: self.dt,
            t: self.t,
            x0: self.start.point()?,
            eps: self.eps,
            n_paths: self.paths,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    /// `y -> g(x, y)` over a range of `y` in the embedded coordinate.
    Kernel,
    /// `|psi_eps(x) - psi(x)|` for each requested layer width.
    Psi,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[command(flatten)]
    pub start: StartArgs,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub y_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub y_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub y_step: f64,
    /// Layer widths. For `kernel`, adds one thin-layer curve per width.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] SnobError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

fn execute(cli: &Cli) -> std::result::Result<i32, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let mut buf = Vec::new();
        let code = match &cli.command {
            Command::SamplePaths(args) => {
                cmd_sample_paths(args, &mut buf).map_err(|e| io_or_config(e, &cli.output))?;
                EXIT_PASS
            }
            Command::Verify(args) => {
                let suites = if args.suite == "all" {
                    Suite::ALL.to_vec()
                } else {
                    vec![args.suite.parse::<Suite>().map_err(CliError::Usage)?]
                };
                let reports = cmd_verify(args, &suites, &mut buf).map_err(|e| io_or_config(e, &cli.output))?;
                for r in &reports {
                    for v in &r.verdicts {
                        let mark = if v.pass { "PASS" } else { "FAIL" };
                        eprintln!("{mark} {}/{} (statistic {:.6e})", r.suite, v.name, v.statistic);
                    }
                }
                if reports.iter().all(|r| r.pass) {
                    EXIT_PASS
                } else {
                    EXIT_FAIL
                }
            }
            Command::Plotdata(args) => {
                cmd_plotdata(args, &mut buf).map_err(|e| io_or_config(e, &cli.output))?;
                EXIT_PASS
            }
        };
        write_output(&buf, &cli.output)?;
        Ok(code)
    })
}

/// Command errors are either writer failures or invalid parameters.
#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] SnobError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn io_or_config(e: CommandError, path: &Option<PathBuf>) -> CliError {
    match e {
        CommandError::Config(e) => CliError::Config(e),
        CommandError::Io(source) => CliError::Io {
            path: path_label(path),
            source,
        },
    }
}

fn path_label(path: &Option<PathBuf>) -> String {
    path.as_ref()
        .map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string())
}

fn write_output(buf: &[u8], path: &Option<PathBuf>) -> std::result::Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path_label(path),
        source,
    };
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(io_err)?);
            w.write_all(buf).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(buf).map_err(io_err)?;
            out.flush().map_err(io_err)
        }
    }
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trajectories as CSV, one row per grid point:
/// `path_id,step,t,side,magnitude,local_time`.
pub fn cmd_sample_paths<W: Write>(args: &SamplePathsArgs, out: &mut W) -> std::result::Result<(), CommandError> {
    let params = SnobParams::new(args.kappa)?;
    let grid = TimeGrid::new(args.dt, args.steps)?;
    let x0 = args.start.point()?;
    if args.paths == 0 {
        return Err(invalid("paths", 0.0, "must be >= 1").into());
    }
    let factory = StreamFactory::new(args.seed);
    let paths = (0..args.paths)
        .into_par_iter()
        .map(|i| snob_path(&mut factory.stream(i), x0, &grid, &params))
        .collect::<Result<Vec<_>>>()?;

    writeln!(
        out,
        "# snob {VERSION} sample-paths seed={} kappa={} dt={} steps={} x0={} side={} paths={}",
        args.seed,
        float(args.kappa),
        float(args.dt),
        args.steps,
        float(x0.magnitude()),
        x0.side(),
        args.paths
    )?;
    writeln!(out, "path_id,step,t,side,magnitude,local_time")?;
    for (id, traj) in paths.iter().enumerate() {
        for (k, (p, l)) in traj.points().iter().zip(traj.cumulative_local_time()).enumerate() {
            writeln!(
                out,
                "{id},{k},{},{},{},{}",
                float(grid.time(k)),
                p.side(),
                float(p.magnitude()),
                float(*l)
            )?;
        }
    }
    Ok(())
}

/// Runs the suites and writes the JSON report; returns the reports.
///
/// A single suite is reported with a flat `verdicts` list; several suites
/// with one `{suite, pass, verdicts}` entry each under `suites`.
pub fn cmd_verify<W: Write>(
    args: &VerifyArgs,
    suites: &[Suite],
    out: &mut W,
) -> std::result::Result<Vec<SuiteReport>, CommandError> {
    let cfg = args.config()?;
    let reports = suites.iter().map(|&s| run_suite(s, &cfg)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let name = match suites {
        [one] => one.name(),
        _ => "all",
    };
    let mut doc = json!({
        "metadata": {
            "tool": "snob",
            "version": VERSION,
            "command": "verify",
            "suite": name,
            "seed": cfg.seed,
            "parameters": {
                "kappa": cfg.kappa,
                "alpha": cfg.alpha,
                "dt": cfg.dt,
                "t": cfg.t,
                "x0": cfg.x0.magnitude(),
                "side": cfg.x0.side().to_string(),
                "eps": cfg.eps,
                "paths": cfg.n_paths,
            },
        },
        "pass": pass,
    });
    match reports.as_slice() {
        [one] => doc["verdicts"] = json!(one.verdicts),
        many => doc["suites"] = json!(many),
    }
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(reports)
}

/// Grid `lo, lo + step, ...` up to `hi` inclusive (to rounding).
fn grid_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(invalid("y_max", hi, "range is empty"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid("y_step", step, "must be positive"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

/// Curves as CSV with columns `x,value,series`.
pub fn cmd_plotdata<W: Write>(args: &PlotArgs, out: &mut W) -> std::result::Result<(), CommandError> {
    let params = SnobParams::new(args.kappa)?;
    let x = args.start.point()?;
    let mut rows: Vec<(f64, f64, String)> = Vec::new();
    match args.kind {
        PlotKind::Kernel => {
            let ys = grid_points(args.y_min, args.y_max, args.y_step)?;
            let series = format!("snob(x={})", x.embed());
            for &y in &ys {
                let v = g_snob(x, GPoint::from_real(y, Side::Plus)?, args.alpha, &params)?;
                rows.push((y, v, series.clone()));
            }
            for &eps in &args.eps {
                let series = format!("thin_layer(x={}, eps={eps})", x.embed());
                for &y in &ys {
                    rows.push((y, g_thinlayer(x.embed(), y, args.alpha, &params, eps)?, series.clone()));
                }
            }
        }
        PlotKind::Psi => {
            let eps_list = if args.eps.is_empty() {
                vec![1e-1, 1e-2, 1e-3]
            } else {
                args.eps.clone()
            };
            let limit = psi_ebm(x.magnitude(), args.alpha, &params)?;
            let series = format!("psi_error(x={})", x.magnitude());
            for eps in eps_list {
                let v = psi_thinlayer_unstretched(x.magnitude(), args.alpha, &params, eps)?;
                rows.push((eps, (v - limit).abs(), series.clone()));
            }
        }
    }
    let kind = match args.kind {
        PlotKind::Kernel => "kernel",
        PlotKind::Psi => "psi",
    };
    let eps: Vec<String> = args.eps.iter().map(|e| float(*e)).collect();
    writeln!(
        out,
        "# snob {VERSION} plotdata {kind} kappa={} alpha={} x0={} side={} y_min={} y_max={} y_step={} eps={}",
        float(args.kappa),
        float(args.alpha),
        float(x.magnitude()),
        x.side(),
        float(args.y_min),
        float(args.y_max),
        float(args.y_step),
        eps.join(";")
    )?;
    writeln!(out, "x,value,series")?;
    for (x, v, s) in rows {
        writeln!(out, "{},{},\"{s}\"", float(x), float(v))?;
    }
    Ok(())
}
