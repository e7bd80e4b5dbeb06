//! Command-line front end for `wbm`: single quantities, verification
//! ensembles, parameter sweeps and report aggregation.

pub mod commands;
pub mod config;
pub mod error;

use clap::{Args, Parser, Subcommand};
use config::{parse_measure, parse_name, BodySpec, CommandKind, ComputeConfig, ReportConfig, RunConfig, SweepConfig};
use error::CliError;
use std::io::Write;
use std::path::PathBuf;
use wbm::inequalities::{EnsembleSpec, InequalityId};

#[derive(Debug, Parser)]
#[command(
    name = "wbm",
    version,
    about = "Weighted Brunn-Minkowski quantities and inequality checks"
)]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for ensembles; 0 uses every core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Sphere grid resolution for surface measures.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// Evaluation budget for an explicit measure method.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one quantity with its error estimate as a JSON line.
    Compute(ComputeArgs),
    /// Run inequality ensembles; writes reports.jsonl and summary.csv.
    Verify(VerifyArgs),
    /// Vary one scalar parameter and print (parameter, value, error) CSV.
    Sweep(SweepArgs),
    /// Summarize JSON-lines reports from earlier runs.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// measure, surface_area, mixed_volume, mixed_measure, mixed_measure_fd,
    /// mixed_second or mixed_second_fd.
    pub quantity: Option<String>,
    /// lebesgue, gaussian or power:ALPHA,BETA,P.
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Repeatable: ball:R, cube:A, segment:X,Y, polytope:X,Y;X,Y;...,
    /// zonotope:X,Y;..., random:KIND[:SIZE]:SEED.
    #[arg(long = "body")]
    pub bodies: Vec<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a single suite with this inequality instead of the config suites.
    #[arg(long)]
    pub inequality: Option<String>,
    #[arg(long, default_value = "gaussian")]
    pub measure: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// log, power or ehrhard.
    #[arg(long)]
    pub profile: Option<String>,
    /// Kind of the first body.
    #[arg(long, default_value = "symmetric_smooth_2d")]
    pub body: String,
    /// Kind of the other bodies.
    #[arg(long)]
    pub other: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// one, anu_r, anu, gaf_gaussian or sharp_gaussian.
    #[arg(long)]
    pub constant: Option<String>,
    #[arg(long)]
    pub ball_first: bool,
    #[arg(long)]
    pub dilates: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// ball_second, dilate_measure, sharper_constant or kappa_ratio.
    pub quantity: Option<String>,
    #[arg(long)]
    pub measure: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON-lines report files.
    pub inputs: Vec<PathBuf>,
}

fn required<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing {what}")))
}

/// Combines the config file and the flags into the configuration that is run.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.seed = cli.seed.or(cfg.seed);
    cfg.workers = cli.workers.or(cfg.workers);
    cfg.out = cli.out.clone().or(cfg.out);
    cfg.resolution = cli.resolution.or(cfg.resolution);
    cfg.budget = cli.budget.or(cfg.budget);
    match &cli.command {
        Some(Command::Compute(a)) => {
            cfg.command = Some(CommandKind::Compute);
            let base = cfg.compute.take();
            let bodies: Vec<BodySpec> = a.bodies.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            cfg.compute = Some(ComputeConfig {
                quantity: match &a.quantity {
                    Some(q) => parse_name(q)?,
                    None => required(base.as_ref().map(|b| b.quantity), "compute quantity")?,
                },
                measure: match &a.measure {
                    Some(m) => parse_measure(m)?,
                    None => base
                        .as_ref()
                        .map_or(wbm::measures::MeasureSpec::Lebesgue, |b| b.measure.clone()),
                },
                dim: a.dim.or(base.as_ref().map(|b| b.dim)).unwrap_or(2),
                bodies: if bodies.is_empty() {
                    base.as_ref().map(|b| b.bodies.clone()).unwrap_or_default()
                } else {
                    bodies
                },
                method: base.and_then(|b| b.method),
            });
        }
        Some(Command::Verify(a)) => {
            cfg.command = Some(CommandKind::Verify);
            if let Some(id) = &a.inequality {
                let mut spec = EnsembleSpec::new(
                    id.parse::<InequalityId>()?,
                    parse_measure(&a.measure)?,
                    parse_name(&a.body)?,
                    a.count,
                    cfg.seed.unwrap_or(0),
                );
                spec.dim = a.dim;
                spec.profile = a.profile.as_deref().map(parse_name).transpose()?;
                spec.other = a.other.as_deref().map(parse_name).transpose()?;
                spec.size = a.size;
                spec.s = a.s;
                spec.radius = a.radius;
                spec.constant = a.constant.as_deref().map(|c| c.parse()).transpose()?;
                spec.ball_first = a.ball_first;
                spec.dilates = a.dilates;
                cfg.suites = vec![spec];
            } else if let Some(seed) = cli.seed {
                for (k, s) in cfg.suites.iter_mut().enumerate() {
                    s.seed = seed.wrapping_add(k as u64);
                }
            }
        }
        Some(Command::Sweep(a)) => {
            cfg.command = Some(CommandKind::Sweep);
            let base = cfg.sweep.take();
            cfg.sweep = Some(SweepConfig {
                quantity: match &a.quantity {
                    Some(q) => parse_name(q)?,
                    None => required(base.as_ref().map(|b| b.quantity), "sweep quantity")?,
                },
                measure: match &a.measure {
                    Some(m) => parse_measure(m)?,
                    None => base
                        .as_ref()
                        .map_or(wbm::measures::MeasureSpec::Gaussian, |b| b.measure.clone()),
                },
                dim: a.dim.or(base.as_ref().map(|b| b.dim)).unwrap_or(2),
                from: required(a.from.or(base.as_ref().map(|b| b.from)), "--from")?,
                to: required(a.to.or(base.as_ref().map(|b| b.to)), "--to")?,
                steps: a.steps.or(base.as_ref().map(|b| b.steps)).unwrap_or(29),
            });
        }
        Some(Command::Report(a)) => {
            cfg.command = Some(CommandKind::Report);
            if !a.inputs.is_empty() {
                cfg.report = Some(ReportConfig {
                    inputs: a.inputs.clone(),
                });
            }
        }
        None => {
            if cfg.command.is_none() {
                return Err(CliError::Usage(
                    "no subcommand given and the config has no `command`".into(),
                ));
            }
        }
    }
    Ok(cfg)
}

/// Runs a resolved configuration; `Ok(true)` means a violation was found.
pub fn execute(cfg: &RunConfig, out: &mut impl Write) -> Result<bool, CliError> {
    match cfg.command {
        Some(CommandKind::Compute) => commands::compute(cfg, required(cfg.compute.as_ref(), "[compute] section")?, out),
        Some(CommandKind::Verify) => commands::verify(cfg, out),
        Some(CommandKind::Sweep) => commands::sweep(cfg, required(cfg.sweep.as_ref(), "[sweep] section")?, out),
        Some(CommandKind::Report) => {
            let inputs = cfg.report.as_ref().map(|r| r.inputs.clone()).unwrap_or_default();
            commands::report(cfg, &inputs, out)
        }
        None => Err(CliError::Usage("no command".into())),
    }
}

/// Exit status: 0 clean, 1 a violated verdict, 2 an error.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match resolve(cli).and_then(|cfg| execute(&cfg, out)) {
        Ok(false) => 0,
        Ok(true) => 1,
        Err(e) => {
            let _ = writeln!(err, "wbm: {e}");
            2
        }
    }
}
