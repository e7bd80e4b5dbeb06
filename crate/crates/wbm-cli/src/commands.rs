//! The four subcommands. Each returns whether a violated verdict was seen.

use crate::config::{ComputeConfig, Quantity, RunConfig, SweepConfig, SweepQuantity};
use crate::error::CliError;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use wbm::bodies::ConvexBody;
use wbm::inequalities::{kappa_ratio, run_ensemble, sharper_constant, summarize, write_reports, SlackReport};
use wbm::measures::{measure, measure_of_body};
use wbm::mixed::{
    ball_mixed_second, mixed_measure, mixed_measure_fd, mixed_second, mixed_second_fd, mixed_volume, MixedRecord,
};
use wbm::output::{csv_row, fmt_f64, to_json_line};
use wbm::surface_measures::{weighted_surface_area, weighted_surface_area_measure_at};
use wbm::Estimate;

pub const DEFAULT_OUT: &str = "wbm-out";

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(BufWriter::new(file))
}

fn save_config(dir: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    let mut f = create(dir, "run_config.toml")?;
    f.write_all(cfg.to_toml()?.as_bytes())?;
    f.flush()?;
    Ok(())
}

pub fn compute(cfg: &RunConfig, spec: &ComputeConfig, out: &mut impl Write) -> Result<bool, CliError> {
    let mu = spec.measure.build(spec.dim)?;
    if spec.bodies.len() != spec.quantity.body_count() {
        return Err(CliError::Usage(format!(
            "{} needs {} bodies, got {}",
            spec.quantity.as_str(),
            spec.quantity.body_count(),
            spec.bodies.len()
        )));
    }
    let bodies: Vec<ConvexBody> = spec
        .bodies
        .iter()
        .map(|b| b.build(spec.dim))
        .collect::<Result<_, _>>()?;
    let budget = cfg.budget.unwrap_or(0);
    let resolution = cfg.resolution.unwrap_or(0);
    let fd = cfg.fd_config()?;
    let (est, method): (Estimate, String) = match spec.quantity {
        Quantity::Measure => match spec.method {
            Some(m) => (measure_of_body(&mu, &bodies[0], m, budget)?, format!("{m:?}")),
            None => (measure(&mu, &bodies[0])?, "auto".into()),
        },
        Quantity::SurfaceArea if resolution > 0 => (
            weighted_surface_area_measure_at(&mu, &bodies[0], resolution)?.total()?,
            format!("grid {resolution}"),
        ),
        Quantity::SurfaceArea => (weighted_surface_area(&mu, &bodies[0])?, "auto".into()),
        Quantity::MixedVolume => (mixed_volume(&bodies[0], &bodies[1])?, "exact".into()),
        Quantity::MixedMeasure => (mixed_measure(&mu, &bodies[0], &bodies[1])?, "surface".into()),
        Quantity::MixedMeasureFd => (
            mixed_measure_fd(&mu, &bodies[0], &bodies[1], &fd, spec.method, budget)?,
            "finite_difference".into(),
        ),
        Quantity::MixedSecond => (mixed_second(&mu, &bodies[0], &bodies[1], &bodies[2])?, "surface".into()),
        Quantity::MixedSecondFd => (
            mixed_second_fd(&mu, &bodies[0], &bodies[1], &bodies[2], &fd, spec.method, budget)?,
            "finite_difference".into(),
        ),
    };
    let refs: Vec<&ConvexBody> = bodies.iter().collect();
    let record = MixedRecord::new(spec.quantity.as_str(), &refs, &mu.name(), &method, est);
    let line = to_json_line(&record)?;
    writeln!(out, "{line}")?;
    if let Some(dir) = &cfg.out {
        let mut f = create(dir, "compute.jsonl")?;
        writeln!(f, "{line}")?;
        f.flush()?;
        save_config(dir, cfg)?;
    }
    Ok(false)
}

fn print_summary(reports: &[SlackReport], out: &mut impl Write) -> Result<bool, CliError> {
    let summary = summarize(reports);
    writeln!(
        out,
        "{:<26} {:>7} {:>24} {:>10} {:>12}",
        "inequality", "count", "min_slack", "violations", "inconclusive"
    )?;
    for s in &summary {
        writeln!(
            out,
            "{:<26} {:>7} {:>24} {:>10} {:>12}",
            s.inequality,
            s.count,
            fmt_f64(s.min_slack),
            s.violations,
            s.inconclusive
        )?;
    }
    Ok(summary.iter().any(|s| s.violations > 0))
}

pub fn verify(cfg: &RunConfig, out: &mut impl Write) -> Result<bool, CliError> {
    if cfg.suites.is_empty() {
        return Err(CliError::Usage(
            "verify needs --inequality or at least one [[suite]] in the config".into(),
        ));
    }
    let workers = cfg.workers.unwrap_or(0);
    let mut reports = Vec::new();
    for spec in &cfg.suites {
        spec.validate()?;
        reports.extend(run_ensemble(spec, workers)?);
    }
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let mut jsonl = create(&dir, "reports.jsonl")?;
    let mut csv = create(&dir, "summary.csv")?;
    write_reports(&reports, &mut jsonl, &mut csv)?;
    jsonl.flush()?;
    csv.flush()?;
    save_config(&dir, cfg)?;
    let violated = print_summary(&reports, out)?;
    writeln!(out, "wrote {} reports to {}", reports.len(), dir.display())?;
    Ok(violated)
}

fn sweep_value(spec: &SweepConfig, x: f64) -> Result<Estimate, CliError> {
    let value = match spec.quantity {
        SweepQuantity::KappaRatio => Estimate::exact(kappa_ratio(x as usize)?),
        SweepQuantity::BallSecond => {
            let mu = spec.measure.build(spec.dim)?;
            let b = ConvexBody::centered_ball(spec.dim, 1.0)?;
            ball_mixed_second(&mu, x, &b, &b)?
        }
        SweepQuantity::DilateMeasure => {
            let mu = spec.measure.build(spec.dim)?;
            measure(&mu, &ConvexBody::centered_ball(spec.dim, x)?)?
        }
        SweepQuantity::SharperConstant => {
            let mu = spec.measure.build(spec.dim)?;
            Estimate::exact(sharper_constant(&mu, x)?)
        }
    };
    Ok(value)
}

pub fn sweep(cfg: &RunConfig, spec: &SweepConfig, out: &mut impl Write) -> Result<bool, CliError> {
    spec.validate()?;
    let mut points = spec.points();
    if spec.quantity == SweepQuantity::KappaRatio {
        points.iter_mut().for_each(|x| *x = x.round());
        points.dedup();
    }
    let mut text = csv_row(&[spec.quantity.parameter(), "value", "error"]);
    for x in points {
        let v = sweep_value(spec, x)?;
        text.push_str(&csv_row(&[fmt_f64(x), fmt_f64(v.value), fmt_f64(v.error)]));
    }
    out.write_all(text.as_bytes())?;
    if let Some(dir) = &cfg.out {
        let mut f = create(dir, "sweep.csv")?;
        f.write_all(text.as_bytes())?;
        f.flush()?;
        save_config(dir, cfg)?;
    }
    Ok(false)
}

pub fn read_reports(path: &Path) -> Result<Vec<SlackReport>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut reports = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: SlackReport =
            serde_json::from_str(&line).map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        reports.push(r);
    }
    Ok(reports)
}

pub fn report(cfg: &RunConfig, inputs: &[PathBuf], out: &mut impl Write) -> Result<bool, CliError> {
    if inputs.is_empty() {
        return Err(CliError::Usage("report needs at least one JSON-lines input".into()));
    }
    let mut reports = Vec::new();
    for path in inputs {
        reports.extend(read_reports(path)?);
    }
    let violated = print_summary(&reports, out)?;
    if let Some(dir) = &cfg.out {
        let mut csv = create(dir, "summary.csv")?;
        write_reports(&reports, std::io::sink(), &mut csv)?;
        csv.flush()?;
    }
    Ok(violated)
}
