//! Command-line front end for the `kdem` simulator.
//!
//! Every command writes CSV to `--out` or, without it, to standard output;
//! human-readable summary lines then go to standard error so the CSV stream
//! stays clean. Exit codes: 0 success, 2 invalid input, 3 the model produced
//! a negative burden, 1 output could not be written.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use kdem_core::decay::alpha_decay;
use kdem_core::process::{
    compute_exposure, first_exceedance, monte_carlo, simulate_multivariate, simulate_univariate,
    MonteCarloConfig,
};
use kdem_core::{ContaminantSpec, DecayModel, IntakeSchedule, Trajectory};
use thiserror::Error;

pub mod config;
pub mod output;
pub mod table1;

use config::ScenarioConfig;
use output::write_columns;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("{0}")]
    Model(#[from] kdem_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(kdem_core::Error::NegativeBurden { .. }) => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kdem", version, about = "Kinetic dietary exposure simulator")]
pub struct Cli {
    /// Write CSV output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Override the intake seed of a scenario.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elimination kernel of a single dose on a uniform grid.
    Decay(DecayArgs),
    /// One trajectory of a scenario file.
    Simulate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// The four-row elimination table for θ = 0.006418, initial burden 15.
    Table1,
    /// Exposure Σ Q·C / w from food records.
    Exposure {
        #[arg(long, value_name = "CSV")]
        records: PathBuf,
        #[arg(long, value_name = "KG")]
        weight: f64,
    },
    /// Monte Carlo summary of a single-contaminant scenario.
    Mc {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[arg(long)]
        replicates: usize,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("rate").required(true).args(["theta", "dv"])))]
pub struct DecayArgs {
    /// Elimination rate per month.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Biological half-life in months.
    #[arg(long)]
    pub dv: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, default_value_t = 1.0)]
    pub initial: f64,
}

/// Where CSV goes and where the summary lines go.
struct Sinks<'a> {
    csv: Box<dyn Write + 'a>,
    notes: &'a mut dyn Write,
}

fn open_sinks<'a>(
    out: Option<&Path>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
) -> Result<Sinks<'a>, CliError> {
    Ok(match out {
        Some(path) => Sinks {
            csv: Box::new(BufWriter::new(File::create(path)?)),
            notes: stdout,
        },
        None => Sinks {
            csv: Box::new(stdout),
            notes: stderr,
        },
    })
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Decay(args) => cmd_decay(&args, cli.out.as_deref(), stdout, stderr),
        Command::Simulate { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let out = cli.out.or_else(|| cfg.out.clone());
            cmd_simulate(&cfg, cli.seed, out.as_deref(), stdout, stderr)
        }
        Command::Table1 => table1::cmd_table1(cli.out.as_deref(), stdout),
        Command::Exposure { records, weight } => {
            cmd_exposure(&records, weight, cli.out.as_deref(), stdout)
        }
        Command::Mc {
            config,
            replicates,
            workers,
        } => {
            let cfg = ScenarioConfig::load(&config)?;
            let out = cli.out.or_else(|| cfg.out.clone());
            cmd_mc(
                &cfg,
                replicates,
                workers,
                cli.seed,
                out.as_deref(),
                stdout,
                stderr,
            )
        }
    }
}

fn grid(t_max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Input(format!("--t-max must be > 0, got {t_max}")));
    }
    if !(step.is_finite() && step > 0.0 && step <= t_max) {
        return Err(CliError::Input(format!(
            "--step must be in (0, t-max], got {step}"
        )));
    }
    let n = (t_max / step * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|k| k as f64 * step).collect())
}

pub fn cmd_decay(
    args: &DecayArgs,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let spec = match (args.theta, args.dv) {
        (Some(theta), None) => {
            ContaminantSpec::from_theta("decay", theta, args.alpha, args.initial)
        }
        (None, Some(dv)) => ContaminantSpec::from_half_life("decay", dv, args.alpha, args.initial),
        _ => unreachable!("clap enforces exactly one rate"),
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    let times = grid(args.t_max, args.step)?;
    let model = DecayModel::for_order(spec.alpha(), spec.theta())?;
    let burdens = times
        .iter()
        .map(|&t| Ok(spec.initial_burden() * alpha_decay(&model, t)?))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let mut sinks = open_sinks(out, stdout, stderr)?;
    write_columns(&mut sinks.csv, &["time", "burden"], &[&times, &burdens])?;
    sinks.csv.flush()?;
    writeln!(sinks.notes, "theta = {}", spec.theta())?;
    Ok(())
}

fn exceedance_line(name: &str, traj: &Trajectory, threshold: f64) -> Result<String, CliError> {
    Ok(match first_exceedance(traj, threshold)? {
        Some(t) => format!("{name}: first exceedance of {threshold} at t = {t}"),
        None => format!("{name}: first exceedance of {threshold}: none"),
    })
}

pub fn cmd_simulate(
    cfg: &ScenarioConfig,
    seed: Option<u64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let specs = cfg.specs()?;
    let mut model = cfg.intake.model()?;
    if let Some(seed) = seed {
        model = model.with_seed(seed);
    }
    let trajectories: Vec<Trajectory> = if specs.len() == 1 {
        vec![simulate_univariate(
            &specs[0],
            &IntakeSchedule::Generative(model),
            cfg.horizon_months,
            cfg.sample_step,
        )?]
    } else {
        let step = cfg.intake.gap_months;
        let n_steps = (cfg.horizon_months / step * (1.0 + 1e-12)).floor() as usize;
        let series = (0..3u64)
            .map(|j| model.exposure.sample_series(n_steps, model.seed, j))
            .collect::<Result<Vec<_>, _>>()?;
        let exposures: Vec<[f64; 3]> = (0..n_steps)
            .map(|i| [series[0][i], series[1][i], series[2][i]])
            .collect();
        let specs: [ContaminantSpec; 3] = [specs[0].clone(), specs[1].clone(), specs[2].clone()];
        simulate_multivariate(
            &specs,
            &cfg.couplings(),
            &exposures,
            step,
            n_steps,
            cfg.kernel(),
        )?
        .into()
    };

    let mut sinks = open_sinks(out, stdout, stderr)?;
    let times = trajectories[0].times.as_slice();
    let mut columns: Vec<&[f64]> = vec![times];
    columns.extend(trajectories.iter().map(|t| t.burdens.as_slice()));
    let header: &[&str] = if trajectories.len() == 1 {
        &["time", "burden"]
    } else {
        &["time", "burden1", "burden2", "burden3"]
    };
    write_columns(&mut sinks.csv, header, &columns)?;
    sinks.csv.flush()?;

    for (spec, traj) in specs.iter().zip(&trajectories) {
        if traj.ignored_events > 0 {
            writeln!(
                sinks.notes,
                "{}: {} intake(s) past the horizon ignored",
                spec.name(),
                traj.ignored_events
            )?;
        }
        if let Some(threshold) = cfg.threshold {
            writeln!(
                sinks.notes,
                "{}",
                exceedance_line(spec.name(), traj, threshold)?
            )?;
        }
    }
    Ok(())
}

pub fn cmd_exposure(
    records: &Path,
    weight: f64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let file =
        File::open(records).map_err(|e| CliError::Input(format!("{}: {e}", records.display())))?;
    let recs = output::read_food_records(file)?;
    let e = compute_exposure(&recs, weight).map_err(|e| CliError::Input(e.to_string()))?;
    match out {
        Some(path) => {
            let mut f = File::create(path)?;
            writeln!(f, "exposure\n{}", output::format_f64(e))?;
        }
        None => writeln!(stdout, "{e}")?,
    }
    Ok(())
}

pub fn cmd_mc(
    cfg: &ScenarioConfig,
    replicates: usize,
    workers: Option<usize>,
    seed: Option<u64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let specs = cfg.specs()?;
    if specs.len() != 1 {
        return Err(CliError::Config(
            "mc needs a single-contaminant scenario".into(),
        ));
    }
    if replicates == 0 {
        return Err(CliError::Input("--replicates must be >= 1".into()));
    }
    if workers == Some(0) {
        return Err(CliError::Input("--workers must be >= 1".into()));
    }
    let model = cfg.intake.model()?;
    let mc = MonteCarloConfig {
        horizon: cfg.horizon_months,
        sample_step: cfg.sample_step,
        n_replicates: replicates,
        seed: seed.unwrap_or(model.seed),
        threshold: cfg.threshold,
        workers,
    };
    let summary = monte_carlo(&specs[0], &model, &mc)?;

    let mut sinks = open_sinks(out, stdout, stderr)?;
    write_columns(
        &mut sinks.csv,
        &["time", "mean", "p05", "p50", "p95"],
        &[
            &summary.times,
            &summary.mean,
            &summary.p05,
            &summary.p50,
            &summary.p95,
        ],
    )?;
    sinks.csv.flush()?;
    writeln!(sinks.notes, "replicates: {}", summary.n_replicates)?;
    if let (Some(p), Some(th)) = (summary.exceedance_probability, cfg.threshold) {
        writeln!(sinks.notes, "exceedance probability of {th}: {p}")?;
    }
    writeln!(
        sinks.notes,
        "mean exposure per intake: {} (standard error {})",
        summary.mean_increment, summary.increment_std_error
    )?;
    Ok(())
}
