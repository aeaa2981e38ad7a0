//! Monte Carlo replication of the univariate process.
//!
//! Replicate `r` realizes the intake model from substream `r` of the seed,
//! so replicate 0 is exactly what [`simulate_univariate`] produces. Replicates
//! run in parallel but are reduced in index order, so summaries do not depend
//! on the number of workers.
//!
//! [`simulate_univariate`]: crate::process::simulate_univariate

use rayon::prelude::*;

use crate::error::{ensure, Result};
use crate::process::{first_exceedance, run_recursion, ContaminantSpec, IntakeModel, Trajectory};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloConfig {
    pub horizon: f64,
    pub sample_step: f64,
    pub n_replicates: usize,
    pub seed: u64,
    pub threshold: Option<f64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub p05: Vec<f64>,
    pub p50: Vec<f64>,
    pub p95: Vec<f64>,
    /// Fraction of replicates whose burden ever exceeds the threshold.
    pub exceedance_probability: Option<f64>,
    pub n_replicates: usize,
    /// Mean and standard error of the exposure added at intake instants,
    /// pooled over all replicates.
    pub mean_increment: f64,
    pub increment_std_error: f64,
}

/// Replicate `r` of the process with intake model seed `seed`.
pub fn replicate(
    spec: &ContaminantSpec,
    model: &IntakeModel,
    horizon: f64,
    sample_step: f64,
    seed: u64,
    r: u64,
) -> Result<Trajectory> {
    let events = model.with_seed(seed).realize(horizon, r)?;
    run_recursion(spec, &events, horizon, sample_step)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

pub fn monte_carlo(
    spec: &ContaminantSpec,
    model: &IntakeModel,
    cfg: &MonteCarloConfig,
) -> Result<McSummary> {
    ensure(
        cfg.n_replicates >= 1,
        "n_replicates",
        cfg.n_replicates as f64,
        "n_replicates >= 1",
    )?;
    ensure(
        cfg.horizon.is_finite() && cfg.horizon > 0.0,
        "horizon",
        cfg.horizon,
        "finite horizon > 0",
    )?;
    ensure(
        cfg.sample_step.is_finite() && cfg.sample_step > 0.0,
        "sample_step",
        cfg.sample_step,
        "finite step > 0",
    )?;
    if let Some(th) = cfg.threshold {
        ensure(
            th.is_finite() && th > 0.0,
            "threshold",
            th,
            "finite threshold > 0",
        )?;
    }
    if let Some(w) = cfg.workers {
        ensure(w >= 1, "workers", w as f64, "workers >= 1")?;
    }

    let run = || -> Vec<Result<Trajectory>> {
        (0..cfg.n_replicates as u64)
            .into_par_iter()
            .map(|r| replicate(spec, model, cfg.horizon, cfg.sample_step, cfg.seed, r))
            .collect()
    };
    let results = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let trajectories = results.into_iter().collect::<Result<Vec<_>>>()?;
    summarize(&trajectories, cfg.threshold)
}

fn summarize(trajectories: &[Trajectory], threshold: Option<f64>) -> Result<McSummary> {
    let n = trajectories.len();
    let times = trajectories[0].times.clone();
    let mut mean = Vec::with_capacity(times.len());
    let (mut p05, mut p50, mut p95) = (Vec::new(), Vec::new(), Vec::new());
    let mut column = Vec::with_capacity(n);
    for k in 0..times.len() {
        column.clear();
        column.extend(trajectories.iter().map(|tr| tr.burdens[k]));
        mean.push(column.iter().copied().collect::<CompensatedSum>().value() / n as f64);
        column.sort_by(f64::total_cmp);
        p05.push(quantile(&column, 0.05));
        p50.push(quantile(&column, 0.50));
        p95.push(quantile(&column, 0.95));
    }

    let exceedance_probability = match threshold {
        Some(th) => {
            let mut hits = 0usize;
            for tr in trajectories {
                if first_exceedance(tr, th)?.is_some() {
                    hits += 1;
                }
            }
            Some(hits as f64 / n as f64)
        }
        None => None,
    };

    let increments: Vec<f64> = trajectories
        .iter()
        .flat_map(|tr| tr.intakes.iter().map(|r| r.exposure))
        .collect();
    let (mean_increment, increment_std_error) = if increments.is_empty() {
        (0.0, 0.0)
    } else {
        let m = increments
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
            / increments.len() as f64;
        let var = increments.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
            / (increments.len().max(2) - 1) as f64;
        (m, (var / increments.len() as f64).sqrt())
    };

    Ok(McSummary {
        times,
        mean,
        p05,
        p50,
        p95,
        exceedance_probability,
        n_replicates: n,
        mean_increment,
        increment_std_error,
    })
}
