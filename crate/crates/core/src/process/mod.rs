//! Exposure processes.
//!
//! Between consecutive intakes `Tᵢ < Tᵢ₊₁` the burden follows
//! `X(t) = Xᵢ·φ(t - Tᵢ)`, and at the next intake
//! `Xᵢ₊₁ = Xᵢ·φ(Tᵢ₊₁ - Tᵢ) + Eᵢ₊₁`. The elimination clock restarts at every
//! intake, which matters for the fractional kernels because they are not
//! semigroups. The sampling grid is only used for output; it never drives
//! the recursion.

use std::f64::consts::LN_2;

use crate::decay::DecayModel;
use crate::error::{ensure, Result};
use crate::sum::CompensatedSum;

mod monte_carlo;
mod multivariate;
mod schedule;

pub use monte_carlo::{monte_carlo, replicate, McSummary, MonteCarloConfig};
pub use multivariate::{
    simulate_multivariate, simulate_with_matrix, Couplings, DiagonalKernel, TransitionMatrix,
};
pub use schedule::{substream, ExposureModel, GapModel, IntakeEvent, IntakeModel, IntakeSchedule};

/// Kinetic identity of a contaminant.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminantSpec {
    name: String,
    dv_months: f64,
    theta: f64,
    alpha: f64,
    initial_burden: f64,
}

impl ContaminantSpec {
    /// From the biological half-life `DV` (months); `θ = ln 2 / DV`.
    pub fn from_half_life(
        name: impl Into<String>,
        dv_months: f64,
        alpha: f64,
        initial_burden: f64,
    ) -> Result<Self> {
        ensure(
            dv_months.is_finite() && dv_months > 0.0,
            "dv_months",
            dv_months,
            "finite half-life > 0",
        )?;
        Self::build(
            name.into(),
            dv_months,
            LN_2 / dv_months,
            alpha,
            initial_burden,
        )
    }

    /// From the elimination rate `θ` (per month); `DV = ln 2 / θ`.
    pub fn from_theta(
        name: impl Into<String>,
        theta: f64,
        alpha: f64,
        initial_burden: f64,
    ) -> Result<Self> {
        ensure(
            theta.is_finite() && theta > 0.0,
            "theta",
            theta,
            "finite theta > 0",
        )?;
        Self::build(name.into(), LN_2 / theta, theta, alpha, initial_burden)
    }

    fn build(
        name: String,
        dv_months: f64,
        theta: f64,
        alpha: f64,
        initial_burden: f64,
    ) -> Result<Self> {
        ensure(
            alpha > 0.0 && alpha <= 1.0,
            "alpha",
            alpha,
            "0 < alpha <= 1",
        )?;
        ensure(
            initial_burden.is_finite() && initial_burden >= 0.0,
            "initial_burden",
            initial_burden,
            "finite burden >= 0",
        )?;
        Ok(ContaminantSpec {
            name,
            dv_months,
            theta,
            alpha,
            initial_burden,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dv_months(&self) -> f64 {
        self.dv_months
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn initial_burden(&self) -> f64 {
        self.initial_burden
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::build(
            self.name.clone(),
            self.dv_months,
            self.theta,
            alpha,
            self.initial_burden,
        )
    }

    pub fn decay_model(&self) -> Result<DecayModel> {
        DecayModel::for_order(self.alpha, self.theta)
    }
}

/// One consumed food: contamination `Q` and consumed quantity `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoodRecord {
    pub product: String,
    pub contamination_q: f64,
    pub consumption_c: f64,
}

impl FoodRecord {
    pub fn new(
        product: impl Into<String>,
        contamination_q: f64,
        consumption_c: f64,
    ) -> Result<Self> {
        ensure(
            contamination_q.is_finite() && contamination_q >= 0.0,
            "contamination_q",
            contamination_q,
            "finite value >= 0",
        )?;
        ensure(
            consumption_c.is_finite() && consumption_c >= 0.0,
            "consumption_c",
            consumption_c,
            "finite value >= 0",
        )?;
        Ok(FoodRecord {
            product: product.into(),
            contamination_q,
            consumption_c,
        })
    }
}

/// `E = Σ Q_p C_p / w`.
pub fn compute_exposure(records: &[FoodRecord], body_weight: f64) -> Result<f64> {
    ensure(
        body_weight.is_finite() && body_weight > 0.0,
        "body_weight",
        body_weight,
        "finite weight > 0",
    )?;
    let total = records
        .iter()
        .map(|r| r.contamination_q * r.consumption_c)
        .collect::<CompensatedSum>()
        .value();
    Ok(total / body_weight)
}

/// Burden just before and just after an intake of `exposure`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntakeRecord {
    pub time: f64,
    pub before: f64,
    pub after: f64,
    pub exposure: f64,
}

/// Sampled body-burden path (pg/kg against months) plus the exact values at
/// intake instants.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub burdens: Vec<f64>,
    pub intakes: Vec<IntakeRecord>,
    /// Schedule events past the horizon that were dropped.
    pub ignored_events: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.burdens.iter().copied())
    }
}

/// `0, step, 2·step, …` up to `horizon` (inclusive up to rounding).
pub(crate) fn sample_grid(horizon: f64, step: f64) -> Vec<f64> {
    let n = (horizon / step * (1.0 + 1e-12)).floor() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

fn check_horizon(horizon: f64, sample_step: f64) -> Result<()> {
    ensure(
        horizon.is_finite() && horizon > 0.0,
        "horizon",
        horizon,
        "finite horizon > 0",
    )?;
    ensure(
        sample_step.is_finite() && sample_step > 0.0,
        "sample_step",
        sample_step,
        "finite step > 0",
    )
}

/// Runs the intake/elimination recursion for one contaminant.
///
/// A generative schedule is realized from substream 0 of its seed.
pub fn simulate_univariate(
    spec: &ContaminantSpec,
    schedule: &IntakeSchedule,
    horizon: f64,
    sample_step: f64,
) -> Result<Trajectory> {
    check_horizon(horizon, sample_step)?;
    let events = schedule.realize(horizon, 0)?;
    run_recursion(spec, &events, horizon, sample_step)
}

pub(crate) fn run_recursion(
    spec: &ContaminantSpec,
    events: &[IntakeEvent],
    horizon: f64,
    sample_step: f64,
) -> Result<Trajectory> {
    let model = spec.decay_model()?;
    let kept = events.iter().take_while(|e| e.time <= horizon).count();
    let ignored_events = events.len() - kept;

    let mut intakes = Vec::with_capacity(kept);
    let (mut anchor_time, mut anchor_value) = (0.0, spec.initial_burden);
    for e in &events[..kept] {
        let before = anchor_value * model.phi(e.time - anchor_time)?;
        let after = before + e.exposure;
        intakes.push(IntakeRecord {
            time: e.time,
            before,
            after,
            exposure: e.exposure,
        });
        anchor_time = e.time;
        anchor_value = after;
    }

    let times = sample_grid(horizon, sample_step);
    let mut burdens = Vec::with_capacity(times.len());
    let mut next = 0;
    let (mut anchor_time, mut anchor_value) = (0.0, spec.initial_burden);
    for &t in &times {
        while next < intakes.len() && intakes[next].time <= t {
            anchor_time = intakes[next].time;
            anchor_value = intakes[next].after;
            next += 1;
        }
        burdens.push(anchor_value * model.phi(t - anchor_time)?);
    }

    Ok(Trajectory {
        times,
        burdens,
        intakes,
        ignored_events,
    })
}

/// Earliest sampled or intake time at which the burden exceeds `threshold`.
pub fn first_exceedance(traj: &Trajectory, threshold: f64) -> Result<Option<f64>> {
    ensure(
        threshold.is_finite() && threshold > 0.0,
        "threshold",
        threshold,
        "finite threshold > 0",
    )?;
    let sampled = traj.samples().find(|&(_, x)| x > threshold).map(|(t, _)| t);
    let at_intake = traj
        .intakes
        .iter()
        .find(|r| r.after > threshold)
        .map(|r| r.time);
    Ok(match (sampled, at_intake) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    })
}
