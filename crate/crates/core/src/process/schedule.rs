//! Intake schedules: explicit event lists or a generative model drawing
//! inter-intake gaps and exposures from a seeded RNG.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Uniform};

use crate::error::{ensure, Error, Result};

/// One intake: at `time` (months) the burden jumps by `exposure` (pg/kg).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntakeEvent {
    pub time: f64,
    pub exposure: f64,
}

impl IntakeEvent {
    pub fn new(time: f64, exposure: f64) -> Result<Self> {
        ensure(
            time.is_finite() && time >= 0.0,
            "time",
            time,
            "finite time >= 0",
        )?;
        ensure(
            exposure.is_finite() && exposure >= 0.0,
            "exposure",
            exposure,
            "finite exposure >= 0",
        )?;
        Ok(IntakeEvent { time, exposure })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapModel {
    Fixed(f64),
    Exponential { mean: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExposureModel {
    Constant(f64),
    Uniform { low: f64, high: f64 },
    Exponential { mean: f64 },
}

impl GapModel {
    fn validate(&self) -> Result<()> {
        match *self {
            GapModel::Fixed(g) => ensure(g.is_finite() && g > 0.0, "gap", g, "finite gap > 0"),
            GapModel::Exponential { mean } => ensure(
                mean.is_finite() && mean > 0.0,
                "gap mean",
                mean,
                "finite mean > 0",
            ),
        }
    }
}

impl ExposureModel {
    fn validate(&self) -> Result<()> {
        match *self {
            ExposureModel::Constant(e) => ensure(
                e.is_finite() && e >= 0.0,
                "exposure",
                e,
                "finite exposure >= 0",
            ),
            ExposureModel::Uniform { low, high } => {
                ensure(
                    low.is_finite() && low >= 0.0,
                    "exposure low",
                    low,
                    "finite low >= 0",
                )?;
                ensure(
                    high.is_finite() && high >= low,
                    "exposure high",
                    high,
                    "finite high >= low",
                )
            }
            ExposureModel::Exponential { mean } => ensure(
                mean.is_finite() && mean > 0.0,
                "exposure mean",
                mean,
                "finite mean > 0",
            ),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ExposureModel::Constant(e) => e,
            ExposureModel::Uniform { low, high } => 0.5 * (low + high),
            ExposureModel::Exponential { mean } => mean,
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            ExposureModel::Constant(e) => e,
            ExposureModel::Uniform { low, high } => Uniform::new_inclusive(low, high)
                .expect("validated bounds")
                .sample(rng),
            ExposureModel::Exponential { mean } => {
                Exp::new(1.0 / mean).expect("validated mean").sample(rng)
            }
        }
    }

    /// `n` exposures from substream `stream` of `seed`.
    pub fn sample_series(&self, n: usize, seed: u64, stream: u64) -> Result<Vec<f64>> {
        self.validate()?;
        let mut rng = substream(seed, stream);
        Ok((0..n).map(|_| self.sample(&mut rng)).collect())
    }
}

/// Independent RNG substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generative intake model. The first intake happens one gap after `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntakeModel {
    pub gap: GapModel,
    pub exposure: ExposureModel,
    pub seed: u64,
}

impl IntakeModel {
    pub fn new(gap: GapModel, exposure: ExposureModel, seed: u64) -> Result<Self> {
        gap.validate()?;
        exposure.validate()?;
        Ok(IntakeModel {
            gap,
            exposure,
            seed,
        })
    }

    /// Fixed monthly gaps with a constant exposure.
    pub fn monthly_constant(exposure: f64) -> Result<Self> {
        IntakeModel::new(GapModel::Fixed(1.0), ExposureModel::Constant(exposure), 0)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Draws every intake up to and including `horizon` from substream
    /// `stream` of the model seed.
    pub fn realize(&self, horizon: f64, stream: u64) -> Result<Vec<IntakeEvent>> {
        self.gap.validate()?;
        self.exposure.validate()?;
        let mut rng = substream(self.seed, stream);
        let mut events = Vec::new();
        let mut t = 0.0;
        for k in 1.. {
            t = match self.gap {
                GapModel::Fixed(g) => k as f64 * g,
                GapModel::Exponential { mean } => {
                    t + Exp::new(1.0 / mean)
                        .expect("validated mean")
                        .sample(&mut rng)
                }
            };
            if t > horizon {
                break;
            }
            let exposure = self.exposure.sample(&mut rng);
            events.push(IntakeEvent { time: t, exposure });
        }
        Ok(events)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntakeSchedule {
    Events(Vec<IntakeEvent>),
    Generative(IntakeModel),
}

impl IntakeSchedule {
    /// Explicit schedule; times must be strictly increasing.
    pub fn events(events: Vec<IntakeEvent>) -> Result<Self> {
        for (index, pair) in events.windows(2).enumerate() {
            if pair[1].time.partial_cmp(&pair[0].time) != Some(Ordering::Greater) {
                return Err(Error::Schedule {
                    index: index + 1,
                    time: pair[1].time,
                });
            }
        }
        for e in &events {
            IntakeEvent::new(e.time, e.exposure)?;
        }
        Ok(IntakeSchedule::Events(events))
    }

    /// Events at the given gaps after the previous event (first gap after 0),
    /// all with the same exposure.
    pub fn from_gaps(gaps: &[f64], exposure: f64) -> Result<Self> {
        let mut t = 0.0;
        let events = gaps
            .iter()
            .map(|&g| {
                t += g;
                IntakeEvent::new(t, exposure)
            })
            .collect::<Result<Vec<_>>>()?;
        IntakeSchedule::events(events)
    }

    pub fn none() -> Self {
        IntakeSchedule::Events(Vec::new())
    }

    pub(crate) fn realize(&self, horizon: f64, stream: u64) -> Result<Vec<IntakeEvent>> {
        match self {
            IntakeSchedule::Events(events) => Ok(events.clone()),
            IntakeSchedule::Generative(model) => model.realize(horizon, stream),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_must_increase() {
        let e = |t| IntakeEvent::new(t, 1.0).unwrap();
        assert!(IntakeSchedule::events(vec![e(1.0), e(2.0)]).is_ok());
        assert_eq!(
            IntakeSchedule::events(vec![e(1.0), e(1.0)]),
            Err(Error::Schedule {
                index: 1,
                time: 1.0
            })
        );
        assert!(IntakeEvent::new(1.0, -0.1).is_err());
    }

    #[test]
    fn fixed_gaps_are_exact_multiples() {
        let m = IntakeModel::monthly_constant(0.5).unwrap();
        let ev = m.realize(12.0, 0).unwrap();
        assert_eq!(ev.len(), 12);
        assert_eq!(ev[11].time, 12.0);
        assert!(ev.iter().all(|e| e.exposure == 0.5));
    }

    #[test]
    fn substreams_differ_and_repeat() {
        let m = IntakeModel::new(
            GapModel::Exponential { mean: 1.0 },
            ExposureModel::Uniform {
                low: 0.0,
                high: 2.0,
            },
            7,
        )
        .unwrap();
        let a = m.realize(50.0, 0).unwrap();
        let b = m.realize(50.0, 0).unwrap();
        let c = m.realize(50.0, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.windows(2).all(|w| w[1].time > w[0].time));
        assert!(a.iter().all(|e| (0.0..=2.0).contains(&e.exposure)));
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(IntakeModel::new(GapModel::Fixed(0.0), ExposureModel::Constant(1.0), 0).is_err());
        assert!(IntakeModel::new(
            GapModel::Fixed(1.0),
            ExposureModel::Uniform {
                low: 2.0,
                high: 1.0
            },
            0
        )
        .is_err());
        assert!(IntakeModel::new(
            GapModel::Fixed(1.0),
            ExposureModel::Exponential { mean: 0.0 },
            0
        )
        .is_err());
    }
}
