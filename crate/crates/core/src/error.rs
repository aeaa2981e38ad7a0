use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({domain})")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("series lost precision: estimated relative error {estimated:e} exceeds {limit:e}")]
    Precision { estimated: f64, limit: f64 },

    #[error("could not bracket the kernel crossover for theta = {theta}")]
    Bracketing { theta: f64 },

    #[error("a sampled function needs at least 2 grid points, got {0}")]
    GridTooShort(usize),

    #[error("intake event {index} at t = {time} breaks the schedule ordering")]
    Schedule { index: usize, time: f64 },

    #[error("contaminant {component} reached a negative burden {value} at step {step}")]
    NegativeBurden {
        component: usize,
        step: usize,
        value: f64,
    },
}

/// Rejects `value` unless `ok` holds.
pub(crate) fn ensure(ok: bool, name: &'static str, value: f64, domain: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}
