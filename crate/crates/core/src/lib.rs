//! Fractional-order kinetic dietary exposure model.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Gamma, Beta, erfc and the one-parameter Mittag-Leffler function.
//! - [`fraccalc`]: exact Riemann-Liouville integrals and derivatives of
//!   generalized polynomials, plus a product-integration rule on sampled data.
//! - [`adomian`]: Adomian decomposition of `D^α X + θX = 0` and Adomian
//!   polynomials for power nonlinearities.
//! - [`decay`]: elimination kernels `φ(t)` (classical, half-order, order α).
//! - [`process`]: intake/elimination recursions, threshold exceedance and
//!   Monte Carlo replication.

pub mod adomian;
pub mod decay;
mod error;
pub mod fraccalc;
pub mod process;
pub mod specfun;
mod sum;

pub use adomian::{AdmSeries, CoefficientSeries};
pub use decay::{DecayModel, DecayVariant};
pub use error::{Error, Result};
pub use fraccalc::{GeneralizedPolynomial, Monomial, SampledFunction};
pub use process::{
    ContaminantSpec, Couplings, FoodRecord, IntakeEvent, IntakeModel, IntakeSchedule, Trajectory,
    TransitionMatrix,
};
