//! Elimination kernels `φ(t)`: the fraction of a body burden still present
//! `t` months after an intake.
//!
//! Time is in months throughout and `θ` is per month.

use std::f64::consts::{LN_2, PI};

use crate::error::{ensure, Error, Result};
use crate::specfun::{erfcx, mittag_leffler};

/// Largest `θ²t` accepted by [`half_order_decay_series`].
pub const SERIES_ARGUMENT_LIMIT: f64 = 25.0;
/// Largest estimated relative rounding error tolerated by the series form.
pub const SERIES_PRECISION_LIMIT: f64 = 1e-6;

fn check_theta(theta: f64) -> Result<()> {
    ensure(
        theta.is_finite() && theta > 0.0,
        "theta",
        theta,
        "finite theta > 0",
    )
}

fn check_time(t: f64) -> Result<()> {
    ensure(t.is_finite() && t >= 0.0, "t", t, "finite t >= 0")
}

/// `e^{-θt}`.
pub fn classical_decay(theta: f64, t: f64) -> Result<f64> {
    check_theta(theta)?;
    check_time(t)?;
    Ok((-theta * t).exp())
}

/// Half-order kernel in the form produced by summing the Adomian terms,
///
/// `e^{θ²t} - (4|θ|√t/√π) Σ_{n<n_terms} 4ⁿ(n+1)!(θ²t)ⁿ/(2n+2)!`.
///
/// The two parts nearly cancel for large `θ²t`; the evaluation is refused
/// when the estimated loss of precision exceeds [`SERIES_PRECISION_LIMIT`].
pub fn half_order_decay_series(theta: f64, t: f64, n_terms: usize) -> Result<f64> {
    check_theta(theta)?;
    check_time(t)?;
    ensure(n_terms >= 1, "n_terms", n_terms as f64, "n_terms >= 1")?;
    let y = theta * theta * t;
    ensure(
        y <= SERIES_ARGUMENT_LIMIT,
        "theta^2 t",
        y,
        "theta^2 t <= 25 for the series form",
    )?;
    // a_n = 4ⁿ(n+1)!/(2n+2)!, a_0 = 1/2, a_{n+1}/a_n = 2/(2n+3)
    let mut term = 0.5;
    let mut sum = 0.0;
    for n in 0..n_terms {
        sum += term;
        term *= 2.0 * y / (2 * n + 3) as f64;
    }
    let leading = y.exp();
    let tail = 4.0 * theta.abs() * t.sqrt() / PI.sqrt() * sum;
    let value = leading - tail;
    let estimated = f64::EPSILON * leading / value.abs();
    if estimated.is_nan() || estimated > SERIES_PRECISION_LIMIT {
        return Err(Error::Precision {
            estimated,
            limit: SERIES_PRECISION_LIMIT,
        });
    }
    Ok(value)
}

/// Half-order kernel in stable form, `e^{θ²t} erfc(θ√t)`.
pub fn half_order_decay(theta: f64, t: f64) -> Result<f64> {
    check_theta(theta)?;
    check_time(t)?;
    erfcx(theta * t.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayVariant {
    Classical,
    FractionalHalf,
    /// Order `α ∈ (0, 1]`; kernel `E_α(-θ t^α)`.
    FractionalAlpha(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayModel {
    variant: DecayVariant,
    theta: f64,
    half_life: Option<f64>,
}

impl DecayModel {
    pub fn new(variant: DecayVariant, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if let DecayVariant::FractionalAlpha(alpha) = variant {
            ensure(
                alpha > 0.0 && alpha <= 1.0,
                "alpha",
                alpha,
                "0 < alpha <= 1",
            )?;
        }
        Ok(DecayModel {
            variant,
            theta,
            half_life: None,
        })
    }

    /// Builds the model from a biological half-life, `θ = ln 2 / DV`.
    pub fn from_half_life(variant: DecayVariant, half_life_months: f64) -> Result<Self> {
        ensure(
            half_life_months.is_finite() && half_life_months > 0.0,
            "half_life",
            half_life_months,
            "finite half-life > 0",
        )?;
        let mut model = DecayModel::new(variant, LN_2 / half_life_months)?;
        model.half_life = Some(half_life_months);
        Ok(model)
    }

    /// Picks the variant for an order `α`: 1 is classical, 1/2 the
    /// half-order kernel, anything else the Mittag-Leffler kernel.
    pub fn for_order(alpha: f64, theta: f64) -> Result<Self> {
        let variant = if alpha == 1.0 {
            DecayVariant::Classical
        } else if alpha == 0.5 {
            DecayVariant::FractionalHalf
        } else {
            DecayVariant::FractionalAlpha(alpha)
        };
        DecayModel::new(variant, theta)
    }

    pub fn variant(&self) -> DecayVariant {
        self.variant
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn half_life(&self) -> Option<f64> {
        self.half_life
    }

    pub fn alpha(&self) -> f64 {
        match self.variant {
            DecayVariant::Classical => 1.0,
            DecayVariant::FractionalHalf => 0.5,
            DecayVariant::FractionalAlpha(alpha) => alpha,
        }
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        alpha_decay(self, t)
    }
}

/// Kernel of `model` at `t`.
pub fn alpha_decay(model: &DecayModel, t: f64) -> Result<f64> {
    check_time(t)?;
    match model.variant {
        DecayVariant::Classical => classical_decay(model.theta, t),
        DecayVariant::FractionalHalf => half_order_decay(model.theta, t),
        DecayVariant::FractionalAlpha(alpha) => mittag_leffler(alpha, -model.theta * t.powf(alpha)),
    }
}

/// Time `t* > 0` where the half-order and classical kernels cross.
///
/// Before `t*` the half-order kernel eliminates faster, after it slower.
/// Found by bisection on `(0, T]`, doubling `T` until it brackets the root.
pub fn crossover_time(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let gap =
        |t: f64| -> Result<f64> { Ok(half_order_decay(theta, t)? - classical_decay(theta, t)?) };
    let mut hi = 1.0;
    let mut doublings = 0;
    while gap(hi)? <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Bracketing { theta });
        }
    }
    // gap < 0 on (0, t*): the half-order kernel starts like 1 - 2θ√(t/π)
    let mut lo = if doublings == 0 { 0.0 } else { hi / 2.0 };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
