//! Three contaminants stored and eliminated by the same organ.
//!
//! The burden row vector evolves as `Xᵢ = Xᵢ₋₁ ψ + Eᵢ` with
//!
//! ```text
//!     | φ₁  a   b  |
//! ψ = | c   φ₂  d  |
//!     | e   f   φ₃ |
//! ```
//!
//! so that `Xᵢ₁ = φ₁Xᵢ₋₁,₁ + c·Xᵢ₋₁,₂ + e·Xᵢ₋₁,₃ + Eᵢ₁` and so on. The
//! diagonal holds each contaminant's decay factor over one step.

use crate::decay::half_order_decay;
use crate::error::{ensure, Error, Result};
use crate::process::{sample_grid, ContaminantSpec, IntakeRecord, Trajectory};

/// Off-diagonal entries of ψ, named by their position in the matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Couplings {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Couplings {
    pub fn zero() -> Self {
        Couplings::default()
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("e", self.e),
            ("f", self.f),
        ] {
            ensure(v.is_finite(), name, v, "finite coupling")?;
        }
        Ok(())
    }
}

/// Which kernel fills the diagonal of ψ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DiagonalKernel {
    /// Half-order kernel for every contaminant, regardless of its α.
    #[default]
    HalfOrder,
    /// Each contaminant's own order-α kernel.
    ContaminantOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    entries: [[f64; 3]; 3],
}

impl TransitionMatrix {
    pub fn new(diagonal: [f64; 3], couplings: &Couplings) -> Result<Self> {
        for d in diagonal {
            ensure(d > 0.0 && d <= 1.0, "diagonal", d, "0 < entry <= 1")?;
        }
        couplings.validate()?;
        let Couplings { a, b, c, d, e, f } = *couplings;
        Ok(TransitionMatrix {
            entries: [
                [diagonal[0], a, b],
                [c, diagonal[1], d],
                [e, f, diagonal[2]],
            ],
        })
    }

    /// ψ for one step of length `step`.
    pub fn for_step(
        specs: &[ContaminantSpec; 3],
        couplings: &Couplings,
        step: f64,
        kernel: DiagonalKernel,
    ) -> Result<Self> {
        let mut diagonal = [0.0; 3];
        for (slot, spec) in diagonal.iter_mut().zip(specs) {
            *slot = match kernel {
                DiagonalKernel::HalfOrder => half_order_decay(spec.theta(), step)?,
                DiagonalKernel::ContaminantOrder => spec.decay_model()?.phi(step)?,
            };
        }
        TransitionMatrix::new(diagonal, couplings)
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn identity() -> Self {
        TransitionMatrix {
            entries: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Row vector times matrix, `x ψ`.
    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        let m = &self.entries;
        std::array::from_fn(|j| x[0] * m[0][j] + x[1] * m[1][j] + x[2] * m[2][j])
    }
}

/// Runs `n_steps` of `Xᵢ = Xᵢ₋₁ψ + Eᵢ` with `exposures[i-1] = Eᵢ` applied
/// at `t = i·step`. Returns one trajectory per contaminant, sampled at the
/// step instants.
pub fn simulate_multivariate(
    specs: &[ContaminantSpec; 3],
    couplings: &Couplings,
    exposures: &[[f64; 3]],
    step: f64,
    n_steps: usize,
    kernel: DiagonalKernel,
) -> Result<[Trajectory; 3]> {
    ensure(
        step.is_finite() && step > 0.0,
        "step",
        step,
        "finite step > 0",
    )?;
    let psi = TransitionMatrix::for_step(specs, couplings, step, kernel)?;
    simulate_with_matrix(specs, &psi, exposures, step, n_steps)
}

/// As [`simulate_multivariate`] with an explicit ψ.
pub fn simulate_with_matrix(
    specs: &[ContaminantSpec; 3],
    psi: &TransitionMatrix,
    exposures: &[[f64; 3]],
    step: f64,
    n_steps: usize,
) -> Result<[Trajectory; 3]> {
    ensure(
        step.is_finite() && step > 0.0,
        "step",
        step,
        "finite step > 0",
    )?;
    ensure(
        exposures.len() == n_steps,
        "exposures",
        exposures.len() as f64,
        "one exposure vector per step",
    )?;
    for e in exposures.iter().flatten() {
        ensure(
            e.is_finite() && *e >= 0.0,
            "exposure",
            *e,
            "finite exposure >= 0",
        )?;
    }

    let times = sample_grid(step * n_steps as f64, step);
    let mut x: [f64; 3] = std::array::from_fn(|j| specs[j].initial_burden());
    let mut out: [Trajectory; 3] = std::array::from_fn(|j| Trajectory {
        times: times.clone(),
        burdens: vec![x[j]],
        intakes: Vec::with_capacity(n_steps),
        ignored_events: 0,
    });
    for (i, e) in exposures.iter().enumerate() {
        let before = psi.apply(x);
        let t = times[i + 1];
        for j in 0..3 {
            let after = before[j] + e[j];
            if after < 0.0 {
                return Err(Error::NegativeBurden {
                    component: j + 1,
                    step: i + 1,
                    value: after,
                });
            }
            x[j] = after;
            out[j].intakes.push(IntakeRecord {
                time: t,
                before: before[j],
                after,
                exposure: e[j],
            });
            out[j].burdens.push(after);
        }
    }
    Ok(out)
}
