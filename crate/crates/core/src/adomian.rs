//! Adomian decomposition of `D^α X + θX = 0`, `X(0) = κ`.
//!
//! With `L = D^α`, `L⁻¹ = I^α` and `R = θ·`, the decomposition
//! `X = Σ Xₙ` is generated by `X₀ = κ`, `Xₙ₊₁ = -I^α(θ Xₙ)`. Each term is a
//! single monomial, so the recursion is executed exactly on
//! [`Monomial`]s. Adomian polynomials are provided for the power
//! nonlinearity `N(u) = u^m`, both from the generating-function definition
//! and from the derivative recurrence.

use std::collections::BTreeMap;

use crate::error::{ensure, Result};
use crate::fraccalc::{rl_integral_monomial, GeneralizedPolynomial, Monomial};
use crate::specfun::gamma;
use crate::sum::CompensatedSum;

/// Number of terms used when the caller has no better choice.
pub const DEFAULT_TERMS: usize = 30;

/// Truncated Adomian series. Term `n` is `(-1)ⁿ θⁿ κ t^{nα} / Γ(nα+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmSeries {
    alpha: f64,
    theta: f64,
    kappa: f64,
    terms: Vec<Monomial>,
    requested: usize,
}

fn check_params(alpha: f64, theta: f64, kappa: f64) -> Result<()> {
    ensure(
        alpha > 0.0 && alpha <= 1.0,
        "alpha",
        alpha,
        "0 < alpha <= 1",
    )?;
    ensure(
        theta.is_finite() && theta > 0.0,
        "theta",
        theta,
        "finite theta > 0",
    )?;
    ensure(
        kappa.is_finite() && kappa >= 0.0,
        "kappa",
        kappa,
        "finite kappa >= 0",
    )
}

impl AdmSeries {
    /// Runs the recursion `Xₙ₊₁ = -θ·I^α(Xₙ)` for `n_terms` terms.
    ///
    /// Generation stops early if a coefficient underflows to zero;
    /// [`AdmSeries::effective_order`] reports how many terms were kept.
    pub fn generate(alpha: f64, theta: f64, kappa: f64, n_terms: usize) -> Result<Self> {
        check_params(alpha, theta, kappa)?;
        ensure(n_terms >= 1, "n_terms", n_terms as f64, "n_terms >= 1")?;
        let mut terms = Vec::with_capacity(n_terms);
        terms.push(Monomial::constant(kappa)?);
        while terms.len() < n_terms {
            let last = *terms.last().expect("non-empty");
            let next = rl_integral_monomial(alpha, last)?.scale(-theta)?;
            // exponent pinned to n·α, repeated addition drifts by ulps
            let next = Monomial::new(next.coefficient(), terms.len() as f64 * alpha)?;
            if kappa != 0.0 && next.coefficient() == 0.0 {
                break;
            }
            terms.push(next);
        }
        Ok(AdmSeries {
            alpha,
            theta,
            kappa,
            terms,
            requested: n_terms,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn requested_terms(&self) -> usize {
        self.requested
    }

    pub fn effective_order(&self) -> usize {
        self.terms.len()
    }

    /// Truncated sum at `t ≥ 0`, accumulated with compensation.
    pub fn partial_sum(&self, t: f64) -> Result<f64> {
        ensure(t.is_finite() && t >= 0.0, "t", t, "finite t >= 0")?;
        Ok(self
            .terms
            .iter()
            .map(|m| m.eval(t))
            .collect::<CompensatedSum>()
            .value())
    }

    pub fn to_polynomial(&self) -> GeneralizedPolynomial {
        GeneralizedPolynomial::from_terms(self.terms.iter().copied())
    }
}

/// Closed form of the `n`-th term, `(-1)ⁿ θⁿ κ / Γ(nα+1) · t^{nα}`.
pub fn closed_form_term(n: usize, alpha: f64, theta: f64, kappa: f64) -> Result<Monomial> {
    check_params(alpha, theta, kappa)?;
    let nf = n as f64;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let coefficient = sign * theta.powi(n as i32) * kappa / gamma(nf * alpha + 1.0)?;
    Monomial::new(coefficient, nf * alpha)
}

/// Decomposition coefficients `u₀, u₁, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries(Vec<f64>);

impl CoefficientSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        ensure(!values.is_empty(), "len", 0.0, "at least one coefficient")?;
        for &v in &values {
            ensure(v.is_finite(), "coefficient", v, "finite")?;
        }
        Ok(CoefficientSeries(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_power(m: u32) -> Result<()> {
    ensure(m >= 2, "m", f64::from(m), "m >= 2")
}

/// Adomian polynomials of `N(u) = u^m` from the definition
/// `Aₙ = (1/n!) dⁿ/dλⁿ N(Σ λⁱ uᵢ) |_{λ=0}`, i.e. the coefficient of `λⁿ`
/// in `(Σ λⁱ uᵢ)^m`, for `n < u.len()`.
pub fn adomian_polynomials_power(m: u32, u: &CoefficientSeries) -> Result<CoefficientSeries> {
    check_power(m)?;
    let len = u.len();
    let mut acc = vec![0.0; len];
    acc[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; len];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in u.0[..len - i].iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    CoefficientSeries::new(acc)
}

/// Polynomial in the variables `u₀, u₁, …` keyed by exponent vectors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MultiPoly(BTreeMap<Vec<u32>, f64>);

impl MultiPoly {
    /// Coefficient of `Π uᵢ^{exponents[i]}` (trailing zeros may be omitted).
    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.0
            .iter()
            .find(|(k, _)| {
                let width = k.len().max(exponents.len());
                (0..width).all(|i| {
                    k.get(i).copied().unwrap_or(0) == exponents.get(i).copied().unwrap_or(0)
                })
            })
            .map_or(0.0, |(_, &c)| c)
    }

    pub fn n_terms(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(exps, &c)| {
                exps.iter()
                    .zip(u)
                    .fold(c, |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .collect::<CompensatedSum>()
            .value()
    }

    fn partial(&self, k: usize) -> MultiPoly {
        let mut out = BTreeMap::new();
        for (exps, &c) in &self.0 {
            if exps[k] > 0 {
                let mut e = exps.clone();
                e[k] -= 1;
                *out.entry(e).or_insert(0.0) += c * f64::from(exps[k]);
            }
        }
        MultiPoly(out)
    }
}

/// Symbolic `A₀ … A_{n_max}` for `N(u) = u^m` by the recurrence
/// `A₀ = u₀^m`, `Aₙ₊₁ = 1/(n+1) Σ_{k=0}^{n} (k+1) uₖ₊₁ ∂Aₙ/∂uₖ`.
pub fn adomian_polynomials_symbolic(m: u32, n_max: usize) -> Result<Vec<MultiPoly>> {
    check_power(m)?;
    let width = n_max + 1;
    let mut first = vec![0u32; width];
    first[0] = m;
    let mut out = vec![MultiPoly(BTreeMap::from([(first, 1.0)]))];
    for n in 0..n_max {
        let current = &out[n];
        let mut next: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for k in 0..=n {
            let weight = (k + 1) as f64 / (n + 1) as f64;
            for (exps, c) in current.partial(k).0 {
                let mut e = exps;
                e[k + 1] += 1;
                *next.entry(e).or_insert(0.0) += weight * c;
            }
        }
        next.retain(|_, c| *c != 0.0);
        out.push(MultiPoly(next));
    }
    Ok(out)
}

/// Adomian polynomials of `u^m` from the recurrence, evaluated at `u`.
pub fn adomian_polynomials_recurrence(m: u32, u: &CoefficientSeries) -> Result<CoefficientSeries> {
    let polys = adomian_polynomials_symbolic(m, u.len() - 1)?;
    CoefficientSeries::new(polys.iter().map(|p| p.eval(&u.0)).collect())
}
