//! Riemann-Liouville fractional calculus with lower bound 0.
//!
//! Monomials `c·t^p` are closed under fractional integration, which makes
//! [`GeneralizedPolynomial`] an exact representation for every term the
//! Adomian recursion produces. [`rl_integral_numeric`] is an independent
//! grid-based route used to cross-check the closed forms.

use crate::error::{ensure, Error, Result};
use crate::specfun::gamma_ratio;
use crate::sum::CompensatedSum;

/// Exponents closer than this are treated as equal when merging terms.
const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// `coefficient · t^exponent` with `exponent ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    coefficient: f64,
    exponent: f64,
}

impl Monomial {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        ensure(
            coefficient.is_finite(),
            "coefficient",
            coefficient,
            "finite",
        )?;
        ensure(
            exponent.is_finite() && exponent >= 0.0,
            "exponent",
            exponent,
            "finite exponent >= 0",
        )?;
        Ok(Monomial {
            coefficient,
            exponent,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Monomial::new(value, 0.0)
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Monomial::new(self.coefficient * factor, self.exponent)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coefficient
        } else {
            self.coefficient * t.powf(self.exponent)
        }
    }
}

/// Finite sum of monomials in canonical form: exponents strictly increasing,
/// no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneralizedPolynomial {
    terms: Vec<Monomial>,
}

impl GeneralizedPolynomial {
    pub fn zero() -> Self {
        GeneralizedPolynomial::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for term in terms {
            match merged.last_mut() {
                Some(last)
                    if (term.exponent - last.exponent).abs()
                        <= EXPONENT_MERGE_TOL * last.exponent.max(1.0) =>
                {
                    last.coefficient += term.coefficient;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|m| m.coefficient != 0.0);
        GeneralizedPolynomial { terms: merged }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the term with the given exponent, or 0.
    pub fn coefficient_of(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|m| (m.exponent - exponent).abs() <= EXPONENT_MERGE_TOL * exponent.max(1.0))
            .map_or(0.0, |m| m.coefficient)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|m| m.eval(t))
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn add(&self, other: &GeneralizedPolynomial) -> GeneralizedPolynomial {
        GeneralizedPolynomial::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, factor: f64) -> GeneralizedPolynomial {
        GeneralizedPolynomial::from_terms(self.terms.iter().map(|m| Monomial {
            coefficient: m.coefficient * factor,
            exponent: m.exponent,
        }))
    }
}

impl FromIterator<Monomial> for GeneralizedPolynomial {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        GeneralizedPolynomial::from_terms(iter)
    }
}

fn check_integral_order(alpha: f64) -> Result<()> {
    ensure(
        alpha > 0.0 && alpha <= 1.0,
        "alpha",
        alpha,
        "0 < alpha <= 1",
    )
}

/// `I^α (c·t^p) = c·Γ(p+1)/Γ(p+α+1) · t^{p+α}`.
pub fn rl_integral_monomial(alpha: f64, m: Monomial) -> Result<Monomial> {
    check_integral_order(alpha)?;
    let p = m.exponent;
    let ratio = gamma_ratio(p + 1.0, p + alpha + 1.0)?;
    Monomial::new(m.coefficient * ratio, p + alpha)
}

/// Term-wise fractional integral of a generalized polynomial.
pub fn rl_integral_poly(alpha: f64, f: &GeneralizedPolynomial) -> Result<GeneralizedPolynomial> {
    check_integral_order(alpha)?;
    f.terms
        .iter()
        .map(|&m| rl_integral_monomial(alpha, m))
        .collect::<Result<Vec<_>>>()
        .map(GeneralizedPolynomial::from_terms)
}

/// Result of differentiating a monomial.
///
/// The Riemann-Liouville derivative of a constant is not zero but
/// `c·t^{-α}/Γ(1-α)`, which leaves the monomial class; it is reported
/// separately so callers can decide how to treat it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FracDerivative {
    Regular(Monomial),
    /// `coefficient · t^exponent` with `exponent = -α`.
    Singular {
        coefficient: f64,
        exponent: f64,
    },
}

/// `D^α (c·t^p) = c·Γ(p+1)/Γ(p+1-α) · t^{p-α}` for `0 < α < 1`.
pub fn rl_derivative_monomial(alpha: f64, m: Monomial) -> Result<FracDerivative> {
    ensure(alpha > 0.0 && alpha < 1.0, "alpha", alpha, "0 < alpha < 1")?;
    let p = m.exponent;
    if p == 0.0 {
        let ratio = gamma_ratio(1.0, 1.0 - alpha)?;
        return Ok(FracDerivative::Singular {
            coefficient: m.coefficient * ratio,
            exponent: -alpha,
        });
    }
    let out_exponent = p - alpha;
    // nudge exponents that land on 0 through rounding, e.g. 3·(1/3) - 1/3
    let out_exponent = if out_exponent.abs() <= EXPONENT_MERGE_TOL * p.max(1.0) {
        0.0
    } else {
        out_exponent
    };
    ensure(
        out_exponent >= 0.0,
        "exponent",
        p,
        "exponent >= alpha for a non-constant term",
    )?;
    let ratio = gamma_ratio(p + 1.0, out_exponent + 1.0)?;
    Monomial::new(m.coefficient * ratio, out_exponent).map(FracDerivative::Regular)
}

/// Fractional derivative of a polynomial, split into its regular part and
/// the accumulated singular `t^{-α}` contribution of the constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyDerivative {
    pub regular: GeneralizedPolynomial,
    pub singular_coefficient: f64,
}

pub fn rl_derivative_poly(alpha: f64, f: &GeneralizedPolynomial) -> Result<PolyDerivative> {
    let mut regular = Vec::with_capacity(f.terms.len());
    let mut singular_coefficient = 0.0;
    for &m in &f.terms {
        match rl_derivative_monomial(alpha, m)? {
            FracDerivative::Regular(r) => regular.push(r),
            FracDerivative::Singular { coefficient, .. } => singular_coefficient += coefficient,
        }
    }
    Ok(PolyDerivative {
        regular: GeneralizedPolynomial::from_terms(regular),
        singular_coefficient,
    })
}

/// Values on the uniform grid `t_k = k·step`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    step: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(step: f64, values: Vec<f64>) -> Result<Self> {
        ensure(
            step.is_finite() && step > 0.0,
            "step",
            step,
            "finite step > 0",
        )?;
        if values.len() < 2 {
            return Err(Error::GridTooShort(values.len()));
        }
        Ok(SampledFunction { step, values })
    }

    /// Samples `f` at `n` grid points.
    pub fn from_fn(step: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        SampledFunction::new(step, (0..n).map(|k| f(k as f64 * step)).collect())
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| k as f64 * self.step)
    }
}

/// Fractional integral of sampled data by product integration: `f` is
/// taken as piecewise linear between nodes and each piece is integrated
/// against the kernel `(t_n - τ)^{α-1}` exactly. The rule is therefore exact
/// for piecewise-linear data, including constants. Cost is `O(n²)`.
pub fn rl_integral_numeric(alpha: f64, f: &SampledFunction) -> Result<SampledFunction> {
    check_integral_order(alpha)?;
    let n = f.values.len();
    let a1 = alpha + 1.0;
    // k^{α+1}, k = 0..n
    let pw: Vec<f64> = (0..=n).map(|k| (k as f64).powf(a1)).collect();
    let scale = f.step.powf(alpha) / libm::tgamma(alpha + 2.0);

    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for i in 1..n {
        let fi = i as f64;
        let mut acc = CompensatedSum::default();
        acc.add(f.values[0] * (pw[i - 1] - (fi - 1.0 - alpha) * fi.powf(alpha)));
        for j in 1..i {
            let k = i - j;
            acc.add(f.values[j] * (pw[k + 1] - 2.0 * pw[k] + pw[k - 1]));
        }
        acc.add(f.values[i]);
        out.push(scale * acc.value());
    }
    SampledFunction::new(f.step, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn mono(c: f64, p: f64) -> Monomial {
        Monomial::new(c, p).unwrap()
    }

    #[test]
    fn monomial_rejects_negative_exponent() {
        assert!(Monomial::new(1.0, -0.5).is_err());
        assert!(Monomial::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn canonical_form_merges_and_sorts() {
        let p = GeneralizedPolynomial::from_terms([
            mono(1.0, 1.5),
            mono(2.0, 0.0),
            mono(-1.0, 1.5),
            mono(3.0, 0.5),
            mono(0.0, 4.0),
            mono(1.0, 0.1 + 0.2),
            mono(1.0, 0.3),
        ]);
        let exps: Vec<f64> = p.terms().iter().map(|m| m.exponent()).collect();
        assert_eq!(exps.len(), 3);
        assert_eq!(exps[0], 0.0);
        assert!((exps[1] - 0.3).abs() < 1e-15);
        assert_eq!(exps[2], 0.5);
        assert_eq!(p.coefficient_of(0.3), 2.0);
        assert_eq!(p.eval(0.0), 2.0);
    }

    #[test]
    fn integral_of_sqrt_t() {
        let out = rl_integral_monomial(0.5, mono(1.0, 0.5)).unwrap();
        assert_eq!(out.exponent(), 1.0);
        assert_relative_eq!(out.coefficient(), PI.sqrt() / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn integral_of_constant_half_order() {
        let theta = 0.3;
        let a = 2.0;
        let out = rl_integral_monomial(0.5, mono(theta * a, 0.0)).unwrap();
        assert_eq!(out.exponent(), 0.5);
        assert_relative_eq!(
            out.coefficient(),
            2.0 * theta * a / PI.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn integral_order_one_is_antiderivative() {
        for p in [0.0, 0.5, 1.0, 2.25, 7.0] {
            let out = rl_integral_monomial(1.0, mono(3.0, p)).unwrap();
            assert_eq!(out.exponent(), p + 1.0);
            assert_relative_eq!(out.coefficient(), 3.0 / (p + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn integral_rejects_bad_order() {
        assert!(rl_integral_monomial(0.0, mono(1.0, 1.0)).is_err());
        assert!(rl_integral_monomial(1.5, mono(1.0, 1.0)).is_err());
    }

    #[test]
    fn poly_integral_examples() {
        let theta = 0.7;
        let a = 1.3;
        let out = rl_integral_poly(
            0.5,
            &GeneralizedPolynomial::from_terms([mono(theta * theta * a, 1.0)]),
        )
        .unwrap();
        assert_eq!(out.terms().len(), 1);
        assert_eq!(out.terms()[0].exponent(), 1.5);
        assert_relative_eq!(
            out.terms()[0].coefficient(),
            4.0 * theta * theta * a / (3.0 * PI.sqrt()),
            max_relative = 1e-14
        );
        assert!(rl_integral_poly(0.3, &GeneralizedPolynomial::zero())
            .unwrap()
            .is_zero());

        let two = GeneralizedPolynomial::from_terms([
            mono(a, 0.0),
            mono(-2.0 * theta * a / PI.sqrt(), 0.5),
        ]);
        let out = rl_integral_poly(0.5, &two).unwrap();
        for (term, src) in out.terms().iter().zip(two.terms()) {
            assert_eq!(*term, rl_integral_monomial(0.5, *src).unwrap());
        }
    }

    #[test]
    fn half_derivative_of_t() {
        match rl_derivative_monomial(0.5, mono(1.0, 1.0)).unwrap() {
            FracDerivative::Regular(m) => {
                assert_eq!(m.exponent(), 0.5);
                assert_relative_eq!(m.coefficient(), 2.0 / PI.sqrt(), max_relative = 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_undoes_integral() {
        let m = mono(1.0, 1.5);
        let back = rl_derivative_monomial(0.5, rl_integral_monomial(0.5, m).unwrap()).unwrap();
        match back {
            FracDerivative::Regular(r) => {
                assert_eq!(r.exponent(), 1.5);
                assert_relative_eq!(r.coefficient(), 1.0, max_relative = 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_of_constant_is_flagged() {
        match rl_derivative_monomial(0.5, mono(2.0, 0.0)).unwrap() {
            FracDerivative::Singular {
                coefficient,
                exponent,
            } => {
                assert_eq!(exponent, -0.5);
                assert_relative_eq!(coefficient, 2.0 / PI.sqrt(), max_relative = 1e-14);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_rejects_negative_result_exponent() {
        assert!(rl_derivative_monomial(0.5, mono(1.0, 0.25)).is_err());
        assert!(rl_derivative_monomial(1.0, mono(1.0, 2.0)).is_err());
    }

    #[test]
    fn near_unit_order_matches_finite_difference() {
        // D^{0.999} t² ≈ 2t, compared against a central difference of t².
        let m = match rl_derivative_monomial(0.999, mono(1.0, 2.0)).unwrap() {
            FracDerivative::Regular(m) => m,
            other => panic!("unexpected {other:?}"),
        };
        let h = 1e-5;
        for i in 0..=30 {
            let t = 0.5 + 0.05 * i as f64;
            let fd = ((t + h) * (t + h) - (t - h) * (t - h)) / (2.0 * h);
            assert!((m.eval(t) - fd).abs() < 1e-2, "t = {t}");
        }
    }

    #[test]
    fn numeric_integral_of_sqrt_t() {
        let h = 1e-3;
        let f = SampledFunction::from_fn(h, 1001, f64::sqrt).unwrap();
        let out = rl_integral_numeric(0.5, &f).unwrap();
        let exact = rl_integral_monomial(0.5, mono(1.0, 0.5)).unwrap();
        for (t, v) in out.times().zip(out.values()) {
            assert!((v - exact.eval(t)).abs() < 5e-3);
        }
    }

    #[test]
    fn numeric_integral_exact_for_constants() {
        let f = SampledFunction::new(0.01, vec![1.0; 301]).unwrap();
        let out = rl_integral_numeric(1.0, &f).unwrap();
        for (t, v) in out.times().zip(out.values()) {
            assert!((v - t).abs() < 1e-12);
        }
    }

    #[test]
    fn numeric_integral_of_zero() {
        let f = SampledFunction::new(0.1, vec![0.0; 50]).unwrap();
        let out = rl_integral_numeric(0.37, &f).unwrap();
        assert!(out.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sampled_function_needs_two_points() {
        assert_eq!(
            SampledFunction::new(0.1, vec![1.0]),
            Err(Error::GridTooShort(1))
        );
        assert!(SampledFunction::new(0.0, vec![1.0, 2.0]).is_err());
    }
}
