//! Double-precision evaluation of q-series and of the closed hypergeometric
//! formula for `h`, and a cross-check between the two.
//!
//! Fractional powers of `q` use `log q = 2 pi i tau` exactly, so
//! `q^a` at `tau + 1` picks up the phase `exp(2 pi i a)` and nothing else.
//! The closed form uses the principal branch of `z^(n/m)` for
//! `z = 1728/j(tau)`, which agrees with the series branch when
//! `|Re tau| < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::forms::{j_inverse, FormsError};
use crate::hypergeometric::{hypergeom_coeffs, Component, ComponentRecipe, HypergeomError};
use crate::series::{PuiseuxSeries, QSeries, Rational};
use crate::solver::{solve, SolutionBundle, SolveError};

pub type ComplexValue = Complex64;

/// Distance kept from the unit circle when summing hypergeometric series.
pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("tau = {0} is not in the upper half-plane")]
    NotUpperHalfPlane(ComplexValue),
    #[error("|1728/j| = {modulus} is not below 1 - {margin}; the hypergeometric series is not summed there")]
    OutsideDisk { modulus: f64, margin: f64 },
    #[error("non-finite value while evaluating {0}")]
    NonFinite(&'static str),
    #[error("closed form needs 0 < n < m, got m = {m}, n = {n}")]
    ClosedFormNeedsReducedN { m: u64, n: u64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Hypergeom(#[from] HypergeomError),
    #[error(transparent)]
    Forms(#[from] FormsError),
}

/// Both evaluations of `h` at one point. `via_series` is rescaled by
/// `1728^(n/m)` so that both values use the closed form's normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub tau: ComplexValue,
    pub via_series: ComplexValue,
    pub via_hypergeom: ComplexValue,
    pub rel_error: f64,
    pub terms_used: usize,
    /// Heuristic size of the omitted series tail; not a guaranteed bound.
    pub tail_bound: f64,
}

fn check_tau(tau: ComplexValue) -> Result<(), EvalError> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(EvalError::NotUpperHalfPlane(tau))
    }
}

fn finite(z: ComplexValue, what: &'static str) -> Result<ComplexValue, EvalError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

fn to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// `exp(a * 2 pi i tau)`.
fn q_power(a: f64, tau: ComplexValue) -> ComplexValue {
    (ComplexValue::new(0.0, 2.0 * PI) * tau * a).exp()
}

/// Horner sum of the first `terms` coefficients at `x`.
fn horner(coeffs: &[Rational], x: ComplexValue) -> ComplexValue {
    coeffs.iter().rev().fold(ComplexValue::new(0.0, 0.0), |acc, c| acc * x + to_f64(c))
}

/// Last term magnitude times a geometric continuation using the ratio of
/// the last two coefficients.
fn tail_estimate(coeffs: &[Rational], modulus: f64) -> f64 {
    let n = coeffs.len();
    if n < 2 {
        return 0.0;
    }
    let last = to_f64(&coeffs[n - 1]).abs();
    let prev = to_f64(&coeffs[n - 2]).abs();
    if last == 0.0 {
        return 0.0;
    }
    let growth = if prev == 0.0 { 1.0 } else { last / prev };
    let step = growth * modulus;
    if step >= 1.0 {
        f64::INFINITY
    } else {
        last * modulus.powi(n as i32) * step / (1.0 - step)
    }
}

/// Value of `q^offset * sum_{i<N} c_i q^i` at `tau`, with a tail estimate.
pub fn eval_qseries_with_tail(
    f: &PuiseuxSeries,
    tau: ComplexValue,
    terms: usize,
) -> Result<(ComplexValue, f64), EvalError> {
    check_tau(tau)?;
    let coeffs = &f.body().coeffs()[..terms.min(f.order())];
    let q = q_power(1.0, tau);
    let sum = finite(horner(coeffs, q), "q-series sum")?;
    let value = finite(q_power(to_f64(f.offset()), tau) * sum, "q-series value")?;
    let tail = tail_estimate(coeffs, q.norm()) * q_power(to_f64(f.offset()), tau).norm();
    Ok((value, tail))
}

pub fn eval_qseries(f: &PuiseuxSeries, tau: ComplexValue, terms: usize) -> Result<ComplexValue, EvalError> {
    eval_qseries_with_tail(f, tau, terms).map(|(v, _)| v)
}

/// `1728/j(tau)` summed from its q-series with `terms` coefficients.
pub fn eval_j_inverse(tau: ComplexValue, terms: usize) -> Result<ComplexValue, EvalError> {
    check_tau(tau)?;
    let series = j_inverse(terms.max(2))?;
    let z = horner(series.coeffs(), q_power(1.0, tau));
    finite(z, "1728/j")
}

fn hypergeometric_sum(coeffs: &QSeries, z: ComplexValue) -> Result<ComplexValue, EvalError> {
    finite(horner(coeffs.coeffs(), z), "hypergeometric sum")
}

/// The closed form
/// `h = z^x F(x/2 + 1/12, x/2 + 5/12; x + 1; z) / F(-x/2 + 1/12, -x/2 + 5/12; 1 - x; z)`
/// with `z = 1728/j(tau)` and `x = n'/m`.
pub fn eval_h_hypergeometric(m: u64, n_prime: u64, tau: ComplexValue, terms: usize) -> Result<ComplexValue, EvalError> {
    eval_h_hypergeometric_with_margin(m, n_prime, tau, terms, DEFAULT_MARGIN)
}

pub fn eval_h_hypergeometric_with_margin(
    m: u64,
    n_prime: u64,
    tau: ComplexValue,
    terms: usize,
    margin: f64,
) -> Result<ComplexValue, EvalError> {
    check_tau(tau)?;
    let first = ComponentRecipe::new(m, n_prime, Component::First)?;
    let second = ComponentRecipe::new(m, n_prime, Component::Second)?;
    let z = eval_j_inverse(tau, terms)?;
    let modulus = z.norm();
    if modulus >= 1.0 - margin {
        return Err(EvalError::OutsideDisk { modulus, margin });
    }
    let num = hypergeometric_sum(&hypergeom_coeffs(&first.params, terms), z)?;
    let den = hypergeometric_sum(&hypergeom_coeffs(&second.params, terms), z)?;
    let x = n_prime as f64 / m as f64;
    let outer = if modulus == 0.0 { ComplexValue::new(0.0, 0.0) } else { (z.ln() * x).exp() };
    finite(outer * num / den, "closed-form h")
}

/// Solve for `h` and compare both evaluations at `tau`.
pub fn cross_check(m: u64, n: u64, tau: ComplexValue, terms: usize) -> Result<EvalReport, EvalError> {
    if n == 0 || n >= m {
        return Err(EvalError::ClosedFormNeedsReducedN { m, n });
    }
    check_tau(tau)?;
    let bundle = solve(m, n, terms)?;
    cross_check_solution(&bundle, tau, terms)
}

/// Cross-check against an existing solution bundle.
pub fn cross_check_solution(bundle: &SolutionBundle, tau: ComplexValue, terms: usize) -> Result<EvalReport, EvalError> {
    let (m, n) = (bundle.m, bundle.n);
    if n == 0 || n >= m {
        return Err(EvalError::ClosedFormNeedsReducedN { m, n });
    }
    let (series, tail) = eval_qseries_with_tail(&bundle.h, tau, terms)?;
    let via_hypergeom = eval_h_hypergeometric(m, n, tau, terms)?;
    let scale = 1728f64.powf(n as f64 / m as f64);
    let via_series = series * scale;
    Ok(EvalReport {
        tau,
        via_series,
        via_hypergeom,
        rel_error: relative_error(via_series, via_hypergeom),
        terms_used: terms,
        tail_bound: tail * scale,
    })
}

/// `|a - b| / max(|a|, eps)`.
pub fn relative_error(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / a.norm().max(f64::EPSILON)
}

/// `|f(tau + 1) - exp(2 pi i a) f(tau)| / |f(tau)|` for `f` of offset `a`.
pub fn phase_equivariance_error(f: &PuiseuxSeries, tau: ComplexValue, terms: usize) -> Result<f64, EvalError> {
    let here = eval_qseries(f, tau, terms)?;
    let shifted = eval_qseries(f, tau + 1.0, terms)?;
    let phase = (ComplexValue::new(0.0, 2.0 * PI) * to_f64(f.offset())).exp();
    Ok((shifted - phase * here).norm() / here.norm().max(f64::EPSILON))
}

/// Parse `"x+yi"`, `"x-yi"`, `"yi"`, `"i"`, or a real `"x"`.
pub fn parse_complex(s: &str) -> Option<ComplexValue> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| ComplexValue::new(re, 0.0));
    };
    // split at the last sign that is not at the start or after an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(ComplexValue::new(re.parse::<f64>().ok()?, im))
}
