//! Direct evaluation of `E_ζ(λμ^ζ) = Σ_k λ^k μ^{kζ} / Γ(1+kζ)` and of its
//! derivative in the rate `λ`.
//!
//! The series is entire, so a plain partial sum converges for every
//! argument; the trouble is cancellation. When `λ` is not a nonnegative
//! real the terms oscillate and the sum loses digits roughly like
//! `exp(|x|)/|E|`. Two guards turn that into an error:
//!
//! * a hard limit on `|λ| μ^ζ` ([`CANCELLATION_LIMIT`]), and
//! * an a-posteriori rounding estimate `ε Σ|t_k| / |Σ t_k|`, rejected above
//!   [`MAX_ROUNDING_ESTIMATE`].
//!
//! At `ζ = 1` the function is `exp` and is evaluated as such.

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::gamma::{gamma, ln_gamma, FractalOrder};

/// Maximum number of series terms.
pub const MAX_TERMS: usize = 512;

/// `|λ|μ^ζ` above which oscillating series are refused.
pub const CANCELLATION_LIMIT: f64 = 30.0;

/// Largest accepted relative rounding estimate of a partial sum.
pub const MAX_ROUNDING_ESTIMATE: f64 = 1e-6;

/// Default stopping tolerance used by the closed-form evaluators.
pub const DEFAULT_TOL: f64 = 1e-17;

fn oscillating(lambda: Complex) -> bool {
    lambda.im != 0.0 || lambda.re < 0.0
}

/// `x^k / Γ(1 + kζ)` scaled by `weight`, switching to logarithms when either
/// factor leaves the `f64` range.
fn series_term(x: Complex, k: usize, zeta: f64, weight: f64) -> Result<Complex> {
    let a = 1.0 + k as f64 * zeta;
    let g = gamma(a)?;
    let p = x.powi(k as i32);
    if g.is_finite() && p.is_finite() {
        return Ok(p.scale(weight / g));
    }
    let r = x.norm();
    if r == 0.0 {
        return Ok(Complex::ZERO);
    }
    let ln_mag = k as f64 * libm::log(r) + libm::log(weight) - ln_gamma(a)?;
    Ok(Complex::cis(k as f64 * x.arg()).scale(libm::exp(ln_mag)))
}

struct Partial {
    sum: Complex,
    abs_sum: f64,
}

/// Sums `Σ_{k >= first} w(k) x^k / Γ(1+kζ)` with the adaptive stopping rule:
/// stop once two consecutive terms fall below `tol · |sum|`.
fn adaptive_sum(
    x: Complex,
    zeta: f64,
    first: usize,
    tol: f64,
    weight: impl Fn(usize) -> f64,
) -> Result<Partial> {
    let mut sum = Complex::ZERO;
    let mut abs_sum = 0.0;
    let mut small_run = 0;
    for k in first..first + MAX_TERMS {
        let t = series_term(x, k, zeta, weight(k))?;
        sum += t;
        abs_sum += t.norm();
        if t.norm() <= tol * sum.norm() {
            small_run += 1;
            if small_run == 2 {
                return Ok(Partial { sum, abs_sum });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

fn check_rounding(p: &Partial, magnitude: f64) -> Result<()> {
    let estimate = f64::EPSILON * p.abs_sum / p.sum.norm();
    if !(estimate <= MAX_ROUNDING_ESTIMATE) {
        return Err(Error::PrecisionLoss { magnitude });
    }
    if !p.sum.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(())
}

fn validate(mu: f64, tol: f64) -> Result<()> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Domain("mittag-leffler argument requires mu >= 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive"));
    }
    Ok(())
}

fn guard(order: FractalOrder, lambda: Complex, t: f64) -> Result<()> {
    let magnitude = lambda.norm() * t;
    if !order.is_classical() && oscillating(lambda) && magnitude > CANCELLATION_LIMIT {
        return Err(Error::PrecisionLoss { magnitude });
    }
    Ok(())
}

/// `E_ζ(λμ^ζ)`.
pub fn ml_eval(order: FractalOrder, lambda: Complex, mu: f64, tol: f64) -> Result<Complex> {
    validate(mu, tol)?;
    if mu == 0.0 {
        return Ok(Complex::ONE);
    }
    if order.is_classical() {
        let v = (lambda * mu).exp();
        return if v.is_finite() { Ok(v) } else { Err(Error::Overflow) };
    }
    let t = libm::pow(mu, order.value());
    guard(order, lambda, t)?;
    ml_series(order, lambda * t, tol)
}

/// Partial sum of `Σ x^k / Γ(1+kζ)` without the `ζ = 1` shortcut or the
/// hard magnitude limit; the rounding estimate still applies.
pub fn ml_series(order: FractalOrder, x: Complex, tol: f64) -> Result<Complex> {
    let p = adaptive_sum(x, order.value(), 0, tol, |_| 1.0)?;
    check_rounding(&p, x.norm())?;
    Ok(p.sum)
}

/// `∂_λ E_ζ(λ; μ) = Σ_{k>=1} k λ^{k-1} μ^{kζ} / Γ(1+kζ)`.
pub fn ml_dlambda_eval(
    order: FractalOrder,
    lambda: Complex,
    mu: f64,
    tol: f64,
) -> Result<Complex> {
    validate(mu, tol)?;
    if mu == 0.0 {
        return Ok(Complex::ZERO);
    }
    if order.is_classical() {
        let v = (lambda * mu).exp().scale(mu);
        return if v.is_finite() { Ok(v) } else { Err(Error::Overflow) };
    }
    let zeta = order.value();
    let t = libm::pow(mu, zeta);
    guard(order, lambda, t)?;
    let x = lambda * t;
    if x.norm() == 0.0 {
        return Ok(Complex::from(t / gamma(1.0 + zeta)?));
    }
    // Σ k x^{k-1} / g_k = (1/x) Σ k x^k / g_k.
    let p = adaptive_sum(x, zeta, 1, tol, |k| k as f64)?;
    check_rounding(&p, x.norm())?;
    Ok(p.sum / x * t)
}
