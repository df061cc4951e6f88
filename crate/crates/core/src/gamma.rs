//! Gamma function on the positive axis and the `Γ(1 + kζ)` ladder.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Order `ζ` of the local fractional operator, `0 < ζ <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractalOrder(f64);

impl FractalOrder {
    pub fn new(zeta: f64) -> Result<Self> {
        if zeta > 0.0 && zeta <= 1.0 {
            Ok(FractalOrder(zeta))
        } else {
            Err(Error::Domain("fractal order must satisfy 0 < zeta <= 1"))
        }
    }

    /// The classical order `ζ = 1`.
    pub const fn classical() -> Self {
        FractalOrder(1.0)
    }

    /// `ln 2 / ln 3`, the dimension of the middle-thirds Cantor set.
    pub fn cantor() -> Self {
        FractalOrder(core::f64::consts::LN_2 / libm::log(3.0))
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const FACTORIAL: [f64; 23] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0,
];

/// Above this argument `Γ(x)` overflows `f64`.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

fn lanczos_sum(xm1: f64) -> f64 {
    let mut t = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        t += c / (xm1 + i as f64);
    }
    t
}

/// `Γ(x)` for `x > 0`. Returns `+∞` past the overflow threshold.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain("gamma requires a positive argument"));
    }
    if x > GAMMA_OVERFLOW {
        return Ok(f64::INFINITY);
    }
    if x == libm::floor(x) && x <= FACTORIAL.len() as f64 {
        return Ok(FACTORIAL[x as usize - 1]);
    }
    if x < 1.0 {
        return Ok(gamma(x + 1.0)? / x);
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    // Split the power so that w^(x-1/2) cannot overflow before exp(-w) scales it.
    let half = libm::pow(w, 0.5 * (xm1 + 0.5));
    Ok(libm::sqrt(2.0 * PI) * half * (libm::exp(-w) * half) * lanczos_sum(xm1))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain("ln_gamma requires a positive argument"));
    }
    if x < 1.0 {
        return Ok(ln_gamma(x + 1.0)? - libm::log(x));
    }
    if x <= 20.0 {
        return Ok(libm::log(gamma(x)?));
    }
    let xm1 = x - 1.0;
    let w = xm1 + LANCZOS_G + 0.5;
    Ok(0.5 * libm::log(2.0 * PI) + (xm1 + 0.5) * libm::log(w) - w + libm::log(lanczos_sum(xm1)))
}

/// Immutable table of `g_k = Γ(1 + kζ)` for `k = 0..=N`.
///
/// Past the `f64` range of `Γ` the table keeps working through its
/// logarithms: ratios `g_{k+1}/g_k` and reciprocals `1/g_k` stay finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaLadder {
    order: FractalOrder,
    values: Vec<f64>,
    ln_values: Vec<f64>,
}

impl GammaLadder {
    pub fn new(order: FractalOrder, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("gamma ladder needs N >= 1"));
        }
        let zeta = order.value();
        let mut values = Vec::with_capacity(n + 1);
        let mut ln_values = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let x = 1.0 + k as f64 * zeta;
            if k == 0 {
                values.push(1.0);
                ln_values.push(0.0);
            } else {
                values.push(gamma(x)?);
                ln_values.push(ln_gamma(x)?);
            }
        }
        Ok(GammaLadder {
            order,
            values,
            ln_values,
        })
    }

    pub fn order(&self) -> FractalOrder {
        self.order
    }

    /// Highest index `N` held by the ladder.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn ln_value(&self, k: usize) -> f64 {
        self.ln_values[k]
    }

    /// `1 / g_k`, which underflows gracefully instead of dividing by `∞`.
    pub fn recip(&self, k: usize) -> f64 {
        let v = self.values[k];
        if v.is_finite() {
            1.0 / v
        } else {
            libm::exp(-self.ln_values[k])
        }
    }

    /// `g_{k+1} / g_k`.
    pub fn ratio(&self, k: usize) -> f64 {
        let (a, b) = (self.values[k + 1], self.values[k]);
        if a.is_finite() {
            a / b
        } else {
            libm::exp(self.ln_values[k + 1] - self.ln_values[k])
        }
    }

    /// Gamma-binomial `B(j, k) = g_{j+k} / (g_j g_k)`, the structure constant
    /// of pointwise multiplication in the basis `μ^{kζ}/Γ(1+kζ)`.
    pub fn binomial(&self, j: usize, k: usize) -> f64 {
        let n = self.values[j + k];
        if n.is_finite() {
            n / (self.values[j] * self.values[k])
        } else {
            libm::exp(self.ln_values[j + k] - self.ln_values[j] - self.ln_values[k])
        }
    }
}

/// Convenience constructor mirroring [`GammaLadder::new`].
pub fn gamma_ladder(order: FractalOrder, n: usize) -> Result<GammaLadder> {
    GammaLadder::new(order, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_identities() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        let half = libm::sqrt(PI) / 2.0;
        assert!(rel(gamma(1.5).unwrap(), half) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), libm::sqrt(PI)) < 1e-14);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-2.5), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain(_))));
        assert!(FractalOrder::new(0.0).is_err());
        assert!(FractalOrder::new(1.0 + 1e-12).is_err());
        assert!(FractalOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence_holds() {
        let mut x = 0.05;
        while x < 49.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 5e-14, "x = {x}");
            x += 0.37;
        }
    }

    #[test]
    fn ln_gamma_matches_log_of_gamma() {
        for &x in &[0.3, 2.5, 19.9, 20.1, 35.7, 120.0, 170.5] {
            let direct = libm::log(gamma(x).unwrap());
            assert!((ln_gamma(x).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn ladder_factorials_at_classical_order() {
        let l = gamma_ladder(FractalOrder::classical(), 4).unwrap();
        assert_eq!(l.values(), &[1.0, 1.0, 2.0, 6.0, 24.0]);
    }

    #[test]
    fn ladder_half_order() {
        let l = gamma_ladder(FractalOrder::new(0.5).unwrap(), 4).unwrap();
        let sp = libm::sqrt(PI);
        let expect = [1.0, sp / 2.0, 1.0, 3.0 * sp / 4.0, 2.0];
        for (a, b) in l.values().iter().zip(expect) {
            assert!(rel(*a, b) < 1e-14);
        }
    }

    #[test]
    fn ladder_ratio_and_recip_survive_overflow() {
        let l = gamma_ladder(FractalOrder::classical(), 400).unwrap();
        assert!(l.value(300).is_infinite());
        assert!(rel(l.ratio(299), 300.0) < 1e-11);
        assert!(l.recip(300) >= 0.0);
        assert!(rel(l.ratio(10), 11.0) < 1e-15);
    }

    #[test]
    fn binomial_is_pascal_at_classical_order() {
        let l = gamma_ladder(FractalOrder::classical(), 20).unwrap();
        let mut row = [0.0f64; 21];
        row[0] = 1.0;
        for n in 1..=20usize {
            for k in (1..=n).rev() {
                row[k] += row[k - 1];
            }
            for k in 0..=n {
                assert!(rel(l.binomial(k, n - k), row[k]) < 1e-13);
            }
        }
    }
}
