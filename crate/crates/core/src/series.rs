//! Truncated power series in the fractal basis `e_k(μ) = μ^{kζ} / Γ(1+kζ)`.
//!
//! A [`FractalSeries`] represents `Σ_{k<=N} c_k e_k(μ)`. The local fractional
//! derivative acts by index shift, `D^ζ e_k = e_{k-1}`, which makes
//! `E_ζ(λμ^ζ)` (coefficients `λ^k`) its eigenfunction.
//!
//! Internally coefficients are held as `a_k = c_k / Γ(1+kζ)`, the ordinary
//! Taylor coefficients in `t = μ^ζ`. In that scaling the pointwise product is
//! a Cauchy product (the Gamma-binomials `B(j,k)` cancel) and long expansions
//! of functions with a finite radius do not overflow: `c_k` grows like a
//! factorial, `a_k` only geometrically.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::gamma::{FractalOrder, GammaLadder};

/// Default relative tolerance for [`FractalSeries::eval`].
pub const DEFAULT_EVAL_TOL: f64 = 1e-10;

/// Below this magnitude a divisor's constant term is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FractalSeries {
    ladder: Arc<GammaLadder>,
    scaled: Vec<Complex>,
}

/// Value of a series at a point together with its truncation remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex,
    pub remainder: f64,
}

impl FractalSeries {
    fn check_ladder(ladder: &GammaLadder, n: usize) -> Result<()> {
        if ladder.len() < n.max(1) {
            return Err(Error::Domain("gamma ladder shorter than the series"));
        }
        Ok(())
    }

    /// Builds a series from coefficients `c_k` in the `e_k` basis.
    pub fn from_coeffs(order: FractalOrder, coeffs: &[Complex]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least one coefficient"));
        }
        let ladder = Arc::new(GammaLadder::new(order, (coeffs.len() - 1).max(1))?);
        Self::with_ladder(ladder, coeffs)
    }

    pub fn from_real_coeffs(order: FractalOrder, coeffs: &[f64]) -> Result<Self> {
        let c: Vec<Complex> = coeffs.iter().map(|&x| Complex::from(x)).collect();
        Self::from_coeffs(order, &c)
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but reusing an existing ladder.
    pub fn with_ladder(ladder: Arc<GammaLadder>, coeffs: &[Complex]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least one coefficient"));
        }
        Self::check_ladder(&ladder, coeffs.len() - 1)?;
        let scaled = coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c.scale(ladder.recip(k)))
            .collect();
        Ok(FractalSeries { ladder, scaled })
    }

    /// Builds a series directly from Taylor coefficients in `t = μ^ζ`.
    pub fn from_scaled(ladder: Arc<GammaLadder>, scaled: Vec<Complex>) -> Result<Self> {
        if scaled.is_empty() {
            return Err(Error::Domain("a series needs at least one coefficient"));
        }
        Self::check_ladder(&ladder, scaled.len() - 1)?;
        Ok(FractalSeries { ladder, scaled })
    }

    pub fn zeros(ladder: Arc<GammaLadder>, n: usize) -> Result<Self> {
        Self::from_scaled(ladder, alloc::vec![Complex::ZERO; n + 1])
    }

    /// The constant function `c`, truncated at order `n`.
    pub fn constant(ladder: Arc<GammaLadder>, c: Complex, n: usize) -> Result<Self> {
        let mut s = Self::zeros(ladder, n)?;
        s.scaled[0] = c;
        Ok(s)
    }

    /// The basis function `e_k`, truncated at order `n >= k`.
    pub fn basis(ladder: Arc<GammaLadder>, k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::Domain("basis index exceeds truncation order"));
        }
        let mut s = Self::zeros(ladder, n)?;
        s.scaled[k] = Complex::from(s.ladder.recip(k));
        Ok(s)
    }

    /// Series of `E_ζ(λμ^ζ)`: `c_k = λ^k`.
    pub fn from_ml(ladder: Arc<GammaLadder>, lambda: Complex, n: usize) -> Result<Self> {
        Self::check_ladder(&ladder, n)?;
        let mut scaled = Vec::with_capacity(n + 1);
        let mut a = Complex::ONE;
        scaled.push(a);
        for k in 1..=n {
            a = a * lambda / ladder.ratio(k - 1);
            scaled.push(a);
        }
        Ok(FractalSeries { ladder, scaled })
    }

    pub fn order(&self) -> FractalOrder {
        self.ladder.order()
    }

    pub fn ladder(&self) -> &Arc<GammaLadder> {
        &self.ladder
    }

    /// Truncation order `N` (the series holds `N + 1` coefficients).
    pub fn truncation(&self) -> usize {
        self.scaled.len() - 1
    }

    /// Coefficient `c_k` in the `e_k` basis.
    pub fn coeff(&self, k: usize) -> Complex {
        let a = self.scaled[k];
        let g = self.ladder.value(k);
        if g.is_finite() {
            a.scale(g)
        } else {
            let ln = self.ladder.ln_value(k);
            let r = a.norm();
            if r == 0.0 {
                return Complex::ZERO;
            }
            a.scale(libm::exp(ln + libm::log(r)) / r)
        }
    }

    pub fn coeffs(&self) -> Vec<Complex> {
        (0..self.scaled.len()).map(|k| self.coeff(k)).collect()
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<f64> {
        (0..self.scaled.len()).map(|k| self.coeff(k).re).collect()
    }

    /// Taylor coefficient `a_k = c_k / Γ(1+kζ)` in `t = μ^ζ`.
    pub fn scaled_coeff(&self, k: usize) -> Complex {
        self.scaled[k]
    }

    pub fn scaled_coeffs(&self) -> &[Complex] {
        &self.scaled
    }

    /// Drops every coefficient above order `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.truncation());
        FractalSeries {
            ladder: self.ladder.clone(),
            scaled: self.scaled[..=n].to_vec(),
        }
    }

    fn check_same_order(&self, other: &FractalSeries) -> Result<()> {
        let (l, r) = (self.order().value(), other.order().value());
        if l != r {
            return Err(Error::OrderMismatch { left: l, right: r });
        }
        Ok(())
    }

    /// `a·self + b·other`, truncated to the shorter operand.
    pub fn add(&self, other: &FractalSeries, a: Complex, b: Complex) -> Result<Self> {
        self.check_same_order(other)?;
        let scaled = self
            .scaled
            .iter()
            .zip(&other.scaled)
            .map(|(&f, &g)| a * f + b * g)
            .collect();
        Ok(FractalSeries {
            ladder: self.ladder.clone(),
            scaled,
        })
    }

    pub fn scale(&self, k: Complex) -> Self {
        FractalSeries {
            ladder: self.ladder.clone(),
            scaled: self.scaled.iter().map(|&a| a * k).collect(),
        }
    }

    /// Adds a constant to the series.
    pub fn shift(&self, c: Complex) -> Self {
        let mut s = self.clone();
        s.scaled[0] += c;
        s
    }

    /// Pointwise product. In the `e_k` basis this is
    /// `(f⊙g)_n = Σ_j B(j, n-j) f_j g_{n-j}`.
    pub fn mul(&self, other: &FractalSeries) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.truncation().min(other.truncation());
        let scaled = (0..=n)
            .map(|m| (0..=m).map(|j| self.scaled[j] * other.scaled[m - j]).sum())
            .collect();
        Ok(FractalSeries {
            ladder: self.ladder.clone(),
            scaled,
        })
    }

    /// Pointwise quotient `self / divisor` by forward substitution.
    pub fn div(&self, divisor: &FractalSeries) -> Result<Self> {
        self.check_same_order(divisor)?;
        let h0 = divisor.scaled[0];
        if h0.norm() < POLE_TOL {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.truncation().min(divisor.truncation());
        let mut q: Vec<Complex> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let acc: Complex = (0..m).map(|j| q[j] * divisor.scaled[m - j]).sum();
            q.push((self.scaled[m] - acc) / h0);
        }
        Ok(FractalSeries {
            ladder: self.ladder.clone(),
            scaled: q,
        })
    }

    /// Local fractional derivative: `(D^ζ f)_k = f_{k+1}`, truncation `N - 1`.
    pub fn lfd(&self) -> Result<Self> {
        let n = self.truncation();
        if n < 1 {
            return Err(Error::Domain("derivative needs truncation order >= 1"));
        }
        let scaled = (0..n)
            .map(|k| self.scaled[k + 1].scale(self.ladder.ratio(k)))
            .collect();
        Ok(FractalSeries {
            ladder: self.ladder.clone(),
            scaled,
        })
    }

    /// Evaluates with the default tolerance [`DEFAULT_EVAL_TOL`].
    pub fn eval(&self, mu: f64) -> Result<SeriesValue> {
        self.eval_with_tol(mu, DEFAULT_EVAL_TOL)
    }

    /// Evaluates `Σ c_k e_k(μ)` and estimates the truncation remainder from
    /// the decay of the trailing terms. Fails when the remainder exceeds
    /// `tol · max(1, |value|)`.
    pub fn eval_with_tol(&self, mu: f64, tol: f64) -> Result<SeriesValue> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::Domain("series evaluation requires mu >= 0"));
        }
        if mu == 0.0 {
            return Ok(SeriesValue {
                value: self.scaled[0],
                remainder: 0.0,
            });
        }
        let t = libm::pow(mu, self.order().value());
        let mut value = Complex::ZERO;
        let mut tk = 1.0;
        let mut mags = Vec::with_capacity(self.scaled.len());
        for &a in &self.scaled {
            let term = a.scale(tk);
            value += term;
            mags.push(term.norm());
            tk *= t;
        }
        if !value.is_finite() {
            return Err(Error::Overflow);
        }
        let remainder = tail_estimate(&mags);
        if !(remainder <= tol * value.norm().max(1.0)) {
            return Err(Error::InsufficientTruncation { remainder });
        }
        Ok(SeriesValue { value, remainder })
    }
}

/// Geometric extrapolation of the omitted tail from the last two blocks of
/// term magnitudes.
fn tail_estimate(mags: &[f64]) -> f64 {
    let n = mags.len();
    if n < 2 {
        return 0.0;
    }
    let m = (n / 2).min(8);
    let last = mags[n - m..].iter().cloned().fold(0.0, f64::max);
    if last == 0.0 {
        return 0.0;
    }
    let prev = mags[n - 2 * m..n - m].iter().cloned().fold(0.0, f64::max);
    if prev == 0.0 {
        return f64::INFINITY;
    }
    let rho = libm::pow(last / prev, 1.0 / m as f64);
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    last * rho / (1.0 - rho)
}

/// Difference quotient `Γ(1+ζ)[f(μ₀+h) − f(μ₀)] / h^ζ` taken at a fixed step.
///
/// Diagnostic only: at interior points it tends to zero for the basis
/// functions, unlike the operational derivative.
pub fn finite_diff_lfd(f: impl Fn(f64) -> f64, mu0: f64, h: f64, order: FractalOrder) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain("finite difference step must be positive"));
    }
    let zeta = order.value();
    let g = crate::gamma::gamma(1.0 + zeta)?;
    Ok(g * (f(mu0 + h) - f(mu0)) / libm::pow(h, zeta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mittag_leffler::ml_eval;

    fn ladder(z: f64, n: usize) -> Arc<GammaLadder> {
        Arc::new(GammaLadder::new(FractalOrder::new(z).unwrap(), n).unwrap())
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn add_identities() {
        let l = ladder(0.6, 10);
        let f = FractalSeries::from_ml(l.clone(), Complex::from(1.3), 10).unwrap();
        let zero = FractalSeries::zeros(l.clone(), 10).unwrap();
        assert_eq!(f.add(&zero, Complex::ONE, Complex::ONE).unwrap(), f);
        let d = f.add(&f, Complex::ONE, Complex::from(-1.0)).unwrap();
        assert!(d.scaled_coeffs().iter().all(|c| *c == Complex::ZERO));
        let e1 = FractalSeries::basis(l.clone(), 1, 10).unwrap();
        let s = e1.add(&e1, Complex::from(2.0), Complex::from(3.0)).unwrap();
        assert!(close(s.coeff(1), Complex::from(5.0), 1e-15));
    }

    #[test]
    fn mixed_lengths_truncate_to_shorter() {
        let l = ladder(0.5, 12);
        let f = FractalSeries::from_ml(l.clone(), Complex::ONE, 12).unwrap();
        let g = FractalSeries::from_ml(l.clone(), Complex::ONE, 5).unwrap();
        assert_eq!(f.add(&g, Complex::ONE, Complex::ONE).unwrap().truncation(), 5);
        assert_eq!(f.mul(&g).unwrap().truncation(), 5);
        assert_eq!(g.div(&f).unwrap().truncation(), 5);
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let f = FractalSeries::from_real_coeffs(FractalOrder::new(0.5).unwrap(), &[1.0, 2.0]).unwrap();
        let g = FractalSeries::from_real_coeffs(FractalOrder::new(0.6).unwrap(), &[1.0, 2.0]).unwrap();
        assert!(matches!(f.mul(&g), Err(Error::OrderMismatch { .. })));
        assert!(matches!(
            f.add(&g, Complex::ONE, Complex::ONE),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn classical_square_of_identity() {
        let l = ladder(1.0, 4);
        let e1 = FractalSeries::basis(l, 1, 4).unwrap();
        let sq = e1.mul(&e1).unwrap();
        assert_eq!(sq.real_coeffs(), [0.0, 0.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn multiplicative_identity() {
        let l = ladder(0.4, 8);
        let f = FractalSeries::from_ml(l.clone(), Complex::new(0.3, 1.0), 8).unwrap();
        let one = FractalSeries::constant(l, Complex::ONE, 8).unwrap();
        assert_eq!(f.mul(&one).unwrap(), f);
        assert_eq!(f.div(&one).unwrap(), f);
    }

    #[test]
    fn division_by_pole() {
        let l = ladder(0.5, 6);
        let f = FractalSeries::constant(l.clone(), Complex::ONE, 6).unwrap();
        let h = FractalSeries::basis(l, 1, 6).unwrap();
        assert_eq!(f.div(&h), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn reciprocal_at_half_order() {
        let l = ladder(0.5, 30);
        let one = FractalSeries::constant(l.clone(), Complex::ONE, 30).unwrap();
        let h = one.add(&FractalSeries::basis(l, 1, 30).unwrap(), Complex::ONE, Complex::ONE).unwrap();
        let r = one.div(&h).unwrap();
        let back = r.mul(&h).unwrap();
        for k in 0..=30 {
            let expect = if k == 0 { Complex::ONE } else { Complex::ZERO };
            assert!(close(back.coeff(k), expect, 1e-12), "k = {k}");
        }
    }

    #[test]
    fn derivative_shifts_basis() {
        let l = ladder(0.7, 6);
        let c = FractalSeries::constant(l.clone(), Complex::from(4.0), 6).unwrap();
        assert!(c.lfd().unwrap().scaled_coeffs().iter().all(|a| *a == Complex::ZERO));
        for k in 1..=6 {
            let d = FractalSeries::basis(l.clone(), k, 6).unwrap().lfd().unwrap();
            assert_eq!(d.truncation(), 5);
            for j in 0..=5 {
                let expect = if j == k - 1 { 1.0 } else { 0.0 };
                assert!((d.coeff(j).re - expect).abs() < 1e-14);
            }
        }
        let zero_order = FractalSeries::constant(l, Complex::ONE, 0).unwrap();
        assert!(zero_order.lfd().is_err());
    }

    #[test]
    fn eigen_identity() {
        let l = ladder(FractalOrder::cantor().value(), 48);
        let lam = Complex::from(-2.5);
        let e = FractalSeries::from_ml(l, lam, 48).unwrap();
        let d = e.lfd().unwrap();
        for k in 0..48 {
            assert!(close(d.coeff(k), lam * e.coeff(k), 1e-13));
        }
    }

    #[test]
    fn ml_series_coefficients() {
        let l = ladder(1.0, 6);
        let e = FractalSeries::from_ml(l.clone(), Complex::from(2.0), 6).unwrap();
        for (k, c) in e.real_coeffs().iter().enumerate() {
            assert!((c - (1u64 << k) as f64).abs() < 1e-12);
        }
        let c = FractalSeries::from_ml(l, Complex::ZERO, 6).unwrap();
        assert_eq!(c.real_coeffs(), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn ml_series_matches_direct_evaluation() {
        let o = FractalOrder::cantor();
        let l = Arc::new(GammaLadder::new(o, 64).unwrap());
        let lam = Complex::from(-(3.0 + libm::sqrt(5.0)) / 2.0);
        let s = FractalSeries::from_ml(l, lam, 64).unwrap();
        let v = s.eval(0.3).unwrap().value;
        let d = ml_eval(o, lam, 0.3, 1e-17).unwrap();
        assert!((v - d).norm() < 1e-11);
    }

    #[test]
    fn eval_basics() {
        let l = ladder(0.5, 8);
        let e0 = FractalSeries::constant(l.clone(), Complex::ONE, 8).unwrap();
        assert_eq!(e0.eval(3.7).unwrap().value, Complex::ONE);
        let one = ladder(1.0, 30);
        let exp = FractalSeries::from_ml(one, Complex::ONE, 30).unwrap();
        let v = exp.eval(1.0).unwrap();
        assert!((v.value.re - core::f64::consts::E).abs() < 1e-10);
        let s = FractalSeries::from_real_coeffs(FractalOrder::new(0.5).unwrap(), &[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.eval(0.0).unwrap().value, Complex::from(3.0));
    }

    #[test]
    fn eval_refuses_outside_radius() {
        // 1/(1 - t) has radius 1 in t = μ^ζ.
        let l = ladder(1.0, 40);
        let one = FractalSeries::constant(l.clone(), Complex::ONE, 40).unwrap();
        let h = one.add(&FractalSeries::basis(l, 1, 40).unwrap(), Complex::ONE, Complex::from(-1.0)).unwrap();
        let g = one.div(&h).unwrap();
        assert!(g.eval(0.2).is_ok());
        assert!(matches!(g.eval(0.95), Err(Error::InsufficientTruncation { .. })));
        assert!(matches!(g.eval(1.5), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn finite_difference_diagnostic() {
        let o = FractalOrder::new(0.5).unwrap();
        let g1 = crate::gamma::gamma(1.5).unwrap();
        let e1 = move |mu: f64| libm::pow(mu, 0.5) / g1;
        for h in [1e-3, 0.1, 2.0] {
            assert!((finite_diff_lfd(e1, 0.0, h, o).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(finite_diff_lfd(|_| 7.0, 0.4, 1e-3, o).unwrap(), 0.0);
        let h = 1e-6;
        let v = finite_diff_lfd(e1, 1.0, h, o).unwrap();
        let expect = (libm::pow(1.0 + h, 0.5) - 1.0) / libm::pow(h, 0.5);
        assert!((v - expect).abs() < 1e-9);
        assert!(v < 1e-3);
        assert!(finite_diff_lfd(e1, 1.0, 0.0, o).is_err());
    }
}
