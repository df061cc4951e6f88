//! Laplace-domain solution of `D^{2ζ}ψ − w₁D^ζψ + qψ = 0`.
//!
//! With `z = s^ζ` the local fractional Laplace transform acts on the
//! operational derivative exactly like the classical one acts on `d/dt`:
//! `L{D^ζψ} = zΨ − ψ(0)` and `L{D^{2ζ}ψ} = z²Ψ − zψ(0) − D^ζψ(0)`. The table
//! pair `1/(z − λ) ↔ E_ζ(λμ^ζ)` then turns a partial-fraction expansion of
//! `Ψ(z)` into a finite sum of Mittag-Leffler terms ([`ExpSum`]).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::gamma::{FractalOrder, GammaLadder};
use crate::mittag_leffler::{ml_dlambda_eval, ml_eval, DEFAULT_TOL};
use crate::series::FractalSeries;

/// `|Σ| <= DOUBLE_ROOT_TOL · max(1, w₁²)` is classified as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-9;

/// Relative size of an imaginary part tolerated in a real result.
pub const REALNESS_TOL: f64 = 1e-12;

/// Rational function of `z = s^ζ`; coefficients are stored lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalZ {
    num: Vec<Complex>,
    den: Vec<Complex>,
}

impl RationalZ {
    /// Requires a monic denominator with `deg num < deg den`.
    pub fn new(num: Vec<Complex>, den: Vec<Complex>) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.len() < 2 || den[den.len() - 1] != Complex::ONE {
            return Err(Error::Domain("denominator must be monic of degree >= 1"));
        }
        if num.len() >= den.len() {
            return Err(Error::Domain("rational function must be strictly proper"));
        }
        Ok(RationalZ { num, den })
    }

    pub fn numerator(&self) -> &[Complex] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex] {
        &self.den
    }

    pub fn eval(&self, z: Complex) -> Complex {
        poly_eval(&self.num, z) / poly_eval(&self.den, z)
    }

    /// Numerator coefficient of `z^k` (zero beyond the stored degree).
    pub fn num_coeff(&self, k: usize) -> Complex {
        self.num.get(k).copied().unwrap_or(Complex::ZERO)
    }
}

fn trim(mut p: Vec<Complex>) -> Vec<Complex> {
    while p.len() > 1 && p[p.len() - 1] == Complex::ZERO {
        p.pop();
    }
    p
}

fn poly_eval(p: &[Complex], z: Complex) -> Complex {
    p.iter().rev().fold(Complex::ZERO, |acc, &c| acc * z + c)
}

fn poly_mul(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let mut out = vec![Complex::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of `p` by `(z − root)`.
fn deflate(p: &[Complex], root: Complex) -> Vec<Complex> {
    let n = p.len() - 1;
    let mut q = vec![Complex::ZERO; n];
    let mut carry = Complex::ZERO;
    for k in (0..n).rev() {
        carry = p[k + 1] + carry * root;
        q[k] = carry;
    }
    q
}

/// Transform of the initial value problem
/// `D^{2ζ}ψ − w₁D^ζψ + qψ = 0`, `D^ζψ(0) = α`, `ψ(0) = β`:
///
/// `Ψ(z) = (βz + α − w₁β) / (z² − w₁z + q)`.
pub fn lflt_ivp(w1: f64, q: f64, alpha: f64, beta: f64) -> RationalZ {
    RationalZ {
        num: trim(vec![Complex::from(alpha - w1 * beta), Complex::from(beta)]),
        den: vec![Complex::from(q), Complex::from(-w1), Complex::ONE],
    }
}

/// Sign class of the discriminant `Σ = w₁² − 4q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    DistinctReal,
    ComplexPair,
    Double,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::DistinctReal => "distinct-real",
            Branch::ComplexPair => "complex-pair",
            Branch::Double => "double",
        }
    }
}

/// `residue / (z − pole)^multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub residue: Complex,
    pub pole: Complex,
    pub multiplicity: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub terms: Vec<PoleTerm>,
    /// Roots of the denominator, including any whose residues vanished.
    pub roots: Vec<Complex>,
    pub sigma: f64,
    pub branch: Branch,
}

impl PartialFractions {
    /// Distinct denominator roots.
    pub fn poles(&self) -> Vec<Complex> {
        let mut out: Vec<Complex> = Vec::new();
        for &r in &self.roots {
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }

    /// Recombines the terms over their common denominator.
    pub fn reconstruct(&self) -> Result<RationalZ> {
        let mut factors: Vec<(Complex, u8)> = Vec::new();
        for t in &self.terms {
            match factors.iter_mut().find(|(p, _)| *p == t.pole) {
                Some(f) => f.1 = f.1.max(t.multiplicity),
                None => factors.push((t.pole, t.multiplicity)),
            }
        }
        let mut den = vec![Complex::ONE];
        for &(p, m) in &factors {
            for _ in 0..m {
                den = poly_mul(&den, &[-p, Complex::ONE]);
            }
        }
        let mut num = vec![Complex::ZERO; den.len() - 1];
        for t in &self.terms {
            let mut part = den.clone();
            for _ in 0..t.multiplicity {
                part = deflate(&part, t.pole);
            }
            for (k, c) in part.iter().enumerate() {
                num[k] += *c * t.residue;
            }
        }
        RationalZ::new(num, den)
    }
}

/// Partial-fraction expansion of a strictly proper function over a real monic
/// quadratic. Poles are reported `+√Σ` first (or `+i` first when `Σ < 0`);
/// terms with an exactly vanishing residue are dropped.
pub fn decompose(r: &RationalZ, tol: f64) -> Result<PartialFractions> {
    if r.den.len() != 3 {
        return Err(Error::Domain("decompose expects a quadratic denominator"));
    }
    if r.den.iter().any(|c| c.im != 0.0) {
        return Err(Error::Domain("decompose expects a real denominator"));
    }
    let w1 = -r.den[1].re;
    let q = r.den[0].re;
    let sigma = w1 * w1 - 4.0 * q;
    let n0 = r.num_coeff(0);
    let n1 = r.num_coeff(1);

    let mut terms = Vec::with_capacity(2);
    let roots;
    let mut push = |residue: Complex, pole: Complex, multiplicity: u8| {
        if residue != Complex::ZERO {
            terms.push(PoleTerm {
                residue,
                pole,
                multiplicity,
            });
        }
    };

    let branch = if libm::fabs(sigma) <= tol * (w1 * w1).max(1.0) {
        // (n1 z + n0)/(z − λ)² = n1/(z − λ) + (n0 + n1λ)/(z − λ)²
        let lam = Complex::from(w1 / 2.0);
        push(n1, lam, 1);
        push(n0 + n1 * lam, lam, 2);
        roots = vec![lam, lam];
        Branch::Double
    } else {
        let (plus, minus, branch) = if sigma > 0.0 {
            let s = libm::sqrt(sigma);
            // Take the root without cancellation, recover the other from the product q.
            let (plus, minus) = if w1 >= 0.0 {
                let p = (w1 + s) / 2.0;
                (p, q / p)
            } else {
                let m = (w1 - s) / 2.0;
                (q / m, m)
            };
            (Complex::from(plus), Complex::from(minus), Branch::DistinctReal)
        } else {
            let im = libm::sqrt(-sigma) / 2.0;
            (
                Complex::new(w1 / 2.0, im),
                Complex::new(w1 / 2.0, -im),
                Branch::ComplexPair,
            )
        };
        let numer = |z: Complex| n0 + n1 * z;
        push(numer(plus) / (plus - minus), plus, 1);
        push(numer(minus) / (minus - plus), minus, 1);
        roots = vec![plus, minus];
        branch
    };
    Ok(PartialFractions {
        terms,
        roots,
        sigma,
        branch,
    })
}

/// `coeff · ∂_λ^order E_ζ(λμ^ζ)` at rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex,
    pub rate: Complex,
    pub order: u8,
}

/// Finite combination of Mittag-Leffler functions and their rate derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSum {
    pub zeta: FractalOrder,
    pub terms: Vec<ExpTerm>,
    /// Set when the terms are closed under conjugation, so every evaluation is real.
    pub real: bool,
}

fn conj_closed(terms: &[ExpTerm]) -> bool {
    let near = |a: Complex, b: Complex| (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1e-300);
    terms.iter().all(|t| {
        (t.coeff.im == 0.0 && t.rate.im == 0.0)
            || terms.iter().any(|u| {
                u.order == t.order && near(u.rate, t.rate.conj()) && near(u.coeff, t.coeff.conj())
            })
    })
}

impl ExpSum {
    pub fn new(zeta: FractalOrder, terms: Vec<ExpTerm>) -> Self {
        let real = conj_closed(&terms);
        ExpSum { zeta, terms, real }
    }

    /// `D^ζ` of the sum. `D^ζE(λ) = λE(λ)`, and for the rate derivative
    /// `D^ζ∂_λE = E + λ∂_λE` (coefficients `(k+1)λ^k = λ·kλ^{k-1} + λ^k`).
    pub fn derivative(&self) -> ExpSum {
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            match t.order {
                0 => terms.push(ExpTerm {
                    coeff: t.coeff * t.rate,
                    ..*t
                }),
                _ => {
                    terms.push(ExpTerm {
                        coeff: t.coeff,
                        rate: t.rate,
                        order: 0,
                    });
                    terms.push(ExpTerm {
                        coeff: t.coeff * t.rate,
                        rate: t.rate,
                        order: 1,
                    });
                }
            }
        }
        ExpSum {
            zeta: self.zeta,
            terms,
            real: self.real,
        }
    }

    /// Complex value at `μ`, with the sum of term magnitudes.
    pub fn eval_complex(&self, mu: f64) -> Result<(Complex, f64)> {
        let mut value = Complex::ZERO;
        let mut scale = 0.0;
        for t in &self.terms {
            let basis = match t.order {
                0 => ml_eval(self.zeta, t.rate, mu, DEFAULT_TOL)?,
                _ => ml_dlambda_eval(self.zeta, t.rate, mu, DEFAULT_TOL)?,
            };
            let v = t.coeff * basis;
            value += v;
            scale += v.norm();
        }
        Ok((value, scale))
    }

    /// Real value at `μ`; fails if the imaginary part is not negligible.
    pub fn eval(&self, mu: f64) -> Result<f64> {
        let (v, scale) = self.eval_complex(mu)?;
        if libm::fabs(v.im) > REALNESS_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Realness { imaginary: v.im });
        }
        Ok(v.re)
    }

    /// Expansion in the `e_k` basis up to order `n`:
    /// `c_k = Σ A λ^k` (order 0) `+ Σ A k λ^{k-1}` (order 1).
    pub fn to_series(&self, ladder: Arc<GammaLadder>, n: usize) -> Result<FractalSeries> {
        if ladder.order() != self.zeta {
            return Err(Error::OrderMismatch {
                left: ladder.order().value(),
                right: self.zeta.value(),
            });
        }
        let mut acc = vec![Complex::ZERO; n + 1];
        let mut mag = vec![0.0f64; n + 1];
        for t in &self.terms {
            let e = FractalSeries::from_ml(ladder.clone(), t.rate, n)?;
            let b = e.scaled_coeffs();
            for k in 0..=n {
                let a = match t.order {
                    0 => b[k],
                    _ if k == 0 => Complex::ZERO,
                    _ => b[k - 1].scale(k as f64 / ladder.ratio(k - 1)),
                };
                let v = t.coeff * a;
                acc[k] += v;
                mag[k] += v.norm();
            }
        }
        if self.real {
            for k in 0..=n {
                if libm::fabs(acc[k].im) > REALNESS_TOL * mag[k].max(f64::MIN_POSITIVE) {
                    return Err(Error::Realness { imaginary: acc[k].im });
                }
                acc[k].im = 0.0;
            }
        }
        FractalSeries::from_scaled(ladder, acc)
    }
}

/// Term-by-term inverse transform: `A/(z−λ) ↦ A·E_ζ(λμ^ζ)`,
/// `A/(z−λ)² ↦ A·∂_λE_ζ(λ; μ)`.
pub fn invert(pf: &PartialFractions, zeta: FractalOrder) -> ExpSum {
    let terms = pf
        .terms
        .iter()
        .map(|t| ExpTerm {
            coeff: t.residue,
            rate: t.pole,
            order: t.multiplicity - 1,
        })
        .collect();
    ExpSum::new(zeta, terms)
}

/// Series expansion of an [`ExpSum`] with a freshly built ladder.
pub fn expsum_to_series(e: &ExpSum, n: usize) -> Result<FractalSeries> {
    let ladder = Arc::new(GammaLadder::new(e.zeta, n.max(1))?);
    e.to_series(ladder, n)
}

pub fn expsum_eval(e: &ExpSum, mu: f64) -> Result<f64> {
    e.eval(mu)
}
