use crate::error::{Error, Result};
use crate::laplace::{decompose, invert, lflt_ivp, Branch, ExpSum, PartialFractions, DOUBLE_ROOT_TOL};

use super::{ic_map, InitialData, RiccatiProblem};

/// Number of uniform intervals scanned for a sign change of `ψ`.
pub const POLE_SCAN_POINTS: usize = 512;

const BISECTION_TOL: f64 = 1e-12;

/// Constant-coefficient solution `Φ = −D^ζψ / (w₂ψ)` with `ψ` in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSolution {
    pub psi: ExpSum,
    pub dpsi: ExpSum,
    pub w2: f64,
    pub branch: Branch,
    pub sigma: f64,
    pub fractions: PartialFractions,
    pub initial: InitialData,
}

impl ClosedFormSolution {
    /// `ψ(μ)`; returns the initial data exactly at `μ = 0`.
    pub fn psi(&self, mu: f64) -> Result<f64> {
        if mu == 0.0 {
            return Ok(self.initial.beta);
        }
        self.psi.eval(mu)
    }

    /// `D^ζψ(μ)`; returns the initial data exactly at `μ = 0`.
    pub fn dpsi(&self, mu: f64) -> Result<f64> {
        if mu == 0.0 {
            return Ok(self.initial.alpha);
        }
        self.dpsi.eval(mu)
    }

    /// `Φ(μ)`; infinite where `ψ` vanishes.
    pub fn phi(&self, mu: f64) -> Result<f64> {
        let psi = self.psi(mu)?;
        let dpsi = self.dpsi(mu)?;
        Ok(-dpsi / (self.w2 * psi))
    }
}

/// Transform, decompose and invert the linearised problem.
pub fn solve_constant(p: &RiccatiProblem) -> Result<ClosedFormSolution> {
    let (w0, w1, w2) = p
        .constants()
        .ok_or(Error::InvalidProblem("closed form requires constant coefficients"))?;
    let initial = ic_map(p);
    let rz = lflt_ivp(w1, w2 * w0, initial.alpha, initial.beta);
    let fractions = decompose(&rz, DOUBLE_ROOT_TOL)?;
    let psi = invert(&fractions, p.zeta);
    let dpsi = psi.derivative();
    Ok(ClosedFormSolution {
        branch: fractions.branch,
        sigma: fractions.sigma,
        psi,
        dpsi,
        w2,
        fractions,
        initial,
    })
}

/// First zero of `ψ` on `[0, mu_max]`: uniform scan, then bisection.
pub fn find_pole(sol: &ClosedFormSolution, mu_max: f64) -> Result<Option<f64>> {
    if !(mu_max > 0.0) || !mu_max.is_finite() {
        return Err(Error::Domain("pole search needs a positive interval"));
    }
    let step = mu_max / POLE_SCAN_POINTS as f64;
    let mut lo = 0.0;
    let mut f_lo = sol.psi(lo)?;
    if f_lo == 0.0 {
        return Ok(Some(0.0));
    }
    for i in 1..=POLE_SCAN_POINTS {
        let hi = if i == POLE_SCAN_POINTS { mu_max } else { i as f64 * step };
        let f_hi = sol.psi(hi)?;
        if f_hi == 0.0 {
            return Ok(Some(hi));
        }
        if (f_lo < 0.0) != (f_hi < 0.0) {
            return bisect(sol, lo, hi, f_lo).map(Some);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(None)
}

fn bisect(sol: &ClosedFormSolution, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = sol.psi(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
