//! Solver for local fractional Riccati equations
//! `D^ζΦ(μ) = w₀ + w₁Φ(μ) + w₂Φ(μ)²`, `0 < ζ <= 1`.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`gamma`] and [`mittag_leffler`]: `Γ` on the positive axis, the
//!   `Γ(1+kζ)` ladder and direct evaluation of `E_ζ(λμ^ζ)`;
//! * [`series`]: truncated series in the fractal basis `μ^{kζ}/Γ(1+kζ)` with
//!   the operational local fractional derivative;
//! * [`laplace`]: transform, partial fractions and inversion for the
//!   constant-coefficient linear equation;
//! * [`riccati`]: reduction, closed forms, the series oracle and the
//!   discrepancy report comparing them.
#![no_std]

extern crate alloc;

pub mod complex;
pub mod error;
pub mod gamma;
pub mod laplace;
pub mod mittag_leffler;
pub mod riccati;
pub mod series;

pub use complex::Complex;
pub use error::{Error, Result};
pub use gamma::{FractalOrder, GammaLadder};
pub use laplace::{Branch, ExpSum, PartialFractions, RationalZ};
pub use riccati::{
    ClosedFormSolution, Coefficient, DiscrepancyReport, InitialData, LinearODE, RiccatiProblem,
};
pub use series::FractalSeries;
