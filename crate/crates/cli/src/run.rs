use std::fmt::{self, Write};

use fractal_riccati::riccati::{
    compare_semantics, find_pole, ic_map, reduce_to_linear, solve_constant,
};
use fractal_riccati::{Coefficient, Complex, Error};

use crate::csv::{emit_csv, Flag, SampleRow};
use crate::job::{InvalidJob, JobSpec, Mode};
use crate::report::emit_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum RunError {
    /// Bad job specification or unusable input/output path.
    Invalid(String),
    /// A numerical guard of the solver tripped.
    Numerical(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => EXIT_INVALID,
            RunError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Invalid(msg) => write!(f, "invalid job: {msg}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<InvalidJob> for RunError {
    fn from(e: InvalidJob) -> Self {
        RunError::Invalid(e.0)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e)
        } else {
            RunError::Invalid(e.to_string())
        }
    }
}

/// What a job produced: the primary text output and diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
}

pub fn run_job(spec: &JobSpec) -> Result<Output, RunError> {
    let problem = spec.problem()?;
    match spec.mode {
        Mode::Solve => solve(spec),
        Mode::Sample => {
            let (rows, pole) = sample(spec)?;
            let mut warnings = Vec::new();
            if let Some(pole) = pole {
                let after = rows.iter().filter(|r| r.flag == Flag::AfterPole).count();
                warnings.push(format!(
                    "psi vanishes at mu = {pole:.12e}; {after} of {} rows flagged after_pole",
                    rows.len()
                ));
            }
            Ok(Output {
                text: emit_csv(&rows),
                warnings,
            })
        }
        Mode::Verify => {
            let report = compare_semantics(&problem, spec.terms, &spec.grid())?;
            Ok(Output {
                text: emit_report(&report, spec.phi0),
                warnings: Vec::new(),
            })
        }
        Mode::Reduce => {
            let ode = reduce_to_linear(&problem)?;
            let ic = ic_map(&problem);
            let constant = |c: &Coefficient| c.as_constant().unwrap_or(f64::NAN);
            let mut text = String::new();
            let _ = writeln!(text, "omega1 {}", constant(&ode.omega1));
            let _ = writeln!(text, "omega2 {}", constant(&ode.omega2));
            let _ = writeln!(text, "alpha {}", ic.alpha);
            let _ = writeln!(text, "beta {}", ic.beta);
            Ok(Output {
                text,
                warnings: Vec::new(),
            })
        }
    }
}

fn complex(z: Complex) -> String {
    format!("{} {}", z.re, z.im)
}

fn solve(spec: &JobSpec) -> Result<Output, RunError> {
    let sol = solve_constant(&spec.problem()?)?;
    let mut text = String::new();
    let _ = writeln!(text, "branch {}", sol.branch.name());
    let _ = writeln!(text, "sigma {}", sol.sigma);
    let _ = writeln!(text, "alpha {}", sol.initial.alpha);
    let _ = writeln!(text, "beta {}", sol.initial.beta);
    for r in sol.fractions.poles() {
        let _ = writeln!(text, "pole {}", complex(r));
    }
    for t in &sol.fractions.terms {
        let _ = writeln!(
            text,
            "term residue {} pole {} multiplicity {}",
            complex(t.residue),
            complex(t.pole),
            t.multiplicity
        );
    }
    match find_pole(&sol, spec.mu_max)? {
        Some(mu) => {
            let _ = writeln!(text, "blow_up {mu}");
        }
        None => {
            let _ = writeln!(text, "blow_up none");
        }
    }
    Ok(Output {
        text,
        warnings: Vec::new(),
    })
}

/// Closed-form samples on the job grid, with the first zero of `ψ` if it
/// falls inside `[0, mu_max]`. Rows at or past it are flagged, not dropped.
pub fn sample(spec: &JobSpec) -> Result<(Vec<SampleRow>, Option<f64>), RunError> {
    let problem = spec.problem()?;
    let sol = solve_constant(&problem)?;
    let pole = find_pole(&sol, spec.mu_max)?;
    let mut rows = Vec::with_capacity(spec.grid_points);
    for mu in spec.grid() {
        let flag = match pole {
            Some(p) if mu >= p => Flag::AfterPole,
            _ => Flag::Ok,
        };
        let psi = sol.psi(mu)?;
        let dpsi = sol.dpsi(mu)?;
        let phi = -dpsi / (spec.w2 * psi);
        if flag == Flag::Ok && !phi.is_finite() {
            return Err(RunError::Numerical(Error::Overflow));
        }
        rows.push(SampleRow {
            mu,
            phi,
            psi,
            dpsi_zeta: dpsi,
            flag,
        });
    }
    Ok((rows, pole))
}
