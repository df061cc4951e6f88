use std::fmt;
use std::path::Path;

use fractal_riccati::riccati::DEFAULT_TERMS;
use fractal_riccati::{FractalOrder, RiccatiProblem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Closed-form description: branch, discriminant, poles and residues.
    Solve,
    /// Sampled solution curve as CSV.
    Sample,
    /// JSON comparison report.
    Verify,
    /// Coefficients of the linearised equation and its initial data.
    Reduce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `D^ζΦ = 1 + 3Φ + Φ²`, `Φ(0) = 1`, `ζ = ln2/ln3` on `[0, 0.5]`.
    Fig1,
}

/// A fully specified run of the solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobSpec {
    pub zeta: f64,
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub phi0: f64,
    pub mu_max: f64,
    pub grid_points: usize,
    pub terms: usize,
    pub mode: Mode,
}

impl JobSpec {
    pub fn preset(p: Preset) -> JobSpec {
        match p {
            Preset::Fig1 => JobSpec {
                zeta: FractalOrder::cantor().value(),
                w0: 1.0,
                w1: 3.0,
                w2: 1.0,
                phi0: 1.0,
                mu_max: 0.5,
                grid_points: 256,
                terms: DEFAULT_TERMS,
                mode: Mode::Sample,
            },
        }
    }

    pub fn validate(&self) -> Result<(), InvalidJob> {
        let finite = [
            ("zeta", self.zeta),
            ("w0", self.w0),
            ("w1", self.w1),
            ("w2", self.w2),
            ("phi0", self.phi0),
            ("mu_max", self.mu_max),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(InvalidJob(format!("{name} must be finite")));
        }
        if !(self.zeta > 0.0 && self.zeta <= 1.0) {
            return Err(InvalidJob(format!("zeta must lie in (0, 1], got {}", self.zeta)));
        }
        if self.w0 == 0.0 {
            return Err(InvalidJob("w0 must be nonzero".into()));
        }
        if self.w2 == 0.0 {
            return Err(InvalidJob("w2 must be nonzero".into()));
        }
        if self.mu_max <= 0.0 {
            return Err(InvalidJob(format!("mu_max must be positive, got {}", self.mu_max)));
        }
        if self.grid_points < 2 {
            return Err(InvalidJob(format!("grid needs at least 2 points, got {}", self.grid_points)));
        }
        if self.terms < 8 {
            return Err(InvalidJob(format!("terms must be at least 8, got {}", self.terms)));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<RiccatiProblem, InvalidJob> {
        self.validate()?;
        let zeta = FractalOrder::new(self.zeta).map_err(|e| InvalidJob(e.to_string()))?;
        RiccatiProblem::constant(zeta, self.w0, self.w1, self.w2, self.phi0)
            .map_err(|e| InvalidJob(e.to_string()))
    }

    /// `μ_k = k·mu_max/(grid_points − 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|k| k as f64 * self.mu_max / last)
            .collect()
    }

    /// Applies the fields present in `o`.
    pub fn merge(&mut self, o: &JobOverrides) {
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = o.$f { self.$f = v; })* };
        }
        take!(zeta, w0, w1, w2, phi0, mu_max, grid_points, terms, mode);
    }
}

impl Default for JobSpec {
    fn default() -> Self {
        JobSpec::preset(Preset::Fig1)
    }
}

/// Partial job, as read from a JSON job file or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOverrides {
    pub preset: Option<Preset>,
    pub zeta: Option<f64>,
    pub w0: Option<f64>,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub phi0: Option<f64>,
    pub mu_max: Option<f64>,
    #[serde(alias = "grid")]
    pub grid_points: Option<usize>,
    #[serde(alias = "N")]
    pub terms: Option<usize>,
    pub mode: Option<Mode>,
}

impl JobOverrides {
    pub fn from_json(text: &str) -> Result<Self, InvalidJob> {
        serde_json::from_str(text).map_err(|e| InvalidJob(format!("job file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, InvalidJob> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InvalidJob(format!("cannot read job file {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Resolves a job: defaults, then the preset, then flags, then the job file.
/// A preset named in the job file replaces everything set before it.
pub fn resolve(flags: &JobOverrides, file: Option<&JobOverrides>) -> JobSpec {
    let mut spec = JobSpec::preset(flags.preset.unwrap_or(Preset::Fig1));
    spec.merge(flags);
    if let Some(file) = file {
        if let Some(p) = file.preset {
            spec = JobSpec::preset(p);
        }
        spec.merge(file);
    }
    spec
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidJob(pub String);

impl fmt::Display for InvalidJob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidJob {}
