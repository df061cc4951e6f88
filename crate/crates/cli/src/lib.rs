//! Command-line front end for `fractal-riccati`: job specifications, CSV
//! sampling of solution curves and the JSON comparison report.

pub mod csv;
pub mod job;
pub mod report;
pub mod run;

pub use job::{JobOverrides, JobSpec, Mode, Preset};
pub use run::{run_job, Output, RunError, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK};
