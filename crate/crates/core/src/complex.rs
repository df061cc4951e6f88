//! Complex scalar used for Mittag-Leffler rates and residues.

pub use num_complex::Complex64 as Complex;
