//! Sampled solution curves: `mu,phi,psi,dpsi_zeta,flag`.

use std::fmt::{self, Write};

pub const HEADER: &str = "mu,phi,psi,dpsi_zeta,flag";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Ok,
    /// At or beyond the first zero of `ψ`.
    AfterPole,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Ok => "ok",
            Flag::AfterPole => "after_pole",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub mu: f64,
    pub phi: f64,
    pub psi: f64,
    pub dpsi_zeta: f64,
    pub flag: Flag,
}

/// Header plus one LF-terminated line per row; numbers carry 17
/// significant digits, enough to round-trip any `f64`.
pub fn emit_csv(rows: &[SampleRow]) -> String {
    let mut out = String::with_capacity(96 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        // Writing into a String cannot fail.
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.mu, r.phi, r.psi, r.dpsi_zeta, r.flag
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_header_only() {
        assert_eq!(emit_csv(&[]), "mu,phi,psi,dpsi_zeta,flag\n");
    }

    #[test]
    fn one_row() {
        let row = SampleRow {
            mu: 0.0,
            phi: 1.0,
            psi: 1.0,
            dpsi_zeta: -1.0,
            flag: Flag::Ok,
        };
        let text = emit_csv(&[row]);
        assert_eq!(text.lines().count(), 2);
        let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        let nums: Vec<f64> = fields[..4].iter().map(|f| f.parse().unwrap()).collect();
        assert_eq!(nums, [0.0, 1.0, 1.0, -1.0]);
        assert_eq!(fields[4], "ok");
    }

    #[test]
    fn values_round_trip() {
        let x = [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e-300, -2.0819_f64.powi(30)];
        for v in x {
            let row = SampleRow {
                mu: v,
                phi: v,
                psi: v,
                dpsi_zeta: v,
                flag: Flag::AfterPole,
            };
            let text = emit_csv(&[row]);
            let line = text.lines().nth(1).unwrap();
            assert!(line.ends_with(",after_pole"));
            for f in line.split(',').take(4) {
                assert_eq!(f.parse::<f64>().unwrap(), v);
            }
        }
    }
}
