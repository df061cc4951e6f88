//! JSON rendering of [`DiscrepancyReport`]. Keys appear in declaration order.

use fractal_riccati::riccati::{ConstantCheck, ReferenceComparison};
use fractal_riccati::{Complex, DiscrepancyReport};
use serde::Serialize;

/// Absolute tolerance for the boolean mismatch flags.
const FLAG_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<Complex> for ComplexJson {
    fn from(z: Complex) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    zeta: f64,
    sigma: f64,
    branch: &'static str,
    poles: Vec<ComplexJson>,
    residues: Vec<ComplexJson>,
    multiplicities: &'a [u8],
    terms: usize,
    grid_points: usize,
    points_compared: usize,
    first_pole: Option<f64>,
    sup_difference: f64,
    coefficient_gap: f64,
    residual_norm_closed_form: f64,
    residual_norm_oracle: f64,
    leibniz_ratio: f64,
    paper_constants: ConstantsJson<'a>,
    boundary_value_printed_formula: Option<f64>,
    boundary_value_required: Option<f64>,
    boundary_value_mismatch: Option<bool>,
}

#[derive(Serialize)]
struct ConstantsJson<'a> {
    worked_example: bool,
    transform_numerator: NumeratorJson,
    rate_sign: RateSignJson,
    constants: Vec<ConstantJson<'a>>,
    fractal_imaginary: Option<FractalImaginaryJson>,
    double_root_basis_gap: Option<f64>,
}

/// Transform numerator coefficients `[z⁰, z¹]`, and the `ψ(0)` each implies.
#[derive(Serialize)]
struct NumeratorJson {
    printed: [f64; 2],
    derived: [f64; 2],
    psi0_printed: f64,
    psi0_required: f64,
    mismatch: bool,
}

#[derive(Serialize)]
struct RateSignJson {
    dpsi0_negated_rates: f64,
    dpsi0_required: f64,
    mismatch: bool,
}

#[derive(Serialize)]
struct ConstantJson<'a> {
    name: &'a str,
    printed: Option<f64>,
    formula: f64,
    computed: f64,
    printed_matches_formula: Option<bool>,
    printed_matches_computed: Option<bool>,
    formula_matches_computed: bool,
}

#[derive(Serialize)]
struct FractalImaginaryJson {
    mu: f64,
    plain_i: f64,
    rotated: ComplexJson,
}

fn differ(a: f64, b: f64) -> bool {
    !((a - b).abs() <= FLAG_TOL)
}

fn constant(c: &ConstantCheck) -> ConstantJson<'_> {
    ConstantJson {
        name: c.name,
        printed: c.printed,
        formula: c.formula,
        computed: c.computed,
        printed_matches_formula: c.printed_matches_formula(),
        printed_matches_computed: c.printed_matches_computed(),
        formula_matches_computed: c.formula_matches_computed(),
    }
}

fn constants(r: &ReferenceComparison) -> ConstantsJson<'_> {
    ConstantsJson {
        worked_example: r.worked_example,
        transform_numerator: NumeratorJson {
            printed: r.numerator_printed,
            derived: r.numerator_derived,
            psi0_printed: r.psi0_printed_numerator,
            psi0_required: r.psi0_required,
            mismatch: differ(r.psi0_printed_numerator, r.psi0_required),
        },
        rate_sign: RateSignJson {
            dpsi0_negated_rates: r.dpsi0_negated_rates,
            dpsi0_required: r.dpsi0_required,
            mismatch: differ(r.dpsi0_negated_rates, r.dpsi0_required),
        },
        constants: r.constants.iter().map(constant).collect(),
        fractal_imaginary: r.fractal_imaginary.map(|f| FractalImaginaryJson {
            mu: f.mu,
            plain_i: f.plain_i,
            rotated: f.rotated.into(),
        }),
        double_root_basis_gap: r.double_root_basis_gap,
    }
}

/// Pretty-printed JSON followed by a newline. `phi0` is the initial value the
/// printed closed form should reproduce at the origin.
pub fn emit_report(r: &DiscrepancyReport, phi0: f64) -> String {
    let boundary = r.boundary_value_printed_formula;
    let json = ReportJson {
        zeta: r.zeta,
        sigma: r.sigma,
        branch: r.branch.name(),
        poles: r.poles.iter().map(|&z| z.into()).collect(),
        residues: r.residues.iter().map(|&z| z.into()).collect(),
        multiplicities: &r.multiplicities,
        terms: r.terms,
        grid_points: r.grid_points,
        points_compared: r.points_compared,
        first_pole: r.first_pole,
        sup_difference: r.sup_difference,
        coefficient_gap: r.coefficient_gap,
        residual_norm_closed_form: r.residual_norm_closed_form,
        residual_norm_oracle: r.residual_norm_oracle,
        leibniz_ratio: r.leibniz_ratio,
        paper_constants: constants(&r.reference),
        boundary_value_printed_formula: boundary,
        boundary_value_required: boundary.map(|_| phi0),
        boundary_value_mismatch: boundary.map(|b| differ(b, phi0)),
    };
    // Every field is a plain number, string, bool or nested struct of those.
    let mut text = serde_json::to_string_pretty(&json).expect("report serialises");
    text.push('\n');
    text
}
