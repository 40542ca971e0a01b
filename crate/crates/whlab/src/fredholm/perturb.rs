//! Index jump across a symbol zero: perturbing `a` with `a(xi0) = 0` by
//! `+/- epsilon v` transversal to the curve splits the winding numbers of the
//! two sides by exactly one, while the operators stay `2 epsilon |v|` apart
//! in norm.

use num_complex::Complex64;
use serde::Serialize;

use crate::grid::GridDomain;
use crate::operator::wiener_hopf;
use crate::spaces::SpaceSpec;
use crate::symbol::Symbol;

use super::analyze::{analyze, AnalyzeOptions, FredholmReport};
use super::FredholmError;

/// Sweep resolution for locating the dips of `|a|`.
const DIP_SCAN: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct PerturbationReport {
    pub label: String,
    /// Location of the zero (minimum of `|a|`); infinity serializes as null.
    pub xi0: f64,
    /// Perturbation direction as `[re, im]`.
    pub direction: [f64; 2],
    pub epsilon: f64,
    /// Second-smallest dip of `|a|`; the transversality precondition is
    /// `epsilon |v| < dip_guard / 2`.
    pub dip_guard: f64,
    pub winding_plus: i32,
    pub winding_minus: i32,
    /// `wind(a - eps v) - wind(a + eps v)`; `|jump| = 1` for a simple zero.
    pub winding_jump: i32,
    /// `||W(a + eps v) - W(a - eps v)||` on the analysis grid.
    pub norm_gap: f64,
    /// The exact operator-norm distance `2 epsilon |v|`.
    pub predicted_gap: f64,
    pub plus: FredholmReport,
    pub minus: FredholmReport,
}

/// Values of the local minima of `|a|` over the compactified line, ascending.
fn dips(a: &Symbol) -> Vec<f64> {
    let vals: Vec<f64> = (0..DIP_SCAN)
        .map(|l| {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (l as f64 + 0.5) / DIP_SCAN as f64;
            a.at_angle(theta).norm()
        })
        .collect();
    let mut out = Vec::new();
    for l in 0..DIP_SCAN {
        let prev = vals[(l + DIP_SCAN - 1) % DIP_SCAN];
        let next = vals[(l + 1) % DIP_SCAN];
        if vals[l] < prev && vals[l] <= next {
            out.push(vals[l]);
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite dips"));
    out
}

/// Runs the paired perturbation experiment around the zero of `a`.
///
/// `v = None` uses the unit normal of the curve at the zero, estimated by a
/// central difference of `a` near `xi0`.
pub fn perturbation_experiment(
    a: &Symbol,
    v: Option<Complex64>,
    epsilon: f64,
    space: &SpaceSpec,
    options: &AnalyzeOptions,
) -> Result<PerturbationReport, FredholmError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(FredholmError::Invalid(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    let ext = a.extrema();
    let xi0 = ext.min_location;

    let v = match v {
        Some(v) if v.norm() > 0.0 => v,
        Some(_) => {
            return Err(FredholmError::Invalid("direction v must be nonzero".into()));
        }
        None => {
            if !xi0.is_finite() {
                return Err(FredholmError::Invalid(
                    "zero sits at infinity; supply the direction v explicitly".into(),
                ));
            }
            // Unit normal (left rotation of the tangent) by central difference.
            let delta = 1e-5 * (1.0 + xi0.abs());
            let d = (a.at(xi0 + delta) - a.at(xi0 - delta)) / (2.0 * delta);
            if d.norm() == 0.0 {
                return Err(FredholmError::TransversalityFailure(
                    "curve is stationary at the zero; supply v explicitly".into(),
                ));
            }
            Complex64::new(0.0, 1.0) * d / d.norm()
        }
    };

    let all_dips = dips(a);
    let dip_guard = if all_dips.len() >= 2 {
        all_dips[1]
    } else {
        ext.sup
    };
    let push = epsilon * v.norm();
    if push >= 0.5 * dip_guard {
        return Err(FredholmError::TransversalityFailure(format!(
            "epsilon |v| = {push:.3e} reaches other dips of |a| (guard {dip_guard:.3e}); \
             shrink epsilon"
        )));
    }

    let plus_sym = Symbol::Sum(vec![a.clone(), Symbol::Constant(epsilon * v)]);
    let minus_sym = Symbol::Sum(vec![a.clone(), Symbol::Constant(-epsilon * v)]);

    for (sign, s) in [("+", &plus_sym), ("-", &minus_sym)] {
        let e = s.extrema();
        if e.min <= options.tol * e.sup {
            return Err(FredholmError::TransversalityFailure(format!(
                "a {sign} eps v still vanishes (min |.| = {:.3e}); v is not transversal",
                e.min
            )));
        }
    }

    let winding_plus = plus_sym.winding_number()?;
    let winding_minus = minus_sym.winding_number()?;
    let winding_jump = winding_minus - winding_plus;
    if winding_jump.abs() != 1 {
        return Err(FredholmError::TransversalityFailure(format!(
            "winding jump {winding_jump}, expected +/-1; the perturbation does not cross \
             a simple zero"
        )));
    }

    let grid = GridDomain::half_line(options.half_line_length, options.grid_n);
    let w_plus = wiener_hopf(&plus_sym, grid)?;
    let w_minus = wiener_hopf(&minus_sym, grid)?;
    let norm_gap = w_plus.sub(&w_minus)?.operator_norm();

    let plus = analyze(&plus_sym, space, options)?;
    let minus = analyze(&minus_sym, space, options)?;

    Ok(PerturbationReport {
        label: a.label(),
        xi0,
        direction: [v.re, v.im],
        epsilon,
        dip_guard,
        winding_plus,
        winding_minus,
        winding_jump,
        norm_gap,
        predicted_gap: 2.0 * epsilon * v.norm(),
        plus,
        minus,
    })
}
