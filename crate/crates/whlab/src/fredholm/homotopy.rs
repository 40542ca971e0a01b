//! Verification wrapper around the canonical homotopy `h_t = (r_{-k} b)^t r_k`
//! connecting `r_k` (at `t = 0`, `k = wind b`) to `b` (at `t = 1`).

use serde::Serialize;

use crate::symbol::{homotopy_trace, HomotopyTrace, Symbol, MARGIN_REL_TOL};

use super::FredholmError;

/// Sup-norm budget for `h_0 = r_k` and `h_1 = b` holding exactly.
const ENDPOINT_TOL: f64 = 1e-10;
/// Slack for the per-step variation bound and the monotonicity of the
/// endpoint distances (guards rounding only, not modelling error).
const SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyVerification {
    pub label: String,
    /// Winding number of the target; every `h_t` keeps it.
    pub kappa: i32,
    pub predicted_index: i32,
    pub steps: usize,
    /// Smallest `min |h_t|` along the path.
    pub min_margin: f64,
    pub endpoint_start_error: f64,
    pub endpoint_end_error: f64,
    pub endpoints_exact: bool,
    /// Distances to the endpoints shrink monotonically toward them.
    pub monotone_approach: bool,
    /// `V((r_{-k} b)^t) <= t V / m^{1-t}` at every step.
    pub variation_bound_ok: bool,
    pub index_constant: bool,
    pub passed: bool,
    pub trace: HomotopyTrace,
}

/// Walks the canonical homotopy on a uniform `t` grid with `steps` samples
/// (endpoints included) and checks ellipticity, endpoint identity, monotone
/// approach, the variation bound, and index constancy.
pub fn homotopy_verify(b: &Symbol, steps: usize) -> Result<HomotopyVerification, FredholmError> {
    if steps < 2 {
        return Err(FredholmError::Invalid(format!(
            "homotopy wants at least 2 steps, got {steps}"
        )));
    }
    let ts: Vec<f64> = (0..steps)
        .map(|i| i as f64 / (steps - 1) as f64)
        .collect();
    let trace = homotopy_trace(b, &ts)?;

    let mut min_margin = f64::INFINITY;
    for step in &trace.steps {
        if step.margin <= MARGIN_REL_TOL * step.sup {
            return Err(FredholmError::PathEllipticityFailure {
                t: step.t,
                margin: step.margin,
            });
        }
        min_margin = min_margin.min(step.margin);
    }

    let endpoint_start_error = trace.steps.first().expect("steps >= 2").distance_to_start;
    let endpoint_end_error = trace.steps.last().expect("steps >= 2").distance_to_end;
    let endpoints_exact =
        endpoint_start_error <= ENDPOINT_TOL && endpoint_end_error <= ENDPOINT_TOL;

    let mut monotone_approach = true;
    for w in trace.steps.windows(2) {
        if w[1].distance_to_start + SLACK < w[0].distance_to_start
            || w[1].distance_to_end > w[0].distance_to_end + SLACK
        {
            monotone_approach = false;
        }
    }

    let variation_bound_ok = trace
        .steps
        .iter()
        .all(|s| s.power_variation <= s.variation_bound * (1.0 + SLACK) + SLACK);

    let index_constant = trace.steps.iter().all(|s| s.winding == trace.kappa);

    let passed = endpoints_exact && monotone_approach && variation_bound_ok && index_constant;

    Ok(HomotopyVerification {
        label: b.label(),
        kappa: trace.kappa,
        predicted_index: -trace.kappa,
        steps,
        min_margin,
        endpoint_start_error,
        endpoint_end_error,
        endpoints_exact,
        monotone_approach,
        variation_bound_ok,
        index_constant,
        passed,
        trace,
    })
}
