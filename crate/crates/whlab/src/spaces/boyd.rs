//! Boyd indices and the singular-integral admissibility gate.
//!
//! The Boyd indices of a space govern whether the Cauchy singular operator
//! (equivalently the Riesz projection) is bounded on it: the safe region is
//! indices strictly inside `(0, 1)`. For the families in [`SpaceSpec`] the
//! indices admit closed forms or rigorous enclosures:
//!
//! - Lorentz `L^{p,q}`: both indices equal `1/p`;
//! - variable `L^{p(.)}` with piecewise-constant exponent: enclosed by
//!   `[1/p_max, 1/p_min]`;
//! - Orlicz `L_phi`: enclosed by the reciprocals of the convexity exponent
//!   range of `phi` (Simonenko bounds).
//!
//! [`dilation_index_estimate`] is the empirical counterpart: it measures the
//! norm growth of the exact dilation `f(x) -> f(x/s)` on probe functions. On
//! a grid, dilation by `s` is just a cell-width change, so the probe norms
//! are computed with no resampling error.

use super::{space_norm, GridFunction, SpaceError, SpaceSpec};
use crate::grid::GridDomain;
use num_complex::Complex64;
use serde::Serialize;

/// Lower and upper Boyd indices (or a rigorous enclosure of them).
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct BoydIndices {
    pub lower: f64,
    pub upper: f64,
}

impl BoydIndices {
    /// Both indices strictly inside `(0, 1)`: the condition under which the
    /// Cauchy singular operator is bounded and the operator theory applies.
    pub fn singular_integral_safe(&self) -> bool {
        self.lower > 0.0 && self.upper < 1.0
    }
}

pub fn boyd_indices(space: &SpaceSpec) -> Result<BoydIndices, SpaceError> {
    space.validate()?;
    Ok(match space {
        SpaceSpec::Lorentz { p, .. } => BoydIndices {
            lower: 1.0 / p,
            upper: 1.0 / p,
        },
        SpaceSpec::Variable { exponent } => BoydIndices {
            lower: 1.0 / exponent.max_exponent(),
            upper: 1.0 / exponent.min_exponent(),
        },
        SpaceSpec::Orlicz { phi } => {
            let (lo, hi) = phi.exponent_range();
            BoydIndices {
                lower: if hi.is_infinite() { 0.0 } else { 1.0 / hi },
                upper: 1.0 / lo,
            }
        }
    })
}

/// Empirical dilation index at scale `s > 0`:
/// `log ||f(./s)|| / ||f|| / log s`, maximized over a probe family. For
/// `s -> inf` this tends to the upper Boyd index, for `s -> 0` to the lower.
pub fn dilation_index_estimate(space: &SpaceSpec, s: f64) -> Result<f64, SpaceError> {
    if !(s > 0.0) || !s.is_finite() || s == 1.0 {
        return Err(SpaceError::Invalid(format!("dilation scale {s}")));
    }
    let base = GridDomain::half_line(16.0, 2048);
    let dilated = GridDomain::half_line(16.0 * s, 2048);
    let probes: Vec<Vec<Complex64>> = vec![
        GridFunction::indicator(base, 0.0, 1.0).values().to_vec(),
        GridFunction::indicator(base, 0.0, 4.0).values().to_vec(),
        GridFunction::from_fn(base, |x| Complex64::new(x.powf(-0.25).min(8.0), 0.0))
            .values()
            .to_vec(),
        GridFunction::from_fn(base, |x| Complex64::new((-x).exp(), 0.0))
            .values()
            .to_vec(),
    ];
    let mut best_ratio: f64 = 0.0;
    for values in probes {
        let f = GridFunction::from_values(base, values.clone()).expect("probe");
        let g = GridFunction::from_values(dilated, values).expect("probe");
        let nf = space_norm(&f, space)?;
        let ng = space_norm(&g, space)?;
        if nf > 0.0 && nf.is_finite() && ng.is_finite() {
            best_ratio = best_ratio.max(ng / nf);
        }
    }
    if best_ratio == 0.0 {
        return Err(SpaceError::Unsupported(
            "no probe had a finite nonzero norm in this space".into(),
        ));
    }
    Ok(best_ratio.ln() / s.ln())
}
