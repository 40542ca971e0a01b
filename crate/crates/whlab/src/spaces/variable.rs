//! Variable Lebesgue norms.
//!
//! `||f|| = inf { lambda : integral |f(x)/lambda|^{p(x)} dx <= 1 }` for a
//! measurable exponent `p(x) >= 1`. The exponent is piecewise constant here,
//! evaluated at cell centers, so the modular is an exact finite sum, and the
//! norm reuses the certified Luxemburg bisection.

use super::orlicz::luxemburg;
use super::{GridFunction, SpaceError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Piecewise-constant exponent function on the half line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ExponentFunction {
    Constant { p: f64 },
    /// `values[i]` on `[breakpoints[i-1], breakpoints[i])`, with the first
    /// value to the left of all breakpoints and the last to the right.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl ExponentFunction {
    pub fn constant(p: f64) -> ExponentFunction {
        ExponentFunction::Constant { p }
    }

    /// `p_left` on `(-inf, split)`, `p_right` on `[split, inf)`.
    pub fn two_piece(split: f64, p_left: f64, p_right: f64) -> ExponentFunction {
        ExponentFunction::Piecewise {
            breakpoints: vec![split],
            values: vec![p_left, p_right],
        }
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        let check = |p: f64| {
            if !(p >= 1.0) || !p.is_finite() {
                Err(SpaceError::Invalid(format!(
                    "exponent value {p}, need finite p >= 1"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            ExponentFunction::Constant { p } => check(*p),
            ExponentFunction::Piecewise {
                breakpoints,
                values,
            } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(SpaceError::Invalid(format!(
                        "{} breakpoints require {} exponent values, got {}",
                        breakpoints.len(),
                        breakpoints.len() + 1,
                        values.len()
                    )));
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(SpaceError::Invalid(
                        "exponent breakpoints must be strictly increasing".into(),
                    ));
                }
                if breakpoints.iter().any(|b| !b.is_finite()) {
                    return Err(SpaceError::Invalid("non-finite breakpoint".into()));
                }
                values.iter().copied().try_for_each(check)
            }
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        match self {
            ExponentFunction::Constant { p } => *p,
            ExponentFunction::Piecewise {
                breakpoints,
                values,
            } => values[breakpoints.partition_point(|&b| b <= x)],
        }
    }

    pub fn min_exponent(&self) -> f64 {
        match self {
            ExponentFunction::Constant { p } => *p,
            ExponentFunction::Piecewise { values, .. } => {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn max_exponent(&self) -> f64 {
        match self {
            ExponentFunction::Constant { p } => *p,
            ExponentFunction::Piecewise { values, .. } => {
                values.iter().copied().fold(1.0, f64::max)
            }
        }
    }
}

impl fmt::Display for ExponentFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentFunction::Constant { p } => write!(f, "p={p}"),
            ExponentFunction::Piecewise {
                breakpoints,
                values,
            } => write!(f, "p={values:?} at {breakpoints:?}"),
        }
    }
}

/// Luxemburg norm in `L^{p(.)}`, with the exponent read at cell centers.
pub fn variable_lebesgue_norm(
    f: &GridFunction,
    exponent: &ExponentFunction,
) -> Result<f64, SpaceError> {
    exponent.validate()?;
    let d = f.domain();
    let h = d.h();
    let data: Vec<(f64, f64)> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| (v.norm(), exponent.at(d.center(j))))
        .collect();
    let modular = |lambda: f64| {
        h * data
            .iter()
            .map(|&(u, p)| (u / lambda).powf(p))
            .sum::<f64>()
    };
    Ok(luxemburg(f.sup_norm(), modular))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn constant_exponent_is_lebesgue() {
        let d = GridDomain::half_line(8.0, 256);
        let f = GridFunction::from_fn(d, |x| Complex64::new((-x).exp(), 0.2 * x.cos()));
        let got = variable_lebesgue_norm(&f, &ExponentFunction::constant(2.0)).unwrap();
        assert_abs_diff_eq!(got, f.norm_l2(), epsilon = 1e-12);
    }

    #[test]
    fn two_piece_norm_solves_its_modular_equation() {
        // f = 1 on [0, 2), p = 2 on [0, 1), p = 3 on [1, 2):
        // lambda^{-2} + lambda^{-3} = 1, whose root is the real solution of
        // x^3 = x + 1 (the plastic number)
        let d = GridDomain::half_line(2.0, 256);
        let f = GridFunction::indicator(d, 0.0, 2.0);
        let p = ExponentFunction::two_piece(1.0, 2.0, 3.0);
        let got = variable_lebesgue_norm(&f, &p).unwrap();

        let mut x: f64 = 1.3;
        for _ in 0..60 {
            x -= (x * x * x - x - 1.0) / (3.0 * x * x - 1.0);
        }
        assert_abs_diff_eq!(got, x, epsilon = 1e-12);
        assert_abs_diff_eq!(got, 1.3247179572447460, epsilon = 1e-9);
    }

    #[test]
    fn exponent_lookup_is_half_open() {
        let p = ExponentFunction::two_piece(1.0, 2.0, 3.0);
        assert_eq!(p.at(0.999), 2.0);
        assert_eq!(p.at(1.0), 3.0);
        assert_eq!(p.at(-50.0), 2.0);
        assert_eq!(p.min_exponent(), 2.0);
        assert_eq!(p.max_exponent(), 3.0);
    }

    #[test]
    fn invalid_exponents_rejected() {
        assert!(ExponentFunction::constant(0.9).validate().is_err());
        assert!(ExponentFunction::Piecewise {
            breakpoints: vec![1.0, 0.5],
            values: vec![2.0, 2.0, 2.0],
        }
        .validate()
        .is_err());
        assert!(ExponentFunction::Piecewise {
            breakpoints: vec![1.0],
            values: vec![2.0],
        }
        .validate()
        .is_err());
    }

    #[test]
    fn norm_is_homogeneous_for_variable_exponents() {
        let d = GridDomain::half_line(4.0, 128);
        let f = GridFunction::from_fn(d, |x| Complex64::new((1.0 + x).recip(), -0.4));
        let p = ExponentFunction::two_piece(2.0, 1.5, 4.0);
        let base = variable_lebesgue_norm(&f, &p).unwrap();
        let scaled =
            variable_lebesgue_norm(&f.scaled(Complex64::new(0.0, 2.0)), &p).unwrap();
        assert_abs_diff_eq!(scaled, 2.0 * base, epsilon = 1e-12 * base.max(1.0));
    }
}
