//! Grid functions and Banach function space norms.
//!
//! A [`GridFunction`] is a simple function: constant on each cell of a
//! [`GridDomain`], zero outside. Distribution functions, rearrangements and
//! the maximal operator are exact for such functions; the norms (Lorentz,
//! Orlicz, variable Lebesgue) are exact up to quadrature of explicit
//! one-dimensional integrals and a certified Luxemburg bisection.

mod boyd;
mod lorentz;
mod maximal;
mod orlicz;
mod rearrange;
mod variable;

pub use boyd::{boyd_indices, dilation_index_estimate, BoydIndices};
pub use lorentz::lorentz_norm;
pub use maximal::maximal_operator;
pub use orlicz::{orlicz_norm, YoungFunction};
pub use rearrange::{decreasing_rearrangement, distribution_function, DecreasingRearrangement};
pub use variable::{variable_lebesgue_norm, ExponentFunction};

use crate::grid::GridDomain;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors from space construction and norm evaluation.
#[derive(Debug, Clone, Error)]
pub enum SpaceError {
    #[error("invalid space: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
}

/// A cell-constant function on a grid domain.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    domain: GridDomain,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(domain: GridDomain) -> GridFunction {
        GridFunction {
            domain,
            values: vec![Complex64::ZERO; domain.n()],
        }
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(domain: GridDomain, f: impl Fn(f64) -> Complex64) -> GridFunction {
        GridFunction {
            domain,
            values: (0..domain.n()).map(|j| f(domain.center(j))).collect(),
        }
    }

    pub fn from_values(domain: GridDomain, values: Vec<Complex64>) -> Result<Self, SpaceError> {
        if values.len() != domain.n() {
            return Err(SpaceError::DomainMismatch(format!(
                "{} values on a grid of {} cells",
                values.len(),
                domain.n()
            )));
        }
        Ok(GridFunction { domain, values })
    }

    /// Indicator of `[lo, hi)`, with exact overlap fractions on boundary
    /// cells so that the mass is `hi - lo` whenever the interval sits inside
    /// the domain.
    pub fn indicator(domain: GridDomain, lo: f64, hi: f64) -> GridFunction {
        let h = domain.h();
        let values = (0..domain.n())
            .map(|j| {
                let left = domain.start() + j as f64 * h;
                let right = left + h;
                let overlap = (hi.min(right) - lo.max(left)).clamp(0.0, h);
                Complex64::new(overlap / h, 0.0)
            })
            .collect();
        GridFunction { domain, values }
    }

    pub fn domain(&self) -> GridDomain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `L^1` mass `integral |f|`.
    pub fn mass(&self) -> f64 {
        self.domain.h() * self.values.iter().map(|v| v.norm()).sum::<f64>()
    }

    /// Discrete `L^2` norm `sqrt(integral |f|^2)`.
    pub fn norm_l2(&self) -> f64 {
        (self.domain.h() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `integral f conj(g)`.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        assert_eq!(self.domain, other.domain, "inner product across domains");
        self.domain.h()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        GridFunction {
            domain: self.domain,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.domain, other.domain, "sum across domains");
        GridFunction {
            domain: self.domain,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }
}

/// Specification of a Banach function space on the half line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Lorentz space `L^{p,q}`; omitting `q` gives `q = p` (Lebesgue).
    Lorentz {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<f64>,
    },
    /// Orlicz space with Young function `phi`.
    Orlicz { phi: YoungFunction },
    /// Variable Lebesgue space with exponent function `p(x)`.
    Variable { exponent: ExponentFunction },
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> SpaceSpec {
        SpaceSpec::Lorentz { p, q: None }
    }

    pub fn lorentz(p: f64, q: f64) -> SpaceSpec {
        SpaceSpec::Lorentz { p, q: Some(q) }
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        match self {
            SpaceSpec::Lorentz { p, q } => {
                if !(*p >= 1.0) || !p.is_finite() {
                    return Err(SpaceError::Invalid(format!("Lorentz p = {p}, need p >= 1")));
                }
                let q = q.unwrap_or(*p);
                if !(q >= 1.0) {
                    return Err(SpaceError::Invalid(format!("Lorentz q = {q}, need q >= 1")));
                }
                Ok(())
            }
            SpaceSpec::Orlicz { phi } => phi.validate(),
            SpaceSpec::Variable { exponent } => exponent.validate(),
        }
    }

    /// Parses the `{"space": ...}` JSON wrapper or a bare space object.
    pub fn from_json(json: &str) -> Result<SpaceSpec, SpaceError> {
        #[derive(Deserialize)]
        struct Wrapper {
            space: SpaceSpec,
        }
        let spec = if let Ok(w) = serde_json::from_str::<Wrapper>(json) {
            w.space
        } else {
            serde_json::from_str::<SpaceSpec>(json)
                .map_err(|e| SpaceError::Invalid(format!("space schema: {e}")))?
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lorentz { p, q } => match q {
                None => write!(f, "L^{p}"),
                Some(q) if q.is_infinite() => write!(f, "L^({p},inf)"),
                Some(q) => write!(f, "L^({p},{q})"),
            },
            SpaceSpec::Orlicz { phi } => write!(f, "Orlicz[{phi}]"),
            SpaceSpec::Variable { exponent } => write!(f, "L^p(.)[{exponent}]"),
        }
    }
}

/// Norm of a grid function in the given space.
pub fn space_norm(f: &GridFunction, space: &SpaceSpec) -> Result<f64, SpaceError> {
    space.validate()?;
    match space {
        SpaceSpec::Lorentz { p, q } => lorentz_norm(f, *p, q.unwrap_or(*p)),
        SpaceSpec::Orlicz { phi } => orlicz_norm(f, phi),
        SpaceSpec::Variable { exponent } => variable_lebesgue_norm(f, exponent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn indicator_has_exact_mass() {
        let d = GridDomain::half_line(8.0, 256);
        let f = GridFunction::indicator(d, 0.3, 2.7);
        assert_abs_diff_eq!(f.mass(), 2.4, epsilon = 1e-12);
        // boundary cells carry fractional values
        assert!(f.values().iter().any(|v| v.re > 0.0 && v.re < 1.0));
    }

    #[test]
    fn inner_product_matches_l2_norm() {
        let d = GridDomain::half_line(4.0, 64);
        let f = GridFunction::from_fn(d, |x| Complex64::new((-x).exp(), 0.5 * x));
        let ip = f.inner(&f);
        assert_abs_diff_eq!(ip.re, f.norm_l2().powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn space_spec_json_roundtrip() {
        let specs = [
            SpaceSpec::lebesgue(2.0),
            SpaceSpec::lorentz(2.0, 1.0),
            SpaceSpec::Orlicz {
                phi: YoungFunction::power(3.0),
            },
            SpaceSpec::Variable {
                exponent: ExponentFunction::two_piece(1.0, 2.0, 3.0),
            },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back = SpaceSpec::from_json(&json).unwrap();
            assert_eq!(back, spec, "{json}");
        }
        let wrapped = r#"{ "space": { "family": "lorentz", "p": 2.0 } }"#;
        assert_eq!(
            SpaceSpec::from_json(wrapped).unwrap(),
            SpaceSpec::lebesgue(2.0)
        );
    }

    #[test]
    fn invalid_spaces_are_rejected() {
        assert!(SpaceSpec::lebesgue(0.5).validate().is_err());
        assert!(SpaceSpec::lorentz(2.0, 0.0).validate().is_err());
        assert!(SpaceSpec::from_json(r#"{ "family": "lorentz", "p": -1 }"#).is_err());
    }
}
