//! Orlicz norms via the Luxemburg functional.
//!
//! `||f|| = inf { lambda > 0 : rho(f / lambda) <= 1 }` with the modular
//! `rho(g) = integral phi(|g|)`. The modular of a grid function is a finite
//! sum, exact per cell, and the infimum is found by bisection: the returned
//! value is always a certified member of the set (its modular is `<= 1`),
//! within relative `1e-14` of the infimum.

use super::{GridFunction, SpaceError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Relative width at which the Luxemburg bisection stops.
const LUXEMBURG_REL_TOL: f64 = 1e-14;
const LUXEMBURG_MAX_ITER: usize = 200;

fn default_scale() -> f64 {
    1.0
}

/// A Young function: convex, increasing, vanishing at zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum YoungFunction {
    /// `scale * u^p`, `p >= 1`. Generates the Lebesgue space `L^p` (with the
    /// exact `L^p` norm when `scale = 1`).
    Power {
        p: f64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// `scale * (e^u - 1)`; exponential integrability. Linear near zero, so
    /// the space behaves like `L^1` at infinity.
    ExpM1 {
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// Sum of Young functions, again a Young function.
    Sum { parts: Vec<YoungFunction> },
}

impl YoungFunction {
    pub fn power(p: f64) -> YoungFunction {
        YoungFunction::Power { p, scale: 1.0 }
    }

    pub fn validate(&self) -> Result<(), SpaceError> {
        match self {
            YoungFunction::Power { p, scale } => {
                if !(*p >= 1.0) || !p.is_finite() {
                    return Err(SpaceError::Invalid(format!(
                        "Young power p = {p}, need finite p >= 1"
                    )));
                }
                if !(*scale > 0.0) || !scale.is_finite() {
                    return Err(SpaceError::Invalid(format!("Young scale = {scale}")));
                }
                Ok(())
            }
            YoungFunction::ExpM1 { scale } => {
                if !(*scale > 0.0) || !scale.is_finite() {
                    return Err(SpaceError::Invalid(format!("Young scale = {scale}")));
                }
                Ok(())
            }
            YoungFunction::Sum { parts } => {
                if parts.is_empty() {
                    return Err(SpaceError::Invalid("empty Young sum".into()));
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }

    /// `phi(u)` for `u >= 0`.
    pub fn value(&self, u: f64) -> f64 {
        match self {
            YoungFunction::Power { p, scale } => scale * u.powf(*p),
            YoungFunction::ExpM1 { scale } => scale * u.exp_m1(),
            YoungFunction::Sum { parts } => parts.iter().map(|p| p.value(u)).sum(),
        }
    }

    /// `u phi'(u) / phi(u)`, the local convexity exponent; used for the Boyd
    /// index enclosure. Stable at both ends of the range.
    pub fn convexity_exponent(&self, u: f64) -> f64 {
        match self {
            YoungFunction::Power { p, .. } => *p,
            // u e^u / (e^u - 1) = u / (1 - e^{-u})
            YoungFunction::ExpM1 { .. } => {
                if u < 1e-8 {
                    1.0 + u / 2.0
                } else {
                    u / -((-u).exp_m1())
                }
            }
            YoungFunction::Sum { parts } => {
                // mediant of the part exponents, weighted by phi values
                let mut num = 0.0;
                let mut den = 0.0;
                for part in parts {
                    let v = part.value(u);
                    num += part.convexity_exponent(u) * v;
                    den += v;
                }
                if den == 0.0 {
                    1.0
                } else {
                    num / den
                }
            }
        }
    }

    /// Rigorous hull `[inf_u, sup_u]` of the convexity exponent over
    /// `u in (0, inf)`.
    pub fn exponent_range(&self) -> (f64, f64) {
        match self {
            YoungFunction::Power { p, .. } => (*p, *p),
            YoungFunction::ExpM1 { .. } => (1.0, f64::INFINITY),
            YoungFunction::Sum { parts } => parts.iter().fold(
                (f64::INFINITY, 1.0_f64),
                |(lo, hi), part| {
                    let (plo, phi) = part.exponent_range();
                    (lo.min(plo), hi.max(phi))
                },
            ),
        }
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YoungFunction::Power { p, scale } if *scale == 1.0 => write!(f, "u^{p}"),
            YoungFunction::Power { p, scale } => write!(f, "{scale}*u^{p}"),
            YoungFunction::ExpM1 { scale } if *scale == 1.0 => write!(f, "e^u-1"),
            YoungFunction::ExpM1 { scale } => write!(f, "{scale}*(e^u-1)"),
            YoungFunction::Sum { parts } => {
                let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", body.join("+"))
            }
        }
    }
}

/// Luxemburg norm in the Orlicz space generated by `phi`.
pub fn orlicz_norm(f: &GridFunction, phi: &YoungFunction) -> Result<f64, SpaceError> {
    phi.validate()?;
    let h = f.domain().h();
    let moduli: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    let modular = |lambda: f64| h * moduli.iter().map(|&u| phi.value(u / lambda)).sum::<f64>();
    Ok(luxemburg(f.sup_norm(), modular))
}

/// Shared Luxemburg bisection: the infimum of `{ lambda : modular(lambda) <= 1 }`
/// for a modular that is non-increasing in `lambda`. `scale0` is any positive
/// value with the order of magnitude of the answer (the sup norm works).
pub(crate) fn luxemburg(scale0: f64, modular: impl Fn(f64) -> f64) -> f64 {
    if scale0 == 0.0 {
        return 0.0;
    }
    let mut hi = scale0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = hi / 2.0;
    while modular(lo) <= 1.0 {
        hi = lo;
        lo /= 2.0;
        if lo < 1e-300 {
            return hi;
        }
    }
    // invariant: modular(lo) > 1 >= modular(hi)
    for _ in 0..LUXEMBURG_MAX_ITER {
        if hi - lo <= LUXEMBURG_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridDomain;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn lp_norm(f: &GridFunction, p: f64) -> f64 {
        let h = f.domain().h();
        (h * f
            .values()
            .iter()
            .map(|v| v.norm().powf(p))
            .sum::<f64>())
        .powf(1.0 / p)
    }

    #[test]
    fn power_young_function_recovers_lebesgue_norms() {
        let d = GridDomain::half_line(8.0, 256);
        let f = GridFunction::from_fn(d, |x| Complex64::new((-0.5 * x).exp(), (x * 0.7).sin()));
        for p in [1.5, 2.0, 3.0] {
            let orlicz = orlicz_norm(&f, &YoungFunction::power(p)).unwrap();
            assert_abs_diff_eq!(orlicz, lp_norm(&f, p), epsilon = 1e-12);
        }
    }

    #[test]
    fn exponential_norm_of_an_indicator() {
        // rho(chi_m / lambda) = m (e^{1/lambda} - 1) = 1 at
        // lambda = 1 / ln(1 + 1/m)
        let d = GridDomain::half_line(8.0, 512);
        for m in [0.5, 1.0, 4.0] {
            let f = GridFunction::indicator(d, 0.0, m);
            let got = orlicz_norm(&f, &YoungFunction::ExpM1 { scale: 1.0 }).unwrap();
            let expect = 1.0 / (1.0 + 1.0 / m).ln();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn sum_young_function_certificate() {
        // phi = u^2 + u^4 on a unit indicator: lambda^{-2} + lambda^{-4} = 1,
        // so lambda^{-2} is the golden-ratio conjugate
        let d = GridDomain::half_line(4.0, 256);
        let f = GridFunction::indicator(d, 0.0, 1.0);
        let phi = YoungFunction::Sum {
            parts: vec![YoungFunction::power(2.0), YoungFunction::power(4.0)],
        };
        let got = orlicz_norm(&f, &phi).unwrap();
        let x = (5.0_f64.sqrt() - 1.0) / 2.0;
        assert_abs_diff_eq!(got, x.powf(-0.5), epsilon = 1e-12);
        // certified membership
        let h = d.h();
        let modular: f64 =
            h * f.values().iter().map(|v| phi.value(v.norm() / got)).sum::<f64>();
        assert!(modular <= 1.0 + 1e-12);
    }

    #[test]
    fn norm_is_homogeneous() {
        let d = GridDomain::half_line(4.0, 128);
        let f = GridFunction::from_fn(d, |x| Complex64::new(1.0 / (1.0 + x * x), 0.3));
        let phi = YoungFunction::power(2.5);
        let base = orlicz_norm(&f, &phi).unwrap();
        let scaled = orlicz_norm(&f.scaled(Complex64::new(3.0, 4.0)), &phi).unwrap();
        assert_abs_diff_eq!(scaled, 5.0 * base, epsilon = 1e-12 * base);
        assert_eq!(orlicz_norm(&GridFunction::zeros(d), &phi).unwrap(), 0.0);
    }

    #[test]
    fn exponent_ranges() {
        assert_eq!(YoungFunction::power(3.0).exponent_range(), (3.0, 3.0));
        let (lo, hi) = YoungFunction::ExpM1 { scale: 2.0 }.exponent_range();
        assert_eq!(lo, 1.0);
        assert!(hi.is_infinite());
        let sum = YoungFunction::Sum {
            parts: vec![YoungFunction::power(2.0), YoungFunction::power(4.0)],
        };
        assert_eq!(sum.exponent_range(), (2.0, 4.0));
        // the pointwise exponent interpolates between the parts
        let mid = sum.convexity_exponent(1.0);
        assert!(mid > 2.0 && mid < 4.0);
    }
}
