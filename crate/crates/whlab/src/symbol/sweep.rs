//! Adaptive sweeps along the compactified line.
//!
//! The line is parametrized by `xi = tan(theta / 2)` with `theta` running
//! over `[-pi, pi]`; both endpoints represent the point at infinity, so a
//! continuous symbol traces a closed curve. Winding numbers, sup norms,
//! ellipticity margins and continuous argument branches are all computed on
//! refinements of this parametrization.

use super::{Symbol, SymbolError, MARGIN_REL_TOL};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Residual tolerance for the winding sweep: the accumulated argument must
/// land within this distance (radians) of an integer multiple of 2 pi.
pub const WINDING_CLOSING_TOL: f64 = 1e-6;

/// Maximum argument increment per step in a trusted sweep. Larger steps force
/// refinement; at half a turn the lifted argument would be ambiguous.
const MAX_ARG_STEP: f64 = FRAC_PI_2;

/// Argument increments above this threshold force refinement of the branch
/// table used by fractional powers.
const BRANCH_STEP_LIMIT: f64 = 0.5;

const SWEEP_START: usize = 1 << 12;
const SWEEP_CAP: usize = 1 << 20;
const EXTREMA_CAP: usize = 1 << 17;

fn theta_of(j: usize, m: usize) -> f64 {
    -PI + TAU * j as f64 / m as f64
}

fn xi_of(theta: f64) -> f64 {
    (theta / 2.0).tan()
}

impl Symbol {
    /// Value at the sweep angle `theta` in `[-pi, pi]`: the symbol at
    /// `xi = tan(theta / 2)`, with both endpoints mapped to infinity.
    pub fn at_angle(&self, theta: f64) -> Complex64 {
        if theta <= -PI || theta >= PI {
            self.at_infinity()
        } else {
            self.at(xi_of(theta))
        }
    }

    /// Winding number of the closed curve traced over the compactified line.
    /// Fails with [`SymbolError::NonElliptic`] when the curve approaches the
    /// origin and with [`SymbolError::NonClosing`] when refinement up to
    /// 2^20 samples cannot produce trustworthy argument steps.
    pub fn winding_number(&self) -> Result<i32, SymbolError> {
        if !self.is_continuous() {
            return Err(SymbolError::NonClosing {
                detail: "symbol is not continuous on the compactified line".into(),
            });
        }
        let mut m = SWEEP_START / 2;
        loop {
            m *= 2;
            match winding_attempt(self, m) {
                Ok(w) => return Ok(w),
                Err(e @ SymbolError::NonElliptic { .. }) => return Err(e),
                Err(e) => {
                    if m >= SWEEP_CAP {
                        return Err(e);
                    }
                }
            }
        }
    }

    /// Adaptively refined minimum and maximum of `|a|` over the compactified
    /// line. The minimum is an upper bound for the true minimum (sampled), the
    /// sup a lower bound for the true sup; both are refined until stable to a
    /// relative 1e-9 or until the sample cap.
    pub fn extrema(&self) -> Extrema {
        let mut m = SWEEP_START;
        let mut prev: Option<Extrema> = None;
        loop {
            let cur = extrema_pass(self, m);
            if let Some(p) = prev {
                let scale = cur.sup.max(1e-300);
                if (cur.min - p.min).abs() <= 1e-9 * scale
                    && (cur.sup - p.sup).abs() <= 1e-9 * scale
                {
                    return cur;
                }
            }
            if m >= EXTREMA_CAP {
                return cur;
            }
            prev = Some(cur);
            m *= 2;
        }
    }
}

fn extrema_pass(sym: &Symbol, m: usize) -> Extrema {
    let inf = sym.at_infinity().norm();
    let mut min = inf;
    let mut min_location = f64::INFINITY;
    let mut sup = inf;
    for j in 1..m {
        let theta = theta_of(j, m);
        let v = sym.at(xi_of(theta)).norm();
        if v < min {
            min = v;
            min_location = xi_of(theta);
        }
        if v > sup {
            sup = v;
        }
    }
    Extrema {
        min,
        min_location,
        sup,
    }
}

/// Modulus extrema of a symbol over the compactified line.
#[derive(Clone, Copy, Debug)]
pub struct Extrema {
    /// Smallest sampled modulus.
    pub min: f64,
    /// A point (in `xi`) near the minimum; `f64::INFINITY` for the point at
    /// infinity.
    pub min_location: f64,
    /// Largest sampled modulus.
    pub sup: f64,
}

fn winding_attempt(sym: &Symbol, m: usize) -> Result<i32, SymbolError> {
    let infinity = sym.at_infinity();
    let mut min = f64::INFINITY;
    let mut min_at = 0.0;
    let mut sup: f64 = 0.0;
    let mut total = 0.0;
    let mut prev = infinity;
    let mut worst_step: f64 = 0.0;
    for j in 1..=m {
        let v = if j == m {
            infinity
        } else {
            sym.at(xi_of(theta_of(j, m)))
        };
        let n = v.norm();
        if n < min {
            min = n;
            min_at = if j == m {
                f64::INFINITY
            } else {
                xi_of(theta_of(j, m))
            };
        }
        sup = sup.max(n);
        let step = (v / prev).arg();
        worst_step = worst_step.max(step.abs());
        total += step;
        prev = v;
    }
    let inf_norm = infinity.norm();
    if inf_norm < min {
        min = inf_norm;
        min_at = f64::INFINITY;
    }
    sup = sup.max(inf_norm);
    if min <= MARGIN_REL_TOL * sup {
        return Err(SymbolError::NonElliptic {
            margin: min,
            location: min_at,
        });
    }
    if worst_step >= MAX_ARG_STEP {
        return Err(SymbolError::NonClosing {
            detail: format!(
                "argument step {worst_step:.3} rad at {m} samples exceeds pi/2"
            ),
        });
    }
    let winding = total / TAU;
    let rounded = winding.round();
    if (total - rounded * TAU).abs() > WINDING_CLOSING_TOL {
        return Err(SymbolError::NonClosing {
            detail: format!(
                "accumulated argument {total:.9} rad is {:.3e} rad from the nearest full turn",
                (total - rounded * TAU).abs()
            ),
        });
    }
    Ok(rounded as i32)
}

/// Continuous argument branch for a zero-winding elliptic symbol: a lifted
/// argument table over the sweep parametrization, pinned to the principal
/// argument at infinity. Fractional powers evaluate through it to stay on one
/// branch of the logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgBranch {
    /// Lifted argument at `theta_j = -pi + 2 pi j / m`, `j = 0..=m`.
    phi: Vec<f64>,
}

impl ArgBranch {
    pub(super) fn build(base: &Symbol) -> Result<ArgBranch, SymbolError> {
        if !base.is_continuous() {
            return Err(SymbolError::LogBranchFailure {
                detail: "base is not continuous on the compactified line".into(),
            });
        }
        let infinity = base.at_infinity();
        if infinity.norm() == 0.0 {
            return Err(SymbolError::NonElliptic {
                margin: 0.0,
                location: f64::INFINITY,
            });
        }
        let mut m = SWEEP_START / 2;
        loop {
            m *= 2;
            match branch_attempt(base, infinity, m) {
                Ok(phi) => return Ok(ArgBranch { phi }),
                Err(e @ SymbolError::NonElliptic { .. }) => return Err(e),
                Err(e @ SymbolError::LogBranchFailure { .. }) => return Err(e),
                Err(e) => {
                    if m >= SWEEP_CAP {
                        return Err(SymbolError::LogBranchFailure {
                            detail: format!("branch table refinement exhausted: {e}"),
                        });
                    }
                }
            }
        }
    }

    /// Lifted argument at the point `xi`, given the principal argument of the
    /// value there: the table fixes the 2 pi multiple, the principal argument
    /// supplies full precision.
    pub(super) fn continuous_arg(&self, xi: f64, principal: f64) -> f64 {
        let m = self.phi.len() - 1;
        let theta = 2.0 * xi.atan();
        let pos = (theta + PI) / TAU * m as f64;
        let j = (pos.floor() as usize).min(m - 1);
        let frac = pos - j as f64;
        let lifted = self.phi[j] * (1.0 - frac) + self.phi[j + 1] * frac;
        principal + TAU * ((lifted - principal) / TAU).round()
    }

    pub(super) fn arg_at_infinity(&self) -> f64 {
        self.phi[0]
    }
}

fn branch_attempt(
    base: &Symbol,
    infinity: Complex64,
    m: usize,
) -> Result<Vec<f64>, SymbolError> {
    let mut phi = Vec::with_capacity(m + 1);
    let mut prev = infinity;
    let mut lifted = infinity.arg();
    let sup0 = infinity.norm();
    let mut min = sup0;
    let mut min_at = f64::INFINITY;
    let mut sup = sup0;
    phi.push(lifted);
    for j in 1..=m {
        let v = if j == m {
            infinity
        } else {
            base.at(xi_of(theta_of(j, m)))
        };
        let n = v.norm();
        if n < min {
            min = n;
            min_at = if j == m {
                f64::INFINITY
            } else {
                xi_of(theta_of(j, m))
            };
        }
        sup = sup.max(n);
        let step = (v / prev).arg();
        if step.abs() >= BRANCH_STEP_LIMIT {
            return Err(SymbolError::NonClosing {
                detail: format!("branch step {:.3} rad at {m} samples", step.abs()),
            });
        }
        lifted += step;
        phi.push(lifted);
        prev = v;
    }
    if min <= MARGIN_REL_TOL * sup {
        return Err(SymbolError::NonElliptic {
            margin: min,
            location: min_at,
        });
    }
    let residual = phi[m] - phi[0];
    if residual.abs() > WINDING_CLOSING_TOL {
        let turns = (residual / TAU).round();
        return Err(SymbolError::LogBranchFailure {
            detail: format!(
                "base has winding number {turns:.0}; no continuous logarithm exists"
            ),
        });
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn winding_of_rational_blocks() {
        for n in -8..=8 {
            assert_eq!(Symbol::Rational(n).winding_number().unwrap(), n, "n = {n}");
        }
    }

    #[test]
    fn winding_is_additive_under_products() {
        let a = Symbol::Product(vec![Symbol::Rational(2), Symbol::Rational(-1)]);
        assert_eq!(a.winding_number().unwrap(), 1);
        let b = Symbol::Product(vec![
            Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(1)]),
            Symbol::Rational(3),
        ]);
        assert_eq!(b.winding_number().unwrap(), 3);
    }

    #[test]
    fn shifted_rational_does_not_wind() {
        let a = Symbol::Sum(vec![Symbol::Rational(1), Symbol::constant(3.0, 0.0)]);
        assert_eq!(a.winding_number().unwrap(), 0);
    }

    #[test]
    fn vanishing_symbol_is_rejected() {
        // r_1 + 1 vanishes at xi = 0
        let a = Symbol::Sum(vec![Symbol::Rational(1), Symbol::constant(1.0, 0.0)]);
        match a.winding_number() {
            Err(SymbolError::NonElliptic { margin, location }) => {
                assert!(margin < 1e-6);
                assert!(location.abs() < 1e-2);
            }
            other => panic!("expected NonElliptic, got {other:?}"),
        }
    }

    #[test]
    fn extrema_of_shifted_rational() {
        let a = Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(1)]);
        let e = a.extrema();
        // |2 + e^{i phi}| ranges over [1, 3]
        assert_abs_diff_eq!(e.min, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(e.sup, 3.0, epsilon = 1e-6);
        assert!(e.min_location.abs() < 1e-2, "minimum at r_1 = -1, xi = 0");
    }

    #[test]
    fn square_root_squares_back() {
        let a = Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(1)]);
        let root = Symbol::power(a.clone(), 0.5).unwrap();
        for &xi in &[-30.0, -1.0, 0.0, 0.4, 12.0] {
            let squared = root.at(xi) * root.at(xi);
            assert!((squared - a.at(xi)).norm() < 1e-12, "xi = {xi}");
        }
        let inf = root.at_infinity();
        assert!((inf * inf - a.at_infinity()).norm() < 1e-12);
    }

    #[test]
    fn power_endpoints_are_exact() {
        let a = Symbol::Sum(vec![
            Symbol::constant(2.0, 0.5),
            Symbol::Rational(1),
            Symbol::scaled(Symbol::Rational(-2), Complex64::new(0.25, 0.0)),
        ]);
        let p0 = Symbol::power(a.clone(), 0.0).unwrap();
        let p1 = Symbol::power(a.clone(), 1.0).unwrap();
        for &xi in &[-8.0, -0.5, 0.0, 3.0] {
            assert_eq!(p0.at(xi), Complex64::new(1.0, 0.0));
            assert!((p1.at(xi) - a.at(xi)).norm() <= 1e-14 * a.at(xi).norm());
        }
        assert_eq!(p0.at_infinity(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn power_of_winding_base_fails() {
        match Symbol::power(Symbol::Rational(1), 0.5) {
            Err(SymbolError::LogBranchFailure { detail }) => {
                assert!(detail.contains("winding number 1"), "{detail}");
            }
            other => panic!("expected LogBranchFailure, got {other:?}"),
        }
    }

    #[test]
    fn branch_stays_continuous_across_the_cut() {
        // -2 - r_1 stays in the left half plane, crossing the negative real
        // axis where the principal argument jumps; the branch must not.
        let a = Symbol::Sum(vec![
            Symbol::constant(-2.0, 0.0),
            Symbol::scaled(Symbol::Rational(1), Complex64::new(-1.0, 0.0)),
        ]);
        let root = Symbol::power(a.clone(), 0.5).unwrap();
        let mut prev = root.at_angle(-PI);
        let m = 4000;
        for j in 1..=m {
            let v = root.at_angle(-PI + TAU * j as f64 / m as f64);
            assert!(
                (v - prev).norm() < 0.02,
                "branch jump near theta index {j}: {prev} -> {v}"
            );
            prev = v;
        }
        for &xi in &[-3.0, 0.0, 5.0] {
            assert!((root.at(xi) * root.at(xi) - a.at(xi)).norm() < 1e-12);
        }
    }
}
