//! Symbol algebra on the one-point compactification of the real line.
//!
//! A [`Symbol`] is a closed-form function `a: R u {inf} -> C` built from
//! constants, the rational blocks `r_n(xi) = ((xi - i)/(xi + i))^n`,
//! piecewise-linear normal forms with constant tails, and the closures of the
//! algebra: sums, products, scalar multiples, pointwise inverses and real
//! powers `a^t` along a fixed continuous logarithm branch.
//!
//! Powers require an elliptic base of winding number zero; the branch of the
//! argument is pinned to its principal value at infinity and continued along
//! the compactified line, so `a^0 = 1` and `a^1 = a` hold to rounding.

mod homotopy;
mod pl;
mod schema;
mod sweep;
mod variation;

pub use homotopy::{homotopy, homotopy_trace, HomotopyStep, HomotopyTrace};
pub use pl::{pl_approximate, PlApproximation, PlData, DEFAULT_MESH, DEFAULT_WINDOW};
pub use schema::SymbolSchema;
pub use sweep::{ArgBranch, Extrema};

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Relative ellipticity tolerance: a symbol counts as non-elliptic when its
/// minimum modulus does not exceed this fraction of its sup norm. A relative
/// test keeps every verdict invariant under nonzero constant scaling.
pub const MARGIN_REL_TOL: f64 = 1e-9;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Errors produced by symbol construction and analysis.
#[derive(Debug, Clone, Error)]
pub enum SymbolError {
    /// The symbol vanishes (to within the relative margin tolerance) on the
    /// compactified line; `location` is a point near the minimum, with
    /// `f64::INFINITY` standing for the point at infinity.
    #[error("symbol not elliptic: min |a| = {margin:.3e} near xi = {location}")]
    NonElliptic { margin: f64, location: f64 },
    /// The winding sweep did not settle on an integer multiple of 2 pi.
    #[error("winding sweep failed to close: {detail}")]
    NonClosing { detail: String },
    /// No continuous logarithm exists (nonzero winding) or the branch table
    /// could not be refined to a safe step size.
    #[error("continuous logarithm unavailable: {detail}")]
    LogBranchFailure { detail: String },
    /// Total variation is unbounded.
    #[error("symbol has unbounded total variation")]
    InfiniteVariation,
    /// Structurally invalid data (bad vertices, parameter out of range, ...).
    #[error("invalid symbol: {0}")]
    Invalid(String),
}

/// Closed-form symbol on the compactified line.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol {
    /// Constant function.
    Constant(Complex64),
    /// Piecewise-linear normal form with constant tails.
    PiecewiseLinear(PlData),
    /// `r_n(xi) = ((xi - i)/(xi + i))^n`; unimodular, `r_n(inf) = 1`,
    /// winding number `n`.
    Rational(i32),
    Sum(Vec<Symbol>),
    Product(Vec<Symbol>),
    /// `base^t` along the branch fixed at construction. Built through
    /// [`Symbol::power`]; the branch table cannot be forged externally.
    Power {
        base: Box<Symbol>,
        t: f64,
        branch: ArgBranch,
    },
    Scaled {
        inner: Box<Symbol>,
        factor: Complex64,
    },
    /// Pointwise reciprocal; produced by [`Symbol::invert`] after an
    /// ellipticity certificate.
    Inverse(Box<Symbol>),
}

impl Symbol {
    pub fn constant(re: f64, im: f64) -> Symbol {
        Symbol::Constant(Complex64::new(re, im))
    }

    pub fn scaled(inner: Symbol, factor: Complex64) -> Symbol {
        Symbol::Scaled {
            inner: Box::new(inner),
            factor,
        }
    }

    /// `base^t` for `t` in `[0, 1]` along the continuous argument branch that
    /// takes its principal value at infinity. Requires an elliptic base with
    /// winding number zero.
    pub fn power(base: Symbol, t: f64) -> Result<Symbol, SymbolError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SymbolError::Invalid(format!(
                "power exponent t = {t} outside [0, 1]"
            )));
        }
        let branch = ArgBranch::build(&base)?;
        Ok(Symbol::Power {
            base: Box::new(base),
            t,
            branch,
        })
    }

    /// Value at a finite point.
    pub fn at(&self, xi: f64) -> Complex64 {
        match self {
            Symbol::Constant(c) => *c,
            Symbol::PiecewiseLinear(pl) => pl.at(xi),
            Symbol::Rational(n) => rational_at(*n, xi),
            Symbol::Sum(parts) => parts.iter().map(|p| p.at(xi)).sum(),
            Symbol::Product(parts) => parts.iter().map(|p| p.at(xi)).product(),
            Symbol::Power { base, t, branch } => {
                let z = base.at(xi);
                let theta = branch.continuous_arg(xi, z.arg());
                Complex64::from_polar(z.norm().powf(*t), t * theta)
            }
            Symbol::Scaled { inner, factor } => *factor * inner.at(xi),
            Symbol::Inverse(inner) => ONE / inner.at(xi),
        }
    }

    /// Value at the point at infinity. For a piecewise-linear symbol that is
    /// discontinuous at infinity this is the limit from the right tail.
    pub fn at_infinity(&self) -> Complex64 {
        match self {
            Symbol::Constant(c) => *c,
            Symbol::PiecewiseLinear(pl) => pl.value_at_infinity(),
            Symbol::Rational(_) => ONE,
            Symbol::Sum(parts) => parts.iter().map(|p| p.at_infinity()).sum(),
            Symbol::Product(parts) => parts.iter().map(|p| p.at_infinity()).product(),
            Symbol::Power { base, t, branch } => {
                let z = base.at_infinity();
                Complex64::from_polar(z.norm().powf(*t), t * branch.arg_at_infinity())
            }
            Symbol::Scaled { inner, factor } => *factor * inner.at_infinity(),
            Symbol::Inverse(inner) => ONE / inner.at_infinity(),
        }
    }

    /// Derivative at a finite point; at a vertex of a piecewise-linear part
    /// the slope of the segment owning the point (half-open to the left) is
    /// used. Quadrature routines only evaluate this away from vertices.
    pub fn derivative_at(&self, xi: f64) -> Complex64 {
        match self {
            Symbol::Constant(_) => Complex64::ZERO,
            Symbol::PiecewiseLinear(pl) => pl.slope_at(xi),
            Symbol::Rational(n) => {
                // d/dxi log r_1 = 2i / (xi^2 + 1)
                rational_at(*n, xi) * Complex64::new(0.0, 2.0 * *n as f64 / (xi * xi + 1.0))
            }
            Symbol::Sum(parts) => parts.iter().map(|p| p.derivative_at(xi)).sum(),
            Symbol::Product(parts) => {
                let vals: Vec<Complex64> = parts.iter().map(|p| p.at(xi)).collect();
                let mut total = Complex64::ZERO;
                for (k, part) in parts.iter().enumerate() {
                    let mut term = part.derivative_at(xi);
                    for (j, v) in vals.iter().enumerate() {
                        if j != k {
                            term *= v;
                        }
                    }
                    total += term;
                }
                total
            }
            Symbol::Power { base, t, .. } => {
                let f = base.at(xi);
                self.at(xi) * *t * base.derivative_at(xi) / f
            }
            Symbol::Scaled { inner, factor } => *factor * inner.derivative_at(xi),
            Symbol::Inverse(inner) => {
                let f = inner.at(xi);
                -inner.derivative_at(xi) / (f * f)
            }
        }
    }

    /// Pointwise complex conjugate as a symbol. On the real line
    /// `conj r_n = r_{-n}`, so conjugation stays inside the algebra.
    pub fn conj(&self) -> Symbol {
        match self {
            Symbol::Constant(c) => Symbol::Constant(c.conj()),
            Symbol::PiecewiseLinear(pl) => Symbol::PiecewiseLinear(pl.conj()),
            Symbol::Rational(n) => Symbol::Rational(-n),
            Symbol::Sum(parts) => Symbol::Sum(parts.iter().map(|p| p.conj()).collect()),
            Symbol::Product(parts) => Symbol::Product(parts.iter().map(|p| p.conj()).collect()),
            Symbol::Power { base, t, .. } => Symbol::power(base.conj(), *t)
                .expect("conjugate of a valid power base admits the same branch construction"),
            Symbol::Scaled { inner, factor } => Symbol::Scaled {
                inner: Box::new(inner.conj()),
                factor: factor.conj(),
            },
            Symbol::Inverse(inner) => Symbol::Inverse(Box::new(inner.conj())),
        }
    }

    /// Difference `self - other` as a symbol.
    pub fn difference(&self, other: &Symbol) -> Symbol {
        Symbol::Sum(vec![
            self.clone(),
            Symbol::scaled(other.clone(), Complex64::new(-1.0, 0.0)),
        ])
    }

    /// Finite breakpoints (piecewise-linear vertices) anywhere in the tree,
    /// sorted and deduplicated. Quadrature panels split here.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            Symbol::Constant(_) | Symbol::Rational(_) => {}
            Symbol::PiecewiseLinear(pl) => out.extend_from_slice(pl.vertices()),
            Symbol::Sum(parts) | Symbol::Product(parts) => {
                for p in parts {
                    p.collect_breakpoints(out);
                }
            }
            Symbol::Power { base, .. } => base.collect_breakpoints(out),
            Symbol::Scaled { inner, .. } => inner.collect_breakpoints(out),
            Symbol::Inverse(inner) => inner.collect_breakpoints(out),
        }
    }

    /// True when every piecewise-linear constituent is continuous on the
    /// compactified line (vertex continuity and matching tails). All other
    /// constructors preserve continuity automatically.
    pub fn is_continuous(&self) -> bool {
        match self {
            Symbol::Constant(_) | Symbol::Rational(_) => true,
            Symbol::PiecewiseLinear(pl) => pl.is_continuous(),
            Symbol::Sum(parts) | Symbol::Product(parts) => parts.iter().all(|p| p.is_continuous()),
            Symbol::Power { base, .. } => base.is_continuous(),
            Symbol::Scaled { inner, .. } => inner.is_continuous(),
            Symbol::Inverse(inner) => inner.is_continuous(),
        }
    }

    /// Recognizes `c * r_n` (with `c != 0`) through `Scaled` wrappers; used by
    /// the explicit-kernel index estimator.
    pub fn as_scaled_rational(&self) -> Option<(i32, Complex64)> {
        match self {
            Symbol::Rational(n) => Some((*n, ONE)),
            Symbol::Scaled { inner, factor } if factor.norm() > 0.0 => inner
                .as_scaled_rational()
                .map(|(n, c)| (n, c * factor)),
            _ => None,
        }
    }

    /// Minimum of `|a|` over the supplied grid and the point at infinity.
    /// Strictly positive output certifies ellipticity on that grid only; the
    /// adaptive certificate used by analysis lives in [`Symbol::extrema`].
    pub fn ellipticity_margin(&self, grid: &[f64]) -> f64 {
        let mut min = self.at_infinity().norm();
        for &x in grid {
            min = min.min(self.at(x).norm());
        }
        min
    }

    /// Sup norm over the compactified line (adaptively refined sweep).
    pub fn sup_norm(&self) -> f64 {
        self.extrema().sup
    }

    /// Sup-norm distance to another symbol.
    pub fn sup_distance(&self, other: &Symbol) -> f64 {
        self.difference(other).sup_norm()
    }

    /// `BV` norm: sup norm plus total variation.
    pub fn bv_norm(&self) -> f64 {
        self.sup_norm() + self.variation()
    }

    /// `BV`-norm distance to another symbol.
    pub fn bv_distance(&self, other: &Symbol) -> f64 {
        self.difference(other).bv_norm()
    }

    /// Pointwise reciprocal with an ellipticity certificate over the adaptive
    /// sweep and the caller's grid. The report carries the numerical check of
    /// `V(1/a) <= V(a) / (inf |a|)^2`.
    pub fn invert(&self, grid: &[f64]) -> Result<Inversion, SymbolError> {
        let ext = self.extrema();
        let mut margin = ext.min;
        let mut location = ext.min_location;
        for &x in grid {
            let v = self.at(x).norm();
            if v < margin {
                margin = v;
                location = x;
            }
        }
        if margin <= MARGIN_REL_TOL * ext.sup {
            return Err(SymbolError::NonElliptic { margin, location });
        }
        let symbol = reciprocal(self);
        let variation_original = self.variation();
        let variation_inverse = symbol.variation();
        let bound = variation_original / (margin * margin);
        Ok(Inversion {
            symbol,
            report: InversionReport {
                margin,
                variation_original,
                variation_inverse,
                variation_bound: bound,
                bound_satisfied: variation_inverse <= bound * (1.0 + 1e-9) + 1e-12,
            },
        })
    }

    /// Piecewise-linear approximation on a uniform mesh; see
    /// [`pl_approximate`].
    pub fn pl_approximated(
        &self,
        window: f64,
        mesh: f64,
    ) -> Result<PlApproximation, SymbolError> {
        pl_approximate(self, window, mesh)
    }

    /// Pullback to the unit circle: the value of `B0 a` at `t = e^{i theta}`,
    /// i.e. `a(i(1+t)/(1-t))` with `t = 1` mapped to the point at infinity.
    pub fn mobius_pullback(&self, theta: f64) -> Complex64 {
        let tn = theta.rem_euclid(std::f64::consts::TAU);
        if tn < 1e-12 || std::f64::consts::TAU - tn < 1e-12 {
            return self.at_infinity();
        }
        // i (1 + e^{i theta}) / (1 - e^{i theta}) = -cot(theta / 2), real.
        let xi = -1.0 / (tn / 2.0).tan();
        self.at(xi)
    }

    /// Compact label used in reports and matrix metadata.
    pub fn label(&self) -> String {
        format!("{self}")
    }

    /// Parses the JSON symbol schema.
    pub fn from_json(json: &str) -> Result<Symbol, SymbolError> {
        let node: SymbolSchema = serde_json::from_str(json)
            .map_err(|e| SymbolError::Invalid(format!("symbol schema: {e}")))?;
        node.build()
    }

    /// Serializes into the JSON symbol schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SymbolSchema::of(self)).expect("schema serialization")
    }
}

fn rational_at(n: i32, xi: f64) -> Complex64 {
    ((Complex64::new(xi, -1.0)) / (Complex64::new(xi, 1.0))).powi(n)
}

fn reciprocal(sym: &Symbol) -> Symbol {
    match sym {
        Symbol::Rational(n) => Symbol::Rational(-n),
        Symbol::Constant(c) => Symbol::Constant(ONE / c),
        Symbol::Scaled { inner, factor } => Symbol::Scaled {
            inner: Box::new(reciprocal(inner)),
            factor: ONE / factor,
        },
        Symbol::Product(parts) => Symbol::Product(parts.iter().map(reciprocal).collect()),
        Symbol::Inverse(inner) => (**inner).clone(),
        other => Symbol::Inverse(Box::new(other.clone())),
    }
}

/// Result of [`Symbol::invert`].
#[derive(Clone, Debug)]
pub struct Inversion {
    pub symbol: Symbol,
    pub report: InversionReport,
}

/// Certificate attached to a symbol inversion.
#[derive(Clone, Debug)]
pub struct InversionReport {
    /// Certified minimum modulus of the original symbol.
    pub margin: f64,
    pub variation_original: f64,
    pub variation_inverse: f64,
    /// `V(a) / margin^2`, the theoretical bound for `V(1/a)`.
    pub variation_bound: f64,
    pub bound_satisfied: bool,
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Constant(c) => write!(f, "{}", fmt_complex(*c)),
            Symbol::PiecewiseLinear(pl) => write!(f, "pl[{} vertices]", pl.vertices().len()),
            Symbol::Rational(n) => write!(f, "r_{n}"),
            Symbol::Sum(parts) => {
                let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", body.join(" + "))
            }
            Symbol::Product(parts) => {
                let body: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", body.join(" * "))
            }
            Symbol::Power { base, t, .. } => write!(f, "({base})^{t}"),
            Symbol::Scaled { inner, factor } => {
                write!(f, "{}*{}", fmt_complex(*factor), inner)
            }
            Symbol::Inverse(inner) => write!(f, "1/({inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rational_values() {
        let r1 = Symbol::Rational(1);
        // r_1(0) = -1, r_1(inf) = 1, unimodular everywhere
        assert_abs_diff_eq!(r1.at(0.0).re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r1.at(0.0).im, 0.0, epsilon = 1e-15);
        assert_eq!(r1.at_infinity(), Complex64::new(1.0, 0.0));
        for &xi in &[-17.0, -2.5, 0.0, 0.3, 11.0] {
            assert_abs_diff_eq!(r1.at(xi).norm(), 1.0, epsilon = 1e-14);
        }
        // r_{-n} is the pointwise inverse and conjugate of r_n
        let r3 = Symbol::Rational(3);
        let rm3 = Symbol::Rational(-3);
        for &xi in &[-4.0, 0.7, 5.0] {
            let p = r3.at(xi) * rm3.at(xi);
            assert_abs_diff_eq!(p.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p.im, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r3.conj().at(xi).re, rm3.at(xi).re, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let sym = Symbol::Sum(vec![
            Symbol::Rational(2),
            Symbol::scaled(Symbol::Rational(-1), Complex64::new(0.5, 0.25)),
            Symbol::constant(1.0, -0.5),
        ]);
        for &xi in &[-3.0, -0.4, 0.0, 1.7, 9.0] {
            let d = sym.derivative_at(xi);
            let h = 1e-6;
            let fd = (sym.at(xi + h) - sym.at(xi - h)) / (2.0 * h);
            assert!((d - fd).norm() < 1e-7, "xi={xi}: {d} vs {fd}");
        }
    }

    #[test]
    fn product_derivative_rule() {
        let p = Symbol::Product(vec![
            Symbol::Rational(1),
            Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(-1)]),
        ]);
        for &xi in &[-1.3, 0.2, 4.0] {
            let h = 1e-6;
            let fd = (p.at(xi + h) - p.at(xi - h)) / (2.0 * h);
            assert!((p.derivative_at(xi) - fd).norm() < 1e-7);
        }
    }

    #[test]
    fn inversion_certificate() {
        let a = Symbol::Sum(vec![Symbol::constant(2.0, 0.0), Symbol::Rational(1)]);
        let inv = a.invert(&[]).unwrap();
        assert_abs_diff_eq!(inv.report.margin, 1.0, epsilon = 1e-6);
        assert!(inv.report.bound_satisfied);
        for &xi in &[-5.0, 0.0, 0.9] {
            let prod = inv.symbol.at(xi) * a.at(xi);
            assert_abs_diff_eq!(prod.re, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(prod.im, 0.0, epsilon = 1e-12);
        }
        // exact rewrite for rational symbols
        let r = Symbol::Rational(2).invert(&[]).unwrap();
        assert_eq!(r.symbol, Symbol::Rational(-2));
    }

    #[test]
    fn non_elliptic_inversion_rejected() {
        let a = Symbol::Sum(vec![Symbol::Rational(1), Symbol::constant(1.0, 0.0)]);
        match a.invert(&[]) {
            Err(SymbolError::NonElliptic { margin, location }) => {
                assert!(margin < 1e-6);
                assert!(location.abs() < 1e-2, "zero sits at xi = 0");
            }
            other => panic!("expected NonElliptic, got {other:?}"),
        }
    }

    #[test]
    fn scaled_rational_recognition() {
        let s = Symbol::scaled(Symbol::Rational(-2), Complex64::new(0.0, 3.0));
        let (n, c) = s.as_scaled_rational().unwrap();
        assert_eq!(n, -2);
        assert_abs_diff_eq!(c.im, 3.0, epsilon = 1e-15);
        assert!(Symbol::Sum(vec![]).as_scaled_rational().is_none());
    }

    #[test]
    fn mobius_pullback_of_r1_is_the_identity() {
        let r1 = Symbol::Rational(1);
        for k in 0..=360 {
            let theta = k as f64 * std::f64::consts::TAU / 360.0;
            let expect = Complex64::from_polar(1.0, theta);
            let got = r1.mobius_pullback(theta);
            assert!(
                (got - expect).norm() < 1e-12,
                "theta={theta}: {got} vs {expect}"
            );
        }
    }
}
