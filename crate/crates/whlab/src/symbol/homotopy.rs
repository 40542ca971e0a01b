//! Canonical elliptic homotopy onto a pure rational block.
//!
//! For an elliptic continuous symbol `b` of winding number `kappa`, the path
//!
//! ```text
//! h_t = (r_{-kappa} b)^t * r_kappa,    t in [0, 1]
//! ```
//!
//! deforms `r_kappa` (at `t = 0`) into `b` (at `t = 1`) through elliptic
//! symbols: the reduced factor `f = r_{-kappa} b` has winding number zero, so
//! a continuous logarithm exists, `|h_t| = |f|^t` never vanishes, and the
//! winding number stays `kappa` along the whole path.

use super::sweep::ArgBranch;
use super::{Symbol, SymbolError};
use serde::Serialize;

/// The homotopy symbol `h_t` for one parameter value.
pub fn homotopy(b: &Symbol, t: f64) -> Result<Symbol, SymbolError> {
    let kappa = b.winding_number()?;
    let reduced = reduce(b, kappa);
    let pow = Symbol::power(reduced, t)?;
    Ok(attach(pow, kappa))
}

fn reduce(b: &Symbol, kappa: i32) -> Symbol {
    if kappa == 0 {
        b.clone()
    } else {
        Symbol::Product(vec![Symbol::Rational(-kappa), b.clone()])
    }
}

fn attach(pow: Symbol, kappa: i32) -> Symbol {
    if kappa == 0 {
        pow
    } else {
        Symbol::Product(vec![pow, Symbol::Rational(kappa)])
    }
}

/// One row of a homotopy trace.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopyStep {
    pub t: f64,
    /// Minimum modulus of `h_t` over the compactified line.
    pub margin: f64,
    /// Sup norm of `h_t`.
    pub sup: f64,
    /// Winding number of `h_t`; constancy along the path is the homotopy
    /// invariance check.
    pub winding: i32,
    /// Sup distance from `h_t` to the rational block `r_kappa`.
    pub distance_to_start: f64,
    /// Sup distance from `h_t` to the target `b`.
    pub distance_to_end: f64,
    /// Total variation of the power factor `f^t`.
    pub power_variation: f64,
    /// Theoretical bound `t V(f) / (inf |f|)^{1-t}` for that variation.
    pub variation_bound: f64,
}

/// Trace of the canonical homotopy over a set of parameter values.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopyTrace {
    /// Winding number of the target (and of every `h_t`).
    pub kappa: i32,
    /// Total variation of the reduced factor `f = r_{-kappa} b`.
    pub reduced_variation: f64,
    /// Minimum modulus of the reduced factor.
    pub reduced_min_modulus: f64,
    pub steps: Vec<HomotopyStep>,
}

/// Evaluates the canonical homotopy at each `t` in `ts` and collects the
/// ellipticity, distance and variation diagnostics per step.
pub fn homotopy_trace(b: &Symbol, ts: &[f64]) -> Result<HomotopyTrace, SymbolError> {
    let kappa = b.winding_number()?;
    let reduced = reduce(b, kappa);
    let branch = ArgBranch::build(&reduced)?;
    let reduced_variation = reduced.variation();
    let reduced_min_modulus = reduced.extrema().min;
    let start = Symbol::Rational(kappa);

    let mut steps = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(0.0..=1.0).contains(&t) {
            return Err(SymbolError::Invalid(format!(
                "homotopy parameter t = {t} outside [0, 1]"
            )));
        }
        let pow = Symbol::Power {
            base: Box::new(reduced.clone()),
            t,
            branch: branch.clone(),
        };
        let h = attach(pow.clone(), kappa);
        let ext = h.extrema();
        steps.push(HomotopyStep {
            t,
            margin: ext.min,
            sup: ext.sup,
            winding: h.winding_number()?,
            distance_to_start: h.sup_distance(&start),
            distance_to_end: h.sup_distance(b),
            power_variation: pow.variation(),
            variation_bound: t * reduced_variation / reduced_min_modulus.powf(1.0 - t),
        });
    }
    Ok(HomotopyTrace {
        kappa,
        reduced_variation,
        reduced_min_modulus,
        steps,
    })
}
