//! JSON schema for symbols.
//!
//! Every node is an object tagged by `"kind"`; complex scalars are `[re, im]`
//! pairs. Example:
//!
//! ```json
//! { "kind": "sum", "parts": [
//!     { "kind": "const", "value": [2.0, 0.0] },
//!     { "kind": "rational", "n": 1 } ] }
//! ```
//!
//! Kinds: `rational`, `const`, `pl` (normal form), `interp` (continuous
//! interpolant through nodes `[x, re, im]`), `sum`, `product`, `power`,
//! `scaled`, `inverse`. Powers are re-validated on parse, so a schema cannot
//! smuggle in a branch the constructor would reject.

use super::{PlData, Symbol, SymbolError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = [f64; 2];

fn c(z: Complex64) -> C {
    [z.re, z.im]
}

fn z(v: C) -> Complex64 {
    Complex64::new(v[0], v[1])
}

/// Serialized form of a [`Symbol`] tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SymbolSchema {
    Rational {
        n: i32,
    },
    Const {
        value: C,
    },
    /// Piecewise-linear normal form: segment `k` is `c_k + d_k x` on
    /// `(vertices[k], vertices[k+1]]`, serialized as `[c, d]`.
    Pl {
        vertices: Vec<f64>,
        left: C,
        segments: Vec<[C; 2]>,
        right: C,
    },
    /// Continuous piecewise-linear interpolant through `[x, re, im]` nodes,
    /// tails pinned to the first and last values.
    Interp {
        nodes: Vec<[f64; 3]>,
    },
    Sum {
        parts: Vec<SymbolSchema>,
    },
    Product {
        parts: Vec<SymbolSchema>,
    },
    Power {
        base: Box<SymbolSchema>,
        t: f64,
    },
    Scaled {
        inner: Box<SymbolSchema>,
        factor: C,
    },
    Inverse {
        inner: Box<SymbolSchema>,
    },
}

impl SymbolSchema {
    /// Validates and builds the symbol.
    pub fn build(&self) -> Result<Symbol, SymbolError> {
        match self {
            SymbolSchema::Rational { n } => Ok(Symbol::Rational(*n)),
            SymbolSchema::Const { value } => Ok(Symbol::Constant(z(*value))),
            SymbolSchema::Pl {
                vertices,
                left,
                segments,
                right,
            } => {
                let segs = segments.iter().map(|s| (z(s[0]), z(s[1]))).collect();
                Ok(Symbol::PiecewiseLinear(PlData::new(
                    vertices.clone(),
                    z(*left),
                    segs,
                    z(*right),
                )?))
            }
            SymbolSchema::Interp { nodes } => {
                let pts: Vec<(f64, Complex64)> = nodes
                    .iter()
                    .map(|n| (n[0], Complex64::new(n[1], n[2])))
                    .collect();
                Ok(Symbol::PiecewiseLinear(PlData::interpolant(&pts)?))
            }
            SymbolSchema::Sum { parts } => {
                Ok(Symbol::Sum(build_all(parts)?))
            }
            SymbolSchema::Product { parts } => {
                Ok(Symbol::Product(build_all(parts)?))
            }
            SymbolSchema::Power { base, t } => Symbol::power(base.build()?, *t),
            SymbolSchema::Scaled { inner, factor } => {
                Ok(Symbol::scaled(inner.build()?, z(*factor)))
            }
            SymbolSchema::Inverse { inner } => {
                // reciprocal with the same ellipticity certificate as invert()
                Ok(inner.build()?.invert(&[])?.symbol)
            }
        }
    }

    /// Serialized form of an existing symbol. Power branches are not stored;
    /// they are rebuilt deterministically by [`SymbolSchema::build`].
    pub fn of(sym: &Symbol) -> SymbolSchema {
        match sym {
            Symbol::Rational(n) => SymbolSchema::Rational { n: *n },
            Symbol::Constant(v) => SymbolSchema::Const { value: c(*v) },
            Symbol::PiecewiseLinear(pl) => SymbolSchema::Pl {
                vertices: pl.vertices().to_vec(),
                left: c(pl.left()),
                segments: pl
                    .segments()
                    .iter()
                    .map(|&(sc, sd)| [c(sc), c(sd)])
                    .collect(),
                right: c(pl.right()),
            },
            Symbol::Sum(parts) => SymbolSchema::Sum {
                parts: parts.iter().map(SymbolSchema::of).collect(),
            },
            Symbol::Product(parts) => SymbolSchema::Product {
                parts: parts.iter().map(SymbolSchema::of).collect(),
            },
            Symbol::Power { base, t, .. } => SymbolSchema::Power {
                base: Box::new(SymbolSchema::of(base)),
                t: *t,
            },
            Symbol::Scaled { inner, factor } => SymbolSchema::Scaled {
                inner: Box::new(SymbolSchema::of(inner)),
                factor: c(*factor),
            },
            Symbol::Inverse(inner) => SymbolSchema::Inverse {
                inner: Box::new(SymbolSchema::of(inner)),
            },
        }
    }
}

fn build_all(parts: &[SymbolSchema]) -> Result<Vec<Symbol>, SymbolError> {
    if parts.is_empty() {
        return Err(SymbolError::Invalid(
            "sum/product needs at least one part".into(),
        ));
    }
    parts.iter().map(|p| p.build()).collect()
}
