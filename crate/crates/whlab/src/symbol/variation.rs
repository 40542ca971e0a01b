//! Total variation over the compactified line.
//!
//! Piecewise-linear normal forms, constants and scalar multiples have exact
//! telescoping formulas. Everything else is integrated: with
//! `xi = tan(theta / 2)`,
//!
//! ```text
//! V(a) = integral |a'(xi)| dxi = integral |a'(tan(theta/2))| (1 + xi^2) / 2 dtheta
//! ```
//!
//! over `theta` in `(-pi, pi)`, by composite Gauss-Legendre panels split at
//! the images of piecewise-linear vertices and refined until the total is
//! stable to a relative 1e-9.

use super::Symbol;
use crate::quad::gl16;
use std::f64::consts::{PI, TAU};

/// Initial number of quadrature chunks distributed over the sweep.
const BASE_CHUNKS: usize = 64;
/// Refinement stops when successive totals agree to this relative tolerance.
const QUAD_REL_TOL: f64 = 1e-9;
/// Hard cap on the subdivision multiplier (chunk count `BASE_CHUNKS * k`).
const MAX_LEVEL: usize = 512;

impl Symbol {
    /// Total variation over the line. Exact for piecewise-linear normal
    /// forms and their scalar multiples; adaptive quadrature of `|a'|`
    /// otherwise.
    pub fn variation(&self) -> f64 {
        match self {
            Symbol::Constant(_) => 0.0,
            Symbol::PiecewiseLinear(pl) => pl.variation(),
            Symbol::Scaled { inner, factor } => factor.norm() * inner.variation(),
            _ => variation_quadrature(self),
        }
    }
}

fn variation_quadrature(sym: &Symbol) -> f64 {
    let mut edges = vec![-PI];
    for v in sym.breakpoints() {
        let theta = 2.0 * v.atan();
        if theta > -PI && theta < PI {
            edges.push(theta);
        }
    }
    edges.push(PI);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let mut level = 1;
    let mut prev = f64::NAN;
    loop {
        let total: f64 = edges
            .windows(2)
            .map(|e| panel_integral(sym, e[0], e[1], level))
            .sum();
        if (total - prev).abs() <= QUAD_REL_TOL * total.max(1.0) {
            return total;
        }
        if level >= MAX_LEVEL {
            return total;
        }
        prev = total;
        level *= 2;
    }
}

fn panel_integral(sym: &Symbol, lo: f64, hi: f64, level: usize) -> f64 {
    let chunks = (((hi - lo) / TAU * (BASE_CHUNKS * level) as f64).ceil() as usize).max(1);
    let (nodes, weights) = gl16();
    let step = (hi - lo) / chunks as f64;
    let mut total = 0.0;
    for c in 0..chunks {
        let a = lo + c as f64 * step;
        let mid = a + step / 2.0;
        let half = step / 2.0;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            let theta = mid + half * x;
            let xi = (theta / 2.0).tan();
            let speed = sym.derivative_at(xi).norm() * 0.5 * (1.0 + xi * xi);
            acc += w * speed;
        }
        total += acc * half;
    }
    total
}
