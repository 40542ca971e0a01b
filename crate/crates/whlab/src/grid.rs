//! Uniform cell grids on the half-line `[0, L)` and the symmetric line
//! `[-Xi, Xi)`.
//!
//! Cells are half-open with sample points at cell centers. The line grid is
//! symmetric about the origin, so the reflection `x -> -x` permutes cell
//! centers exactly; several operator identities in this crate are exact only
//! because of that.

use serde::{Deserialize, Serialize};

/// A uniform grid of cells carrying piecewise-constant functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GridDomain {
    /// Cells `[j h, (j+1) h)` on `[0, length)`, `h = length / n`.
    HalfLine { length: f64, n: usize },
    /// Cells on `[-half_extent, half_extent)`, `h = 2 half_extent / n`.
    Line { half_extent: f64, n: usize },
}

impl GridDomain {
    pub fn half_line(length: f64, n: usize) -> Self {
        assert!(length > 0.0 && n >= 2, "degenerate half-line grid");
        GridDomain::HalfLine { length, n }
    }

    pub fn line(half_extent: f64, n: usize) -> Self {
        assert!(half_extent > 0.0 && n >= 2, "degenerate line grid");
        GridDomain::Line { half_extent, n }
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        match *self {
            GridDomain::HalfLine { n, .. } | GridDomain::Line { n, .. } => n,
        }
    }

    /// Cell width.
    pub fn h(&self) -> f64 {
        match *self {
            GridDomain::HalfLine { length, n } => length / n as f64,
            GridDomain::Line { half_extent, n } => 2.0 * half_extent / n as f64,
        }
    }

    /// Left end of the covered interval.
    pub fn start(&self) -> f64 {
        match *self {
            GridDomain::HalfLine { .. } => 0.0,
            GridDomain::Line { half_extent, .. } => -half_extent,
        }
    }

    /// Right end of the covered interval.
    pub fn end(&self) -> f64 {
        match *self {
            GridDomain::HalfLine { length, .. } => length,
            GridDomain::Line { half_extent, .. } => half_extent,
        }
    }

    /// Center of cell `j`.
    pub fn center(&self, j: usize) -> f64 {
        debug_assert!(j < self.n());
        self.start() + (j as f64 + 0.5) * self.h()
    }

    /// All cell centers in index order.
    pub fn centers(&self) -> Vec<f64> {
        (0..self.n()).map(|j| self.center(j)).collect()
    }

    /// Total measure of the covered interval.
    pub fn measure(&self) -> f64 {
        self.end() - self.start()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line_centers() {
        let g = GridDomain::half_line(4.0, 8);
        assert_eq!(g.h(), 0.5);
        assert_eq!(g.center(0), 0.25);
        assert_eq!(g.center(7), 3.75);
    }

    #[test]
    fn line_grid_is_reflection_symmetric() {
        let g = GridDomain::line(10.0, 64);
        let c = g.centers();
        for j in 0..64 {
            let r = c[63 - j];
            assert!((c[j] + r).abs() < 1e-12, "centers must mirror exactly");
        }
    }
}
