//! Piecewise-linear normal form with constant tails, and piecewise-linear
//! approximation of continuous symbols.

use super::{Symbol, SymbolError};
use num_complex::Complex64;

/// Default half-width of the interpolation window for [`Symbol`] approximation.
pub const DEFAULT_WINDOW: f64 = 64.0;
/// Default vertex spacing inside the window.
pub const DEFAULT_MESH: f64 = 1.0 / 16.0;

/// Relative tolerance for the vertex continuity check.
const CONTINUITY_REL_TOL: f64 = 1e-9;

/// Piecewise-linear function on the line: constant value `left` on
/// `(-inf, x_1]`, affine pieces `c_k + d_k xi` on `(x_k, x_{k+1}]`, constant
/// value `right` on `(x_m, inf)`. Each cell is half-open to the left, so
/// every point has exactly one owner.
///
/// The value at the point at infinity is defined as `right`; a symbol whose
/// tails disagree is not continuous on the compactified line and is rejected
/// by analyses that require continuity.
#[derive(Clone, Debug, PartialEq)]
pub struct PlData {
    vertices: Vec<f64>,
    left: Complex64,
    /// `(c_k, d_k)` for the segment on `(x_k, x_{k+1}]`.
    segments: Vec<(Complex64, Complex64)>,
    right: Complex64,
}

impl PlData {
    /// Builds from raw normal-form data. `segments.len()` must equal
    /// `vertices.len() - 1`, vertices strictly increasing and finite.
    pub fn new(
        vertices: Vec<f64>,
        left: Complex64,
        segments: Vec<(Complex64, Complex64)>,
        right: Complex64,
    ) -> Result<Self, SymbolError> {
        if vertices.len() < 2 {
            return Err(SymbolError::Invalid(
                "piecewise-linear symbol needs at least two vertices".into(),
            ));
        }
        if segments.len() + 1 != vertices.len() {
            return Err(SymbolError::Invalid(format!(
                "{} vertices require {} segments, got {}",
                vertices.len(),
                vertices.len() - 1,
                segments.len()
            )));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(SymbolError::Invalid("non-finite vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SymbolError::Invalid(
                "vertices must be strictly increasing".into(),
            ));
        }
        Ok(PlData {
            vertices,
            left,
            segments,
            right,
        })
    }

    /// Continuous interpolant through `nodes` (strictly increasing abscissae),
    /// with tails pinned to the first and last node values.
    pub fn interpolant(nodes: &[(f64, Complex64)]) -> Result<Self, SymbolError> {
        if nodes.len() < 2 {
            return Err(SymbolError::Invalid(
                "interpolant needs at least two nodes".into(),
            ));
        }
        let vertices: Vec<f64> = nodes.iter().map(|&(x, _)| x).collect();
        let mut segments = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            let (x0, v0) = w[0];
            let (x1, v1) = w[1];
            if x1 <= x0 {
                return Err(SymbolError::Invalid(
                    "interpolation nodes must be strictly increasing".into(),
                ));
            }
            let d = (v1 - v0) / (x1 - x0);
            let c = v0 - d * x0;
            segments.push((c, d));
        }
        PlData::new(vertices, nodes[0].1, segments, nodes[nodes.len() - 1].1)
    }

    pub fn vertices(&self) -> &[f64] {
        &self.vertices
    }

    pub fn left(&self) -> Complex64 {
        self.left
    }

    pub fn right(&self) -> Complex64 {
        self.right
    }

    /// Segment coefficients `(c_k, d_k)`.
    pub fn segments(&self) -> &[(Complex64, Complex64)] {
        &self.segments
    }

    pub fn at(&self, xi: f64) -> Complex64 {
        let m = self.vertices.len();
        if xi <= self.vertices[0] {
            return self.left;
        }
        if xi > self.vertices[m - 1] {
            return self.right;
        }
        // partition_point returns the first vertex index with v >= xi, so
        // xi lies in (vertices[k-1], vertices[k]] owned by segment k-1
        let k = self.vertices.partition_point(|&v| v < xi);
        let (c, d) = self.segments[k - 1];
        c + d * xi
    }

    pub fn value_at_infinity(&self) -> Complex64 {
        self.right
    }

    /// Slope of the piece owning `xi` (zero on the tails).
    pub fn slope_at(&self, xi: f64) -> Complex64 {
        let m = self.vertices.len();
        if xi <= self.vertices[0] || xi > self.vertices[m - 1] {
            return Complex64::ZERO;
        }
        let k = self.vertices.partition_point(|&v| v < xi);
        self.segments[k - 1].1
    }

    pub fn conj(&self) -> PlData {
        PlData {
            vertices: self.vertices.clone(),
            left: self.left.conj(),
            segments: self
                .segments
                .iter()
                .map(|&(c, d)| (c.conj(), d.conj()))
                .collect(),
            right: self.right.conj(),
        }
    }

    /// Largest jump across a vertex or between the tails at infinity,
    /// relative to the overall scale of the function.
    pub fn continuity_defect(&self) -> f64 {
        let mut jump: f64 = (self.left - self.right).norm();
        let m = self.vertices.len();
        for k in 0..m {
            let x = self.vertices[k];
            let before = if k == 0 {
                self.left
            } else {
                let (c, d) = self.segments[k - 1];
                c + d * x
            };
            let after = if k == m - 1 {
                self.right
            } else {
                let (c, d) = self.segments[k];
                c + d * x
            };
            jump = jump.max((after - before).norm());
        }
        jump
    }

    /// Continuity on the compactified line, to relative tolerance.
    pub fn is_continuous(&self) -> bool {
        let scale = 1.0 + self.scale();
        self.continuity_defect() <= CONTINUITY_REL_TOL * scale
    }

    fn scale(&self) -> f64 {
        let mut s = self.left.norm().max(self.right.norm());
        for (k, &(c, d)) in self.segments.iter().enumerate() {
            s = s.max((c + d * self.vertices[k + 1]).norm());
        }
        s
    }

    /// Total variation over the line by exact telescoping: segment lengths in
    /// the image plane plus any vertex jumps. A jump between the two tails at
    /// infinity is not counted; it belongs to the compactified circle, not to
    /// the line, and continuous symbols have none.
    pub fn variation(&self) -> f64 {
        let m = self.vertices.len();
        let mut total = 0.0;
        let mut prev = self.left;
        for k in 0..m - 1 {
            let (c, d) = self.segments[k];
            let a = c + d * self.vertices[k];
            let b = c + d * self.vertices[k + 1];
            total += (a - prev).norm() + (b - a).norm();
            prev = b;
        }
        total + (self.right - prev).norm()
    }
}

/// Result of [`pl_approximate`].
#[derive(Clone, Debug)]
pub struct PlApproximation {
    /// The interpolating symbol: vertices on a uniform mesh over
    /// `[-window, window]`, tails pinned to the value at infinity.
    pub symbol: Symbol,
    /// Max error against the target on a four-fold refinement of the mesh.
    pub sup_error: f64,
    pub variation: f64,
    /// Whether `V(approximation) <= V(target)` held (it must, since vertex
    /// values are samples of the target and interpolation cannot increase
    /// the variation of a function of bounded variation).
    pub variation_bound_ok: bool,
    pub window: f64,
    pub mesh: f64,
}

/// Piecewise-linear approximation of a continuous symbol: interpolation on a
/// uniform mesh over `[-window, window]`, with both boundary vertices pinned
/// to the value at infinity so the approximation is again continuous on the
/// compactified line.
pub fn pl_approximate(b: &Symbol, window: f64, mesh: f64) -> Result<PlApproximation, SymbolError> {
    if !(window > 0.0) || !(mesh > 0.0) || mesh > window {
        return Err(SymbolError::Invalid(format!(
            "approximation window {window} / mesh {mesh} out of range"
        )));
    }
    if !b.is_continuous() {
        return Err(SymbolError::Invalid(
            "piecewise-linear approximation requires a continuous target".into(),
        ));
    }
    let target_variation = b.variation();
    if !target_variation.is_finite() {
        return Err(SymbolError::InfiniteVariation);
    }

    let cells = ((2.0 * window / mesh).round() as usize).max(2);
    let step = 2.0 * window / cells as f64;
    let infinity = b.at_infinity();
    let nodes: Vec<(f64, Complex64)> = (0..=cells)
        .map(|j| {
            let x = -window + j as f64 * step;
            let v = if j == 0 || j == cells {
                infinity
            } else {
                b.at(x)
            };
            (x, v)
        })
        .collect();
    let pl = PlData::interpolant(&nodes)?;

    let mut sup_error: f64 = 0.0;
    for j in 0..=4 * cells {
        let x = -window + j as f64 * step / 4.0;
        sup_error = sup_error.max((b.at(x) - pl.at(x)).norm());
    }

    let variation = pl.variation();
    Ok(PlApproximation {
        symbol: Symbol::PiecewiseLinear(pl),
        sup_error,
        variation,
        variation_bound_ok: variation <= target_variation * (1.0 + 1e-9) + 1e-12,
        window,
        mesh: step,
    })
}
