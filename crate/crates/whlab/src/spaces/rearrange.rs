//! Distribution function and decreasing rearrangement.
//!
//! For a cell-constant function both are exact: the distribution function is
//! a step function counting cells, and the rearrangement is the sorted list
//! of moduli laid out on the same cell width.

use super::GridFunction;

/// `d_f(lambda) = |{ |f| > lambda }|` (Lebesgue measure).
pub fn distribution_function(f: &GridFunction, lambda: f64) -> f64 {
    let count = f.values().iter().filter(|v| v.norm() > lambda).count();
    count as f64 * f.domain().h()
}

/// The decreasing rearrangement `f*` of a grid function, with its exact
/// running integral. `f*` is again a cell-constant function on `[0, N h)`.
#[derive(Clone, Debug)]
pub struct DecreasingRearrangement {
    cell: f64,
    /// Moduli sorted in decreasing order.
    sorted: Vec<f64>,
    /// `prefix[k] = integral of f* over [0, k h]`; length `N + 1`.
    prefix: Vec<f64>,
}

pub fn decreasing_rearrangement(f: &GridFunction) -> DecreasingRearrangement {
    let cell = f.domain().h();
    let mut sorted: Vec<f64> = f.values().iter().map(|v| v.norm()).collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = Vec::with_capacity(sorted.len() + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for s in &sorted {
        acc += s * cell;
        prefix.push(acc);
    }
    DecreasingRearrangement {
        cell,
        sorted,
        prefix,
    }
}

impl DecreasingRearrangement {
    /// `f*(t)`; zero beyond the support.
    pub fn at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.sorted.first().copied().unwrap_or(0.0);
        }
        let k = (t / self.cell).floor() as usize;
        self.sorted.get(k).copied().unwrap_or(0.0)
    }

    /// Exact `integral of f* over [0, t]`.
    pub fn integral_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let n = self.sorted.len();
        let k = ((t / self.cell).floor() as usize).min(n);
        let base = self.prefix[k];
        if k >= n {
            return base;
        }
        base + (t - k as f64 * self.cell) * self.sorted[k]
    }

    /// The maximal function `f**(t) = t^{-1} integral of f* over [0, t]`.
    pub fn double_star(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.sorted.first().copied().unwrap_or(0.0);
        }
        self.integral_to(t) / t
    }

    /// Number of cells in the underlying grid.
    pub fn cells(&self) -> usize {
        self.sorted.len()
    }

    pub fn cell_width(&self) -> f64 {
        self.cell
    }

    /// End of the support interval `[0, N h)`.
    pub fn support_end(&self) -> f64 {
        self.cell * self.sorted.len() as f64
    }

    /// Total integral of `f*`, equal to the mass of the original function.
    pub fn total_integral(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Value on cell `k`.
    pub fn cell_value(&self, k: usize) -> f64 {
        self.sorted.get(k).copied().unwrap_or(0.0)
    }

    /// Running integral up to the start of cell `k`.
    pub fn prefix_at_cell(&self, k: usize) -> f64 {
        self.prefix[k.min(self.prefix.len() - 1)]
    }
}
