//! Hardy-Littlewood maximal operator, exact on grid functions.
//!
//! For a cell-constant function the supremum over all intervals containing a
//! point is attained on a cell-aligned window (moving an endpoint inside a
//! cell changes the average monotonically), so
//!
//! ```text
//! (M f)_j = max over a <= j < b of (P_b - P_a) / (b - a),
//! ```
//!
//! with `P` the prefix sums of `|f|`. For each left edge `a`, suffix maxima
//! of the averages deliver every cell's best window starting at `a` in one
//! backward pass, giving an exact `O(N^2)` algorithm; the left edges are
//! distributed across blocks and the block results combined by pointwise
//! maxima.

use super::GridFunction;
use crate::exec;
use num_complex::Complex64;

pub fn maximal_operator(f: &GridFunction) -> GridFunction {
    let n = f.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in f.values() {
        acc += v.norm();
        prefix.push(acc);
    }

    let blocks = n.clamp(1, 64);
    let partials = exec::map_indexed(blocks, |blk| {
        let lo = blk * n / blocks;
        let hi = (blk + 1) * n / blocks;
        let mut local = vec![0.0_f64; n];
        for a in lo..hi {
            let mut best = 0.0_f64;
            for j in (a..n).rev() {
                let avg = (prefix[j + 1] - prefix[a]) / (j + 1 - a) as f64;
                best = best.max(avg);
                if best > local[j] {
                    local[j] = best;
                }
            }
        }
        local
    });

    let mut out = vec![0.0_f64; n];
    for local in partials {
        for (o, l) in out.iter_mut().zip(local) {
            *o = o.max(l);
        }
    }
    GridFunction::from_values(
        f.domain(),
        out.into_iter().map(|m| Complex64::new(m, 0.0)).collect(),
    )
    .expect("same domain")
}
