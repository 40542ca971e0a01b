//! Execution helpers for the data-parallel kernels.
//!
//! With the `parallel` feature (default) the mapping helpers fan out over the
//! rayon thread pool; without it they degrade to plain sequential loops and
//! rayon is not linked at all. faer follows the same switch through its own
//! `rayon` feature.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n` and collects the results in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential twin of [`map_indexed`], kept public so benchmarks can
/// compare the two code paths under identical inputs.
pub fn map_indexed_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}
