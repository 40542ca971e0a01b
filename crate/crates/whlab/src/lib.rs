//! Numerical laboratory for Wiener-Hopf operators `W(a) = r+ W0(a) l+` with
//! continuous symbols on the one-point compactification of the real line.
//!
//! The crate is organized around four layers:
//!
//! * [`symbol`] - closed-form symbol algebra: evaluation on the compactified
//!   line, total variation, winding numbers, inversion, piecewise-linear
//!   approximation and the power homotopy connecting an elliptic symbol to its
//!   rational normal form.
//! * [`spaces`] - grid functions on half-line and line grids together with the
//!   rearrangement machinery and the Lorentz, Orlicz and variable-Lebesgue
//!   norms, plus Boyd indices for the admissibility gate.
//! * [`operator`] - spectral discretizations of the convolution operator
//!   `W0(a)`, the Wiener-Hopf compression `W(a)`, the Cauchy singular
//!   integral, Moebius transport to the circle and Toeplitz sections.
//! * [`fredholm`] - the analysis pipeline tying the layers together: kernel
//!   bases, index estimation from three independent numerical estimators,
//!   homotopy verification and the transversal perturbation experiment.
//!
//! All numerics are deterministic: random test data is generated from fixed
//! seeds and reports serialize with stable field order.

pub mod exec;
pub mod fredholm;
pub mod grid;
pub mod operator;
pub(crate) mod quad;
pub mod spaces;
pub mod symbol;

pub use num_complex::Complex64;

/// Crate version recorded in report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
