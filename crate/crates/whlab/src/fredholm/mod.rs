//! Fredholm analysis of Wiener-Hopf operators: symbolic invariants
//! (ellipticity, winding number) cross-checked against numerical kernel and
//! cokernel evidence from independent discretizations.

mod analyze;
mod homotopy;
mod identities;
mod kernel;
mod perturb;

pub use analyze::{
    analyze, AnalyzeOptions, EstimatorReport, FredholmReport, FredholmVerdict, Provenance,
};
pub use homotopy::{homotopy_verify, HomotopyVerification};
pub use identities::{verify_identities, IdentityBattery, IdentityCheck};
pub use kernel::{kernel_basis, laguerre_function, KernelBasis};
pub use perturb::{perturbation_experiment, PerturbationReport};

use crate::operator::OperatorError;
use crate::spaces::SpaceError;
use crate::symbol::SymbolError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FredholmError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    /// The two constructions of the explicit kernel basis disagree.
    #[error("kernel cross-validation failed: {0}")]
    CrossValidationFailure(String),
    /// A homotopy step left the elliptic class.
    #[error("path loses ellipticity at t = {t}: min |h_t| = {margin:.3e}")]
    PathEllipticityFailure { t: f64, margin: f64 },
    /// The perturbation does not move the curve cleanly off its zero.
    #[error("perturbation not transversal: {0}")]
    TransversalityFailure(String),
    #[error("invalid request: {0}")]
    Invalid(String),
}
