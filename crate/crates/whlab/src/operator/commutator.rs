//! The semi-commutator `W(a) W(b) - W(ab)` and compactness evidence.
//!
//! On the full line, with `J = F sgn(x) F^{-1}` acting on spectra and
//! `P = (I + J)/2`, the truncation identity reads
//!
//! ```text
//! l+ (W(a) W(b) - W(ab)) r+ = 1/4 F^{-1} [aI, S] [bI, S] P F
//! ```
//!
//! where `S` is the Cauchy singular operator in the frequency variable and
//! `aI`, `bI` multiply by the symbols. Both sides are assembled through
//! different code paths (truncated matrix products on the left, a chain of
//! transforms on the right) and compared in operator norm.

use super::engine::Spectral;
use super::matrix::{self, OperatorMatrix, OperatorSpace};
use super::{wiener_hopf, OperatorError};
use crate::grid::GridDomain;
use crate::symbol::Symbol;
use num_complex::Complex64;
use serde::Serialize;

/// Operator norms of both sides of an identity and their difference.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    pub diff_norm: f64,
    pub relative_error: f64,
}

impl IdentityReport {
    pub fn from_difference(
        lhs: &OperatorMatrix,
        rhs: &OperatorMatrix,
    ) -> Result<IdentityReport, OperatorError> {
        let lhs_norm = lhs.operator_norm();
        let rhs_norm = rhs.operator_norm();
        let diff_norm = lhs.sub(rhs)?.operator_norm();
        Ok(IdentityReport {
            lhs_norm,
            rhs_norm,
            diff_norm,
            relative_error: diff_norm / lhs_norm.max(rhs_norm).max(1e-300),
        })
    }
}

/// The half-line semi-commutator matrix together with the identity check.
pub struct SemiCommutator {
    pub matrix: OperatorMatrix,
    pub report: IdentityReport,
}

/// Computes `W(a) W(b) - W(ab)` on a half-line grid and verifies the
/// commutator identity against an independently assembled right-hand side.
pub fn semi_commutator(
    a: &Symbol,
    b: &Symbol,
    half: GridDomain,
) -> Result<SemiCommutator, OperatorError> {
    let GridDomain::HalfLine { length, n } = half else {
        return Err(OperatorError::Invalid(
            "semi_commutator needs a half-line grid".into(),
        ));
    };

    let wa = wiener_hopf(a, half)?;
    let wb = wiener_hopf(b, half)?;
    let product = Symbol::Product(vec![a.clone(), b.clone()]);
    let wab = wiener_hopf(&product, half)?;
    let lhs = wa
        .compose(&wb)?
        .sub(&wab)?
        .with_label(format!("W({a})W({b}) - W({a} {b})"));

    // right-hand side, column by column: embed, transform, commutator chain,
    // transform back, restrict to the positive cells
    let line = GridDomain::line(length, 2 * n);
    let eng = Spectral::new(line);
    let ma = eng.multiplier(a);
    let mb = eng.multiplier(b);
    let space = OperatorSpace::Grid(half);
    let commutator = |mult: &[Complex64], spec: &[Complex64], eng: &Spectral| {
        // [mI, S] on a raw spectrum
        let mut right = spec.to_vec();
        eng.apply_freq_sign(&mut right);
        for (v, m) in right.iter_mut().zip(mult) {
            *v *= m;
        }
        let mut left: Vec<Complex64> = spec.iter().zip(mult).map(|(v, m)| v * m).collect();
        eng.apply_freq_sign(&mut left);
        right.iter().zip(&left).map(|(r, l)| r - l).collect::<Vec<_>>()
    };
    let rhs = matrix::assemble(space, space, "commutator chain", |j| {
        let mut buf = vec![Complex64::ZERO; 2 * n];
        buf[n + j] = Complex64::new(1.0, 0.0);
        eng.to_spectrum(&mut buf);
        // P = (I + J)/2
        let mut signed = buf.clone();
        eng.apply_freq_sign(&mut signed);
        for (v, s) in buf.iter_mut().zip(&signed) {
            *v = 0.5 * (*v + s);
        }
        let buf = commutator(&mb, &buf, &eng);
        let mut buf = commutator(&ma, &buf, &eng);
        for v in buf.iter_mut() {
            *v *= 0.25;
        }
        eng.to_space(&mut buf);
        buf.split_off(n)
    });

    let report = IdentityReport::from_difference(&lhs, &rhs)?;
    Ok(SemiCommutator {
        matrix: lhs,
        report,
    })
}

/// Leading singular values of one discretization level.
#[derive(Debug, Clone, Serialize)]
pub struct SingularValueProfile {
    /// Number of half-line cells.
    pub n: usize,
    /// Largest singular values, descending.
    pub leading: Vec<f64>,
    /// Count of singular values above `rank_tol * sigma_1`.
    pub numerical_rank: usize,
    /// Count of singular values above `sigma_1 / 2`.
    pub plateau: usize,
}

/// Singular value profiles across refinements. A compact finite-rank limit
/// shows a stable numerical rank; a non-compact operator keeps growing its
/// plateau as the grid refines.
#[derive(Debug, Clone, Serialize)]
pub struct CompactnessEvidence {
    pub label: String,
    pub rank_tol: f64,
    pub profiles: Vec<SingularValueProfile>,
    pub rank_stable: bool,
}

pub fn compactness_evidence(
    label: impl Into<String>,
    build: impl Fn(usize) -> Result<OperatorMatrix, OperatorError>,
    sizes: &[usize],
    rank_tol: f64,
) -> Result<CompactnessEvidence, OperatorError> {
    if sizes.is_empty() {
        return Err(OperatorError::Invalid(
            "compactness evidence needs at least one size".into(),
        ));
    }
    let mut profiles = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let op = build(n)?;
        let svals = op.singular_values();
        let top = svals.first().copied().unwrap_or(0.0).max(1e-300);
        let numerical_rank = svals.iter().filter(|&&s| s > rank_tol * top).count();
        let plateau = svals.iter().filter(|&&s| s > 0.5 * top).count();
        profiles.push(SingularValueProfile {
            n,
            leading: svals.into_iter().take(16).collect(),
            numerical_rank,
            plateau,
        });
    }
    let rank_stable = profiles
        .windows(2)
        .all(|w| w[0].numerical_rank == w[1].numerical_rank);
    Ok(CompactnessEvidence {
        label: label.into(),
        rank_tol,
        profiles,
        rank_stable,
    })
}
