//! The analysis pipeline: ellipticity -> winding -> predicted index, then
//! three independent numerical estimators of kernel and cokernel dimensions.
//!
//! Square finite sections cannot tell a kernel from a cokernel, so the
//! numerics triangulate: explicit Laguerre residuals (rational symbols only),
//! rectangular SVD counts for `W(a)` and `W(conj a)`, and tall Toeplitz
//! sections of the circle pullback. The verdict requires two estimators to
//! agree with the winding prediction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::grid::GridDomain;
use crate::operator::{toeplitz_section_tall, wiener_hopf_rect, OperatorMatrix};
use crate::spaces::{boyd_indices, BoydIndices, SpaceSpec};
use crate::symbol::Symbol;
use crate::VERSION;

use super::kernel::{psi_residual, OVERSAMPLE};
use super::FredholmError;

/// A singular value below `SIGMA_REL_TOL * sigma_max` counts as zero.
pub(crate) const SIGMA_REL_TOL: f64 = 1e-3;
/// Ratio required between the smallest kept and the largest discarded
/// singular value before a count is trusted.
pub(crate) const GAP_REQUIRED: f64 = 10.0;
/// Residual below which a Laguerre probe counts as a kernel vector.
const PSI_COUNT_TOL: f64 = 5e-3;
/// Largest kernel dimension the explicit-basis estimator will scan for.
const PSI_SCAN_CAP: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeOptions {
    /// Half-line cells for the rectangular discretization.
    pub grid_n: usize,
    /// Half-line truncation length `L`.
    pub half_line_length: f64,
    /// Relative ellipticity cutoff: `min |a| <= tol * sup |a|` reads as "has
    /// a zero".
    pub tol: f64,
    /// Skip the three numerical estimators when false.
    pub run_numerics: bool,
    /// Toeplitz section size for the circle-side estimator.
    pub toeplitz_n: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            grid_n: 1024,
            half_line_length: 40.0,
            tol: 1e-9,
            run_numerics: true,
            toeplitz_n: 128,
        }
    }
}

impl AnalyzeOptions {
    fn validate(&self) -> Result<(), FredholmError> {
        if self.grid_n < 16 {
            return Err(FredholmError::Invalid(format!(
                "grid_n = {} too small, want >= 16",
                self.grid_n
            )));
        }
        if !(self.half_line_length > 0.0) || !self.half_line_length.is_finite() {
            return Err(FredholmError::Invalid(format!(
                "half_line_length = {} must be positive",
                self.half_line_length
            )));
        }
        if !(self.tol > 0.0) || self.tol >= 1.0 {
            return Err(FredholmError::Invalid(format!(
                "tol = {} out of range (0, 1)",
                self.tol
            )));
        }
        if self.toeplitz_n < 8 {
            return Err(FredholmError::Invalid(format!(
                "toeplitz_n = {} too small, want >= 8",
                self.toeplitz_n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FredholmVerdict {
    Fredholm { index: i32 },
    NotFredholm,
    Inconclusive,
}

/// One numerical estimator's view of the kernel and cokernel.
#[derive(Clone, Debug, Serialize)]
pub struct EstimatorReport {
    pub name: String,
    pub kernel: Option<usize>,
    pub cokernel: Option<usize>,
    pub index: Option<i32>,
    /// Whether the counts cleared the gap requirement.
    pub confident: bool,
    pub detail: String,
}

impl EstimatorReport {
    fn abstained(name: &str, detail: impl Into<String>) -> EstimatorReport {
        EstimatorReport {
            name: name.into(),
            kernel: None,
            cokernel: None,
            index: None,
            confident: false,
            detail: detail.into(),
        }
    }
}

/// Everything needed to reproduce the report.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub version: String,
    pub grid_n: usize,
    pub half_line_length: f64,
    pub tol: f64,
    pub toeplitz_n: usize,
    pub sigma_rel_tol: f64,
    pub gap_required: f64,
    pub estimators: Vec<EstimatorReport>,
    /// Pairwise index agreement among estimators that produced an index.
    pub agreement: Vec<(String, String, bool)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FredholmReport {
    pub label: String,
    pub space: String,
    pub boyd: BoydIndices,
    /// Boyd indices strictly inside (0, 1): the operator theory applies.
    pub singular_integral_safe: bool,
    pub elliptic: bool,
    /// `min |a|` over the compactified line.
    pub margin: f64,
    pub sup: f64,
    pub variation: f64,
    pub winding: Option<i32>,
    pub predicted_index: Option<i32>,
    pub numerical_kernel_dim: Option<usize>,
    pub numerical_cokernel_dim: Option<usize>,
    pub verdict: FredholmVerdict,
    /// Named scalar diagnostics from the estimators.
    pub residuals: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

/// Counts trailing near-zero singular values. `sv` must be descending.
/// Returns `(count, confident, gap)` where `gap` is the ratio separating the
/// discarded values from the kept ones.
fn count_small(sv: &[f64]) -> (usize, bool, f64) {
    let tiny = f64::MIN_POSITIVE;
    let s1 = sv[0].max(tiny);
    let cut = SIGMA_REL_TOL * s1;
    let m = sv.iter().filter(|s| **s < cut).count();
    if m == sv.len() {
        return (m, false, 0.0);
    }
    let gap = if m == 0 {
        sv[sv.len() - 1] / cut
    } else {
        sv[sv.len() - m - 1] / sv[sv.len() - m].max(tiny)
    };
    (m, gap >= GAP_REQUIRED, gap)
}

fn sigma_summary(sv: &[f64], m: usize) -> String {
    let tail = 4.max(m + 2).min(sv.len());
    let smallest: Vec<String> = sv[sv.len() - tail..]
        .iter()
        .map(|s| format!("{s:.3e}"))
        .collect();
    format!("smallest sigma: [{}]", smallest.join(", "))
}

/// Kernel count from explicit Laguerre probes; only scaled rational symbols
/// qualify. Returns `(count, confident, floor, first_nonkernel)`.
fn psi_count(n: i32, grid: GridDomain) -> (usize, bool, f64, f64) {
    if n >= 0 {
        // Right invertible: trivial kernel. Probe psi_0 to confirm the image
        // keeps its mass.
        let probe = psi_residual(n, 0, grid, OVERSAMPLE);
        return (0, probe >= GAP_REQUIRED * PSI_COUNT_TOL, 0.0, probe);
    }
    let dim = (-n) as usize;
    let mut floor: f64 = 0.0;
    for k in 0..dim {
        let r = psi_residual(n, k, grid, OVERSAMPLE);
        floor = floor.max(r);
        if r >= PSI_COUNT_TOL {
            // Claimed kernel vector failed: count what held, unconfident.
            return (k, false, floor, r);
        }
    }
    let probe = psi_residual(n, dim, grid, OVERSAMPLE);
    let confident = probe >= GAP_REQUIRED * PSI_COUNT_TOL;
    (dim, confident, floor, probe)
}

fn psi_estimator(a: &Symbol, grid: GridDomain) -> EstimatorReport {
    let name = "psi_residuals";
    let Some((n, _)) = a.as_scaled_rational() else {
        return EstimatorReport::abstained(name, "symbol is not a scaled rational power");
    };
    if n.unsigned_abs() as usize > PSI_SCAN_CAP {
        return EstimatorReport::abstained(name, "rational power out of scan range");
    }
    // Scaling by a nonzero constant changes neither kernel nor cokernel, and
    // psi_residual is scale-free, so only the power matters. The cokernel is
    // the kernel of the adjoint symbol conj(c r_n) = conj(c) r_{-n}.
    let (ker, kc, kfloor, kprobe) = psi_count(n, grid);
    let (cok, cc, cfloor, cprobe) = psi_count(-n, grid);
    EstimatorReport {
        name: name.into(),
        kernel: Some(ker),
        cokernel: Some(cok),
        index: Some(ker as i32 - cok as i32),
        confident: kc && cc,
        detail: format!(
            "kernel floor {kfloor:.3e}, probe {kprobe:.3e}; \
             cokernel floor {cfloor:.3e}, probe {cprobe:.3e}"
        ),
    }
}

/// Builds one estimator report from the singular values of a discretization
/// of `W(a)` (kernel side) and `W(conj a)` (cokernel side, adjoint lemma).
fn svd_count_pair(
    name: &str,
    ker_mat: &OperatorMatrix,
    cok_mat: &OperatorMatrix,
) -> (EstimatorReport, f64, f64) {
    let sv_k = ker_mat.singular_values();
    let (ker, kc, kgap) = count_small(&sv_k);
    let sv_c = cok_mat.singular_values();
    let (cok, cc, cgap) = count_small(&sv_c);
    let report = EstimatorReport {
        name: name.into(),
        kernel: Some(ker),
        cokernel: Some(cok),
        index: Some(ker as i32 - cok as i32),
        confident: kc && cc,
        detail: format!(
            "kernel {}; cokernel {}",
            sigma_summary(&sv_k, ker),
            sigma_summary(&sv_c, cok)
        ),
    };
    (report, kgap, cgap)
}

/// Full Fredholm analysis of `W(a)` on the given space.
///
/// Degenerate outcomes are encoded in the verdict rather than errors: a
/// symbol with a zero is reported `NotFredholm`, and failed or disagreeing
/// numerics yield `Inconclusive`.
pub fn analyze(
    a: &Symbol,
    space: &SpaceSpec,
    options: &AnalyzeOptions,
) -> Result<FredholmReport, FredholmError> {
    options.validate()?;
    space.validate()?;
    let boyd = boyd_indices(space)?;
    let safe = boyd.singular_integral_safe();

    let ext = a.extrema();
    let elliptic = ext.min > options.tol * ext.sup && ext.sup > 0.0;
    let variation = a.variation();

    let mut warnings = Vec::new();
    let mut residuals = BTreeMap::new();
    residuals.insert(
        "margin_relative".into(),
        if ext.sup > 0.0 { ext.min / ext.sup } else { 0.0 },
    );

    if !safe {
        warnings.push(format!(
            "Boyd indices [{:.4}, {:.4}] touch an endpoint of (0, 1); the Cauchy \
             singular operator is unbounded there and the Fredholm theory does not apply",
            boyd.lower, boyd.upper
        ));
    }

    let mut report = FredholmReport {
        label: a.label(),
        space: space.to_string(),
        boyd,
        singular_integral_safe: safe,
        elliptic,
        margin: ext.min,
        sup: ext.sup,
        variation,
        winding: None,
        predicted_index: None,
        numerical_kernel_dim: None,
        numerical_cokernel_dim: None,
        verdict: FredholmVerdict::Inconclusive,
        residuals,
        warnings,
        provenance: Provenance {
            version: VERSION.into(),
            grid_n: options.grid_n,
            half_line_length: options.half_line_length,
            tol: options.tol,
            toeplitz_n: options.toeplitz_n,
            sigma_rel_tol: SIGMA_REL_TOL,
            gap_required: GAP_REQUIRED,
            estimators: Vec::new(),
            agreement: Vec::new(),
        },
    };

    if !elliptic {
        // The symbol has a zero on the compactified line: not Fredholm on any
        // of the admissible spaces. Numerics on a singular operator would
        // only report discretization noise, so they are skipped.
        report.verdict = FredholmVerdict::NotFredholm;
        report
            .warnings
            .push(format!("symbol vanishes near xi = {}", ext.min_location));
        return Ok(report);
    }

    // Kernel functions of W(a) decay on the scale |a'| / min |a| near a deep
    // dip; when the dip is too deep for the truncated domain the SVD counts
    // go blind while the Toeplitz sections (which see the whole circle) still
    // work, and the verdict degrades to inconclusive.
    if ext.min < 5.0 / options.half_line_length * ext.sup {
        report.warnings.push(format!(
            "near-critical symbol: min |a| = {:.3e} is small relative to the sup; kernel \
             functions may decay too slowly for half_line_length = {}; enlarge the domain",
            ext.min, options.half_line_length
        ));
    }

    match a.winding_number() {
        Ok(w) => {
            report.winding = Some(w);
            report.predicted_index = Some(-w);
        }
        Err(e) => {
            report
                .warnings
                .push(format!("winding sweep failed: {e}; verdict inconclusive"));
            return Ok(report);
        }
    }

    if options.run_numerics {
        let grid = GridDomain::half_line(options.half_line_length, options.grid_n);

        let est_a = psi_estimator(a, grid);

        let rect_a = wiener_hopf_rect(a, grid)?;
        let rect_conj = wiener_hopf_rect(&a.conj(), grid)?;
        for w in rect_a.warnings() {
            if !report.warnings.iter().any(|x| x == w) {
                report.warnings.push(w.clone());
            }
        }
        let (est_b, rect_kgap, rect_cgap) = svd_count_pair("rect_svd", &rect_a, &rect_conj);
        report.residuals.insert("rect_kernel_gap".into(), rect_kgap);
        report
            .residuals
            .insert("rect_cokernel_gap".into(), rect_cgap);

        let toe_a = toeplitz_section_tall(a, options.toeplitz_n, 16)?;
        let toe_conj = toeplitz_section_tall(&a.conj(), options.toeplitz_n, 16)?;
        let (est_c, toe_kgap, toe_cgap) = svd_count_pair("toeplitz_sections", &toe_a, &toe_conj);
        report
            .residuals
            .insert("toeplitz_kernel_gap".into(), toe_kgap);
        report
            .residuals
            .insert("toeplitz_cokernel_gap".into(), toe_cgap);

        let estimators = vec![est_a, est_b, est_c];

        let mut agreement = Vec::new();
        for i in 0..estimators.len() {
            for j in i + 1..estimators.len() {
                if let (Some(a_i), Some(a_j)) = (estimators[i].index, estimators[j].index) {
                    agreement.push((
                        estimators[i].name.clone(),
                        estimators[j].name.clone(),
                        a_i == a_j,
                    ));
                }
            }
        }

        let predicted = report.predicted_index.expect("set above");
        let votes = estimators
            .iter()
            .filter(|e| e.confident && e.index == Some(predicted))
            .count();

        if let Some(witness) = estimators
            .iter()
            .find(|e| e.confident && e.index == Some(predicted))
        {
            report.numerical_kernel_dim = witness.kernel;
            report.numerical_cokernel_dim = witness.cokernel;
        }

        report.provenance.estimators = estimators;
        report.provenance.agreement = agreement;

        if votes >= 2 && safe {
            report.verdict = FredholmVerdict::Fredholm { index: predicted };
        } else {
            if votes < 2 {
                report.warnings.push(format!(
                    "only {votes} confident estimator(s) corroborate the predicted index \
                     {predicted}; need 2"
                ));
            }
            report.verdict = FredholmVerdict::Inconclusive;
        }
    } else {
        // Symbolic-only run: the verdict leans on the theory alone.
        report
            .warnings
            .push("numerical estimators skipped on request".into());
        report.verdict = if safe {
            FredholmVerdict::Fredholm {
                index: report.predicted_index.expect("set above"),
            }
        } else {
            FredholmVerdict::Inconclusive
        };
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(n: usize) -> AnalyzeOptions {
        AnalyzeOptions {
            grid_n: n,
            half_line_length: 40.0,
            ..AnalyzeOptions::default()
        }
    }

    #[test]
    fn rational_two_has_index_minus_two() {
        let report = analyze(
            &Symbol::Rational(2),
            &SpaceSpec::lebesgue(2.0),
            &quick(256),
        )
        .unwrap();
        assert_eq!(report.winding, Some(2));
        assert_eq!(report.predicted_index, Some(-2));
        assert_eq!(report.verdict, FredholmVerdict::Fredholm { index: -2 });
        assert_eq!(report.numerical_kernel_dim, Some(0));
        assert_eq!(report.numerical_cokernel_dim, Some(2));
    }

    #[test]
    fn constant_one_is_trivially_fredholm() {
        let report = analyze(
            &Symbol::constant(1.0, 0.0),
            &SpaceSpec::lebesgue(2.0),
            &quick(128),
        )
        .unwrap();
        assert_eq!(report.verdict, FredholmVerdict::Fredholm { index: 0 });
        assert_eq!(report.numerical_kernel_dim, Some(0));
        assert_eq!(report.numerical_cokernel_dim, Some(0));
        // psi abstains for constants; the two SVD estimators agree.
        let est = &report.provenance.estimators;
        assert_eq!(est.len(), 3);
        assert!(est[0].index.is_none());
        assert!(est[1].confident && est[2].confident);
    }

    #[test]
    fn zero_crossing_symbol_is_not_fredholm() {
        // a = r_1 + 1 vanishes at xi = 0.
        let a = Symbol::Sum(vec![Symbol::Rational(1), Symbol::constant(1.0, 0.0)]);
        let report = analyze(&a, &SpaceSpec::lebesgue(2.0), &quick(128)).unwrap();
        assert!(!report.elliptic);
        assert_eq!(report.verdict, FredholmVerdict::NotFredholm);
        assert!(report.winding.is_none());
    }

    #[test]
    fn constant_zero_is_not_fredholm() {
        let report = analyze(
            &Symbol::constant(0.0, 0.0),
            &SpaceSpec::lebesgue(2.0),
            &quick(128),
        )
        .unwrap();
        assert_eq!(report.verdict, FredholmVerdict::NotFredholm);
    }

    #[test]
    fn endpoint_space_is_inconclusive() {
        // L^1 has upper Boyd index 1: theory does not apply.
        let report = analyze(
            &Symbol::Rational(1),
            &SpaceSpec::lebesgue(1.0),
            &quick(128),
        )
        .unwrap();
        assert!(!report.singular_integral_safe);
        assert_eq!(report.verdict, FredholmVerdict::Inconclusive);
    }

    #[test]
    fn scaling_leaves_verdict_unchanged() {
        let a = Symbol::Rational(-1);
        let c = Symbol::scaled(a.clone(), crate::Complex64::new(0.0, 3.0));
        let space = SpaceSpec::lebesgue(2.0);
        let ra = analyze(&a, &space, &quick(256)).unwrap();
        let rc = analyze(&c, &space, &quick(256)).unwrap();
        assert_eq!(ra.verdict, rc.verdict);
        assert_eq!(ra.numerical_kernel_dim, rc.numerical_kernel_dim);
        assert_eq!(ra.verdict, FredholmVerdict::Fredholm { index: 1 });
    }

    #[test]
    fn symbolic_only_run_skips_estimators() {
        let opts = AnalyzeOptions {
            run_numerics: false,
            ..AnalyzeOptions::default()
        };
        let report = analyze(&Symbol::Rational(3), &SpaceSpec::lebesgue(2.0), &opts).unwrap();
        assert_eq!(report.verdict, FredholmVerdict::Fredholm { index: -3 });
        assert!(report.provenance.estimators.is_empty());
        assert!(report.numerical_kernel_dim.is_none());
    }
}
