//! Job specification and execution.
//!
//! Every subcommand normalizes to a [`JobSpec`]; a batch file is a JSON array
//! of them. Each report document embeds the job that produced it, so a report
//! is reproducible by feeding its `job` object back through `whlab batch`.
//! Serialization is deterministic: struct fields keep declaration order, maps
//! are sorted, and nothing in a report depends on time or environment, so two
//! runs of the same job write byte-identical documents.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use whlab::fredholm::{
    analyze, homotopy_verify, laguerre_function, perturbation_experiment, verify_identities,
    AnalyzeOptions, FredholmReport, FredholmVerdict, HomotopyVerification, IdentityBattery,
    PerturbationReport,
};
use whlab::grid::GridDomain;
use whlab::operator::wiener_hopf;
use whlab::spaces::{space_norm, GridFunction, SpaceSpec};
use whlab::symbol::{Symbol, SymbolSchema};
use whlab::{Complex64, VERSION};

/// Exit status for a job whose verdict was computed (including a definite
/// negative like `not_fredholm`).
pub const EXIT_OK: u8 = 0;
/// Exit status for malformed input: schema violations, missing fields,
/// parameters the library rejects.
pub const EXIT_INPUT: u8 = 1;
/// Exit status for a job that ran but could not reach a confident verdict:
/// an inconclusive analysis, a failed identity battery, an uncertified
/// homotopy.
pub const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Analyze,
    Norm,
    VerifyIdentities,
    Homotopy,
    Perturb,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Action::Analyze => "analyze",
            Action::Norm => "norm",
            Action::VerifyIdentities => "verify-identities",
            Action::Homotopy => "homotopy",
            Action::Perturb => "perturb",
        };
        f.write_str(name)
    }
}

/// Test functions for `norm` jobs, built on the job's half-line grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSchema {
    /// Indicator of `[lo, hi)`, boundary cells weighted by overlap.
    Indicator { lo: f64, hi: f64 },
    /// `scale * exp(-rate x)` with `scale` given as `[re, im]`.
    ExpDecay {
        rate: f64,
        #[serde(default = "unit_scale")]
        scale: [f64; 2],
    },
    /// The Laguerre kernel function `psi_k`.
    Laguerre { k: usize },
    /// Raw cell values as `[re, im]` pairs; length must equal `grid_n`.
    Samples { values: Vec<[f64; 2]> },
}

fn unit_scale() -> [f64; 2] {
    [1.0, 0.0]
}

/// Largest Laguerre index a norm job will evaluate.
const LAGUERRE_CAP: usize = 64;

impl FunctionSchema {
    fn build(&self, grid: GridDomain) -> Result<GridFunction> {
        match self {
            FunctionSchema::Indicator { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
                    bail!("indicator wants finite lo < hi, got [{lo}, {hi})");
                }
                Ok(GridFunction::indicator(grid, *lo, *hi))
            }
            FunctionSchema::ExpDecay { rate, scale } => {
                if !(*rate > 0.0) || !rate.is_finite() {
                    bail!("exp_decay wants a positive finite rate, got {rate}");
                }
                let c = Complex64::new(scale[0], scale[1]);
                Ok(GridFunction::from_fn(grid, |x| c * (-rate * x).exp()))
            }
            FunctionSchema::Laguerre { k } => {
                if *k > LAGUERRE_CAP {
                    bail!("laguerre index {k} out of range, cap is {LAGUERRE_CAP}");
                }
                Ok(laguerre_function(*k, grid))
            }
            FunctionSchema::Samples { values } => {
                if values.len() != grid.n() {
                    bail!(
                        "samples carry {} values but the grid has {} cells; \
                         set grid_n to match",
                        values.len(),
                        grid.n()
                    );
                }
                let vals = values.iter().map(|v| Complex64::new(v[0], v[1])).collect();
                GridFunction::from_values(grid, vals).map_err(|e| anyhow!("samples: {e}"))
            }
        }
    }
}

fn default_grid_n() -> usize {
    1024
}

fn default_length() -> f64 {
    40.0
}

fn default_tol() -> f64 {
    1e-9
}

fn default_steps() -> usize {
    21
}

fn default_epsilon() -> f64 {
    0.1
}

/// One unit of work. Optional fields apply only to the actions that read
/// them; `out` and `plot` steer artifacts and are not echoed into reports,
/// so reports stay byte-identical regardless of where they are written.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub struct JobSpec {
    pub action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSchema>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSchema>,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    #[serde(default = "default_length")]
    pub half_line_length: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Homotopy sample count.
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Perturbation size.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Perturbation direction `[re, im]`; omitted means the experiment
    /// picks its own transversal direction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 2]>,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub plot: bool,
}

impl JobSpec {
    pub fn new(action: Action) -> JobSpec {
        JobSpec {
            action,
            symbol: None,
            space: None,
            function: None,
            grid_n: default_grid_n(),
            half_line_length: default_length(),
            tol: default_tol(),
            steps: default_steps(),
            epsilon: default_epsilon(),
            direction: None,
            out: None,
            plot: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_n < 2 {
            bail!("grid_n = {} is degenerate, want >= 2", self.grid_n);
        }
        if !(self.half_line_length > 0.0) || !self.half_line_length.is_finite() {
            bail!(
                "half_line_length = {} must be positive and finite",
                self.half_line_length
            );
        }
        if !(self.tol > 0.0) || !(self.tol < 1.0) {
            bail!("tol = {} out of range (0, 1)", self.tol);
        }
        if self.plot && self.out.is_none() {
            bail!("--plot writes CSV files next to the report; it needs --out");
        }
        let needs_symbol = matches!(
            self.action,
            Action::Analyze | Action::Homotopy | Action::Perturb
        );
        if needs_symbol && self.symbol.is_none() {
            bail!("{} needs a symbol", self.action);
        }
        if self.action == Action::Norm && self.function.is_none() {
            bail!("norm needs a function");
        }
        Ok(())
    }

    fn build_symbol(&self) -> Result<Symbol> {
        let schema = self.symbol.as_ref().expect("validated");
        schema.build().map_err(|e| anyhow!("symbol: {e}"))
    }

    fn space(&self) -> Result<SpaceSpec> {
        let spec = self.space.clone().unwrap_or_else(|| SpaceSpec::lebesgue(2.0));
        spec.validate().map_err(|e| anyhow!("space: {e}"))?;
        Ok(spec)
    }

    fn analyze_options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            grid_n: self.grid_n,
            half_line_length: self.half_line_length,
            tol: self.tol,
            ..AnalyzeOptions::default()
        }
    }
}

/// Result of one executed job: the process exit status it argues for and a
/// one-line human summary.
pub struct Outcome {
    pub code: u8,
    pub summary: String,
}

#[derive(Serialize)]
struct AnalyzeDoc<'a> {
    version: &'a str,
    job: &'a JobSpec,
    report: &'a FredholmReport,
}

#[derive(Serialize)]
struct NormDoc<'a> {
    version: &'a str,
    job: &'a JobSpec,
    /// Display form of the space, e.g. `L^(2,2)`.
    space: String,
    norm: f64,
}

#[derive(Serialize)]
struct BatteryDoc<'a> {
    version: &'a str,
    job: &'a JobSpec,
    battery: &'a IdentityBattery,
}

#[derive(Serialize)]
struct HomotopyDoc<'a> {
    version: &'a str,
    job: &'a JobSpec,
    verification: &'a HomotopyVerification,
}

#[derive(Serialize)]
struct PerturbDoc<'a> {
    version: &'a str,
    job: &'a JobSpec,
    report: &'a PerturbationReport,
}

/// Runs one job to completion. `Ok` carries the exit status the verdict
/// argues for; `Err` means the input itself was unusable (exit 1).
pub fn run_job(job: &JobSpec) -> Result<Outcome> {
    job.validate()?;
    match job.action {
        Action::Analyze => run_analyze(job),
        Action::Norm => run_norm(job),
        Action::VerifyIdentities => run_battery(job),
        Action::Homotopy => run_homotopy(job),
        Action::Perturb => run_perturb(job),
    }
}

fn run_analyze(job: &JobSpec) -> Result<Outcome> {
    let sym = job.build_symbol()?;
    let space = job.space()?;
    let report = analyze(&sym, &space, &job.analyze_options())
        .map_err(|e| anyhow!("analyze: {e}"))?;
    emit(job, &AnalyzeDoc {
        version: VERSION,
        job,
        report: &report,
    })?;
    if job.plot {
        let out = job.out.as_ref().expect("validated");
        write_curve_csv(&artifact_path(out, "curve"), &sym)?;
        write_singular_csv(&artifact_path(out, "singular"), &sym, job)?;
    }
    let (code, verdict) = match report.verdict {
        FredholmVerdict::Fredholm { index } => (EXIT_OK, format!("fredholm, index {index}")),
        FredholmVerdict::NotFredholm => (EXIT_OK, "not fredholm".into()),
        FredholmVerdict::Inconclusive => (EXIT_INCONCLUSIVE, "inconclusive".into()),
    };
    Ok(Outcome {
        code,
        summary: format!("{} on {}: {}", report.label, report.space, verdict),
    })
}

fn run_norm(job: &JobSpec) -> Result<Outcome> {
    let space = job.space()?;
    let schema = job.function.as_ref().expect("validated");
    let grid = GridDomain::half_line(job.half_line_length, job.grid_n);
    let f = schema.build(grid)?;
    let norm = space_norm(&f, &space).map_err(|e| anyhow!("norm: {e}"))?;
    emit(job, &NormDoc {
        version: VERSION,
        job,
        space: space.to_string(),
        norm,
    })?;
    Ok(Outcome {
        code: EXIT_OK,
        summary: format!("norm = {norm:.12} in {space}"),
    })
}

fn run_battery(job: &JobSpec) -> Result<Outcome> {
    let battery = verify_identities(job.grid_n, job.half_line_length)
        .map_err(|e| anyhow!("verify-identities: {e}"))?;
    emit(job, &BatteryDoc {
        version: VERSION,
        job,
        battery: &battery,
    })?;
    let passed = battery.checks.iter().filter(|c| c.passed).count();
    let code = if battery.all_passed {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome {
        code,
        summary: format!(
            "{passed}/{} identities hold at n = {}, L = {}",
            battery.checks.len(),
            battery.grid_n,
            battery.half_line_length
        ),
    })
}

fn run_homotopy(job: &JobSpec) -> Result<Outcome> {
    let sym = job.build_symbol()?;
    let verification =
        homotopy_verify(&sym, job.steps).map_err(|e| anyhow!("homotopy: {e}"))?;
    emit(job, &HomotopyDoc {
        version: VERSION,
        job,
        verification: &verification,
    })?;
    if job.plot {
        let out = job.out.as_ref().expect("validated");
        write_curve_csv(&artifact_path(out, "curve"), &sym)?;
        write_trace_csv(&artifact_path(out, "trace"), &verification)?;
    }
    let code = if verification.passed {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome {
        code,
        summary: format!(
            "homotopy to r_{} over {} steps: {}, min margin {:.3e}",
            verification.kappa,
            verification.steps,
            if verification.passed { "certified" } else { "not certified" },
            verification.min_margin
        ),
    })
}

fn run_perturb(job: &JobSpec) -> Result<Outcome> {
    let sym = job.build_symbol()?;
    let space = job.space()?;
    let v = job.direction.map(|d| Complex64::new(d[0], d[1]));
    let report = perturbation_experiment(&sym, v, job.epsilon, &space, &job.analyze_options())
        .map_err(|e| anyhow!("perturb: {e}"))?;
    emit(job, &PerturbDoc {
        version: VERSION,
        job,
        report: &report,
    })?;
    if job.plot {
        let out = job.out.as_ref().expect("validated");
        write_curve_csv(&artifact_path(out, "curve"), &sym)?;
    }
    let conclusive = |r: &FredholmReport| !matches!(r.verdict, FredholmVerdict::Inconclusive);
    let code = if conclusive(&report.plus) && conclusive(&report.minus) {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome {
        code,
        summary: format!(
            "winding jump {} across the zero, norm gap {:.6} (predicted {:.6})",
            report.winding_jump, report.norm_gap, report.predicted_gap
        ),
    })
}

/// Writes the report to `job.out`, or to stdout when no path was given.
fn emit<T: Serialize>(job: &JobSpec, doc: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc).context("serializing report")?;
    text.push('\n');
    match &job.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing report to {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `report.json` plus suffix `curve` gives `report.curve.csv`.
fn artifact_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.with_extension("");
    PathBuf::from(format!("{}.{suffix}.csv", stem.display()))
}

/// Number of sweep intervals in a curve CSV.
const CURVE_SAMPLES: usize = 512;

/// Samples the symbol over the compactified line. Columns: sweep angle
/// `theta` in `[-pi, pi]` (endpoints are the point at infinity), the point
/// `xi = tan(theta/2)`, and the value `re, im`. Plotting `im` against `re`
/// draws the closed curve whose winding number the analysis uses.
fn write_curve_csv(path: &Path, a: &Symbol) -> Result<()> {
    use std::f64::consts::{PI, TAU};
    let mut text = String::from("theta,xi,re,im\n");
    for j in 0..=CURVE_SAMPLES {
        let theta = -PI + TAU * j as f64 / CURVE_SAMPLES as f64;
        let xi = if j == 0 {
            f64::NEG_INFINITY
        } else if j == CURVE_SAMPLES {
            f64::INFINITY
        } else {
            (theta / 2.0).tan()
        };
        let v = a.at_angle(theta);
        text.push_str(&format!("{theta},{xi},{},{}\n", v.re, v.im));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Singular values of the square finite section of `W(a)` on the job grid,
/// descending. Columns: 1-based `index`, value `sigma`. The tail exposes the
/// near-null directions the rank diagnostics count.
fn write_singular_csv(path: &Path, a: &Symbol, job: &JobSpec) -> Result<()> {
    let grid = GridDomain::half_line(job.half_line_length, job.grid_n);
    let section = wiener_hopf(a, grid).map_err(|e| anyhow!("singular profile: {e}"))?;
    let mut text = String::from("index,sigma\n");
    for (i, s) in section.singular_values().iter().enumerate() {
        text.push_str(&format!("{},{s}\n", i + 1));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// One row per homotopy step. Columns mirror the trace: parameter `t`,
/// ellipticity margin, sup norm, winding number, distances to the two
/// endpoints, and the variation of the power factor against its bound.
fn write_trace_csv(path: &Path, v: &HomotopyVerification) -> Result<()> {
    let mut text = String::from(
        "t,margin,sup,winding,distance_to_start,distance_to_end,\
         power_variation,variation_bound\n",
    );
    for s in &v.trace.steps {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.t,
            s.margin,
            s.sup,
            s.winding,
            s.distance_to_start,
            s.distance_to_end,
            s.power_variation,
            s.variation_bound
        ));
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn severity(code: u8) -> u8 {
    match code {
        EXIT_INPUT => 3,
        EXIT_INCONCLUSIVE => 2,
        _ => 0,
    }
}

/// Runs every job in a batch file in order, printing one status line per job
/// to stderr. Reports land wherever each job's `out` points (stdout when
/// omitted), so jobs stay isolated. The process exit status is the most
/// severe job status: input error beats inconclusive beats ok.
pub fn run_batch(path: &Path) -> Result<u8> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading batch file {}", path.display()))?;
    let jobs: Vec<JobSpec> = serde_json::from_str(&text)
        .with_context(|| format!("batch file {}", path.display()))?;
    if jobs.is_empty() {
        bail!("batch file {} holds no jobs", path.display());
    }
    let mut worst = EXIT_OK;
    for (i, job) in jobs.iter().enumerate() {
        let code = match run_job(job) {
            Ok(outcome) => {
                eprintln!(
                    "job {i} ({}): exit {} - {}",
                    job.action, outcome.code, outcome.summary
                );
                outcome.code
            }
            Err(e) => {
                eprintln!("job {i} ({}): error: {e:#}", job.action);
                EXIT_INPUT
            }
        };
        if severity(code) > severity(worst) {
            worst = code;
        }
    }
    Ok(worst)
}
