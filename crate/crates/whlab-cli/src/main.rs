//! `whlab`: Fredholm analysis of Wiener-Hopf operators with continuous
//! symbols on Banach function spaces, from the command line.
//!
//! Exit status: 0 when a verdict was computed (including a definite
//! `not_fredholm`), 2 when the run finished but stayed inconclusive (an
//! analysis without enough estimator agreement, a failed identity battery, an
//! uncertified homotopy), 1 for unusable input with a diagnostic on stderr.

mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use whlab::spaces::SpaceSpec;
use whlab::symbol::SymbolSchema;

use job::{run_batch, run_job, Action, FunctionSchema, JobSpec};

#[derive(Parser)]
#[command(
    name = "whlab",
    version,
    about = "Wiener-Hopf operator laboratory",
    long_about = "Analyzes Wiener-Hopf operators W(a) on the half line: ellipticity and \
                  winding of the symbol, numerical kernel and cokernel evidence, norms in \
                  Lorentz, Orlicz and variable Lebesgue spaces, operator identity checks, \
                  homotopy certificates and perturbation experiments.\n\n\
                  Symbols, spaces and functions are JSON: pass a file path or the literal \
                  object inline. Reports are deterministic JSON documents; pass --plot with \
                  --out to also write CSV plot data next to the report."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Half-line cells for discretizations
    #[arg(long, default_value_t = 1024)]
    grid_n: usize,
    /// Half-line truncation length L
    #[arg(long, default_value_t = 40.0)]
    half_line_length: f64,
    /// Relative ellipticity cutoff: min |a| <= tol * sup |a| reads as a zero
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fredholm analysis of W(a): verdict, index, kernel and cokernel evidence
    Analyze {
        /// Symbol schema, inline JSON or a file path
        #[arg(long)]
        symbol: String,
        /// Space schema, inline JSON or a file path; defaults to L^2
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        common: Common,
        /// Also write <out>.curve.csv and <out>.singular.csv
        #[arg(long)]
        plot: bool,
    },
    /// Norm of a test function in a Banach function space
    Norm {
        /// Function schema, inline JSON or a file path
        #[arg(long)]
        function: String,
        /// Space schema, inline JSON or a file path; defaults to L^2
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the operator identity battery on a half-line grid
    VerifyIdentities {
        #[command(flatten)]
        common: Common,
    },
    /// Certify the canonical homotopy from the symbol to its rational normal form
    Homotopy {
        /// Symbol schema, inline JSON or a file path
        #[arg(long)]
        symbol: String,
        /// Uniform parameter samples along the path
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[command(flatten)]
        common: Common,
        /// Also write <out>.curve.csv and <out>.trace.csv
        #[arg(long)]
        plot: bool,
    },
    /// Split a symbol zero transversally and compare the two sides
    Perturb {
        /// Symbol schema, inline JSON or a file path
        #[arg(long)]
        symbol: String,
        /// Space schema, inline JSON or a file path; defaults to L^2
        #[arg(long)]
        space: Option<String>,
        /// Perturbation size
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Perturbation direction as re,im; omitted picks one transversally
        #[arg(long)]
        direction: Option<String>,
        #[command(flatten)]
        common: Common,
        /// Also write <out>.curve.csv
        #[arg(long)]
        plot: bool,
    },
    /// Run a JSON array of jobs, one report per job
    Batch {
        /// Batch file holding a JSON array of job objects
        file: PathBuf,
    },
}

/// Inline JSON (starts with `{`) is used as is; anything else is a file path.
fn read_schema_arg(arg: &str, what: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {what} file {arg}"))
    }
}

fn parse_symbol(arg: &str) -> Result<SymbolSchema> {
    let text = read_schema_arg(arg, "symbol")?;
    serde_json::from_str(&text).with_context(|| "symbol schema")
}

fn parse_space(arg: &str) -> Result<SpaceSpec> {
    let text = read_schema_arg(arg, "space")?;
    SpaceSpec::from_json(&text).map_err(|e| anyhow!("{e}"))
}

fn parse_function(arg: &str) -> Result<FunctionSchema> {
    let text = read_schema_arg(arg, "function")?;
    serde_json::from_str(&text).with_context(|| "function schema")
}

/// `re,im` or a bare real part.
fn parse_direction(arg: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = arg.split(',').collect();
    let err = || anyhow!("direction wants re,im or a single real number, got {arg:?}");
    match parts.as_slice() {
        [re] => Ok([re.trim().parse().map_err(|_| err())?, 0.0]),
        [re, im] => Ok([
            re.trim().parse().map_err(|_| err())?,
            im.trim().parse().map_err(|_| err())?,
        ]),
        _ => Err(err()),
    }
}

fn apply_common(job: &mut JobSpec, common: Common) {
    job.grid_n = common.grid_n;
    job.half_line_length = common.half_line_length;
    job.tol = common.tol;
    job.out = common.out;
}

fn build_job(command: Command) -> Result<Option<JobSpec>> {
    let job = match command {
        Command::Analyze {
            symbol,
            space,
            common,
            plot,
        } => {
            let mut job = JobSpec::new(Action::Analyze);
            job.symbol = Some(parse_symbol(&symbol)?);
            job.space = space.as_deref().map(parse_space).transpose()?;
            apply_common(&mut job, common);
            job.plot = plot;
            job
        }
        Command::Norm {
            function,
            space,
            common,
        } => {
            let mut job = JobSpec::new(Action::Norm);
            job.function = Some(parse_function(&function)?);
            job.space = space.as_deref().map(parse_space).transpose()?;
            apply_common(&mut job, common);
            job
        }
        Command::VerifyIdentities { common } => {
            let mut job = JobSpec::new(Action::VerifyIdentities);
            apply_common(&mut job, common);
            job
        }
        Command::Homotopy {
            symbol,
            steps,
            common,
            plot,
        } => {
            let mut job = JobSpec::new(Action::Homotopy);
            job.symbol = Some(parse_symbol(&symbol)?);
            job.steps = steps;
            apply_common(&mut job, common);
            job.plot = plot;
            job
        }
        Command::Perturb {
            symbol,
            space,
            epsilon,
            direction,
            common,
            plot,
        } => {
            let mut job = JobSpec::new(Action::Perturb);
            job.symbol = Some(parse_symbol(&symbol)?);
            job.space = space.as_deref().map(parse_space).transpose()?;
            job.epsilon = epsilon;
            job.direction = direction.as_deref().map(parse_direction).transpose()?;
            apply_common(&mut job, common);
            job.plot = plot;
            job
        }
        Command::Batch { .. } => return Ok(None),
    };
    Ok(Some(job))
}

fn run(cli: Cli) -> Result<u8> {
    if let Command::Batch { file } = &cli.command {
        return run_batch(file);
    }
    let job = build_job(cli.command)?.expect("non-batch command");
    let outcome = run_job(&job)?;
    eprintln!("{}", outcome.summary);
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(job::EXIT_INPUT)
        }
    }
}
