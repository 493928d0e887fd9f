//! Batch runner for projlab: configs, named checks, builtin scenarios and
//! report files.

pub mod checks;
pub mod config;
pub mod report;
pub mod scenarios;

use std::path::{Path, PathBuf};
use std::time::Instant;

use projlab::Verdict;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub use checks::CheckResult;
pub use config::{CheckSpec, GeneratorSpec, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub results: Vec<CheckResult>,
    pub runtimes_ms: Vec<f64>,
    pub output: PathBuf,
}

impl RunOutcome {
    pub fn failed(&self) -> bool {
        self.results.iter().any(|r| r.verdict.is_failure())
    }

    /// 0 when nothing failed (vacuous and not-applicable checks count as
    /// passing), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn verdict(&self) -> Verdict {
        self.results.iter().fold(Verdict::NotApplicable, |v, r| v.and(r.verdict))
    }
}

/// Validate `config`, run all its checks and write the reports into
/// `config.output`.
pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let generators = config.build_generators()?;
    config.validate_expressions()?;
    let planned = checks::plan_all(config)?;
    let ctx = checks::Context { space: config.space, generators: &generators, expressions: &config.expressions };
    let timed_run = |check: &checks::PlannedCheck| {
        let start = Instant::now();
        let r = checks::execute(check, &ctx);
        (r, start.elapsed().as_secs_f64() * 1e3)
    };
    #[cfg(feature = "parallel")]
    let timed: Vec<(CheckResult, f64)> = planned.par_iter().map(timed_run).collect();
    #[cfg(not(feature = "parallel"))]
    let timed: Vec<(CheckResult, f64)> = planned.iter().map(timed_run).collect();
    let (results, runtimes_ms): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    report::emit_report(&config.output, &results, &runtimes_ms)?;
    Ok(RunOutcome { results, runtimes_ms, output: config.output.clone() })
}

/// Read a config file and run it.
pub fn run_file(path: &Path) -> Result<RunOutcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    run(&RunConfig::from_json(&text)?)
}
