//! Batch front end: `causalab <command> --config <file.json> [--out DIR]
//! [--jobs N] [--plot KIND]`.
//!
//! Each run writes `<command>.csv`, `summary.json` and, with `--plot`,
//! `<command>.svg` into the output directory. CSV files carry `#` metadata
//! lines (version, command, config hash, seed, parameter echo) and contain
//! nothing time dependent, so a fixed config and seed give byte-identical
//! files. Wall time goes to the JSON summary only.
//!
//! Exit codes: 0 success, 2 configuration or input validation, 3 numerical
//! non-convergence, 4 property assertion failure.

mod commands;
mod config;
mod plot;
mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

pub use commands::{columns, keys, summary};
pub use config::{config_reference, Command, Key, Kind, Params, RunConfig};
pub use plot::{fitted_slope, plot, PlotError, PlotKind, PlotRequest};
pub use table::{Cell, ResultTable};

use crate::Error;

/// Failure class, mapped one-to-one onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Validation,
    NonConvergence,
    Assertion,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::Validation => 2,
            ExitKind::NonConvergence => 3,
            ExitKind::Assertion => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Validation,
            message: message.into(),
        }
    }

    pub fn non_convergence(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::NonConvergence,
            message: message.into(),
        }
    }

    pub fn assertion(message: impl Into<String>) -> Self {
        CliError {
            kind: ExitKind::Assertion,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.code()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::NonConvergence { .. }
            | Error::IterationFailed(_)
            | Error::MissedRoot { .. }
            | Error::TruncatedBasis { .. }
            | Error::ResolutionInsufficient { .. } => ExitKind::NonConvergence,
            Error::Assertion(_) | Error::BoundaryViolation { .. } | Error::SpanViolation(_) => ExitKind::Assertion,
            Error::InvalidArgument(_)
            | Error::DimensionMismatch(_)
            | Error::GridTooCoarse { .. }
            | Error::GridMismatch
            | Error::OutOfDomain(_)
            | Error::SupportTooWide(_)
            | Error::EmptyRegion
            | Error::UnsafeState { .. }
            | Error::AmplitudeTooLarge { .. } => ExitKind::Validation,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<PlotError> for CliError {
    fn from(e: PlotError) -> Self {
        CliError::config(e.to_string())
    }
}

/// What a command computed, before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ResultTable,
    /// Scalar results for the JSON summary.
    pub values: Map<String, Value>,
    pub verdict: Option<String>,
    /// A check that failed after the results were computed; outputs are
    /// still written and the run exits with the error's code.
    pub failure: Option<CliError>,
}

impl Outcome {
    pub(crate) fn new(table: ResultTable) -> Self {
        Outcome {
            table,
            values: Map::new(),
            verdict: None,
            failure: None,
        }
    }

    pub(crate) fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    pub(crate) fn fail_if(&mut self, failed: bool, message: impl FnOnce() -> String) {
        if failed {
            self.fail_with(CliError::assertion(message()));
        }
    }

    pub(crate) fn fail_with(&mut self, error: CliError) {
        if self.failure.is_none() {
            self.failure = Some(error);
        }
    }
}

/// Compute a command in the current thread pool. No files are touched.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = commands::dispatch(config)?;
    let table = &mut outcome.table;
    table.annotate("causalab", env!("CARGO_PKG_VERSION"));
    table.annotate("command", config.command.name());
    table.annotate("config_hash", config.hash());
    table.annotate("seed", config.seed.to_string());
    for (k, v) in config.parameters.iter() {
        table.annotate(&format!("param {k}"), v.to_string());
    }
    Ok(outcome)
}

/// Files written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub svg: Option<PathBuf>,
    /// Set when a property check failed after the outputs were written.
    pub failure: Option<CliError>,
}

/// Options that do not affect results.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub plot: Option<PlotKind>,
}

/// Run a command with a worker pool of `options.jobs` threads and write its
/// outputs.
pub fn run(config: &RunConfig, options: &RunOptions) -> Result<RunReport, CliError> {
    let out = options
        .out
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.jobs {
        if n == 0 {
            return Err(CliError::config("--jobs must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))?;
    let started = Instant::now();
    let outcome = pool.install(|| execute(config))?;
    let elapsed = started.elapsed().as_secs_f64();

    let request = match options.plot {
        Some(kind) => Some(commands::plot_request(config.command, kind)?),
        None => None,
    };
    let svg_text = match &request {
        Some(r) => Some(plot(&outcome.table, r)?),
        None => None,
    };

    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::config(format!("cannot create output directory {}: {e}", out.display())))?;
    let name = config.command.name();
    let csv = out.join(format!("{name}.csv"));
    write(&csv, &outcome.table.to_csv())?;
    let svg = match svg_text {
        Some(text) => {
            let path = out.join(format!("{name}.svg"));
            write(&path, &text)?;
            Some(path)
        }
        None => None,
    };
    let summary_path = out.join("summary.json");
    let summary = json!({
        "command": name,
        "config_hash": config.hash(),
        "seed": config.seed,
        "verdict": outcome.verdict,
        "values": Value::Object(outcome.values.clone()),
        "failure": outcome.failure.as_ref().map(|e| e.message.clone()),
        "rows": outcome.table.len(),
        "timings": { "elapsed_seconds": elapsed },
    });
    write(
        &summary_path,
        &(serde_json::to_string_pretty(&summary).expect("serializable") + "\n"),
    )?;
    Ok(RunReport {
        csv,
        summary: summary_path,
        svg,
        failure: outcome.failure,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

/// Read a config file for `command`.
pub fn load_config(command: Command, path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    RunConfig::from_json(command, &text)
}
