//! Command-line layer: run configuration, acceptance criteria and reports.

mod config;
mod criteria;
mod report;
mod commands;

pub use config::{RunConfig, Sizes, Suite};
pub use criteria::{affine_fit, instance_rng, name, random_quad, random_quad_in, run_criterion, Outcome, EXPECTED_RED};
pub use report::{write_reports, VerifyReport};
pub use commands::{main_with, resolve_config, run, Cli, Command, GlobalArgs};

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::elephant::ElephantError;
use crate::fuchsian::FuchsianError;
use crate::hypdisk::GeomError;
use crate::lamination::LaminationError;
use crate::pullback::PullbackError;
use crate::widths::WidthError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or out-of-range user input.
    #[error("input error: {0}")]
    Input(String),
    /// A computation or I/O step failed.
    #[error("internal error: {0}")]
    Internal(String),
    /// The run completed but a check failed.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Check(_) => 2,
            CliError::Input(_) => 3,
        }
    }
}

macro_rules! internal_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Internal(e.to_string())
            }
        })*
    };
}

internal_from!(
    WidthError,
    LaminationError,
    FuchsianError,
    ElephantError,
    PullbackError,
    GeomError,
    std::io::Error,
    csv::Error,
    serde_json::Error
);

/// Runs `ids` on a pool of `cfg.jobs` threads, in order.
pub fn run_criteria(ids: &[u8], cfg: &RunConfig) -> Result<Vec<Outcome>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| ids.iter().map(|&id| run_criterion(id, cfg)).collect())
}

/// Runs the configured suite and writes its reports under `cfg.out`.
pub fn verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    let outcomes = run_criteria(&cfg.suite.criteria(), cfg)?;
    write_reports(&cfg.out, cfg, outcomes)
}

fn scratch_dir(tag: &str) -> PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("apriori-{tag}-{}-{n}", std::process::id()))
}

fn csv_files(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir)? {
        let path = e?.path();
        if path.extension().is_some_and(|x| x == "csv") {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            files.push((name, std::fs::read(&path)?));
        }
    }
    files.sort();
    Ok(files)
}

/// Runs criteria 1 to 13 at smoke sizes twice and compares the CSV bytes.
fn determinism(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ids: Vec<u8> = (1..=13).collect();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = scratch_dir("determinism");
        let inner = RunConfig {
            out: dir.clone(),
            sizes: Sizes::smoke(),
            ..cfg.clone()
        };
        let outcomes = run_criteria(&ids, &inner)?;
        write_reports(&dir, &inner, outcomes)?;
        runs.push(csv_files(&dir)?);
        std::fs::remove_dir_all(&dir)?;
    }
    let mut rows = Vec::new();
    let mut differing = 0;
    for (a, b) in runs[0].iter().zip(&runs[1]) {
        let same = a == b;
        differing += (!same) as usize;
        rows.push(vec![cfg.seed.to_string(), a.0.clone(), a.1.len().to_string(), same.to_string()]);
    }
    let same_set = runs[0].len() == runs[1].len();
    Ok(Outcome {
        id: 14,
        name: name(14),
        pass: same_set && differing == 0,
        summary: format!("{} CSV files from two smoke runs, {differing} differ", rows.len()),
        header: vec!["seed", "file", "bytes", "identical"],
        rows,
        elapsed_s: 0.0,
    })
}
