//! CSV reports and the run metadata sidecar.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{CliError, Outcome, RunConfig, EXPECTED_RED};

/// Outcomes of a run and where their reports went.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub dir: PathBuf,
    pub outcomes: Vec<Outcome>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

/// File name of a criterion's CSV.
pub fn csv_name(o: &Outcome) -> String {
    format!("criterion_{:02}_{}.csv", o.id, slug(o.name))
}

#[derive(Serialize)]
struct Timing {
    id: u8,
    elapsed_s: f64,
}

#[derive(Serialize)]
struct Metadata<'a> {
    version: &'static str,
    config: &'a RunConfig,
    threads: usize,
    timings: Vec<Timing>,
}

/// Writes one CSV per criterion, `summary.csv` and `metadata.json`.
///
/// CSVs carry no timings, so reruns with the same seed are byte-identical.
pub fn write_reports(dir: &Path, cfg: &RunConfig, outcomes: Vec<Outcome>) -> Result<VerifyReport, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut summary = csv::Writer::from_path(dir.join("summary.csv"))?;
    summary.write_record(["criterion", "name", "pass", "expected_red", "summary"])?;
    for o in &outcomes {
        std::fs::write(dir.join(csv_name(o)), o.csv()?)?;
        summary.write_record([
            o.id.to_string(),
            o.name.to_string(),
            o.pass.to_string(),
            EXPECTED_RED.contains(&o.id).to_string(),
            o.summary.clone(),
        ])?;
    }
    summary.flush()?;
    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        threads: rayon::current_num_threads(),
        timings: outcomes.iter().map(|o| Timing { id: o.id, elapsed_s: o.elapsed_s }).collect(),
    };
    std::fs::write(dir.join("metadata.json"), serde_json::to_string_pretty(&meta)?)?;
    Ok(VerifyReport {
        dir: dir.to_path_buf(),
        outcomes,
    })
}
