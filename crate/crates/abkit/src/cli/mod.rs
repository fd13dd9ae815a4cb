//! Command-line front end: configuration, subcommand dispatch, report and
//! manifest files.
//!
//! A run writes into its output directory:
//! `report.csv`, `report.json`, `report.dat` + `report.gp` (gnuplot stub),
//! `checkpoint.bin` for the evolution commands, and `manifest.json` with the
//! config text and its SHA-256, versions, wall time, exit code and headline
//! figures. Reports carry no timing, so reruns are byte-identical.

pub mod commands;
pub mod config;
pub mod emit;

pub use commands::{execute, Outcome};
pub use config::{Command, RunConfig, ScanRanges, TolProfile, Tolerances};
pub use emit::{emit_report, report_csv, report_from_json, report_json, report_plotdata, Format};

use crate::error::{Error, Result};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::Instant;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

pub fn config_hash(cfg: &RunConfig) -> String {
    Sha256::digest(cfg.emit().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Result of `run`: the exit code and the error (if any) behind it.
pub struct RunStatus {
    pub code: i32,
    pub error: Option<Error>,
    pub outcome: Option<Outcome>,
}

fn write_manifest(cfg: &RunConfig, status: &RunStatus, wall: f64) -> Result<()> {
    let summary: serde_json::Map<String, serde_json::Value> = status
        .outcome
        .as_ref()
        .map(|o| o.summary.iter().map(|(k, v)| (k.clone(), json!(v))).collect())
        .unwrap_or_default();
    let m = json!({
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "command": cfg.command.name(),
        "config": cfg.emit(),
        "config_sha256": config_hash(cfg),
        "abkit_version": env!("CARGO_PKG_VERSION"),
        "report_schema_version": emit::REPORT_SCHEMA_VERSION,
        "checkpoint_version": crate::evolve::checkpoint::CHECKPOINT_VERSION,
        "workers": crate::pool::resolve_workers(cfg.workers),
        "wall_time_s": wall,
        "exit_code": status.code,
        "error": status.error.as_ref().map(|e| e.to_string()),
        "summary": summary,
    });
    let path = cfg.out.join("manifest.json");
    std::fs::write(&path, emit::canonical(&m)).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn run_inner(cfg: &RunConfig) -> Result<Outcome> {
    let o = execute(cfg)?;
    emit_report(&o.report, &cfg.out, "report", &[Format::Csv, Format::Json, Format::Plotdata])?;
    if let Some(cp) = &o.checkpoint {
        cp.write(&cfg.out.join("checkpoint.bin"))?;
    }
    Ok(o)
}

/// Execute one configured run and write its files. Exit codes: 0 success,
/// 2 configuration or IO error, 3 tolerance target missed, 4 domain error.
pub fn run(cfg: &RunConfig) -> RunStatus {
    let clock = Instant::now();
    if let Err(e) = std::fs::create_dir_all(&cfg.out) {
        let err = Error::Io { path: cfg.out.display().to_string(), msg: e.to_string() };
        return RunStatus { code: err.exit_code(), error: Some(err), outcome: None };
    }
    let mut status = match run_inner(cfg) {
        Ok(mut o) => {
            let failed = o.report.rows.iter().filter(|r| !r.pass).count();
            if o.failure.is_none() && failed > 0 {
                o.failure = Some(Error::accuracy(format!("{failed} of {} rows failed", o.report.rows.len()), failed as f64, 0.0));
            }
            let error = o.failure.clone();
            RunStatus { code: error.as_ref().map_or(0, |e| e.exit_code()), error, outcome: Some(o) }
        }
        Err(e) => RunStatus { code: e.exit_code(), error: Some(e), outcome: None },
    };
    if let Err(e) = write_manifest(cfg, &status, clock.elapsed().as_secs_f64()) {
        if status.code == 0 {
            status.code = e.exit_code();
            status.error = Some(e);
        }
    }
    status
}

/// Read a config file, naming the path on failure.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
    RunConfig::parse(&text)
}
