//! Batch files: a list of (command, config) pairs run on a thread pool.
//!
//! ```json
//! {"scenarios": [
//!   {"command": "invariants", "config": "ac1_constant.json"},
//!   {"command": "compare", "name": "inline", "config": {"profile": ..., "time": ...}}
//! ]}
//! ```
//!
//! String configs are paths relative to the batch file. Scenario `name`
//! overrides the config's own name and selects the output subdirectory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::Command;
use crate::config::ScenarioConfig;
use crate::error::{CliError, EXIT_PASS};
use crate::report::write_file;
use crate::run_scenario;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchFile {
    scenarios: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    command: Command,
    config: serde_json::Value,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Serialize)]
struct Outcome {
    name: String,
    command: Command,
    exit_code: u8,
    all_pass: bool,
    error: Option<String>,
}

fn load_entries(path: &Path) -> Result<Vec<(String, Command, ScenarioConfig)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
    let file: BatchFile =
        serde_json::from_str(&text).map_err(|e| CliError::config("batch", e.to_string()))?;
    if file.scenarios.is_empty() {
        return Err(CliError::config(
            "scenarios",
            "batch file lists no scenarios",
        ));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, e) in file.scenarios.into_iter().enumerate() {
        let mut cfg = match e.config {
            serde_json::Value::String(p) => ScenarioConfig::load(&base.join(p))?,
            v @ serde_json::Value::Object(_) => serde_json::from_value(v).map_err(|err| {
                CliError::config(format!("scenarios[{i}].config"), err.to_string())
            })?,
            _ => {
                return Err(CliError::config(
                    format!("scenarios[{i}].config"),
                    "expected a path or an inline config object",
                ))
            }
        };
        if let Some(n) = e.name {
            cfg.name = n;
        }
        let valid = !cfg.name.is_empty()
            && cfg
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
            && cfg.name != "."
            && cfg.name != "..";
        if !valid {
            return Err(CliError::config(
                format!("scenarios[{i}].name"),
                format!("`{}` is not usable as a directory name", cfg.name),
            ));
        }
        if !seen.insert(cfg.name.clone()) {
            return Err(CliError::config(
                format!("scenarios[{i}].name"),
                format!("duplicate scenario name `{}`", cfg.name),
            ));
        }
        out.push((cfg.name.clone(), e.command, cfg));
    }
    Ok(out)
}

/// Runs every scenario into `<out>/<name>/`; the exit code is the largest of
/// the per-scenario codes.
pub fn run_batch(
    path: &Path,
    out: Option<&Path>,
    overrides: &[String],
    jobs: usize,
) -> Result<u8, CliError> {
    if jobs == 0 {
        return Err(CliError::config("--jobs", "must be at least 1"));
    }
    let entries = load_entries(path)?;
    let root = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out"));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::config("--jobs", e.to_string()))?;
    let results: Vec<_> = pool.install(|| {
        entries
            .par_iter()
            .map(|(name, command, cfg)| {
                run_scenario(*command, cfg.clone(), Some(&root.join(name)), overrides)
            })
            .collect()
    });

    let mut outcomes = Vec::new();
    for ((name, command, _), result) in entries.iter().zip(results) {
        let outcome = match result {
            Ok(report) => {
                print!("{}", report.describe());
                Outcome {
                    name: name.clone(),
                    command: *command,
                    exit_code: report.exit_code(),
                    all_pass: report.all_pass,
                    error: None,
                }
            }
            Err(e) => {
                eprintln!("qclock: {name}: {e}");
                Outcome {
                    name: name.clone(),
                    command: *command,
                    exit_code: e.exit_code(),
                    all_pass: false,
                    error: Some(e.to_string()),
                }
            }
        };
        outcomes.push(outcome);
    }
    std::fs::create_dir_all(&root).map_err(|e| CliError::io(&root, e))?;
    let mut summary = serde_json::to_string_pretty(&outcomes).expect("outcomes serialize");
    summary.push('\n');
    write_file(&root.join("batch_report.json"), &summary)?;
    Ok(outcomes
        .iter()
        .map(|o| o.exit_code)
        .max()
        .unwrap_or(EXIT_PASS))
}
