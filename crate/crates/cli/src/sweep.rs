//! One-parameter sweeps: independent runs in per-point directories.

use std::fs;
use std::path::{Path, PathBuf};

use desitter_core::format::fmt_g17;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::run::{run, RunOutput};

pub const SWEEP_PARAMETERS: [&str; 5] = [
    "hubble",
    "mass",
    "trotter_steps",
    "shots",
    "initial_state_index",
];

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub value: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub status: String,
    pub exit_code: i32,
    pub message: Option<String>,
    /// Final-time distance to the oracle when it was enabled.
    pub oracle_state_distance: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepIndex {
    pub parameter: String,
    pub base_seed: u64,
    pub points: Vec<SweepPoint>,
}

impl SweepIndex {
    /// Exit code of the first failed point, 0 when all succeeded.
    pub fn exit_code(&self) -> i32 {
        self.points
            .iter()
            .map(|p| p.exit_code)
            .find(|&c| c != 0)
            .unwrap_or(0)
    }
}

fn point_dir(root: &Path, index: usize, parameter: &str, value: &str) -> PathBuf {
    let safe: String = value
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    root.join(format!("{index:03}_{parameter}_{safe}"))
}

/// Runs `base` once per value of `parameter`, point `i` with seed
/// `base.seed + i`, and writes `sweep_index.json` into `base.output_dir`.
pub fn sweep(base: &RunConfig, parameter: &str, values: &[String]) -> Result<SweepIndex, CliError> {
    if !SWEEP_PARAMETERS.contains(&parameter) {
        return Err(CliError::Usage(format!(
            "cannot sweep {parameter:?}; choose one of {}",
            SWEEP_PARAMETERS.join(", ")
        )));
    }
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let mut configs = Vec::with_capacity(values.len());
    for (i, value) in values.iter().enumerate() {
        let mut c = base.clone();
        c.set(parameter, value)?;
        c.seed = base.seed.wrapping_add(i as u64);
        c.output_dir = point_dir(&base.output_dir, i, parameter, value);
        c.validate()?;
        configs.push(c);
    }
    fs::create_dir_all(&base.output_dir).map_err(|e| CliError::io(&base.output_dir, e))?;

    let results: Vec<Result<RunOutput, CliError>> = configs.par_iter().map(run).collect();
    let points = configs
        .iter()
        .zip(values)
        .zip(results)
        .enumerate()
        .map(|(index, ((c, value), result))| {
            let (status, exit_code, message, distance) = match result {
                Ok(out) => ("ok", 0, None, out.checks.oracle.map(|o| o.state_distance)),
                Err(e) => ("error", e.exit_code(), Some(e.to_string()), None),
            };
            SweepPoint {
                index,
                value: value.clone(),
                seed: c.seed,
                output_dir: c.output_dir.clone(),
                status: status.into(),
                exit_code,
                message,
                oracle_state_distance: distance,
            }
        })
        .collect();
    let index = SweepIndex {
        parameter: parameter.to_owned(),
        base_seed: base.seed,
        points,
    };
    let path = base.output_dir.join("sweep_index.json");
    let mut text = serde_json::to_string_pretty(&index).expect("index serializes");
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    if parameter == "trotter_steps"
        && index
            .points
            .iter()
            .all(|p| p.oracle_state_distance.is_some())
    {
        let path = base.output_dir.join("convergence.csv");
        fs::write(&path, convergence_table(&index)).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(index)
}

/// `trotter_steps,state_distance,ratio`, the ratio to the previous row.
pub fn convergence_table(index: &SweepIndex) -> String {
    let mut out = String::from("trotter_steps,state_distance,ratio\n");
    let mut previous: Option<f64> = None;
    for p in &index.points {
        let d = p.oracle_state_distance.unwrap_or(f64::NAN);
        let ratio = previous.map(|q| fmt_g17(q / d)).unwrap_or_default();
        out.push_str(&format!("{},{},{ratio}\n", p.value, fmt_g17(d)));
        previous = Some(d);
    }
    out
}
