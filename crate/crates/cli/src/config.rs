//! Run configuration: presets, `key = value` files, flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use desitter_core::evolution::MAX_ORACLE_QUBITS;
use desitter_core::{ModelParams, OracleSettings, TimeSampling, TrotterPlan};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Default output directory unless a file or flag says otherwise.
pub const OUTPUT_DIR_ENV: &str = "DESITTER_OUTPUT_DIR";
const FALLBACK_OUTPUT_DIR: &str = "desitter-out";

/// Keys accepted in config files, on the command line and by `sweep`.
pub const KEYS: [&str; 12] = [
    "n_sites",
    "hubble",
    "mass",
    "t_total",
    "trotter_steps",
    "time_sampling",
    "shots",
    "seed",
    "initial_state_index",
    "snapshot_every",
    "oracle",
    "output_dir",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum OracleMode {
    Off,
    /// Substep count the convergence doubling starts from.
    On(usize),
}

impl OracleMode {
    pub fn settings(self) -> Option<OracleSettings> {
        match self {
            OracleMode::Off => None,
            OracleMode::On(start) => Some(OracleSettings {
                start_substeps: start,
                ..OracleSettings::default()
            }),
        }
    }
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleMode::Off => f.write_str("off"),
            OracleMode::On(start) => write!(f, "on:{start}"),
        }
    }
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("oracle must be `off`, `on` or `on:<substeps>`, got {s:?}");
        match s {
            "off" => Ok(OracleMode::Off),
            "on" => Ok(OracleMode::On(OracleSettings::default().start_substeps)),
            _ => {
                let start = s.strip_prefix("on:").ok_or_else(bad)?;
                match start.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(OracleMode::On(n)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl TryFrom<String> for OracleMode {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<OracleMode> for String {
    fn from(m: OracleMode) -> String {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_sites: usize,
    pub hubble: f64,
    pub mass: f64,
    pub t_total: f64,
    pub trotter_steps: usize,
    pub time_sampling: TimeSampling,
    /// 0 disables sampling.
    pub shots: u64,
    pub seed: u64,
    pub initial_state_index: u64,
    pub snapshot_every: usize,
    pub oracle: OracleMode,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        preset_paper(0).expect("preset 0 exists")
    }
}

pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUTPUT_DIR))
}

/// Eight sites, `h = 0.1`, ten midpoint steps to `t = 1`, 10000 shots from
/// the one-hole state `|1>`.
pub fn preset_paper(mass_choice: u8) -> Result<RunConfig, CliError> {
    if mass_choice > 1 {
        return Err(CliError::Usage(format!(
            "preset mass must be 0 or 1, got {mass_choice}"
        )));
    }
    Ok(RunConfig {
        n_sites: 8,
        hubble: 0.1,
        mass: mass_choice as f64,
        t_total: 1.0,
        trotter_steps: 10,
        time_sampling: TimeSampling::Midpoint,
        shots: 10_000,
        seed: 0,
        initial_state_index: 1,
        snapshot_every: 1,
        oracle: OracleMode::On(OracleSettings::default().start_substeps),
        output_dir: default_output_dir(),
    })
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("bad value {value:?} for {key}: {e}")))
}

impl RunConfig {
    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "n_sites" => self.n_sites = parse_value(key, value)?,
            "hubble" => self.hubble = parse_value(key, value)?,
            "mass" => self.mass = parse_value(key, value)?,
            "t_total" => self.t_total = parse_value(key, value)?,
            "trotter_steps" => self.trotter_steps = parse_value(key, value)?,
            "time_sampling" => self.time_sampling = parse_value(key, value)?,
            "shots" => self.shots = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "initial_state_index" => self.initial_state_index = parse_value(key, value)?,
            "snapshot_every" => self.snapshot_every = parse_value(key, value)?,
            "oracle" => self.oracle = parse_value(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            other => return Err(CliError::Usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Reads a `key = value` file, or the `config` object of a `summary.json`.
    pub fn from_file(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let mut value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            if let Some(inner) = value.get_mut("config") {
                value = inner.take();
            }
            serde_json::from_value(value)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        } else {
            Self::from_key_values(&text).map_err(|e| match e {
                CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
                other => other,
            })
        }
    }

    /// Parses `key = value` lines; strings may be quoted or bare.
    pub fn from_key_values(text: &str) -> Result<RunConfig, CliError> {
        let table: toml::Table = match text.parse() {
            Ok(t) => t,
            Err(_) => quote_bare_values(text)?
                .parse()
                .map_err(|e: toml::de::Error| CliError::Usage(e.message().to_owned()))?,
        };
        let mut config = RunConfig::default();
        for (key, value) in &table {
            let text = match value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => return Err(CliError::Usage(format!("{key}: unsupported value {other}"))),
            };
            config.set(key, &text)?;
        }
        Ok(config)
    }

    /// The file form read back by [`RunConfig::from_key_values`].
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let table = toml::Table::try_from(self).expect("config serializes");
        for key in KEYS {
            out.push_str(&format!("{key} = {}\n", table[key]));
        }
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        self.params()?;
        if self.trotter_steps == 0 {
            return usage("trotter_steps must be at least 1".into());
        }
        if !(self.t_total.is_finite() && self.t_total > 0.0) {
            return usage(format!("t_total must be positive, got {}", self.t_total));
        }
        if self.n_sites < 64 && self.initial_state_index >> self.n_sites != 0 {
            return usage(format!(
                "initial_state_index {} needs more than {} sites",
                self.initial_state_index, self.n_sites
            ));
        }
        if self.snapshot_every == 0 {
            return usage("snapshot_every must be at least 1".into());
        }
        if matches!(self.oracle, OracleMode::On(_)) && self.n_sites > MAX_ORACLE_QUBITS {
            return usage(format!(
                "the oracle supports at most {MAX_ORACLE_QUBITS} sites"
            ));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.n_sites, self.hubble, self.mass)?)
    }

    pub fn plan(&self) -> Result<TrotterPlan, CliError> {
        Ok(TrotterPlan::new(self.t_total, self.trotter_steps)?
            .with_sampling(self.time_sampling)
            .with_snapshot_every(self.snapshot_every)?
            .retaining_states())
    }
}

/// `key = word` is not TOML; quote such values so the parser accepts them.
fn quote_bare_values(text: &str) -> Result<String, CliError> {
    let mut out = String::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("line {}: expected `key = value`", i + 1)))?;
        let value = value.trim();
        if value.parse::<toml::Value>().is_ok() || value.starts_with('"') {
            out.push_str(&format!("{} = {value}\n", key.trim()));
        } else {
            out.push_str(&format!("{} = {:?}\n", key.trim(), value));
        }
    }
    Ok(out)
}
