//! The `run` pipeline: evolve, sample, check invariants, write artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use desitter_core::evolution::ObservableDeltas;
use desitter_core::format::fmt_g17;
use desitter_core::observables::observe_exact;
use desitter_core::observables::{estimators_from_counts, polarization_ratio};
use desitter_core::sampling::GENERATOR_NAME;
use desitter_core::state::{phase_aligned_distance, NORM_DRIFT_LIMIT};
use desitter_core::{
    exact_evolve_converged, sample_z_basis, trotter_evolve, ObservableRecord, StateVector,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{self, Series, Style};

pub const CHARGE_DRIFT_LIMIT: f64 = 1e-10;

pub const DENSITY_HEADER: &str = "t,x,n_exact,n_shot,n_shot_err";
pub const OBSERVABLES_HEADER: &str =
    "t,n_total,C,C_err,p_over_e,p_ratio,c,c_err,energy,total_sz,norm";

pub const SNAPSHOT_SEED_RULE: &str = "splitmix64(seed + i * 0x9e3779b97f4a7c15) for snapshot i";

/// Seed of the shot record taken at snapshot `index`.
pub fn snapshot_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    /// Expectations from the Trotter amplitudes.
    pub exact: ObservableRecord,
    pub shot: Option<ObservableRecord>,
    pub shot_seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub start_substeps: usize,
    pub substeps: usize,
    pub converged: bool,
    pub last_change: f64,
    /// Phase-aligned distance between final Trotter and oracle states.
    pub state_distance: f64,
    /// Largest final-time observable difference to the oracle.
    pub max_observable_delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Checks {
    pub charge_drift: f64,
    pub charge_drift_limit: f64,
    pub norm_drift: f64,
    pub norm_drift_limit: f64,
    pub oracle: Option<OracleCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub snapshots: Vec<Snapshot>,
    pub checks: Checks,
}

#[derive(Serialize)]
struct Summary<'a> {
    generator: String,
    version: &'static str,
    config: &'a RunConfig,
    seed: u64,
    rng: RngEcho,
    dt: f64,
    snapshot_times: Vec<f64>,
    checks: &'a Checks,
    files: Vec<&'static str>,
}

#[derive(Serialize)]
struct RngEcho {
    generator: &'static str,
    snapshot_seed_rule: &'static str,
    snapshot_seeds: Vec<u64>,
}

pub const FILES: [&str; 8] = [
    "density.csv",
    "observables.csv",
    "observables_shot.csv",
    "summary.json",
    "density.svg",
    "correlation.svg",
    "polarization.svg",
    "condensate.svg",
];

/// Evolves, samples and checks without touching the filesystem.
pub fn execute(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let params = config.params()?;
    let plan = config.plan()?;
    let initial = StateVector::basis_state(config.n_sites, config.initial_state_index)?;
    let trajectory = trotter_evolve(&initial, &params, &plan)?;
    let states = trajectory.states.as_ref().expect("plan retains states");

    let mut snapshots = Vec::with_capacity(states.len());
    for (i, (state, exact)) in states.iter().zip(&trajectory.records).enumerate() {
        let (shot, shot_seed) = if config.shots > 0 {
            let seed = snapshot_seed(config.seed, i as u64);
            let counts = sample_z_basis(state, config.shots, seed)?;
            (
                Some(estimators_from_counts(&counts, exact.t, config.hubble)?),
                Some(seed),
            )
        } else {
            (None, None)
        };
        snapshots.push(Snapshot {
            t: exact.t,
            exact: exact.clone(),
            shot,
            shot_seed,
        });
    }

    let q0 = trajectory.records[0].total_sz;
    let charge_drift = trajectory
        .records
        .iter()
        .map(|r| (r.total_sz - q0).abs())
        .fold(0.0, f64::max);
    let norm_drift = trajectory
        .records
        .iter()
        .map(|r| (r.norm.unwrap_or(1.0) - 1.0).abs())
        .fold(0.0, f64::max);

    let oracle = match config.oracle.settings() {
        None => None,
        Some(settings) => {
            let t_end = *trajectory.times.last().expect("final snapshot");
            let oracle = exact_evolve_converged(&initial, &params, t_end, &settings)?;
            let final_state = states.last().expect("final state");
            let oracle_record = observe_exact(&oracle.state, &params, t_end)?;
            Some(OracleCheck {
                start_substeps: settings.start_substeps,
                substeps: oracle.substeps,
                converged: oracle.converged,
                last_change: oracle.last_change,
                state_distance: phase_aligned_distance(final_state, &oracle.state)?,
                max_observable_delta: ObservableDeltas::between(
                    trajectory.final_record(),
                    &oracle_record,
                )
                .max(),
            })
        }
    };

    let passed = charge_drift <= CHARGE_DRIFT_LIMIT && norm_drift <= NORM_DRIFT_LIMIT;
    Ok(RunOutput {
        config: config.clone(),
        snapshots,
        checks: Checks {
            charge_drift,
            charge_drift_limit: CHARGE_DRIFT_LIMIT,
            norm_drift,
            norm_drift_limit: NORM_DRIFT_LIMIT,
            oracle,
            passed,
        },
    })
}

/// Runs, writes every artifact into `config.output_dir`, then reports an
/// invariant violation if one occurred.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    let output = execute(config)?;
    write_outputs(&output, &config.output_dir)?;
    if !output.checks.passed {
        return Err(CliError::Invariant(format!(
            "charge drift {} (limit {}), norm drift {} (limit {})",
            fmt_g17(output.checks.charge_drift),
            fmt_g17(CHARGE_DRIFT_LIMIT),
            fmt_g17(output.checks.norm_drift),
            fmt_g17(NORM_DRIFT_LIMIT)
        )));
    }
    Ok(output)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g17).unwrap_or_default()
}

pub fn density_csv(output: &RunOutput) -> String {
    let mut out = format!("{DENSITY_HEADER}\n");
    for s in &output.snapshots {
        for (x, n) in s.exact.density.iter().enumerate() {
            let shot = s.shot.as_ref().map(|r| r.density[x]);
            let err = s
                .shot
                .as_ref()
                .and_then(|r| r.shot_errors.as_ref())
                .map(|e| e.density[x]);
            out.push_str(&format!(
                "{},{x},{},{},{}\n",
                fmt_g17(s.t),
                fmt_g17(*n),
                opt(shot),
                opt(err)
            ));
        }
    }
    out
}

fn observables_row(
    r: &ObservableRecord,
    p0: f64,
    errors_from: Option<&ObservableRecord>,
) -> String {
    let errors = errors_from.and_then(|r| r.shot_errors.as_ref());
    [
        fmt_g17(r.t),
        fmt_g17(r.n_total),
        fmt_g17(r.correlation_c),
        opt(errors.map(|e| e.correlation_c)),
        fmt_g17(r.polarization_over_e),
        opt(polarization_ratio(r.polarization_over_e, p0)),
        fmt_g17(r.chiral_c),
        opt(errors.map(|e| e.chiral_c)),
        opt(r.energy),
        fmt_g17(r.total_sz),
        opt(r.norm),
    ]
    .join(",")
}

/// Exact expectations; `C_err` and `c_err` hold the standard error a shot
/// record of the configured size has at that snapshot.
pub fn observables_csv(output: &RunOutput) -> String {
    let mut out = format!("{OBSERVABLES_HEADER}\n");
    let p0 = output.snapshots[0].exact.polarization_over_e;
    for s in &output.snapshots {
        out.push_str(&observables_row(&s.exact, p0, s.shot.as_ref()));
        out.push('\n');
    }
    out
}

/// Shot estimates, same columns; energy and norm are not measured.
pub fn observables_shot_csv(output: &RunOutput) -> String {
    let mut out = format!("{OBSERVABLES_HEADER}\n");
    let Some(p0) = output.snapshots[0]
        .shot
        .as_ref()
        .map(|r| r.polarization_over_e)
    else {
        return out;
    };
    for s in &output.snapshots {
        let r = s.shot.as_ref().expect("every snapshot is sampled");
        out.push_str(&observables_row(r, p0, Some(r)));
        out.push('\n');
    }
    out
}

pub fn summary_json(output: &RunOutput) -> String {
    let config = &output.config;
    let summary = Summary {
        generator: format!("desitter {}", desitter_core::VERSION),
        version: desitter_core::VERSION,
        config,
        seed: config.seed,
        rng: RngEcho {
            generator: GENERATOR_NAME,
            snapshot_seed_rule: SNAPSHOT_SEED_RULE,
            snapshot_seeds: output
                .snapshots
                .iter()
                .filter_map(|s| s.shot_seed)
                .collect(),
        },
        dt: config.t_total / config.trotter_steps as f64,
        snapshot_times: output.snapshots.iter().map(|s| s.t).collect(),
        checks: &output.checks,
        files: FILES.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

fn config_echo(config: &RunConfig) -> String {
    config.to_key_values().trim_end().replace('\n', "; ")
}

fn exact_and_shot(
    output: &RunOutput,
    value: impl Fn(&ObservableRecord) -> f64,
    error: impl Fn(&ObservableRecord) -> Option<f64>,
) -> Vec<Series> {
    let mut series = vec![Series {
        label: "exact".into(),
        color: "#1f4e9c",
        style: Style::Line,
        points: output
            .snapshots
            .iter()
            .map(|s| (s.t, value(&s.exact)))
            .collect(),
        errors: None,
    }];
    if output.snapshots.iter().all(|s| s.shot.is_some()) {
        let shots: Vec<&ObservableRecord> = output
            .snapshots
            .iter()
            .filter_map(|s| s.shot.as_ref())
            .collect();
        series.push(Series {
            label: format!("{} shots", output.config.shots),
            color: "#c0392b",
            style: Style::Markers,
            points: shots.iter().map(|r| (r.t, value(r))).collect(),
            errors: shots.iter().map(|r| error(r)).collect(),
        });
    }
    series
}

pub fn plots(output: &RunOutput) -> [(&'static str, String); 4] {
    let config = &output.config;
    let desc = config_echo(config);
    let times: Vec<f64> = output.snapshots.iter().map(|s| s.t).collect();
    let occupation: Vec<Vec<f64>> = output
        .snapshots
        .iter()
        .map(|s| s.exact.occupation(config.hubble))
        .collect();
    let p0 = output.snapshots[0].exact.polarization_over_e;
    let shot_p0 = output.snapshots[0]
        .shot
        .as_ref()
        .map(|r| r.polarization_over_e);

    let polarization = if polarization_ratio(1.0, p0).is_some()
        && shot_p0.is_none_or(|q| polarization_ratio(1.0, q).is_some())
    {
        let q0 = shot_p0.unwrap_or(p0);
        let mut series = exact_and_shot(
            output,
            |r| r.polarization_over_e,
            |r| r.shot_errors.as_ref().map(|e| e.polarization_over_e),
        );
        series[0].points.iter_mut().for_each(|p| p.1 /= p0);
        if let Some(s) = series.get_mut(1) {
            s.points.iter_mut().for_each(|p| p.1 /= q0);
            if let Some(e) = s.errors.as_mut() {
                e.iter_mut().for_each(|v| *v /= q0.abs());
            }
        }
        svg::line_chart(
            "Polarization ratio p(t)/p(0)",
            &desc,
            "t",
            "p(t)/p(0)",
            &series,
        )
    } else {
        let series = exact_and_shot(
            output,
            |r| r.polarization_over_e,
            |r| r.shot_errors.as_ref().map(|e| e.polarization_over_e),
        );
        svg::line_chart("Polarization p(t)/e", &desc, "t", "p/e", &series)
    };

    [
        (
            "density.svg",
            svg::heatmap("Occupation n(x,t) e^(-ht)", &desc, &times, &occupation),
        ),
        (
            "correlation.svg",
            svg::line_chart(
                "Density correlation C(t)",
                &desc,
                "t",
                "C",
                &exact_and_shot(
                    output,
                    |r| r.correlation_c,
                    |r| r.shot_errors.as_ref().map(|e| e.correlation_c),
                ),
            ),
        ),
        ("polarization.svg", polarization),
        (
            "condensate.svg",
            svg::line_chart(
                "Chiral condensate c(t)",
                &desc,
                "t",
                "c",
                &exact_and_shot(
                    output,
                    |r| r.chiral_c,
                    |r| r.shot_errors.as_ref().map(|e| e.chiral_c),
                ),
            ),
        ),
    ]
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn write_outputs(output: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = vec![
        write_file(dir, "density.csv", &density_csv(output))?,
        write_file(dir, "observables.csv", &observables_csv(output))?,
        write_file(dir, "observables_shot.csv", &observables_shot_csv(output))?,
        write_file(dir, "summary.json", &summary_json(output))?,
    ];
    for (name, svg) in plots(output) {
        written.push(write_file(dir, name, &svg)?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{preset_paper, OracleMode};

    fn small() -> RunConfig {
        let mut c = preset_paper(1).unwrap();
        c.n_sites = 4;
        c.shots = 200;
        c.oracle = OracleMode::Off;
        c.trotter_steps = 4;
        c.snapshot_every = 2;
        c
    }

    #[test]
    fn snapshot_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> =
            (0..100).map(|i| snapshot_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
        assert_ne!(snapshot_seed(0, 1), snapshot_seed(1, 0));
    }

    #[test]
    fn csv_shapes() {
        let out = execute(&small()).unwrap();
        assert_eq!(out.snapshots.len(), 3);
        let density = density_csv(&out);
        assert_eq!(density.lines().count(), 1 + 3 * 4);
        assert_eq!(density.lines().next().unwrap(), DENSITY_HEADER);
        let obs = observables_csv(&out);
        assert_eq!(obs.lines().count(), 1 + 3);
        assert!(obs.lines().skip(1).all(|l| l.split(',').count() == 11));
        assert_eq!(observables_shot_csv(&out).lines().count(), 4);
    }

    #[test]
    fn exact_only_leaves_shot_fields_empty() {
        let mut c = small();
        c.shots = 0;
        let out = execute(&c).unwrap();
        let density = density_csv(&out);
        assert!(density.lines().skip(1).all(|l| l.ends_with(",,")));
        let obs = observables_csv(&out);
        let fields: Vec<&str> = obs.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[3], "");
        assert_eq!(fields[7], "");
        assert_eq!(
            observables_shot_csv(&out),
            format!("{OBSERVABLES_HEADER}\n")
        );
    }

    #[test]
    fn ratio_empty_without_polarization() {
        let mut c = small();
        c.initial_state_index = 0b1110;
        let out = execute(&c).unwrap();
        // only site 0 occupied, p(0) = 0
        let row = observables_csv(&out).lines().nth(1).unwrap().to_owned();
        assert_eq!(row.split(',').nth(5).unwrap(), "");
    }
}
