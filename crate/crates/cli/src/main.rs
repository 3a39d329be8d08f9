use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use desitter_cli::config::{preset_paper, OracleMode, RunConfig};
use desitter_cli::{run, sweep, verify, CliError};
use desitter_core::format::fmt_g17;
use desitter_core::TimeSampling;

#[derive(Parser)]
#[command(
    name = "desitter",
    version,
    about = "Trotterized staggered fermions in an expanding 1+1D universe"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and write CSV, JSON and SVG outputs.
    Run {
        #[command(flatten)]
        source: ConfigSource,
    },
    /// Check the Hamiltonian builders against independent realizations.
    Verify {
        /// Largest even lattice size to check.
        #[arg(long = "max_n", default_value_t = 8)]
        max_n: usize,
        /// Directory holding n8_h1.txt, n8_h2.txt and n8_h3.txt to use
        /// instead of the bundled fixture.
        #[arg(long = "fixture_dir")]
        fixture_dir: Option<PathBuf>,
    },
    /// Run one point per value of a parameter.
    Sweep {
        /// hubble, mass, trotter_steps, shots or initial_state_index.
        #[arg(long)]
        parameter: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        source: ConfigSource,
    },
    /// Print a preset configuration file.
    Preset {
        /// Mass of the preset, 0 or 1.
        mass: u8,
    },
}

#[derive(Args)]
struct ConfigSource {
    /// `key = value` file, or a summary.json from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from preset 0 or 1 instead of the defaults.
    #[arg(long, conflicts_with = "config")]
    preset: Option<u8>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    #[arg(long = "n_sites")]
    n_sites: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    hubble: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mass: Option<f64>,
    #[arg(long = "t_total")]
    t_total: Option<f64>,
    #[arg(long = "trotter_steps")]
    trotter_steps: Option<usize>,
    #[arg(long = "time_sampling")]
    time_sampling: Option<TimeSampling>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "initial_state_index")]
    initial_state_index: Option<u64>,
    #[arg(long = "snapshot_every")]
    snapshot_every: Option<usize>,
    #[arg(long)]
    oracle: Option<OracleMode>,
    /// Defaults to $DESITTER_OUTPUT_DIR, then `desitter-out`.
    #[arg(long = "output_dir")]
    output_dir: Option<PathBuf>,
}

impl ConfigSource {
    fn resolve(self) -> Result<RunConfig, CliError> {
        let mut c = match (self.config, self.preset) {
            (Some(path), _) => RunConfig::from_file(&path)?,
            (None, Some(m)) => preset_paper(m)?,
            (None, None) => RunConfig::default(),
        };
        let o = self.overrides;
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = o.$field { c.$field = v; })*
            };
        }
        apply!(
            n_sites,
            hubble,
            mass,
            t_total,
            trotter_steps,
            time_sampling,
            shots,
            seed,
            initial_state_index,
            snapshot_every,
            oracle,
            output_dir
        );
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { source } => {
            let config = source.resolve()?;
            let output = run(&config)?;
            let checks = &output.checks;
            println!(
                "wrote {} snapshots to {}",
                output.snapshots.len(),
                config.output_dir.display()
            );
            println!(
                "charge drift {}  norm drift {}",
                fmt_g17(checks.charge_drift),
                fmt_g17(checks.norm_drift)
            );
            if let Some(o) = &checks.oracle {
                println!(
                    "oracle: {} substeps (converged: {}), state distance {}",
                    o.substeps,
                    o.converged,
                    fmt_g17(o.state_distance)
                );
            }
            Ok(())
        }
        Command::Verify { max_n, fixture_dir } => {
            let report = verify(max_n, fixture_dir.as_deref())?;
            for c in &report.checks {
                println!("{c}");
            }
            if report.passed() {
                Ok(())
            } else {
                let failed = report
                    .checks
                    .iter()
                    .filter(|c| c.status == desitter_cli::verify::Status::Fail)
                    .count();
                Err(CliError::Verification(format!("{failed} check(s) failed")))
            }
        }
        Command::Sweep {
            parameter,
            values,
            source,
        } => {
            let base = source.resolve()?;
            let index = sweep(&base, &parameter, &values)?;
            for p in &index.points {
                println!(
                    "{:>3} {}={} {} {}",
                    p.index,
                    parameter,
                    p.value,
                    p.status,
                    p.output_dir.display()
                );
            }
            match index.points.iter().find(|p| p.exit_code != 0) {
                None => Ok(()),
                Some(p) => Err(CliError::from_exit_code(
                    p.exit_code,
                    format!(
                        "point {} failed: {}",
                        p.index,
                        p.message.as_deref().unwrap_or("")
                    ),
                )),
            }
        }
        Command::Preset { mass } => {
            print!("{}", preset_paper(mass)?.to_key_values());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
