use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tsd_cli::{compare_dirs, load, presets, run, CliError, Overrides, RunOptions, TolProfile};

#[derive(Parser)]
#[command(name = "tsd", version, about = "Two-step decoherence simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a scenario file.
    Run {
        /// Preset name or path to a TOML scenario.
        target: String,
        /// Output directory [default: out/<scenario name>].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write plot.svg.
        #[arg(long)]
        plot: bool,
        /// Base seed for Monte Carlo runs.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of transitions (for rabi: run length in transitions).
        #[arg(long)]
        k_max: Option<usize>,
        /// Rabi ratio ΩΔt₀/2π.
        #[arg(long)]
        ratio: Option<f64>,
        /// Two-level decay ratio Δt₀/τ.
        #[arg(long)]
        dt_over_tau: Option<f64>,
    },
    /// Compare CSV outputs in DIR against GOLDEN.
    Compare {
        dir: PathBuf,
        golden: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        abs: f64,
        #[arg(long, default_value_t = 1e-9)]
        rel: f64,
        /// Per-column tolerance, NAME=ABS:REL; repeatable.
        #[arg(long = "column", value_parser = TolProfile::parse_column)]
        columns: Vec<(String, (f64, f64))>,
    },
    /// List the built-in presets.
    ListPresets,
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run {
            target,
            out,
            plot,
            seed,
            k_max,
            ratio,
            dt_over_tau,
        } => {
            let mut scenario = load(&target)?;
            scenario.apply(&Overrides {
                seed,
                k_max,
                ratio,
                dt_over_tau,
            })?;
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&scenario.name));
            let report = run(&scenario, &out, RunOptions { plot })?;
            print!("{}", report.render_summary());
            Ok(true)
        }
        Command::Compare {
            dir,
            golden,
            abs,
            rel,
            columns,
        } => {
            let profile = TolProfile {
                abs,
                rel,
                columns: columns.into_iter().collect(),
            };
            match compare_dirs(&dir, &golden, &profile)? {
                None => {
                    println!("PASS: {} matches {}", dir.display(), golden.display());
                    Ok(true)
                }
                Some(d) => {
                    println!("FAIL: {d}");
                    Ok(false)
                }
            }
        }
        Command::ListPresets => {
            for name in presets::names() {
                let scenario = presets::get(name)?;
                println!("{name}\t{}", scenario.mode.name());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
