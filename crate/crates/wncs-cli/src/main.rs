//! `wncs` — stabilizability/reliability analysis of wireless networked
//! control loops from the command line.
//!
//! Subcommands: `analyze` (plant spectra and rate thresholds),
//! `reliability` (closed forms), `simulate` (Monte Carlo cross-checks) and
//! `scenario` (sweeps and CSV artifacts). Exit codes: 0 success, 2 bad
//! usage or config, 1 runtime failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use wncs_core::config::CaseConfig;
use wncs_core::montecarlo::McConfig;
use wncs_core::plant::{PlantModel, DEFAULT_UNSTABLE_TOL};
use wncs_core::scenario::{self, format_sig, Mode, ScenarioConfig, CSV_SIG_DIGITS, USE_CASES};
use wncs_core::Error;

#[derive(Parser)]
#[command(
    name = "wncs",
    version,
    about = "Stabilizability/reliability analysis for wireless networked control systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a plant file: eigenvalue magnitudes, unstable product, rate threshold.
    Analyze {
        /// Plant JSON file (keys "A", "B", "C", optional "Sigma").
        #[arg(long)]
        plant: PathBuf,
        /// Unstable-classification slack: |lambda| > 1 + tol counts.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit a machine-readable JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a closed-form reliability case from a JSON config.
    Reliability {
        /// Case config file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of a case, side by side with its closed form.
    Simulate {
        /// Case config file.
        #[arg(long)]
        config: PathBuf,
        /// Number of channel realizations (default from config, else 10^6).
        #[arg(long)]
        samples: Option<u64>,
        /// RNG seed (default from config, else $WNCS_SEED, else 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Independent substreams (default from config, else 1).
        #[arg(long)]
        streams: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a sweep preset or config and emit CSV (or the use-case table).
    Scenario {
        /// Built-in preset: 1, 2, 3 or table1.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Sweep config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's evaluation mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Closed,
    Mc,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Closed => Mode::ClosedForm,
            ModeArg::Mc => Mode::MonteCarlo,
            ModeArg::Both => Mode::Both,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Default seed: $WNCS_SEED when set, else 42.
fn fallback_seed() -> Result<u64, Error> {
    match std::env::var("WNCS_SEED") {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            Error::InvalidInput(format!("WNCS_SEED must be a 64-bit unsigned integer, got '{text}'"))
        }),
        Err(_) => Ok(42),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze { plant, tol, json } => analyze(&plant, tol, json),
        Command::Reliability { config, json } => reliability_cmd(&config, json),
        Command::Simulate {
            config,
            samples,
            seed,
            streams,
            json,
        } => simulate_cmd(&config, samples, seed, streams, json),
        Command::Scenario {
            preset,
            config,
            out,
            mode,
            json,
        } => scenario_cmd(preset, config, out, mode, json),
    }
}

fn sig(x: f64) -> String {
    format_sig(x, CSV_SIG_DIGITS)
}

fn analyze(plant_path: &Path, tol: Option<f64>, json: bool) -> Result<(), Error> {
    let plant = PlantModel::from_json_file(plant_path)?;
    let analysis = plant.eigen_analyze(tol.unwrap_or(DEFAULT_UNSTABLE_TOL))?;
    if json {
        let object = json!({
            "magnitudes": analysis.magnitudes,
            "unstable_product": analysis.unstable_product,
            "rate_threshold_bits": analysis.rate_threshold_bits,
        });
        println!("{object}");
    } else {
        let magnitudes: Vec<String> = analysis.magnitudes.iter().map(|m| sig(*m)).collect();
        println!("eigenvalue magnitudes: {}", magnitudes.join(", "));
        println!("unstable product (Pi): {}", sig(analysis.unstable_product));
        println!(
            "rate threshold (Rth) : {} bits/symbol",
            sig(analysis.rate_threshold_bits)
        );
    }
    Ok(())
}

fn reliability_cmd(config_path: &Path, json: bool) -> Result<(), Error> {
    let config = CaseConfig::load(config_path)?;
    let pi = config.resolve_pi(config_path.parent())?;
    let result = config.closed_form(pi)?;
    if json {
        let object = json!({
            "case": config.case.as_str(),
            "pi": pi,
            "value": result.value,
            "method": result.method.as_str(),
            "ci_halfwidth": result.ci_halfwidth,
            "underflow": result.underflow,
        });
        println!("{object}");
    } else {
        println!(
            "alpha = {} [{}] (pi = {})",
            sig(result.value),
            result.method.as_str(),
            sig(pi)
        );
    }
    Ok(())
}

fn simulate_cmd(
    config_path: &Path,
    samples: Option<u64>,
    seed: Option<u64>,
    streams: Option<u64>,
    json: bool,
) -> Result<(), Error> {
    let config = CaseConfig::load(config_path)?;
    let base = config.mc.unwrap_or_default();
    let mc = McConfig {
        samples: samples.unwrap_or(base.samples),
        seed: match seed {
            Some(s) => s,
            None => match config.mc {
                Some(mc) => mc.seed,
                None => fallback_seed()?,
            },
        },
        streams: streams.unwrap_or(base.streams),
    };
    mc.validate()?;

    let pi = config.resolve_pi(config_path.parent())?;
    let closed = config.closed_form(pi)?;
    let estimate = config.monte_carlo(pi, &mc)?;
    let diff = (estimate.p_hat - closed.value).abs();
    let sigmas = estimate.sigmas_from(closed.value);

    if json {
        let object = json!({
            "case": config.case.as_str(),
            "pi": pi,
            "p_hat": estimate.p_hat,
            "stderr": estimate.stderr,
            "samples": estimate.samples,
            "seed": mc.seed,
            "streams": mc.streams,
            "closed_form": {
                "value": closed.value,
                "method": closed.method.as_str(),
                "underflow": closed.underflow,
            },
            "abs_diff": diff,
            "sigmas": sigmas,
        });
        println!("{object}");
    } else {
        println!(
            "monte carlo: p_hat = {} (stderr {}, samples {}, seed {}, streams {})",
            sig(estimate.p_hat),
            sig(estimate.stderr),
            estimate.samples,
            mc.seed,
            mc.streams
        );
        println!(
            "closed form: alpha = {} [{}]",
            sig(closed.value),
            closed.method.as_str()
        );
        println!("difference : {} ({} sigma)", sig(diff), sig(sigmas));
    }
    Ok(())
}

fn scenario_cmd(
    preset: Option<String>,
    config_path: Option<PathBuf>,
    out: Option<PathBuf>,
    mode: Option<ModeArg>,
    json: bool,
) -> Result<(), Error> {
    let preset_name = preset.as_deref();
    if preset_name == Some("table1") {
        return table_cmd(json, out.as_deref());
    }

    let mut config: ScenarioConfig = match (preset_name, &config_path) {
        (Some(name), None) => {
            let canonical = match name {
                "1" | "scenario1" => "scenario1",
                "2" | "scenario2" => "scenario2",
                "3" | "scenario3" => "scenario3",
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown preset '{other}' (expected 1, 2, 3 or table1)"
                    )))
                }
            };
            scenario::preset(canonical)?
        }
        (None, Some(path)) => ScenarioConfig::from_json_file(path)?,
        (None, None) => {
            return Err(Error::InvalidInput(
                "one of --preset or --config is required".to_string(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };

    if let Some(mode) = mode {
        config.mode = mode.into();
    }
    if config.mode.wants_monte_carlo() && config.mc.is_none() {
        config.mc = Some(McConfig {
            seed: fallback_seed()?,
            ..McConfig::default()
        });
    }

    let rows = scenario::run_scenario(&config)?;
    if let Some(path) = &out {
        scenario::emit_csv(&rows, path)?;
        if !json {
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
    }
    if json {
        let object = json!({
            "rows": rows,
            "out": out.as_ref().map(|p| p.display().to_string()),
        });
        println!("{object}");
    } else if out.is_none() {
        print!("{}", scenario::csv_string(&rows)?);
    }
    Ok(())
}

fn table_cmd(json: bool, out: Option<&Path>) -> Result<(), Error> {
    let products: Vec<f64> = USE_CASES.iter().map(|u| u.unstable_product).collect();
    let pairs = scenario::table1(&products)?;
    if let Some(path) = out {
        let mut text = String::from("use_case,pi,rate_threshold_bits\n");
        for (case, (pi, rth)) in USE_CASES.iter().zip(pairs.iter()) {
            text.push_str(&format!("{},{},{}\n", case.name, sig(*pi), sig(*rth)));
        }
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    if json {
        let rows: Vec<_> = USE_CASES
            .iter()
            .zip(pairs.iter())
            .map(|(case, (pi, rth))| {
                json!({
                    "use_case": case.name,
                    "pi": pi,
                    "rate_threshold_bits": rth,
                })
            })
            .collect();
        println!("{}", json!({ "rows": rows }));
    } else {
        println!("{:<40} {:>12} {:>10}", "use case", "Pi", "Rth (bits)");
        for (case, (pi, rth)) in USE_CASES.iter().zip(pairs.iter()) {
            println!("{:<40} {:>12} {:>10}", case.name, sig(*pi), sig(*rth));
        }
    }
    Ok(())
}
