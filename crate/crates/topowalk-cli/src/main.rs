//! `topowalk`: experiment runner and momentum-space analysis for
//! one-dimensional topological quantum walks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use topowalk::invariants::{classify_simple, classify_split, phase_diagram, winding_number};
use topowalk::momentum::{dispersion, momentum_grid, CoinParams};

use topowalk_cli::export::{format_dispersion_csv, format_phase_diagram_csv};
use topowalk_cli::runner::{load_config, run_to_files, RunError};
use topowalk_cli::sweep::sweep;

#[derive(Parser)]
#[command(
    name = "topowalk",
    version,
    about = "Simulate 1D topological quantum walks and their continuous-time limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its CSV + manifest.
    Run {
        /// Path to the experiment JSON.
        config: PathBuf,
    },
    /// Tabulate the two-band dispersion over the momentum zone.
    Dispersion {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of momentum samples.
        #[arg(long, default_value_t = 1024)]
        nk: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding-number invariants for uniform coin angles.
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1024)]
        nk: usize,
    },
    /// Classify the split-walk phase over a rectangular angle grid.
    Phasediagram {
        #[arg(long, allow_hyphen_values = true)]
        t1min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1max: f64,
        #[arg(long, allow_hyphen_values = true)]
        t2min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t2max: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 41)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a config template across a list of parameter values.
    Sweep {
        config: PathBuf,
        /// Parameter name (R, gamma, gamma1, gamma2, theta, theta1, theta2,
        /// dt, spread).
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Simple,
    Split,
}

#[derive(Args)]
struct ParamArgs {
    /// Walk family.
    #[arg(long, value_enum, conflicts_with_all = ["simple", "split"])]
    kind: Option<KindArg>,
    /// Shorthand for --kind simple.
    #[arg(long, conflicts_with = "split")]
    simple: bool,
    /// Shorthand for --kind split.
    #[arg(long)]
    split: bool,
    /// Coin angle of the simple walk (radians).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// First coin angle of the split walk.
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<f64>,
    /// Second coin angle of the split walk.
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<f64>,
}

impl ParamArgs {
    fn coin_params(&self) -> Result<CoinParams, RunError> {
        let kind = match (self.kind, self.simple, self.split) {
            (Some(k), _, _) => k,
            (None, true, _) => KindArg::Simple,
            (None, _, true) => KindArg::Split,
            _ => {
                return Err(RunError::Config(
                    "pass --kind simple|split (or --simple / --split)".into(),
                ))
            }
        };
        match kind {
            KindArg::Simple => {
                let theta = self
                    .theta
                    .ok_or_else(|| RunError::Config("--theta is required for --kind simple".into()))?;
                Ok(CoinParams::Simple { theta })
            }
            KindArg::Split => {
                let theta1 = self.theta1.ok_or_else(|| {
                    RunError::Config("--theta1 is required for --kind split".into())
                })?;
                let theta2 = self.theta2.ok_or_else(|| {
                    RunError::Config("--theta2 is required for --kind split".into())
                })?;
                Ok(CoinParams::Split { theta1, theta2 })
            }
        }
    }
}

fn outdir() -> PathBuf {
    std::env::var_os("TOPOWALK_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), RunError> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| RunError::Config(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(path, text)
                .map_err(|e| RunError::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { config } => {
            let config = load_config(&config)?;
            let dir = outdir();
            let artifacts = run_to_files(&config, &dir)?;
            let last = artifacts
                .metrics
                .last()
                .expect("a run records at least one snapshot");
            println!(
                "done: t={} norm_drift={:.3e} boundary_region={:.6} -> {}",
                last.t,
                artifacts.norm_drift,
                last.p_boundary_region,
                dir.join(&config.output.csv).display()
            );
            Ok(())
        }
        Command::Dispersion { params, nk, out } => {
            if nk == 0 {
                return Err(RunError::Config("--nk must be positive".into()));
            }
            let coin = params.coin_params()?;
            let table: Vec<_> = momentum_grid(nk)
                .into_iter()
                .map(|k| dispersion(&coin, k))
                .collect();
            emit(&format_dispersion_csv(&table), out.as_deref())
        }
        Command::Invariants { params, nk } => {
            let coin = params.coin_params()?;
            let w0 = winding_number(0, &coin, nk).map_err(|e| RunError::Numerical(e.to_string()))?;
            let w1 = winding_number(1, &coin, nk).map_err(|e| RunError::Numerical(e.to_string()))?;
            let label = match coin {
                CoinParams::Simple { theta } => classify_simple(theta),
                CoinParams::Split { theta1, theta2 } => classify_split(theta1, theta2),
            };
            match label {
                Ok(label) => println!("nu0={} nu1={} phase={}", w0.nu, w1.nu, label.name()),
                Err(_) => println!("nu0={} nu1={} phase=boundary", w0.nu, w1.nu),
            }
            Ok(())
        }
        Command::Phasediagram {
            t1min,
            t1max,
            t2min,
            t2max,
            res,
            out,
        } => {
            let points = phase_diagram((t1min, t1max), (t2min, t2max), res)
                .map_err(|e| RunError::Config(e.to_string()))?;
            emit(&format_phase_diagram_csv(&points), out.as_deref())
        }
        Command::Sweep {
            config,
            param,
            values,
        } => {
            let template = load_config(&config)?;
            let parsed: Result<Vec<f64>, _> = values
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect();
            let parsed = parsed
                .map_err(|e| RunError::Config(format!("--values: {e}")))?;
            if parsed.is_empty() {
                return Err(RunError::Config("--values must be non-empty".into()));
            }
            let dir = outdir();
            let outcomes = sweep(&template, &param, &parsed, &dir);
            let mut config_failures = Vec::new();
            let mut numerical_failures = Vec::new();
            for outcome in &outcomes {
                match &outcome.result {
                    Ok(artifacts) => println!(
                        "{param}={}: boundary_region={:.6} norm_drift={:.3e}",
                        outcome.value,
                        artifacts
                            .metrics
                            .last()
                            .map(|m| m.p_boundary_region)
                            .unwrap_or(f64::NAN),
                        artifacts.norm_drift
                    ),
                    Err(RunError::Config(m)) => {
                        config_failures.push(format!("{param}={}: {m}", outcome.value))
                    }
                    Err(RunError::Numerical(m)) => {
                        numerical_failures.push(format!("{param}={}: {m}", outcome.value))
                    }
                }
            }
            if !numerical_failures.is_empty() {
                return Err(RunError::Numerical(numerical_failures.join("; ")));
            }
            if !config_failures.is_empty() {
                return Err(RunError::Config(config_failures.join("; ")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ RunError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ RunError::Numerical(_)) => {
            eprintln!("{e}");
            ExitCode::from(3)
        }
    }
}
