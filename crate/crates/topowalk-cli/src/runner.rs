//! Experiment execution: config -> trajectory -> CSV + manifest.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fs;
use std::path::Path;

use topowalk::evolve::{evolve_continuous, Trajectory};
use topowalk::generator::{
    boundary_generator_simple, boundary_generator_split, bulk_generator_simple,
    bulk_generator_split, default_dt, Generator,
};
use topowalk::profile::{SimpleAngleProfile, SplitAngleProfile, WalkProfile};
use topowalk::state::{BoundaryCondition, LatticeSpec, WalkerState};
use topowalk::step::evolve_discrete;

use crate::config::{
    parse_boundary_pair, parse_simple_phase, parse_split_phase, ExperimentConfig,
    InitialStateConfig, ProfileConfig, WalkKind,
};
use crate::export::{format_csv, format_manifest};
use crate::metrics::{sigma_fit, snapshot_metrics, LinearFit, SnapshotMetrics};

/// Failure modes with distinct process exit codes.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

fn cfg_err<T: std::fmt::Display>(e: T) -> RunError {
    RunError::Config(e.to_string())
}

/// Everything a run produces, before touching the filesystem.
pub struct RunArtifacts {
    pub csv: String,
    pub manifest_json: String,
    pub metrics: Vec<SnapshotMetrics>,
    pub sigma_fit: Option<LinearFit>,
    pub norm_drift: f64,
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub config: &'a ExperimentConfig,
    pub norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_fit: Option<LinearFit>,
    pub norm_trace: Vec<NormPoint>,
    pub metrics: &'a [SnapshotMetrics],
}

#[derive(Serialize)]
pub struct NormPoint {
    pub t: f64,
    pub norm: f64,
}

fn build_lattice(config: &ExperimentConfig) -> Result<LatticeSpec, RunError> {
    let bc = match config.lattice.boundary.as_str() {
        "periodic" => BoundaryCondition::Periodic,
        _ => BoundaryCondition::Open,
    };
    LatticeSpec::new(config.lattice.x_min, config.lattice.x_max, bc).map_err(cfg_err)
}

fn build_initial_state(
    config: &ExperimentConfig,
    lattice: LatticeSpec,
) -> Result<WalkerState, RunError> {
    match &config.initial_state {
        InitialStateConfig::Packet {
            center,
            spread,
            weight0,
            weight1,
        } => {
            let w0 = C64::new(weight0[0], weight0[1]);
            let w1 = C64::new(weight1[0], weight1[1]);
            if *spread == 0.0 {
                let mut s = WalkerState::zero(lattice);
                let c = center.round() as i64;
                s.set(c, 0, w0).map_err(cfg_err)?;
                s.set(c, 1, w1).map_err(cfg_err)?;
                s.normalized().map_err(cfg_err)
            } else {
                let denom = 4.0 * spread * spread;
                let entries: Vec<(i64, usize, C64)> = lattice
                    .iter_x()
                    .flat_map(|x| {
                        let d = x as f64 - center;
                        let w = (-d * d / denom).exp();
                        [(x, 0, w0 * w), (x, 1, w1 * w)]
                    })
                    .collect();
                WalkerState::from_amplitudes(lattice, &entries)
                    .map_err(cfg_err)?
                    .normalized()
                    .map_err(cfg_err)
            }
        }
        InitialStateConfig::Amplitudes { entries } => {
            let amps: Vec<(i64, usize, C64)> = entries
                .iter()
                .map(|e| (e.x, e.component.min(1), C64::new(e.re, e.im)))
                .collect();
            WalkerState::from_amplitudes(lattice, &amps)
                .map_err(cfg_err)?
                .normalized()
                .map_err(cfg_err)
        }
        InitialStateConfig::Random {} => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut s = WalkerState::zero(lattice);
            for x in lattice.iter_x() {
                for component in 0..2 {
                    let amp = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    s.set(x, component, amp).map_err(cfg_err)?;
                }
            }
            s.normalized().map_err(cfg_err)
        }
    }
}

fn build_discrete_profile(
    config: &ExperimentConfig,
    lattice: LatticeSpec,
) -> Result<WalkProfile, RunError> {
    Ok(match &config.profile {
        ProfileConfig::SimpleUniform { theta } => {
            WalkProfile::Simple(SimpleAngleProfile::uniform(lattice, *theta).map_err(cfg_err)?)
        }
        ProfileConfig::SimpleTwoPhase {
            theta_left,
            theta_right,
            seam,
        } => WalkProfile::Simple(
            SimpleAngleProfile::two_phase(lattice, *theta_left, *theta_right, *seam)
                .map_err(cfg_err)?,
        ),
        ProfileConfig::SplitUniform { theta1, theta2 } => WalkProfile::Split(
            SplitAngleProfile::uniform(lattice, *theta1, *theta2).map_err(cfg_err)?,
        ),
        ProfileConfig::SplitTwoPhase { left, right, seam } => WalkProfile::Split(
            SplitAngleProfile::two_phase(
                lattice,
                (left[0], left[1]),
                (right[0], right[1]),
                *seam,
            )
            .map_err(cfg_err)?,
        ),
        _ => return Err(RunError::Config("profile is not a discrete one".into())),
    })
}

fn build_generator(
    config: &ExperimentConfig,
    lattice: LatticeSpec,
) -> Result<(Generator, f64), RunError> {
    let (generator, max_rate) = match &config.profile {
        ProfileConfig::ContinuousSimpleBulk { phase, gamma } => (
            bulk_generator_simple(parse_simple_phase(phase).map_err(cfg_err)?, *gamma, lattice)
                .map_err(cfg_err)?,
            gamma.abs(),
        ),
        ProfileConfig::ContinuousSimpleBoundary { gamma } => (
            boundary_generator_simple(*gamma, lattice).map_err(cfg_err)?,
            gamma.abs(),
        ),
        ProfileConfig::ContinuousSplitBulk {
            phase,
            gamma1,
            gamma2,
        } => (
            bulk_generator_split(
                parse_split_phase(phase).map_err(cfg_err)?,
                *gamma1,
                *gamma2,
                lattice,
            )
            .map_err(cfg_err)?,
            gamma1.abs().max(gamma2.abs()),
        ),
        ProfileConfig::ContinuousSplitBoundary {
            pair,
            gamma1,
            gamma2,
        } => (
            boundary_generator_split(
                parse_boundary_pair(pair).map_err(cfg_err)?,
                *gamma1,
                *gamma2,
                lattice,
            )
            .map_err(cfg_err)?,
            gamma1.abs().max(gamma2.abs()),
        ),
        _ => return Err(RunError::Config("profile is not a continuous one".into())),
    };
    Ok((generator, max_rate))
}

fn run_trajectory(config: &ExperimentConfig) -> Result<Trajectory, RunError> {
    let lattice = build_lattice(config)?;
    let state = build_initial_state(config, lattice)?;
    match config.walk_kind {
        WalkKind::DiscreteSimple | WalkKind::DiscreteSplit => {
            let profile = build_discrete_profile(config, lattice)?;
            let n_steps = config
                .timing
                .n_steps
                .ok_or_else(|| RunError::Config("timing.n_steps missing".into()))?;
            let every = config.timing.snapshot_every_steps.unwrap_or(0);
            Ok(evolve_discrete(
                &state,
                &profile,
                n_steps,
                every,
                C64::new(1.0, 0.0),
            ))
        }
        WalkKind::ContinuousSimple | WalkKind::ContinuousSplit => {
            let (generator, max_rate) = build_generator(config, lattice)?;
            let dt = config.timing.dt.unwrap_or_else(|| default_dt(max_rate));
            let t_final = config
                .timing
                .t_final
                .ok_or_else(|| RunError::Config("timing.t_final missing".into()))?;
            let every = config.timing.snapshot_every.unwrap_or(0.0);
            evolve_continuous(&state, &generator, dt, t_final, every)
                .map_err(|e| RunError::Numerical(e.to_string()))
        }
    }
}

/// Run an experiment in memory; deterministic for a fixed config and seed.
pub fn execute(config: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    config.validate().map_err(RunError::Config)?;
    let traj = run_trajectory(config)?;

    let metrics: Vec<SnapshotMetrics> = traj
        .times
        .iter()
        .zip(traj.states.iter())
        .map(|(&t, s)| snapshot_metrics(t, s))
        .collect();
    let widths: Vec<f64> = metrics.iter().map(|m| m.position_std).collect();
    let fit = sigma_fit(&traj.times, &widths);
    let norm_drift = traj.norm_drift();

    let csv = format_csv(&traj);
    let manifest = Manifest {
        config,
        norm_drift,
        sigma_fit: fit,
        norm_trace: traj
            .times
            .iter()
            .zip(traj.norms.iter())
            .map(|(&t, &norm)| NormPoint { t, norm })
            .collect(),
        metrics: &metrics,
    };
    let manifest_json = format_manifest(&manifest)?;

    Ok(RunArtifacts {
        csv,
        manifest_json,
        metrics,
        sigma_fit: fit,
        norm_drift,
    })
}

/// Run and write the CSV and manifest under `outdir`.
pub fn run_to_files(config: &ExperimentConfig, outdir: &Path) -> Result<RunArtifacts, RunError> {
    let artifacts = execute(config)?;
    fs::create_dir_all(outdir)
        .map_err(|e| RunError::Config(format!("cannot create {}: {e}", outdir.display())))?;
    let csv_path = outdir.join(&config.output.csv);
    let manifest_path = outdir.join(&config.output.manifest);
    fs::write(&csv_path, &artifacts.csv)
        .map_err(|e| RunError::Config(format!("cannot write {}: {e}", csv_path.display())))?;
    fs::write(&manifest_path, &artifacts.manifest_json).map_err(|e| {
        RunError::Config(format!("cannot write {}: {e}", manifest_path.display()))
    })?;
    Ok(artifacts)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, RunError> {
    let text = fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text).map_err(RunError::Config)
}
