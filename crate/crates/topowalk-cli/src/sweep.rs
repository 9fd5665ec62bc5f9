//! Parameter sweeps: one independent run per value, outputs namespaced by
//! the swept value.

use std::path::Path;

use crate::config::{ExperimentConfig, InitialStateConfig, ProfileConfig};
use crate::runner::{run_to_files, RunArtifacts, RunError};

/// Apply one named parameter value to a config template.
///
/// Supported names: `R` (rate ratio gamma1/gamma2 of a continuous split
/// profile, keeping gamma2), `gamma`, `gamma1`, `gamma2`, `theta`, `theta1`,
/// `theta2` (uniform discrete profiles), `dt`, and `spread`.
pub fn apply_parameter(
    template: &ExperimentConfig,
    name: &str,
    value: f64,
) -> Result<ExperimentConfig, String> {
    let mut config = template.clone();
    match (name, &mut config.profile) {
        ("R", ProfileConfig::ContinuousSplitBulk { gamma1, gamma2, .. })
        | ("R", ProfileConfig::ContinuousSplitBoundary { gamma1, gamma2, .. }) => {
            *gamma1 = value * *gamma2;
        }
        ("gamma", ProfileConfig::ContinuousSimpleBulk { gamma, .. })
        | ("gamma", ProfileConfig::ContinuousSimpleBoundary { gamma, .. }) => {
            *gamma = value;
        }
        ("gamma1", ProfileConfig::ContinuousSplitBulk { gamma1, .. })
        | ("gamma1", ProfileConfig::ContinuousSplitBoundary { gamma1, .. }) => {
            *gamma1 = value;
        }
        ("gamma2", ProfileConfig::ContinuousSplitBulk { gamma2, .. })
        | ("gamma2", ProfileConfig::ContinuousSplitBoundary { gamma2, .. }) => {
            *gamma2 = value;
        }
        ("theta", ProfileConfig::SimpleUniform { theta }) => {
            *theta = value;
        }
        ("theta1", ProfileConfig::SplitUniform { theta1, .. }) => {
            *theta1 = value;
        }
        ("theta2", ProfileConfig::SplitUniform { theta2, .. }) => {
            *theta2 = value;
        }
        ("dt", _) => {
            config.timing.dt = Some(value);
        }
        ("spread", _) => match &mut config.initial_state {
            InitialStateConfig::Packet { spread, .. } => *spread = value,
            _ => return Err("spread applies to packet initial states only".into()),
        },
        (other, _) => {
            return Err(format!(
                "parameter '{other}' is not applicable to this config"
            ))
        }
    }
    config.validate()?;
    Ok(config)
}

pub struct SweepOutcome {
    pub value: f64,
    pub result: Result<RunArtifacts, RunError>,
}

/// Run the template once per value; children share nothing and write into
/// disjoint subdirectories named `<param>=<value>`.
pub fn sweep(
    template: &ExperimentConfig,
    param: &str,
    values: &[f64],
    outdir: &Path,
) -> Vec<SweepOutcome> {
    values
        .iter()
        .map(|&value| {
            let result = match apply_parameter(template, param, value) {
                Ok(config) => {
                    let child_dir = outdir.join(format!("{param}={value}"));
                    run_to_files(&config, &child_dir)
                }
                Err(e) => Err(RunError::Config(e)),
            };
            SweepOutcome { value, result }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split_boundary_template() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{
                "walk_kind": "continuous_split",
                "profile": { "type": "continuous_split_boundary", "pair": "III_IV",
                             "gamma1": 0.6, "gamma2": 0.6 },
                "lattice": { "x_min": -40, "x_max": 40, "boundary": "open" },
                "initial_state": { "kind": "packet", "center": -0.5, "spread": 1.5,
                                   "weight0": [1.0, 0.0], "weight1": [0.0, 0.0] },
                "timing": { "dt": 0.008, "t_final": 5.0, "snapshot_every": 1.0 },
                "output": { "csv": "out.csv", "manifest": "out.json" }
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn rate_ratio_rescales_gamma1() {
        let swept = apply_parameter(&split_boundary_template(), "R", 2.0).unwrap();
        match swept.profile {
            ProfileConfig::ContinuousSplitBoundary { gamma1, gamma2, .. } => {
                assert_eq!(gamma1, 1.2);
                assert_eq!(gamma2, 0.6);
            }
            _ => panic!("profile type changed"),
        }
    }

    #[test]
    fn inapplicable_parameter_is_rejected() {
        assert!(apply_parameter(&split_boundary_template(), "theta", 0.3).is_err());
        assert!(apply_parameter(&split_boundary_template(), "bogus", 0.3).is_err());
    }
}
