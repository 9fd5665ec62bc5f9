//! Declarative experiment configuration.
//!
//! A config is a single JSON document with strict unknown-key rejection, so
//! that an experiment definition is reproducible and diffable. Validation
//! errors carry the offending field; parse errors carry line/column.

use serde::{Deserialize, Serialize};
use topowalk::generator::{BoundaryPair, SimpleBulkPhase};
use topowalk::profile::PhaseName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    DiscreteSimple,
    DiscreteSplit,
    ContinuousSimple,
    ContinuousSplit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    SimpleUniform {
        theta: f64,
    },
    SimpleTwoPhase {
        theta_left: f64,
        theta_right: f64,
        seam: i64,
    },
    SplitUniform {
        theta1: f64,
        theta2: f64,
    },
    SplitTwoPhase {
        left: [f64; 2],
        right: [f64; 2],
        seam: i64,
    },
    ContinuousSimpleBulk {
        phase: String,
        gamma: f64,
    },
    ContinuousSimpleBoundary {
        gamma: f64,
    },
    ContinuousSplitBulk {
        phase: String,
        gamma1: f64,
        gamma2: f64,
    },
    ContinuousSplitBoundary {
        pair: String,
        gamma1: f64,
        gamma2: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub x_min: i64,
    pub x_max: i64,
    /// "open" or "periodic".
    pub boundary: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateConfig {
    /// Gaussian packet; `center` may be fractional (e.g. -0.5 centres the
    /// packet between two sites). Weights are per-component complex pairs.
    Packet {
        center: f64,
        spread: f64,
        weight0: [f64; 2],
        weight1: [f64; 2],
    },
    /// Explicit amplitude list, normalized on construction.
    Amplitudes { entries: Vec<AmplitudeEntry> },
    /// Haar-ish random state from the config seed.
    Random {},
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeEntry {
    pub x: i64,
    pub component: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TimingConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every_steps: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: String,
    pub manifest: String,
}

fn default_seed() -> u64 {
    0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub walk_kind: WalkKind,
    pub profile: ProfileConfig,
    pub lattice: LatticeConfig,
    pub initial_state: InitialStateConfig,
    pub timing: TimingConfig,
    pub output: OutputConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
        config.validate()?;
        Ok(config)
    }

    /// Field-level consistency checks beyond what the schema enforces.
    pub fn validate(&self) -> Result<(), String> {
        let discrete = matches!(self.walk_kind, WalkKind::DiscreteSimple | WalkKind::DiscreteSplit);
        let profile_ok = matches!(
            (self.walk_kind, &self.profile),
            (WalkKind::DiscreteSimple, ProfileConfig::SimpleUniform { .. })
                | (WalkKind::DiscreteSimple, ProfileConfig::SimpleTwoPhase { .. })
                | (WalkKind::DiscreteSplit, ProfileConfig::SplitUniform { .. })
                | (WalkKind::DiscreteSplit, ProfileConfig::SplitTwoPhase { .. })
                | (WalkKind::ContinuousSimple, ProfileConfig::ContinuousSimpleBulk { .. })
                | (WalkKind::ContinuousSimple, ProfileConfig::ContinuousSimpleBoundary { .. })
                | (WalkKind::ContinuousSplit, ProfileConfig::ContinuousSplitBulk { .. })
                | (WalkKind::ContinuousSplit, ProfileConfig::ContinuousSplitBoundary { .. })
        );
        if !profile_ok {
            return Err(format!(
                "profile type does not match walk_kind {:?}",
                self.walk_kind
            ));
        }
        match &self.profile {
            ProfileConfig::ContinuousSimpleBulk { phase, .. } => {
                parse_simple_phase(phase)?;
            }
            ProfileConfig::ContinuousSplitBulk { phase, .. } => {
                parse_split_phase(phase)?;
            }
            ProfileConfig::ContinuousSplitBoundary { pair, .. } => {
                parse_boundary_pair(pair)?;
            }
            _ => {}
        }
        if let ProfileConfig::ContinuousSplitBulk { gamma1, gamma2, .. }
        | ProfileConfig::ContinuousSplitBoundary { gamma1, gamma2, .. } = &self.profile
        {
            if *gamma1 == 0.0 && *gamma2 == 0.0 {
                return Err("profile: at least one rate must be nonzero".into());
            }
        }
        match self.lattice.boundary.as_str() {
            "open" | "periodic" => {}
            other => return Err(format!("lattice.boundary: unknown value '{other}'")),
        }
        if discrete {
            match (self.timing.n_steps, self.timing.t_final) {
                (Some(_), None) => {}
                _ => {
                    return Err(
                        "timing: discrete walks need n_steps (and no t_final)".into()
                    )
                }
            }
        } else {
            match self.timing.t_final {
                Some(t) if t > 0.0 => {}
                _ => return Err("timing: continuous walks need a positive t_final".into()),
            }
            if let Some(dt) = self.timing.dt {
                if dt.is_nan() || dt <= 0.0 {
                    return Err("timing.dt: must be positive".into());
                }
            }
            if self.timing.n_steps.is_some() || self.timing.snapshot_every_steps.is_some() {
                return Err("timing: step-based fields are for discrete walks".into());
            }
        }
        if let InitialStateConfig::Packet { center, spread, .. } = &self.initial_state {
            if spread.is_nan() || *spread < 0.0 {
                return Err("initial_state.spread: must be non-negative".into());
            }
            if *spread == 0.0 && center.fract() != 0.0 {
                return Err("initial_state: zero spread needs an integer center".into());
            }
            let c = center.round() as i64;
            if c < self.lattice.x_min || c > self.lattice.x_max {
                return Err("initial_state.center: outside the lattice window".into());
            }
        }
        Ok(())
    }
}

pub fn parse_simple_phase(name: &str) -> Result<SimpleBulkPhase, String> {
    match name {
        "theta_positive" => Ok(SimpleBulkPhase::ThetaPositive),
        "theta_negative" => Ok(SimpleBulkPhase::ThetaNegative),
        other => Err(format!(
            "profile.phase: expected theta_positive|theta_negative, got '{other}'"
        )),
    }
}

pub fn parse_split_phase(name: &str) -> Result<PhaseName, String> {
    match name {
        "I" => Ok(PhaseName::I),
        "II" => Ok(PhaseName::II),
        "III" => Ok(PhaseName::III),
        "IV" => Ok(PhaseName::IV),
        other => Err(format!("profile.phase: expected I|II|III|IV, got '{other}'")),
    }
}

pub fn parse_boundary_pair(name: &str) -> Result<BoundaryPair, String> {
    match name {
        "III_IV" => Ok(BoundaryPair::ThreeFour),
        "I_III" => Ok(BoundaryPair::OneThree),
        other => Err(format!("profile.pair: expected III_IV|I_III, got '{other}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{
            "walk_kind": "continuous_simple",
            "profile": { "type": "continuous_simple_boundary", "gamma": 1.0 },
            "lattice": { "x_min": -40, "x_max": 40, "boundary": "open" },
            "initial_state": { "kind": "packet", "center": 0, "spread": 0.0,
                               "weight0": [1.0, 0.0], "weight1": [0.0, 0.0] },
            "timing": { "t_final": 25.0, "snapshot_every": 5.0 },
            "output": { "csv": "out.csv", "manifest": "out.json" }
        }"#
        .to_string()
    }

    #[test]
    fn parses_minimal_config() {
        let c = ExperimentConfig::from_json(&minimal()).unwrap();
        assert_eq!(c.seed, 0);
        assert!(matches!(c.walk_kind, WalkKind::ContinuousSimple));
    }

    #[test]
    fn rejects_unknown_keys_with_field_name() {
        let bad = minimal().replace("\"seed\"", "\"sneed\"");
        let bad = bad.replace(
            "\"t_final\": 25.0",
            "\"t_final\": 25.0, \"tfinal_typo\": 1.0",
        );
        let err = ExperimentConfig::from_json(&bad).unwrap_err();
        assert!(err.contains("tfinal_typo"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn rejects_mismatched_profile() {
        let bad = minimal().replace("continuous_simple\"", "continuous_split\"");
        let err = ExperimentConfig::from_json(&bad).unwrap_err();
        assert!(err.contains("profile"), "{err}");
    }

    #[test]
    fn rejects_bad_timing() {
        let bad = minimal().replace("\"t_final\": 25.0", "\"t_final\": -1.0");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }
}
