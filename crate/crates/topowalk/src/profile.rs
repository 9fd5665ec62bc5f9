//! Coin-angle profiles and topological phase labels.
//!
//! Profiles are piecewise constant with at most one seam: a single bulk value,
//! or two bulk values meeting at a seam site. The seam convention places the
//! second region on `x >= seam`.

use crate::error::{Result, WalkError};
use crate::state::LatticeSpec;

fn check_angle(name: &str, theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() > std::f64::consts::PI {
        return Err(WalkError::InvalidParameter(format!(
            "{name} must be finite with |angle| <= pi, got {theta}"
        )));
    }
    Ok(())
}

/// Per-site coin angle for the simple-step walk.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleAngleProfile {
    lattice: LatticeSpec,
    theta: Vec<f64>,
}

impl SimpleAngleProfile {
    pub fn uniform(lattice: LatticeSpec, theta: f64) -> Result<Self> {
        check_angle("theta", theta)?;
        Ok(SimpleAngleProfile {
            lattice,
            theta: vec![theta; lattice.n_sites()],
        })
    }

    /// Two bulk regions: `theta_left` for x < seam, `theta_right` for x >= seam.
    pub fn two_phase(
        lattice: LatticeSpec,
        theta_left: f64,
        theta_right: f64,
        seam: i64,
    ) -> Result<Self> {
        check_angle("theta_left", theta_left)?;
        check_angle("theta_right", theta_right)?;
        if !lattice.contains(seam) {
            return Err(WalkError::SiteOutOfRange {
                x: seam,
                x_min: lattice.x_min(),
                x_max: lattice.x_max(),
            });
        }
        let theta = lattice
            .iter_x()
            .map(|x| if x >= seam { theta_right } else { theta_left })
            .collect();
        Ok(SimpleAngleProfile { lattice, theta })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn theta_at_index(&self, index: usize) -> f64 {
        self.theta[index]
    }

    pub fn theta(&self, x: i64) -> f64 {
        self.theta[self.lattice.index_of(x).expect("site inside lattice")]
    }
}

/// Per-site coin angles for the split-step walk.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAngleProfile {
    lattice: LatticeSpec,
    theta1: Vec<f64>,
    theta2: Vec<f64>,
}

impl SplitAngleProfile {
    pub fn uniform(lattice: LatticeSpec, theta1: f64, theta2: f64) -> Result<Self> {
        check_angle("theta1", theta1)?;
        check_angle("theta2", theta2)?;
        let n = lattice.n_sites();
        Ok(SplitAngleProfile {
            lattice,
            theta1: vec![theta1; n],
            theta2: vec![theta2; n],
        })
    }

    /// Two bulk regions with angle pairs `(theta1, theta2)`; the right pair
    /// applies for x >= seam.
    pub fn two_phase(
        lattice: LatticeSpec,
        left: (f64, f64),
        right: (f64, f64),
        seam: i64,
    ) -> Result<Self> {
        check_angle("left theta1", left.0)?;
        check_angle("left theta2", left.1)?;
        check_angle("right theta1", right.0)?;
        check_angle("right theta2", right.1)?;
        if !lattice.contains(seam) {
            return Err(WalkError::SiteOutOfRange {
                x: seam,
                x_min: lattice.x_min(),
                x_max: lattice.x_max(),
            });
        }
        let pick = |x: i64| if x >= seam { right } else { left };
        Ok(SplitAngleProfile {
            lattice,
            theta1: lattice.iter_x().map(|x| pick(x).0).collect(),
            theta2: lattice.iter_x().map(|x| pick(x).1).collect(),
        })
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn theta1_at_index(&self, index: usize) -> f64 {
        self.theta1[index]
    }

    pub fn theta2_at_index(&self, index: usize) -> f64 {
        self.theta2[index]
    }

    pub fn theta1(&self, x: i64) -> f64 {
        self.theta1[self.lattice.index_of(x).expect("site inside lattice")]
    }

    pub fn theta2(&self, x: i64) -> f64 {
        self.theta2[self.lattice.index_of(x).expect("site inside lattice")]
    }
}

/// Either walk family's angle profile.
#[derive(Debug, Clone, PartialEq)]
pub enum WalkProfile {
    Simple(SimpleAngleProfile),
    Split(SplitAngleProfile),
}

impl WalkProfile {
    pub fn lattice(&self) -> &LatticeSpec {
        match self {
            WalkProfile::Simple(p) => p.lattice(),
            WalkProfile::Split(p) => p.lattice(),
        }
    }
}

/// Names of the topological phases: the four split-step phases and the two
/// simple-step phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseName {
    I,
    II,
    III,
    IV,
    SimplePositive,
    SimpleNegative,
}

impl std::fmt::Display for PhaseName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseName::I => "I",
            PhaseName::II => "II",
            PhaseName::III => "III",
            PhaseName::IV => "IV",
            PhaseName::SimplePositive => "simple+",
            PhaseName::SimpleNegative => "simple-",
        };
        write!(f, "{s}")
    }
}

/// A pair of winding numbers together with the phase it names.
///
/// Split-step mapping: I = (1,1), II = (0,0), III = (0,1), IV = (1,0).
/// Simple-step mapping: positive-angle phase = (1,0), negative = (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseLabel {
    nu0: u8,
    nu1: u8,
    name: PhaseName,
}

impl PhaseLabel {
    pub fn from_split_windings(nu0: u8, nu1: u8) -> Result<Self> {
        let name = match (nu0, nu1) {
            (1, 1) => PhaseName::I,
            (0, 0) => PhaseName::II,
            (0, 1) => PhaseName::III,
            (1, 0) => PhaseName::IV,
            _ => {
                return Err(WalkError::InvalidParameter(format!(
                    "winding numbers must be 0 or 1, got ({nu0}, {nu1})"
                )))
            }
        };
        Ok(PhaseLabel { nu0, nu1, name })
    }

    pub fn from_simple_windings(nu0: u8, nu1: u8) -> Result<Self> {
        let name = match (nu0, nu1) {
            (1, 0) => PhaseName::SimplePositive,
            (0, 1) => PhaseName::SimpleNegative,
            _ => {
                return Err(WalkError::InvalidParameter(format!(
                    "simple-step windings must be (1,0) or (0,1), got ({nu0}, {nu1})"
                )))
            }
        };
        Ok(PhaseLabel { nu0, nu1, name })
    }

    pub fn nu0(&self) -> u8 {
        self.nu0
    }

    pub fn nu1(&self) -> u8 {
        self.nu1
    }

    pub fn name(&self) -> PhaseName {
        self.name
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::LatticeSpec;

    #[test]
    fn angle_bounds_enforced() {
        let lat = LatticeSpec::periodic(-8, 8).unwrap();
        assert!(SimpleAngleProfile::uniform(lat, 3.5).is_err());
        assert!(SimpleAngleProfile::uniform(lat, f64::NAN).is_err());
        assert!(SplitAngleProfile::uniform(lat, 0.2, -4.0).is_err());
    }

    #[test]
    fn two_phase_seam_layout() {
        let lat = LatticeSpec::periodic(-8, 8).unwrap();
        let p = SimpleAngleProfile::two_phase(lat, -0.5, 0.5, 0).unwrap();
        assert_eq!(p.theta(-1), -0.5);
        assert_eq!(p.theta(0), 0.5);
        assert_eq!(p.theta(5), 0.5);
        assert!(SimpleAngleProfile::two_phase(lat, -0.5, 0.5, 99).is_err());
    }

    #[test]
    fn split_label_table() {
        assert_eq!(
            PhaseLabel::from_split_windings(1, 1).unwrap().name(),
            PhaseName::I
        );
        assert_eq!(
            PhaseLabel::from_split_windings(0, 0).unwrap().name(),
            PhaseName::II
        );
        assert_eq!(
            PhaseLabel::from_split_windings(0, 1).unwrap().name(),
            PhaseName::III
        );
        assert_eq!(
            PhaseLabel::from_split_windings(1, 0).unwrap().name(),
            PhaseName::IV
        );
        assert!(PhaseLabel::from_split_windings(2, 0).is_err());
    }

    #[test]
    fn simple_label_table() {
        assert_eq!(
            PhaseLabel::from_simple_windings(1, 0).unwrap().name(),
            PhaseName::SimplePositive
        );
        assert_eq!(
            PhaseLabel::from_simple_windings(0, 1).unwrap().name(),
            PhaseName::SimpleNegative
        );
        assert!(PhaseLabel::from_simple_windings(1, 1).is_err());
    }
}
