//! Decoupling transforms for the bulk equations of motion.
//!
//! Each bulk generator admits a linear change of variables to a pair of
//! fields `phi_plus, phi_minus` that evolve independently of each other. The
//! simple-step pair obeys the first-order transport equation
//! `d phi/dt = +- gamma [phi(x+1) - phi(x-1)]`; the split-step pairs obey
//! `d phi/dt = +- i (on-site + nearest-neighbour)` stencils. Which transform
//! pairs with which bulk phase is fixed by the offset of the coin-1
//! component entering the combination; [`variant_for_split`] and
//! [`variant_for_simple`] encode the pairing.
//!
//! Index arithmetic wraps around the window, so the transform is an exact
//! relabeling and the round trip is lossless.

use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};
use crate::generator::{Generator, WalkRates};
use crate::profile::PhaseName;
use crate::state::{LatticeSpec, WalkerState};

/// The available decoupling transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiVariant {
    /// `phi_pm(x) = +- psi0(x) + psi1(x-1)`; pairs with the positive-angle
    /// simple bulk.
    SimplePositive,
    /// `phi_pm(x) = -+ psi0(x) + psi1(x+1)`; pairs with the negative-angle
    /// simple bulk.
    SimpleNegative,
    /// `phi_pm(x) = +- i psi0(x) + psi1(x-1)`; pairs with the third split
    /// phase.
    SplitPrevSite,
    /// `phi_pm(x) = +- i psi0(x) + psi1(x+1)`; pairs with the fourth split
    /// phase.
    SplitNextSite,
    /// `phi_pm(x) = psi0(x) +- i psi1(x)`; pairs with the first and second
    /// split phases, whose equations of motion coincide.
    SplitSameSite,
}

/// Transform that decouples the given simple bulk phase.
pub fn variant_for_simple(phase: crate::generator::SimpleBulkPhase) -> PhiVariant {
    match phase {
        crate::generator::SimpleBulkPhase::ThetaPositive => PhiVariant::SimplePositive,
        crate::generator::SimpleBulkPhase::ThetaNegative => PhiVariant::SimpleNegative,
    }
}

/// Transform that decouples the given split bulk phase.
pub fn variant_for_split(phase: PhaseName) -> Result<PhiVariant> {
    match phase {
        PhaseName::I | PhaseName::II => Ok(PhiVariant::SplitSameSite),
        PhaseName::III => Ok(PhiVariant::SplitPrevSite),
        PhaseName::IV => Ok(PhiVariant::SplitNextSite),
        other => Err(WalkError::InvalidParameter(format!(
            "no split decoupling for phase {other}"
        ))),
    }
}

/// The decoupled field pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoupledField {
    lattice: LatticeSpec,
    plus: Vec<C64>,
    minus: Vec<C64>,
}

impl DecoupledField {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn plus(&self) -> &[C64] {
        &self.plus
    }

    pub fn minus(&self) -> &[C64] {
        &self.minus
    }

    pub fn get_plus(&self, x: i64) -> Option<C64> {
        self.lattice.index_of(x).map(|i| self.plus[i])
    }

    pub fn get_minus(&self, x: i64) -> Option<C64> {
        self.lattice.index_of(x).map(|i| self.minus[i])
    }

    /// Repack as a walker state (plus field in component 0) so that the
    /// banded-generator machinery can act on it.
    pub fn as_state(&self) -> WalkerState {
        let mut s = WalkerState::zero(self.lattice);
        let (p0, p1) = s.components_mut();
        p0.copy_from_slice(&self.plus);
        p1.copy_from_slice(&self.minus);
        s
    }

    pub fn from_state(state: &WalkerState) -> Self {
        DecoupledField {
            lattice: *state.lattice(),
            plus: state.psi0().to_vec(),
            minus: state.psi1().to_vec(),
        }
    }

    pub fn max_abs_diff(&self, other: &DecoupledField) -> f64 {
        self.plus
            .iter()
            .zip(other.plus.iter())
            .chain(self.minus.iter().zip(other.minus.iter()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn wrapped(lattice: &LatticeSpec, field: &[C64], index: usize, dx: i64) -> C64 {
    let n = lattice.n_sites() as i64;
    field[(index as i64 + dx).rem_euclid(n) as usize]
}

/// Forward transform `psi -> phi`.
pub fn phi_transform(state: &WalkerState, variant: PhiVariant) -> DecoupledField {
    let lattice = *state.lattice();
    let n = lattice.n_sites();
    let i_unit = C64::new(0.0, 1.0);
    let mut plus = vec![C64::new(0.0, 0.0); n];
    let mut minus = vec![C64::new(0.0, 0.0); n];
    for idx in 0..n {
        let p0 = state.psi0()[idx];
        let (p, m) = match variant {
            PhiVariant::SimplePositive => {
                let p1 = wrapped(&lattice, state.psi1(), idx, -1);
                (p0 + p1, -p0 + p1)
            }
            PhiVariant::SimpleNegative => {
                let p1 = wrapped(&lattice, state.psi1(), idx, 1);
                (-p0 + p1, p0 + p1)
            }
            PhiVariant::SplitPrevSite => {
                let p1 = wrapped(&lattice, state.psi1(), idx, -1);
                (i_unit * p0 + p1, -i_unit * p0 + p1)
            }
            PhiVariant::SplitNextSite => {
                let p1 = wrapped(&lattice, state.psi1(), idx, 1);
                (i_unit * p0 + p1, -i_unit * p0 + p1)
            }
            PhiVariant::SplitSameSite => {
                let p1 = state.psi1()[idx];
                (p0 + i_unit * p1, p0 - i_unit * p1)
            }
        };
        plus[idx] = p;
        minus[idx] = m;
    }
    DecoupledField {
        lattice,
        plus,
        minus,
    }
}

/// Inverse transform `phi -> psi`; exact inverse of [`phi_transform`].
pub fn phi_inverse(field: &DecoupledField, variant: PhiVariant) -> WalkerState {
    let lattice = field.lattice;
    let n = lattice.n_sites();
    let half = C64::new(0.5, 0.0);
    let half_over_i = C64::new(0.0, -0.5); // 1 / (2i)
    let mut out = WalkerState::zero(lattice);
    {
        let (p0, p1) = out.components_mut();
        for idx in 0..n {
            match variant {
                PhiVariant::SimplePositive => {
                    p0[idx] = half * (field.plus[idx] - field.minus[idx]);
                    p1[idx] = half
                        * (wrapped(&lattice, &field.plus, idx, 1)
                            + wrapped(&lattice, &field.minus, idx, 1));
                }
                PhiVariant::SimpleNegative => {
                    p0[idx] = half * (field.minus[idx] - field.plus[idx]);
                    p1[idx] = half
                        * (wrapped(&lattice, &field.plus, idx, -1)
                            + wrapped(&lattice, &field.minus, idx, -1));
                }
                PhiVariant::SplitPrevSite => {
                    p0[idx] = half_over_i * (field.plus[idx] - field.minus[idx]);
                    p1[idx] = half
                        * (wrapped(&lattice, &field.plus, idx, 1)
                            + wrapped(&lattice, &field.minus, idx, 1));
                }
                PhiVariant::SplitNextSite => {
                    p0[idx] = half_over_i * (field.plus[idx] - field.minus[idx]);
                    p1[idx] = half
                        * (wrapped(&lattice, &field.plus, idx, -1)
                            + wrapped(&lattice, &field.minus, idx, -1));
                }
                PhiVariant::SplitSameSite => {
                    p0[idx] = half * (field.plus[idx] + field.minus[idx]);
                    p1[idx] = half_over_i * (field.plus[idx] - field.minus[idx]);
                }
            }
        }
    }
    out
}

/// Generator of the decoupled equations of motion, acting on the field pair
/// packed as a walker state (plus field in component 0). The two rows never
/// mix.
pub fn decoupled_generator(
    variant: PhiVariant,
    rates: &WalkRates,
    lattice: LatticeSpec,
) -> Result<Generator> {
    rates.validate()?;
    let mut g = Generator::empty_public(lattice);
    match (variant, rates) {
        (PhiVariant::SimplePositive | PhiVariant::SimpleNegative, WalkRates::Simple { gamma }) => {
            for x in lattice.iter_x() {
                g.push_coupling(0, x, 0, 1, C64::new(*gamma, 0.0));
                g.push_coupling(0, x, 0, -1, C64::new(-*gamma, 0.0));
                g.push_coupling(1, x, 1, 1, C64::new(-*gamma, 0.0));
                g.push_coupling(1, x, 1, -1, C64::new(*gamma, 0.0));
            }
        }
        (
            PhiVariant::SplitPrevSite | PhiVariant::SplitNextSite,
            WalkRates::Split { gamma1, gamma2 },
        ) => {
            // On-site rate 2 gamma2, neighbour rate gamma1.
            fill_split_rows(&mut g, lattice, 2.0 * gamma2, *gamma1);
        }
        (PhiVariant::SplitSameSite, WalkRates::Split { gamma1, gamma2 }) => {
            // On-site rate 2 gamma1, neighbour rate gamma2.
            fill_split_rows(&mut g, lattice, 2.0 * gamma1, *gamma2);
        }
        _ => {
            return Err(WalkError::InvalidParameter(
                "rates do not match the transform family".into(),
            ))
        }
    }
    Ok(g)
}

fn fill_split_rows(g: &mut Generator, lattice: LatticeSpec, onsite: f64, neighbour: f64) {
    let i_on = C64::new(0.0, onsite);
    let i_nb = C64::new(0.0, neighbour);
    for x in lattice.iter_x() {
        g.push_coupling(0, x, 0, 0, i_on);
        g.push_coupling(0, x, 0, -1, i_nb);
        g.push_coupling(0, x, 0, 1, i_nb);
        g.push_coupling(1, x, 1, 0, -i_on);
        g.push_coupling(1, x, 1, -1, -i_nb);
        g.push_coupling(1, x, 1, 1, -i_nb);
    }
}

/// Maximum residual of the decoupled equations of motion along a sampled
/// trajectory: centred finite differences of the fields against the stencil
/// right-hand side, over interior snapshots and all sites. Scales with the
/// square of the snapshot spacing.
pub fn decoupled_residual(
    trajectory: &[(f64, DecoupledField)],
    variant: PhiVariant,
    rates: &WalkRates,
) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(WalkError::InvalidParameter(
            "residual needs at least 3 snapshots".into(),
        ));
    }
    let lattice = *trajectory[0].1.lattice();
    let rhs = decoupled_generator(variant, rates, lattice)?;
    let mut max_res: f64 = 0.0;
    for w in trajectory.windows(3) {
        let (t0, ref f0) = w[0];
        let (_, ref f1) = w[1];
        let (t2, ref f2) = w[2];
        let h2 = t2 - t0;
        if h2.is_nan() || h2 <= 0.0 {
            return Err(WalkError::InvalidParameter(
                "snapshots must be strictly increasing in time".into(),
            ));
        }
        let rhs_mid = rhs.apply(&f1.as_state());
        let inv = 1.0 / h2;
        for idx in 0..lattice.n_sites() {
            let d_plus = (f2.plus[idx] - f0.plus[idx]) * inv;
            let d_minus = (f2.minus[idx] - f0.minus[idx]) * inv;
            max_res = max_res.max((d_plus - rhs_mid.psi0()[idx]).norm());
            max_res = max_res.max((d_minus - rhs_mid.psi1()[idx]).norm());
        }
    }
    Ok(max_res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lat() -> LatticeSpec {
        LatticeSpec::periodic(-8, 7).unwrap()
    }

    fn random_state(seed: u64) -> WalkerState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = WalkerState::zero(lat());
        for x in lat().iter_x() {
            for c in 0..2 {
                s.set(
                    x,
                    c,
                    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
                .unwrap();
            }
        }
        s.normalized().unwrap()
    }

    const ALL: [PhiVariant; 5] = [
        PhiVariant::SimplePositive,
        PhiVariant::SimpleNegative,
        PhiVariant::SplitPrevSite,
        PhiVariant::SplitNextSite,
        PhiVariant::SplitSameSite,
    ];

    #[test]
    fn substitution_values() {
        // Unit amplitude on psi0(0): the simple transform gives +-1 at x = 0.
        let s = WalkerState::delta(lat(), 0, 0).unwrap();
        let f = phi_transform(&s, PhiVariant::SimplePositive);
        assert_eq!(f.get_plus(0).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(f.get_minus(0).unwrap(), C64::new(-1.0, 0.0));

        // Unit amplitude on psi1(-1): the previous-site split transform puts
        // 1 into both fields at x = 0.
        let s = WalkerState::delta(lat(), -1, 1).unwrap();
        let f = phi_transform(&s, PhiVariant::SplitPrevSite);
        assert_eq!(f.get_plus(0).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(f.get_minus(0).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn round_trip_is_exact() {
        for (i, variant) in ALL.into_iter().enumerate() {
            let s = random_state(i as u64);
            let back = phi_inverse(&phi_transform(&s, variant), variant);
            assert!(
                back.max_abs_diff(&s) < 1e-12,
                "round trip failed for {variant:?}: {}",
                back.max_abs_diff(&s)
            );
        }
    }

    #[test]
    fn rates_must_match_family() {
        assert!(decoupled_generator(
            PhiVariant::SimplePositive,
            &WalkRates::Split {
                gamma1: 1.0,
                gamma2: 1.0
            },
            lat()
        )
        .is_err());
        assert!(decoupled_generator(
            PhiVariant::SplitSameSite,
            &WalkRates::Simple { gamma: 1.0 },
            lat()
        )
        .is_err());
    }

    #[test]
    fn residual_vanishes_for_constant_zero_field() {
        let zero = DecoupledField::from_state(&WalkerState::zero(lat()));
        let traj: Vec<_> = (0..5).map(|i| (i as f64 * 0.1, zero.clone())).collect();
        let r = decoupled_residual(
            &traj,
            PhiVariant::SimplePositive,
            &WalkRates::Simple { gamma: 1.0 },
        )
        .unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn decoupled_generator_is_anti_hermitian() {
        for (variant, rates) in [
            (
                PhiVariant::SimplePositive,
                WalkRates::Simple { gamma: 0.8 },
            ),
            (
                PhiVariant::SplitPrevSite,
                WalkRates::Split {
                    gamma1: 0.6,
                    gamma2: 0.4,
                },
            ),
            (
                PhiVariant::SplitSameSite,
                WalkRates::Split {
                    gamma1: 0.6,
                    gamma2: 0.4,
                },
            ),
        ] {
            let g = decoupled_generator(variant, &rates, lat()).unwrap();
            assert!(g.anti_hermiticity_error() < 1e-12);
        }
    }
}
