//! Position-space step operators in the chiral frame.
//!
//! One step factorizes as coin rotations around local per-site angles
//! interleaved with coin-conditioned shifts; for a spatially varying profile
//! each rotation uses the angle of the site it acts on. The uniform-angle
//! stencils below reduce to
//!
//! ```text
//! psi0(x) <- cos(t)/2 [psi0(x-1) - psi0(x+1)]
//!            - (1+sin t)/2 psi1(x-1) - (1-sin t)/2 psi1(x+1)
//! psi1(x) <- cos(t)/2 [psi1(x-1) - psi1(x+1)]
//!            - (1-sin t)/2 psi0(x-1) - (1+sin t)/2 psi0(x+1)
//! ```
//!
//! for the simple step, and to the six-term split-step stencil with
//! coefficients `cos t1 cos t2 / 2`, `sin t1 sin t2`, `(1 +- sin t1) cos t2 / 2`
//! and `cos t1 sin t2`. The dense oracle in [`crate::dense`] is the ground
//! truth for coefficient placement across a seam.

use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_4;

use crate::profile::{SimpleAngleProfile, SplitAngleProfile, WalkProfile};
use crate::state::{LatticeSpec, WalkerState};

/// Gather the amplitude displaced by `dx` sites, honouring the boundary
/// condition (open edges drop the amplitude).
fn shifted(lattice: &LatticeSpec, field: &[C64], index: usize, dx: i64) -> C64 {
    match lattice.offset_index(index, dx) {
        Some(j) => field[j],
        None => C64::new(0.0, 0.0),
    }
}

/// One simple-step application. Norm-preserving for periodic windows and any
/// angle profile.
pub fn step_simple(state: &WalkerState, profile: &SimpleAngleProfile) -> WalkerState {
    assert_eq!(
        state.lattice(),
        profile.lattice(),
        "state and profile must share a lattice"
    );
    let lattice = *state.lattice();
    let n = lattice.n_sites();

    // Pre-shift rotation by theta/2 + pi/4 at the source site.
    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let a = 0.5 * profile.theta_at_index(i) + FRAC_PI_4;
        let (sa, ca) = a.sin_cos();
        u[i] = ca * state.psi0()[i] - sa * state.psi1()[i];
        v[i] = sa * state.psi0()[i] + ca * state.psi1()[i];
    }

    // Conditioned shift, then the post-shift coin factor at the target site.
    let mut out = WalkerState::zero(lattice);
    {
        let (p0, p1) = out.components_mut();
        for i in 0..n {
            let b = 0.5 * profile.theta_at_index(i) - FRAC_PI_4;
            let (sb, cb) = b.sin_cos();
            let from_left = shifted(&lattice, &u, i, -1);
            let from_right = shifted(&lattice, &v, i, 1);
            p0[i] = cb * from_left + sb * from_right;
            p1[i] = sb * from_left - cb * from_right;
        }
    }
    out
}

/// One split-step application: two coin flips interleaved with the partial
/// shifts of the two components.
pub fn step_split(state: &WalkerState, profile: &SplitAngleProfile) -> WalkerState {
    assert_eq!(
        state.lattice(),
        profile.lattice(),
        "state and profile must share a lattice"
    );
    let lattice = *state.lattice();
    let n = lattice.n_sites();

    let mut u = vec![C64::new(0.0, 0.0); n];
    let mut v = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let a = 0.5 * profile.theta1_at_index(i) + FRAC_PI_4;
        let (sa, ca) = a.sin_cos();
        u[i] = ca * state.psi0()[i] - sa * state.psi1()[i];
        v[i] = sa * state.psi0()[i] + ca * state.psi1()[i];
    }

    // Partial shift of component 0, second coin flip, partial shift of
    // component 1.
    let mut r = vec![C64::new(0.0, 0.0); n];
    let mut s = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let (s2, c2) = profile.theta2_at_index(i).sin_cos();
        let p = shifted(&lattice, &u, i, -1);
        let q = v[i];
        r[i] = c2 * p + s2 * q;
        s[i] = s2 * p - c2 * q;
    }

    let mut out = WalkerState::zero(lattice);
    {
        let (p0, p1) = out.components_mut();
        for i in 0..n {
            let b = 0.5 * profile.theta1_at_index(i) - FRAC_PI_4;
            let (sb, cb) = b.sin_cos();
            let c = r[i];
            let d = shifted(&lattice, &s, i, 1);
            p0[i] = cb * c + sb * d;
            p1[i] = sb * c - cb * d;
        }
    }
    out
}

/// One step of either walk family.
pub fn step(state: &WalkerState, profile: &WalkProfile) -> WalkerState {
    match profile {
        WalkProfile::Simple(p) => step_simple(state, p),
        WalkProfile::Split(p) => step_split(state, p),
    }
}

/// Discrete evolution with snapshots.
///
/// `frame_phase` is multiplied into the state after every completed two-step
/// block; it compensates walks whose two-step block tends to minus the
/// identity in the continuous-time scaling (use 1 where no correction is
/// wanted). Snapshots are taken at step 0, every `snapshot_every` steps
/// (0 means none in between), and at the final step.
pub fn evolve_discrete(
    state: &WalkerState,
    profile: &WalkProfile,
    n_steps: usize,
    snapshot_every: usize,
    frame_phase: C64,
) -> crate::evolve::Trajectory {
    let mut traj = crate::evolve::Trajectory::new();
    let mut current = state.clone();
    traj.push(0.0, &current);
    for step_index in 1..=n_steps {
        current = step(&current, profile);
        if step_index % 2 == 0 && frame_phase != C64::new(1.0, 0.0) {
            current.scale_in_place(frame_phase);
        }
        let due = snapshot_every != 0 && step_index % snapshot_every == 0;
        if due || step_index == n_steps {
            traj.push(step_index as f64, &current);
        }
    }
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::norm_squared;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn lat() -> LatticeSpec {
        LatticeSpec::periodic(-8, 7).unwrap()
    }

    fn random_state(lattice: LatticeSpec, seed: u64) -> WalkerState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = WalkerState::zero(lattice);
        for x in lattice.iter_x() {
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

    #[test]
    fn simple_stencil_theta_zero() {
        // Hand evaluation of the uniform stencil at theta = 0 for a delta
        // input on component 0.
        let profile = SimpleAngleProfile::uniform(lat(), 0.0).unwrap();
        let s = WalkerState::delta(lat(), 0, 0).unwrap();
        let out = step_simple(&s, &profile);
        assert_abs_diff_eq!(out.get(1, 0).unwrap().re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(-1, 0).unwrap().re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(1, 1).unwrap().re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(-1, 1).unwrap().re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(0, 0).unwrap().norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(norm_squared(&out), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn simple_stencil_theta_half_pi() {
        // cos = 0, sin = 1 collapses the stencil to psi1(x) <- -psi0(x+1).
        let profile = SimpleAngleProfile::uniform(lat(), FRAC_PI_2).unwrap();
        let s = WalkerState::delta(lat(), 0, 0).unwrap();
        let out = step_simple(&s, &profile);
        assert_abs_diff_eq!(out.get(-1, 1).unwrap().re, -1.0, epsilon = 1e-14);
        let leftover: f64 = norm_squared(&out) - out.get(-1, 1).unwrap().norm_sqr();
        assert_abs_diff_eq!(leftover, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn split_stencil_both_angles_zero() {
        let profile = SplitAngleProfile::uniform(lat(), 0.0, 0.0).unwrap();
        let s = WalkerState::delta(lat(), 0, 0).unwrap();
        let out = step_split(&s, &profile);
        assert_abs_diff_eq!(out.get(1, 0).unwrap().re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(-1, 0).unwrap().re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(1, 1).unwrap().re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(out.get(-1, 1).unwrap().re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(norm_squared(&out), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn split_stencil_both_angles_half_pi() {
        // All cosine factors vanish; only the on-site sin t1 sin t2 term
        // survives and the step acts as the identity on component 0.
        let profile = SplitAngleProfile::uniform(lat(), FRAC_PI_2, FRAC_PI_2).unwrap();
        let s = WalkerState::delta(lat(), 0, 0).unwrap();
        let out = step_split(&s, &profile);
        assert_abs_diff_eq!(out.get(0, 0).unwrap().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(norm_squared(&out), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn steps_preserve_norm() {
        let simple = SimpleAngleProfile::uniform(lat(), std::f64::consts::FRAC_PI_4).unwrap();
        let split = SplitAngleProfile::uniform(lat(), 0.3, 0.7).unwrap();
        let two_phase = SimpleAngleProfile::two_phase(
            lat(),
            -std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_4,
            0,
        )
        .unwrap();
        for seed in 0..5 {
            let s = random_state(lat(), seed);
            assert_abs_diff_eq!(norm_squared(&step_simple(&s, &simple)), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(norm_squared(&step_split(&s, &split)), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                norm_squared(&step_simple(&s, &two_phase)),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let profile = WalkProfile::Simple(SimpleAngleProfile::uniform(lat(), 0.4).unwrap());
        let s = random_state(lat(), 3);
        let traj = evolve_discrete(&s, &profile, 0, 1, C64::new(1.0, 0.0));
        assert_eq!(traj.len(), 1);
        assert_abs_diff_eq!(traj.states[0].max_abs_diff(&s), 0.0, epsilon = 0.0);
    }

    #[test]
    fn evolve_snapshots_and_norm_accumulation() {
        let profile = WalkProfile::Simple(SimpleAngleProfile::uniform(lat(), 0.9).unwrap());
        let s = random_state(lat(), 11);
        let traj = evolve_discrete(&s, &profile, 20, 4, C64::new(1.0, 0.0));
        assert_eq!(traj.times, vec![0.0, 4.0, 8.0, 12.0, 16.0, 20.0]);
        for n in &traj.norms {
            assert_abs_diff_eq!(*n, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn frame_phase_applied_per_two_step_block() {
        let profile = WalkProfile::Simple(SimpleAngleProfile::uniform(lat(), 0.2).unwrap());
        let s = random_state(lat(), 5);
        let plain = evolve_discrete(&s, &profile, 4, 0, C64::new(1.0, 0.0));
        let phased = evolve_discrete(&s, &profile, 4, 0, C64::new(-1.0, 0.0));
        // Two completed blocks: the states differ by (-1)^2 = +1.
        let a = plain.states.last().unwrap();
        let b = phased.states.last().unwrap();
        assert_abs_diff_eq!(a.max_abs_diff(b), 0.0, epsilon = 1e-15);
        let phased3 = evolve_discrete(&s, &profile, 3, 0, C64::new(-1.0, 0.0));
        let plain3 = evolve_discrete(&s, &profile, 3, 0, C64::new(1.0, 0.0));
        // One completed block inside three steps: overall factor -1.
        let c = plain3.states.last().unwrap().clone().scaled(C64::new(-1.0, 0.0));
        assert_abs_diff_eq!(phased3.states.last().unwrap().max_abs_diff(&c), 0.0, epsilon = 1e-15);
    }
}
