//! Fixed-step fourth-order Runge-Kutta integration of `d psi / dt = G psi`.

use crate::error::{Result, WalkError};
use crate::generator::Generator;
use crate::state::WalkerState;

/// Sampled evolution: snapshot times, states, and the norm at each snapshot.
/// Discrete evolutions reuse this type with the step count as the time axis.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<WalkerState>,
    pub norms: Vec<f64>,
}

impl Trajectory {
    pub fn new() -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            norms: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, state: &WalkerState) {
        self.times.push(t);
        self.norms.push(state.norm_squared());
        self.states.push(state.clone());
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &WalkerState {
        self.states.last().expect("trajectory holds >= 1 snapshot")
    }

    /// Largest |norm(t) - norm(0)| over the recorded snapshots.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.norms.first().copied().unwrap_or(0.0);
        self.norms
            .iter()
            .map(|n| (n - n0).abs())
            .fold(0.0, f64::max)
    }
}

impl Default for Trajectory {
    fn default() -> Self {
        Self::new()
    }
}

fn axpy(out: &mut WalkerState, base: &WalkerState, k: &WalkerState, factor: f64) {
    let (o0, o1) = out.components_mut();
    for (o, (b, kk)) in o0.iter_mut().zip(base.psi0().iter().zip(k.psi0().iter())) {
        *o = b + kk * factor;
    }
    for (o, (b, kk)) in o1.iter_mut().zip(base.psi1().iter().zip(k.psi1().iter())) {
        *o = b + kk * factor;
    }
}

fn rk4_step(
    generator: &Generator,
    state: &WalkerState,
    dt: f64,
    scratch: &mut [WalkerState; 5],
) -> WalkerState {
    let [k1, k2, k3, k4, tmp] = scratch;
    generator.apply_into(state, k1);
    axpy(tmp, state, k1, dt / 2.0);
    generator.apply_into(tmp, k2);
    axpy(tmp, state, k2, dt / 2.0);
    generator.apply_into(tmp, k3);
    axpy(tmp, state, k3, dt);
    generator.apply_into(tmp, k4);

    let mut next = state.clone();
    let (n0, n1) = next.components_mut();
    let sixth = dt / 6.0;
    for i in 0..n0.len() {
        n0[i] += sixth * (k1.psi0()[i] + 2.0 * k2.psi0()[i] + 2.0 * k3.psi0()[i] + k4.psi0()[i]);
        n1[i] += sixth * (k1.psi1()[i] + 2.0 * k2.psi1()[i] + 2.0 * k3.psi1()[i] + k4.psi1()[i]);
    }
    next
}

/// Integrate to `t_final`, sampling every `snapshot_every` time units
/// (snapped to whole integration steps; 0 records only the endpoints). The
/// state is never renormalized, so identically-zero generator rows keep their
/// amplitudes bit-exactly constant.
pub fn evolve_continuous(
    state: &WalkerState,
    generator: &Generator,
    dt: f64,
    t_final: f64,
    snapshot_every: f64,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(WalkError::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(WalkError::InvalidParameter(format!(
            "t_final must be non-negative, got {t_final}"
        )));
    }
    assert_eq!(
        state.lattice(),
        generator.lattice(),
        "state and generator must share a lattice"
    );

    let n_steps = (t_final / dt).round() as usize;
    let snap_stride = if snapshot_every > 0.0 {
        (snapshot_every / dt).round().max(1.0) as usize
    } else {
        0
    };

    let mut traj = Trajectory::new();
    let mut current = state.clone();
    traj.push(0.0, &current);

    let zero = WalkerState::zero(*state.lattice());
    let mut scratch = [
        zero.clone(),
        zero.clone(),
        zero.clone(),
        zero.clone(),
        zero,
    ];

    for step in 1..=n_steps {
        current = rk4_step(generator, &current, dt, &mut scratch);
        if current.has_non_finite() {
            return Err(WalkError::IntegrationFailure {
                t: step as f64 * dt,
                reason: "non-finite amplitude".into(),
            });
        }
        let due = snap_stride != 0 && step % snap_stride == 0;
        if due || step == n_steps {
            traj.push(step as f64 * dt, &current);
        }
    }
    Ok(traj)
}
