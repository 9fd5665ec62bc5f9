//! Dense-matrix oracle for the step operators.
//!
//! Builds the repeated block `U'` of either walk explicitly, in two
//! independent ways: factor-by-factor composition of coin rotations and
//! shifts, and the chiral factorization `+- F X F^{-1} X` (phase `+i` for the
//! simple step, `-1` for the split step). The two constructions must agree
//! elementwise; the composed form conjugated into the chiral frame is the
//! ground truth for the stencils in [`crate::step`], including coefficient
//! placement across a two-phase seam.
//!
//! Defined for periodic windows of at most 64 sites; identity checks need
//! exactness, not scale.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_4;

use crate::coin::{self, Mat2};
use crate::error::{Result, WalkError};
use crate::profile::{SimpleAngleProfile, SplitAngleProfile, WalkProfile};
use crate::state::{BoundaryCondition, LatticeSpec, WalkerState};

pub const MAX_ORACLE_SITES: usize = 64;

/// Which construction of `U'` to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseForm {
    /// Factor-by-factor composition of the coin rotations and shifts.
    Composed,
    /// The chiral factorization `i F X F^{-1} X` / `-F X F^{-1} X`.
    Chiral,
}

/// Explicit matrix of the repeated block on a periodic window, stored
/// site-major and component-minor.
#[derive(Debug, Clone)]
pub struct DenseStepOperator {
    lattice: LatticeSpec,
    matrix: Array2<C64>,
}

fn zeros(n: usize) -> Array2<C64> {
    Array2::from_elem((2 * n, 2 * n), C64::new(0.0, 0.0))
}

fn idx(site: usize, component: usize) -> usize {
    2 * site + component
}

/// Block-diagonal coin operator with a per-site 2x2 block.
fn coin_blocks(lattice: &LatticeSpec, block: impl Fn(usize) -> Mat2) -> Array2<C64> {
    let n = lattice.n_sites();
    let mut m = zeros(n);
    for site in 0..n {
        let b = block(site);
        for i in 0..2 {
            for j in 0..2 {
                m[[idx(site, i), idx(site, j)]] = b.0[i][j];
            }
        }
    }
    m
}

#[derive(Debug, Clone, Copy)]
enum Shift {
    /// Component 0 advances one site, component 1 stays.
    PartialPlus,
    /// Component 1 retreats one site, component 0 stays.
    PartialMinus,
    /// Inverse of `PartialMinus`.
    PartialMinusInv,
    /// Both components move: 0 forward, 1 backward.
    Full,
}

fn shift_matrix(lattice: &LatticeSpec, kind: Shift) -> Array2<C64> {
    let n = lattice.n_sites();
    let mut m = zeros(n);
    let one = C64::new(1.0, 0.0);
    let wrap = |s: i64| s.rem_euclid(n as i64) as usize;
    for site in 0..n {
        let s = site as i64;
        match kind {
            Shift::PartialPlus => {
                m[[idx(wrap(s + 1), 0), idx(site, 0)]] = one;
                m[[idx(site, 1), idx(site, 1)]] = one;
            }
            Shift::PartialMinus => {
                m[[idx(site, 0), idx(site, 0)]] = one;
                m[[idx(wrap(s - 1), 1), idx(site, 1)]] = one;
            }
            Shift::PartialMinusInv => {
                m[[idx(site, 0), idx(site, 0)]] = one;
                m[[idx(wrap(s + 1), 1), idx(site, 1)]] = one;
            }
            Shift::Full => {
                m[[idx(wrap(s + 1), 0), idx(site, 0)]] = one;
                m[[idx(wrap(s - 1), 1), idx(site, 1)]] = one;
            }
        }
    }
    m
}

fn product(factors: &[&Array2<C64>]) -> Array2<C64> {
    let mut it = factors.iter();
    let first = (*it.next().expect("at least one factor")).clone();
    it.fold(first, |acc, f| acc.dot(*f))
}

pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn identity(dim: usize) -> Array2<C64> {
    let mut m = Array2::from_elem((dim, dim), C64::new(0.0, 0.0));
    for i in 0..dim {
        m[[i, i]] = C64::new(1.0, 0.0);
    }
    m
}

/// Max-norm of `M^dag M - I`.
pub fn unitarity_error(m: &Array2<C64>) -> f64 {
    max_abs_diff(&adjoint(m).dot(m), &identity(m.nrows()))
}

pub fn matrix_power(m: &Array2<C64>, exponent: usize) -> Array2<C64> {
    let mut out = identity(m.nrows());
    for _ in 0..exponent {
        out = out.dot(m);
    }
    out
}

fn check_lattice(lattice: &LatticeSpec) -> Result<()> {
    if lattice.boundary() != BoundaryCondition::Periodic {
        return Err(WalkError::UnsupportedDense(
            "dense oracle is defined for periodic windows only".into(),
        ));
    }
    if lattice.n_sites() > MAX_ORACLE_SITES {
        return Err(WalkError::UnsupportedDense(format!(
            "dense oracle capped at {MAX_ORACLE_SITES} sites, got {}",
            lattice.n_sites()
        )));
    }
    Ok(())
}

fn composed_simple(profile: &SimpleAngleProfile) -> Array2<C64> {
    let lattice = profile.lattice();
    let half = coin_blocks(lattice, |s| coin::rotation_y(0.5 * profile.theta_at_index(s)));
    let z = coin_blocks(lattice, |_| coin::pauli_z());
    let s = shift_matrix(lattice, Shift::Full);
    product(&[&half, &z, &s, &half])
}

fn chiral_simple(profile: &SimpleAngleProfile) -> Array2<C64> {
    let lattice = profile.lattice();
    let half = coin_blocks(lattice, |s| coin::rotation_y(0.5 * profile.theta_at_index(s)));
    let half_inv = coin_blocks(lattice, |s| {
        coin::rotation_y(-0.5 * profile.theta_at_index(s))
    });
    let p = coin_blocks(lattice, |_| coin::phase_z(FRAC_PI_4));
    let p_inv = coin_blocks(lattice, |_| coin::phase_z(-FRAC_PI_4));
    let x = coin_blocks(lattice, |_| coin::pauli_x());
    let s_minus = shift_matrix(lattice, Shift::PartialMinus);
    let s_minus_inv = shift_matrix(lattice, Shift::PartialMinusInv);

    let f = product(&[&half, &p, &s_minus]);
    let f_inv = product(&[&s_minus_inv, &p_inv, &half_inv]);
    product(&[&f, &x, &f_inv, &x]).mapv(|v| v * C64::new(0.0, 1.0))
}

fn composed_split(profile: &SplitAngleProfile) -> Array2<C64> {
    let lattice = profile.lattice();
    let half1 = coin_blocks(lattice, |s| coin::rotation_y(0.5 * profile.theta1_at_index(s)));
    let full2 = coin_blocks(lattice, |s| coin::rotation_y(profile.theta2_at_index(s)));
    let z = coin_blocks(lattice, |_| coin::pauli_z());
    let s_plus = shift_matrix(lattice, Shift::PartialPlus);
    let s_minus = shift_matrix(lattice, Shift::PartialMinus);
    product(&[&half1, &z, &s_minus, &full2, &z, &s_plus, &half1])
}

fn chiral_split(profile: &SplitAngleProfile) -> Array2<C64> {
    let lattice = profile.lattice();
    let half1 = coin_blocks(lattice, |s| coin::rotation_y(0.5 * profile.theta1_at_index(s)));
    let half1_inv = coin_blocks(lattice, |s| {
        coin::rotation_y(-0.5 * profile.theta1_at_index(s))
    });
    let half2 = coin_blocks(lattice, |s| coin::rotation_y(0.5 * profile.theta2_at_index(s)));
    let half2_inv = coin_blocks(lattice, |s| {
        coin::rotation_y(-0.5 * profile.theta2_at_index(s))
    });
    let z = coin_blocks(lattice, |_| coin::pauli_z());
    let x = coin_blocks(lattice, |_| coin::pauli_x());
    let s_minus = shift_matrix(lattice, Shift::PartialMinus);
    let s_minus_inv = shift_matrix(lattice, Shift::PartialMinusInv);

    let f = product(&[&half1, &z, &s_minus, &half2]);
    let f_inv = product(&[&half2_inv, &s_minus_inv, &z, &half1_inv]);
    product(&[&f, &x, &f_inv, &x]).mapv(|v| -v)
}

/// Build the dense `U'` for the given profile.
pub fn build_dense_operator(
    profile: &WalkProfile,
    form: DenseForm,
) -> Result<DenseStepOperator> {
    let lattice = *profile.lattice();
    check_lattice(&lattice)?;
    let matrix = match (profile, form) {
        (WalkProfile::Simple(p), DenseForm::Composed) => composed_simple(p),
        (WalkProfile::Simple(p), DenseForm::Chiral) => chiral_simple(p),
        (WalkProfile::Split(p), DenseForm::Composed) => composed_split(p),
        (WalkProfile::Split(p), DenseForm::Chiral) => chiral_split(p),
    };
    Ok(DenseStepOperator { lattice, matrix })
}

/// The chiral-frame function `F` of the factorization, as a dense matrix.
/// Its momentum action yields the matrix whose first-column entries carry the
/// winding invariants.
pub fn build_dense_f(profile: &WalkProfile) -> Result<Array2<C64>> {
    let lattice = *profile.lattice();
    check_lattice(&lattice)?;
    Ok(match profile {
        WalkProfile::Simple(p) => {
            let half = coin_blocks(&lattice, |s| coin::rotation_y(0.5 * p.theta_at_index(s)));
            let phase = coin_blocks(&lattice, |_| coin::phase_z(FRAC_PI_4));
            let s_minus = shift_matrix(&lattice, Shift::PartialMinus);
            product(&[&half, &phase, &s_minus])
        }
        WalkProfile::Split(p) => {
            let half1 = coin_blocks(&lattice, |s| coin::rotation_y(0.5 * p.theta1_at_index(s)));
            let half2 = coin_blocks(&lattice, |s| coin::rotation_y(0.5 * p.theta2_at_index(s)));
            let z = coin_blocks(&lattice, |_| coin::pauli_z());
            let s_minus = shift_matrix(&lattice, Shift::PartialMinus);
            product(&[&half1, &z, &s_minus, &half2])
        }
    })
}

/// Dense step operator in the walk frame (the frame of the position-space
/// stencils): `W = R(-pi/4) U' R(pi/4)` with the rotation acting on every
/// coin.
pub fn build_dense_walk_frame(profile: &WalkProfile) -> Result<Array2<C64>> {
    let op = build_dense_operator(profile, DenseForm::Composed)?;
    Ok(op.to_walk_frame())
}

impl DenseStepOperator {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &DenseStepOperator) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Conjugate into the frame of the position-space stencils.
    pub fn to_walk_frame(&self) -> Array2<C64> {
        let to = coin_blocks(&self.lattice, |_| coin::rotation_y(-FRAC_PI_4));
        let from = coin_blocks(&self.lattice, |_| coin::rotation_y(FRAC_PI_4));
        product(&[&to, &self.matrix, &from])
    }

    pub fn apply(&self, state: &WalkerState) -> WalkerState {
        apply_matrix(&self.matrix, state)
    }
}

/// Multiply a dense operator into a walker state (site-major ordering).
pub fn apply_matrix(matrix: &Array2<C64>, state: &WalkerState) -> WalkerState {
    let lattice = *state.lattice();
    let n = lattice.n_sites();
    assert_eq!(matrix.nrows(), 2 * n, "operator size matches lattice");
    let mut flat = vec![C64::new(0.0, 0.0); 2 * n];
    for site in 0..n {
        flat[idx(site, 0)] = state.psi0()[site];
        flat[idx(site, 1)] = state.psi1()[site];
    }
    let mut out = WalkerState::zero(lattice);
    {
        let (p0, p1) = out.components_mut();
        for r in 0..2 * n {
            let mut acc = C64::new(0.0, 0.0);
            for c in 0..2 * n {
                acc += matrix[[r, c]] * flat[c];
            }
            if r % 2 == 0 {
                p0[r / 2] = acc;
            } else {
                p1[r / 2] = acc;
            }
        }
    }
    out
}
