//! Momentum-space coin matrices and the two-band dispersion.
//!
//! On a uniform profile the walk is diagonal in momentum. Plane waves carry
//! phase `e^{-ikx}`, so the shifts act on the coin as
//! `L^{+-} -> e^{+-ik}`. `W_c(k)` is the momentum block of the step operator
//! in the walk frame; `G_c(k)` is the momentum block of the chiral function
//! `F` in the same frame, whose first-column entries wind around the origin
//! as k sweeps the zone and carry the topological invariants.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::coin::{self, Mat2};

/// Uniform coin angles of one walk family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinParams {
    Simple { theta: f64 },
    Split { theta1: f64, theta2: f64 },
}

fn diag(a: C64, b: C64) -> Mat2 {
    Mat2::from_rows([a, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), b])
}

fn e(phi: f64) -> C64 {
    C64::from_polar(1.0, phi)
}

/// `beta_0(k)`: the real part of the split-step momentum block that controls
/// the dispersion. Even in k.
pub fn beta0(theta1: f64, theta2: f64, k: f64) -> f64 {
    k.cos() * theta1.cos() * theta2.cos() + theta1.sin() * theta2.sin()
}

/// Momentum block of the step operator in the walk frame (closed form).
///
/// Simple step: `[[i sin k cos t, -cos k - i sin k sin t],
/// [-cos k + i sin k sin t, i sin k cos t]]`, determinant -1.
/// Split step: `[[b0, b1], [-conj(b1), b0]]` with determinant +1.
pub fn wc_matrix(params: &CoinParams, k: f64) -> Mat2 {
    match *params {
        CoinParams::Simple { theta } => {
            let (sk, ck) = k.sin_cos();
            let (st, ct) = theta.sin_cos();
            let d = C64::new(0.0, sk * ct);
            Mat2::from_rows(
                [d, C64::new(-ck, -sk * st)],
                [C64::new(-ck, sk * st), d],
            )
        }
        CoinParams::Split { theta1, theta2 } => {
            let (sk, ck) = k.sin_cos();
            let (s1, c1) = theta1.sin_cos();
            let (s2, c2) = theta2.sin_cos();
            let b0 = C64::new(ck * c1 * c2 + s1 * s2, 0.0);
            let b1 = C64::new(-ck * s1 * c2 + c1 * s2, -sk * c2);
            Mat2::from_rows([b0, b1], [-b1.conj(), b0])
        }
    }
}

/// Momentum block of the step operator built from the factor decomposition
/// (coin rotations and shift phases), for cross-checking the closed form.
pub fn wc_matrix_from_factors(params: &CoinParams, k: f64) -> Mat2 {
    let frame_out = coin::rotation_y(-FRAC_PI_4);
    let frame_in = coin::rotation_y(FRAC_PI_4);
    let u = match *params {
        CoinParams::Simple { theta } => {
            let half = coin::rotation_y(0.5 * theta);
            let shift = diag(e(k), e(-k));
            half.mul(&coin::pauli_z()).mul(&shift).mul(&half)
        }
        CoinParams::Split { theta1, theta2 } => {
            let half1 = coin::rotation_y(0.5 * theta1);
            let full2 = coin::rotation_y(theta2);
            let s_minus = diag(C64::new(1.0, 0.0), e(-k));
            let s_plus = diag(e(k), C64::new(1.0, 0.0));
            half1
                .mul(&coin::pauli_z())
                .mul(&s_minus)
                .mul(&full2)
                .mul(&coin::pauli_z())
                .mul(&s_plus)
                .mul(&half1)
        }
    };
    frame_out.mul(&u).mul(&frame_in)
}

/// Momentum block of the chiral function `F` in the walk frame. The winding
/// of its first-column entries `<alpha|G_c|0>` over the zone classifies the
/// phase.
pub fn gc_matrix(params: &CoinParams, k: f64) -> Mat2 {
    let frame_out = coin::rotation_y(-FRAC_PI_4);
    let frame_in = coin::rotation_y(FRAC_PI_4);
    let f = match *params {
        CoinParams::Simple { theta } => {
            let half = coin::rotation_y(0.5 * theta);
            let s_minus = diag(C64::new(1.0, 0.0), e(-k));
            half.mul(&coin::phase_z(FRAC_PI_4)).mul(&s_minus)
        }
        CoinParams::Split { theta1, theta2 } => {
            let half1 = coin::rotation_y(0.5 * theta1);
            let half2 = coin::rotation_y(0.5 * theta2);
            let s_minus = diag(C64::new(1.0, 0.0), e(-k));
            half1.mul(&coin::pauli_z()).mul(&s_minus).mul(&half2)
        }
    };
    frame_out.mul(&f).mul(&frame_in)
}

/// Quasi-energies of the two bands at one momentum, `e^{-i omega(k)}` being
/// the eigenvalues of `W_c(k)`. Principal values in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

fn principal(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    // Map the seam to +pi so the degenerate band edge reads pi, not -pi.
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Closed-form dispersion.
///
/// Simple step: `e^{-i omega_pm} = i cos t sin k -+ sqrt(1 - cos^2 t sin^2 k)`.
/// Split step: `e^{-i omega_pm} = b0 -+ i sqrt(1 - b0^2)`.
pub fn dispersion(params: &CoinParams, k: f64) -> DispersionPoint {
    let (lambda_plus, lambda_minus) = match *params {
        CoinParams::Simple { theta } => {
            let x = theta.cos() * k.sin();
            let root = (1.0 - x * x).max(0.0).sqrt();
            (C64::new(-root, x), C64::new(root, x))
        }
        CoinParams::Split { theta1, theta2 } => {
            let b0 = beta0(theta1, theta2, k);
            let root = (1.0 - b0 * b0).max(0.0).sqrt();
            (C64::new(b0, -root), C64::new(b0, root))
        }
    };
    DispersionPoint {
        k,
        omega_plus: principal(-lambda_plus.arg()),
        omega_minus: principal(-lambda_minus.arg()),
    }
}

/// Uniform momentum grid over `(-pi, pi]`.
pub fn momentum_grid(n_k: usize) -> Vec<f64> {
    (1..=n_k)
        .map(|j| -PI + 2.0 * PI * j as f64 / n_k as f64)
        .collect()
}
