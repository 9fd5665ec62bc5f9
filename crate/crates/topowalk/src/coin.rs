//! 2x2 complex matrices acting on the internal coin.

use num_complex::Complex64 as C64;

/// Dense 2x2 complex matrix. Used both for coin operators in position space
/// and for the momentum-space matrices acting on the coin at fixed k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Mat2([[o, z], [z, o]])
    }

    pub fn from_rows(r0: [C64; 2], r1: [C64; 2]) -> Self {
        Mat2([r0, r1])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, z: C64) -> Mat2 {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= z;
            }
        }
        out
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Max-norm deviation of `M^dag M` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Mat2::identity();
        let mut err: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                err = err.max((p.0[i][j] - id.0[i][j]).norm());
            }
        }
        err
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut err: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                err = err.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        err
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Coin-flip operator `T(theta) = [[cos, sin], [sin, -cos]]`, equal to
/// `exp(-i theta Y) Z`. Hermitian and unitary for every angle.
pub fn coin_matrix(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::from_rows([re(c), re(s)], [re(s), re(-c)])
}

/// Real rotation `exp(-i phi Y) = [[cos, -sin], [sin, cos]]`.
pub fn rotation_y(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    Mat2::from_rows([re(c), re(-s)], [re(s), re(c)])
}

/// Diagonal phase `exp(-i phi Z) = diag(e^{-i phi}, e^{i phi})`.
pub fn phase_z(phi: f64) -> Mat2 {
    let z = C64::new(0.0, 0.0);
    Mat2::from_rows(
        [C64::from_polar(1.0, -phi), z],
        [z, C64::from_polar(1.0, phi)],
    )
}

pub fn pauli_x() -> Mat2 {
    let o = re(1.0);
    let z = re(0.0);
    Mat2::from_rows([z, o], [o, z])
}

pub fn pauli_y() -> Mat2 {
    let z = re(0.0);
    Mat2::from_rows([z, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), z])
}

pub fn pauli_z() -> Mat2 {
    let z = re(0.0);
    Mat2::from_rows([re(1.0), z], [z, re(-1.0)])
}
