//! Lattice window and two-component walker wavefunctions.
//!
//! The walker lives on a finite window of the integer line, with either
//! periodic or open edges. The internal coin gives two complex amplitude
//! fields `psi0`, `psi1`, stored as separate sequences because the two
//! components evolve by different stencils. Site indexing admits negative
//! positions; a phase boundary conventionally sits at x = 0 with dynamics on
//! both signs.

use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Periodic,
    Open,
}

/// Finite window `[x_min, x_max]` of the integer line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    x_min: i64,
    x_max: i64,
    boundary: BoundaryCondition,
}

impl LatticeSpec {
    /// At least 8 sites are required so that the boundary stencils and the
    /// decoupling transforms always have room to act.
    pub fn new(x_min: i64, x_max: i64, boundary: BoundaryCondition) -> Result<Self> {
        if x_min >= x_max {
            return Err(WalkError::InvalidLattice(format!(
                "x_min = {x_min} must be below x_max = {x_max}"
            )));
        }
        let count = x_max - x_min + 1;
        if count < 8 {
            return Err(WalkError::InvalidLattice(format!(
                "site count {count} below minimum of 8"
            )));
        }
        Ok(LatticeSpec {
            x_min,
            x_max,
            boundary,
        })
    }

    pub fn periodic(x_min: i64, x_max: i64) -> Result<Self> {
        Self::new(x_min, x_max, BoundaryCondition::Periodic)
    }

    pub fn open(x_min: i64, x_max: i64) -> Result<Self> {
        Self::new(x_min, x_max, BoundaryCondition::Open)
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_max
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.boundary
    }

    pub fn n_sites(&self) -> usize {
        (self.x_max - self.x_min + 1) as usize
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    pub fn index_of(&self, x: i64) -> Option<usize> {
        self.contains(x).then(|| (x - self.x_min) as usize)
    }

    pub fn x_at(&self, index: usize) -> i64 {
        self.x_min + index as i64
    }

    pub fn iter_x(&self) -> impl Iterator<Item = i64> {
        self.x_min..=self.x_max
    }

    /// Index reached from `index` by a displacement of `dx` sites, honouring
    /// the boundary condition. `None` means the displacement left an open
    /// window (the amplitude is dropped there).
    pub(crate) fn offset_index(&self, index: usize, dx: i64) -> Option<usize> {
        let n = self.n_sites() as i64;
        let raw = index as i64 + dx;
        match self.boundary {
            BoundaryCondition::Periodic => Some(raw.rem_euclid(n) as usize),
            BoundaryCondition::Open => (raw >= 0 && raw < n).then_some(raw as usize),
        }
    }
}

/// Two-component complex amplitude field over a lattice window.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    lattice: LatticeSpec,
    psi0: Vec<C64>,
    psi1: Vec<C64>,
}

impl WalkerState {
    pub fn zero(lattice: LatticeSpec) -> Self {
        let n = lattice.n_sites();
        WalkerState {
            lattice,
            psi0: vec![C64::new(0.0, 0.0); n],
            psi1: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Unit amplitude on a single site and component.
    pub fn delta(lattice: LatticeSpec, x: i64, component: usize) -> Result<Self> {
        let mut state = WalkerState::zero(lattice);
        state.set(x, component, C64::new(1.0, 0.0))?;
        Ok(state)
    }

    /// Build from explicit `(x, component, amplitude)` entries, unnormalized.
    pub fn from_amplitudes(lattice: LatticeSpec, entries: &[(i64, usize, C64)]) -> Result<Self> {
        let mut state = WalkerState::zero(lattice);
        for &(x, component, amp) in entries {
            let current = state.get(x, component).unwrap_or_default();
            state.set(x, component, current + amp)?;
        }
        Ok(state)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn psi0(&self) -> &[C64] {
        &self.psi0
    }

    pub fn psi1(&self) -> &[C64] {
        &self.psi1
    }

    pub(crate) fn components_mut(&mut self) -> (&mut [C64], &mut [C64]) {
        (&mut self.psi0, &mut self.psi1)
    }

    pub fn get(&self, x: i64, component: usize) -> Option<C64> {
        let idx = self.lattice.index_of(x)?;
        Some(match component {
            0 => self.psi0[idx],
            _ => self.psi1[idx],
        })
    }

    pub fn set(&mut self, x: i64, component: usize, value: C64) -> Result<()> {
        let idx = self
            .lattice
            .index_of(x)
            .ok_or(WalkError::SiteOutOfRange {
                x,
                x_min: self.lattice.x_min,
                x_max: self.lattice.x_max,
            })?;
        match component {
            0 => self.psi0[idx] = value,
            _ => self.psi1[idx] = value,
        }
        Ok(())
    }

    pub fn norm_squared(&self) -> f64 {
        self.psi0
            .iter()
            .chain(self.psi1.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    pub fn scaled(mut self, z: C64) -> Self {
        for a in self.psi0.iter_mut().chain(self.psi1.iter_mut()) {
            *a *= z;
        }
        self
    }

    pub fn scale_in_place(&mut self, z: C64) {
        for a in self.psi0.iter_mut().chain(self.psi1.iter_mut()) {
            *a *= z;
        }
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm_squared();
        if n <= 0.0 {
            return Err(WalkError::InvalidParameter(
                "cannot normalize a zero state".into(),
            ));
        }
        Ok(self.scaled(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// Total probability `|psi0(x)|^2 + |psi1(x)|^2` at one site; zero
    /// outside the window.
    pub fn probability(&self, x: i64) -> f64 {
        match self.lattice.index_of(x) {
            Some(idx) => self.psi0[idx].norm_sqr() + self.psi1[idx].norm_sqr(),
            None => 0.0,
        }
    }

    pub fn site_probabilities(&self) -> Vec<f64> {
        self.psi0
            .iter()
            .zip(self.psi1.iter())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        self.psi0
            .iter()
            .zip(other.psi0.iter())
            .chain(self.psi1.iter().zip(other.psi1.iter()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn has_non_finite(&self) -> bool {
        self.psi0
            .iter()
            .chain(self.psi1.iter())
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
    }
}

/// Total norm `sum_x (|psi0|^2 + |psi1|^2)`.
pub fn norm_squared(state: &WalkerState) -> f64 {
    state.norm_squared()
}

/// Gaussian packet centred on `center` with amplitude width `spread`,
/// component weights applied uniformly, normalized to 1. A zero spread
/// collapses to a single-site state.
pub fn make_packet(
    lattice: LatticeSpec,
    center: i64,
    spread: f64,
    weights: (C64, C64),
) -> Result<WalkerState> {
    if !lattice.contains(center) {
        return Err(WalkError::SiteOutOfRange {
            x: center,
            x_min: lattice.x_min(),
            x_max: lattice.x_max(),
        });
    }
    if spread.is_nan() || spread < 0.0 {
        return Err(WalkError::InvalidParameter(format!(
            "spread must be non-negative, got {spread}"
        )));
    }
    let mut state = WalkerState::zero(lattice);
    if spread == 0.0 {
        state.set(center, 0, weights.0)?;
        state.set(center, 1, weights.1)?;
    } else {
        // |psi|^2 is Gaussian with standard deviation `spread`.
        let denom = 4.0 * spread * spread;
        for x in lattice.iter_x() {
            let d = (x - center) as f64;
            let w = (-d * d / denom).exp();
            state.set(x, 0, weights.0 * w)?;
            state.set(x, 1, weights.1 * w)?;
        }
    }
    state.normalized()
}

/// Probability carried by the sites in `[x_lo, x_hi]`.
pub fn region_probability(state: &WalkerState, x_lo: i64, x_hi: i64) -> Result<f64> {
    if x_lo > x_hi {
        return Err(WalkError::InvalidRange { lo: x_lo, hi: x_hi });
    }
    let lat = state.lattice();
    if !lat.contains(x_lo) || !lat.contains(x_hi) {
        return Err(WalkError::InvalidRange { lo: x_lo, hi: x_hi });
    }
    Ok((x_lo..=x_hi).map(|x| state.probability(x)).sum())
}

/// Mean position weighted by site probability (normalized by total weight).
pub fn position_mean(state: &WalkerState) -> f64 {
    let mut total = 0.0;
    let mut acc = 0.0;
    for x in state.lattice().iter_x() {
        let p = state.probability(x);
        total += p;
        acc += p * x as f64;
    }
    if total > 0.0 {
        acc / total
    } else {
        0.0
    }
}

/// Standard deviation of the site-probability distribution.
pub fn position_std(state: &WalkerState) -> f64 {
    let mean = position_mean(state);
    let mut total = 0.0;
    let mut acc = 0.0;
    for x in state.lattice().iter_x() {
        let p = state.probability(x);
        let d = x as f64 - mean;
        total += p;
        acc += p * d * d;
    }
    if total > 0.0 {
        (acc / total).sqrt()
    } else {
        0.0
    }
}
