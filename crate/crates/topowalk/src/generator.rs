//! Banded continuous-time generators `d psi / dt = G psi`.
//!
//! Bulk generators exist for the two simple-step phases and the four
//! split-step phases; they are anti-Hermitian under periodic closure, so the
//! exact flow is norm-preserving. Boundary generators stitch two bulk phases
//! together with an explicit block of near-seam rows; the rows that come out
//! identically zero are the topologically protected bound states.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::collections::HashMap;

use crate::error::{Result, WalkError};
use crate::profile::PhaseName;
use crate::state::{LatticeSpec, WalkerState};

/// One coupling in a generator row: the row's time derivative picks up
/// `coeff * psi_{src_component}(x + dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub src_component: usize,
    pub dx: i64,
    pub coeff: C64,
}

/// Walk rates entering the continuous-time scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkRates {
    Simple { gamma: f64 },
    Split { gamma1: f64, gamma2: f64 },
}

impl WalkRates {
    pub fn max_rate(&self) -> f64 {
        match *self {
            WalkRates::Simple { gamma } => gamma.abs(),
            WalkRates::Split { gamma1, gamma2 } => gamma1.abs().max(gamma2.abs()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            WalkRates::Simple { gamma } => gamma.is_finite(),
            WalkRates::Split { gamma1, gamma2 } => gamma1.is_finite() && gamma2.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(WalkError::InvalidParameter("rates must be finite".into()))
        }
    }
}

/// Default fixed integration step for a generator with the given largest rate.
pub fn default_dt(max_rate: f64) -> f64 {
    if max_rate > 0.0 {
        0.01 / max_rate
    } else {
        0.01
    }
}

/// Banded linear operator with per-site, per-component rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    lattice: LatticeSpec,
    // rows[component][site_index] lists the couplings feeding that row.
    rows: [Vec<Vec<Coupling>>; 2],
}

impl Generator {
    fn empty(lattice: LatticeSpec) -> Self {
        let n = lattice.n_sites();
        Generator {
            lattice,
            rows: [vec![Vec::new(); n], vec![Vec::new(); n]],
        }
    }

    pub(crate) fn empty_public(lattice: LatticeSpec) -> Self {
        Self::empty(lattice)
    }

    pub(crate) fn push_coupling(
        &mut self,
        component: usize,
        x: i64,
        src_component: usize,
        dx: i64,
        coeff: C64,
    ) {
        self.push(
            component,
            x,
            Coupling {
                src_component,
                dx,
                coeff,
            },
        );
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    fn push(&mut self, component: usize, x: i64, coupling: Coupling) {
        if coupling.coeff == C64::new(0.0, 0.0) {
            return;
        }
        let idx = self.lattice.index_of(x).expect("row site inside lattice");
        self.rows[component][idx].push(coupling);
    }

    fn set_row(&mut self, component: usize, x: i64, couplings: &[(usize, i64, f64)], scale: f64) {
        for &(src, dx, c) in couplings {
            self.push(
                component,
                x,
                Coupling {
                    src_component: src,
                    dx,
                    coeff: C64::new(scale * c, 0.0),
                },
            );
        }
    }

    pub fn row(&self, component: usize, x: i64) -> &[Coupling] {
        let idx = self.lattice.index_of(x).expect("row site inside lattice");
        &self.rows[component][idx]
    }

    pub fn is_zero_row(&self, component: usize, x: i64) -> bool {
        self.row(component, x).is_empty()
    }

    /// Largest |dx| appearing in any row.
    pub fn bandwidth(&self) -> i64 {
        self.rows
            .iter()
            .flatten()
            .flatten()
            .map(|c| c.dx.abs())
            .max()
            .unwrap_or(0)
    }

    /// Apply the generator: `out = G psi`.
    pub fn apply(&self, state: &WalkerState) -> WalkerState {
        let mut out = WalkerState::zero(self.lattice);
        self.apply_into(state, &mut out);
        out
    }

    pub fn apply_into(&self, state: &WalkerState, out: &mut WalkerState) {
        debug_assert_eq!(state.lattice(), &self.lattice);
        let n = self.lattice.n_sites();
        let fields = [state.psi0(), state.psi1()];
        let mut acc0 = vec![C64::new(0.0, 0.0); n];
        let mut acc1 = vec![C64::new(0.0, 0.0); n];
        for (component, acc) in [&mut acc0, &mut acc1].into_iter().enumerate() {
            for (idx, row) in self.rows[component].iter().enumerate() {
                let mut sum = C64::new(0.0, 0.0);
                for c in row {
                    if let Some(j) = self.lattice.offset_index(idx, c.dx) {
                        sum += c.coeff * fields[c.src_component][j];
                    }
                }
                acc[idx] = sum;
            }
        }
        let (p0, p1) = out.components_mut();
        p0.copy_from_slice(&acc0);
        p1.copy_from_slice(&acc1);
    }

    /// Expand into a dense matrix (site-major, component-minor ordering) for
    /// oracle comparisons. Periodic closure wraps offsets.
    pub fn to_dense(&self) -> Array2<C64> {
        let n = self.lattice.n_sites();
        let mut m = Array2::from_elem((2 * n, 2 * n), C64::new(0.0, 0.0));
        for component in 0..2 {
            for (idx, row) in self.rows[component].iter().enumerate() {
                for c in row {
                    if let Some(j) = self.lattice.offset_index(idx, c.dx) {
                        m[[2 * idx + component, 2 * j + c.src_component]] += c.coeff;
                    }
                }
            }
        }
        m
    }

    /// Max-norm deviation from `G^dag = -G` over all coupling pairs. Offsets
    /// follow the lattice boundary condition: a periodic window wraps them, an
    /// open window drops reads that leave it (the open operator is then a
    /// principal submatrix of the infinite-line one).
    pub fn anti_hermiticity_error(&self) -> f64 {
        let mut entries: HashMap<(usize, i64, usize, i64), C64> = HashMap::new();
        for component in 0..2 {
            for (idx, row) in self.rows[component].iter().enumerate() {
                for c in row {
                    let Some(j) = self.lattice.offset_index(idx, c.dx) else {
                        continue;
                    };
                    *entries
                        .entry((component, idx as i64, c.src_component, j as i64))
                        .or_insert(C64::new(0.0, 0.0)) += c.coeff;
                }
            }
        }
        let mut err: f64 = 0.0;
        for (&(r_comp, r_idx, c_comp, c_idx), &val) in &entries {
            let partner = entries
                .get(&(c_comp, c_idx, r_comp, r_idx))
                .copied()
                .unwrap_or(C64::new(0.0, 0.0));
            err = err.max((val + partner.conj()).norm());
        }
        err
    }
}

/// Which of the two simple-step bulk phases a generator describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleBulkPhase {
    ThetaPositive,
    ThetaNegative,
}

/// The two qualitatively distinct split-step phase boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPair {
    /// Phase III on x >= 0 against phase IV on x < 0.
    ThreeFour,
    /// Phase I on x >= 0 against phase III on x < 0.
    OneThree,
}

// Row tables for the bulk equations of motion, as (src component, dx, coeff)
// with the overall rate factored out.
type RowTable = &'static [(usize, i64, f64)];

const SIMPLE_POS_ROW0: &[(usize, i64, f64)] = &[(1, 0, 1.0), (1, -2, -1.0)];
const SIMPLE_POS_ROW1: &[(usize, i64, f64)] = &[(0, 0, -1.0), (0, 2, 1.0)];
const SIMPLE_NEG_ROW0: &[(usize, i64, f64)] = &[(1, 0, 1.0), (1, 2, -1.0)];
const SIMPLE_NEG_ROW1: &[(usize, i64, f64)] = &[(0, 0, -1.0), (0, -2, 1.0)];

fn simple_bulk_rows(phase: SimpleBulkPhase) -> (RowTable, RowTable) {
    match phase {
        SimpleBulkPhase::ThetaPositive => (SIMPLE_POS_ROW0, SIMPLE_POS_ROW1),
        SimpleBulkPhase::ThetaNegative => (SIMPLE_NEG_ROW0, SIMPLE_NEG_ROW1),
    }
}

/// Bulk generator for a single simple-step phase:
/// `d psi0 / dt = gamma [psi1(x) - psi1(x -+ 2)]`,
/// `d psi1 / dt = gamma [-psi0(x) + psi0(x +- 2)]`
/// (upper signs for the positive-angle phase).
pub fn bulk_generator_simple(
    phase: SimpleBulkPhase,
    gamma: f64,
    lattice: LatticeSpec,
) -> Result<Generator> {
    WalkRates::Simple { gamma }.validate()?;
    let mut g = Generator::empty(lattice);
    let (row0, row1) = simple_bulk_rows(phase);
    for x in lattice.iter_x() {
        g.set_row(0, x, row0, gamma);
        g.set_row(1, x, row1, gamma);
    }
    Ok(g)
}

type OwnedRow = Vec<(usize, i64, f64)>;

fn split_bulk_rows(phase: PhaseName, gamma1: f64, gamma2: f64) -> Result<(OwnedRow, OwnedRow)> {
    let rows = match phase {
        // Phases I and II share the same equations of motion.
        PhaseName::I | PhaseName::II => (
            vec![(1, 0, -2.0 * gamma1), (1, -1, -gamma2), (1, 1, -gamma2)],
            vec![(0, 0, 2.0 * gamma1), (0, -1, gamma2), (0, 1, gamma2)],
        ),
        PhaseName::III => (
            vec![(1, 0, gamma1), (1, -2, gamma1), (1, -1, 2.0 * gamma2)],
            vec![(0, 0, -gamma1), (0, 2, -gamma1), (0, 1, -2.0 * gamma2)],
        ),
        PhaseName::IV => (
            vec![(1, 0, gamma1), (1, 2, gamma1), (1, 1, 2.0 * gamma2)],
            vec![(0, 0, -gamma1), (0, -2, -gamma1), (0, -1, -2.0 * gamma2)],
        ),
        _ => {
            return Err(WalkError::InvalidParameter(format!(
                "split bulk generator needs a split phase, got {phase}"
            )))
        }
    };
    Ok(rows)
}

/// Bulk generator for one split-step phase.
pub fn bulk_generator_split(
    phase: PhaseName,
    gamma1: f64,
    gamma2: f64,
    lattice: LatticeSpec,
) -> Result<Generator> {
    WalkRates::Split { gamma1, gamma2 }.validate()?;
    let (row0, row1) = split_bulk_rows(phase, gamma1, gamma2)?;
    let mut g = Generator::empty(lattice);
    for x in lattice.iter_x() {
        g.set_row(0, x, &row0, 1.0);
        g.set_row(1, x, &row1, 1.0);
    }
    Ok(g)
}

fn require_span(lattice: &LatticeSpec, lo: i64, hi: i64) -> Result<()> {
    if lattice.x_min() > lo || lattice.x_max() < hi {
        return Err(WalkError::LatticeTooSmall {
            needed_lo: lo,
            needed_hi: hi,
        });
    }
    Ok(())
}

/// Generator for the seam between the two simple-step phases.
///
/// Positive-angle bulk rows hold for x >= 2 and negative-angle rows for
/// x <= -3; the eight near-seam rows are explicit. (The bulk sides are fixed
/// by the pairing structure of the seam rows: each seam coupling must have an
/// anti-Hermitian partner in the adjacent bulk row, which puts the
/// positive-angle equations on the right. The four-step block oracle in
/// [`crate::oracle`] confirms every row.) The rows for `psi0(0)` and
/// `psi0(-1)` vanish identically: amplitude placed there is trapped.
pub fn boundary_generator_simple(gamma: f64, lattice: LatticeSpec) -> Result<Generator> {
    WalkRates::Simple { gamma }.validate()?;
    require_span(&lattice, -8, 8)?;
    let mut g = Generator::empty(lattice);
    for x in lattice.iter_x() {
        match x {
            x if x >= 2 => {
                g.set_row(0, x, SIMPLE_POS_ROW0, gamma);
                g.set_row(1, x, SIMPLE_POS_ROW1, gamma);
            }
            1 => {
                g.set_row(0, 1, &[(1, 0, 1.0)], gamma);
                g.set_row(1, 1, &[(0, 0, -1.0), (0, 2, 1.0)], gamma);
            }
            0 => {
                // d psi0(0) / dt = 0: bound state.
                g.set_row(1, 0, &[(0, 2, 1.0)], gamma);
            }
            -1 => {
                // d psi0(-1) / dt = 0: bound state.
                g.set_row(1, -1, &[(0, -2, 1.0)], gamma);
            }
            -2 => {
                g.set_row(0, -2, &[(1, 0, 1.0)], gamma);
                g.set_row(1, -2, &[(0, 0, -1.0), (0, -2, 1.0)], gamma);
            }
            _ => {
                g.set_row(0, x, SIMPLE_NEG_ROW0, gamma);
                g.set_row(1, x, SIMPLE_NEG_ROW1, gamma);
            }
        }
    }
    Ok(g)
}

/// Generator for a split-step phase boundary.
///
/// `ThreeFour`: phase III occupies x >= 0 and phase IV occupies x < 0, so the
/// phase-III bulk rows hold for x >= 2 and the phase-IV rows for x <= -3 with
/// explicit seam rows in between. (The opposite side assignment would break
/// the anti-Hermitian pairing of the printed seam rows; the block oracle
/// confirms the stitching.) Bound rows: `psi0(0)` and `psi0(-1)`.
///
/// `OneThree`: phase I occupies x >= 0 (bulk rows from x >= 1) and phase III
/// occupies x < 0 (bulk rows up to x <= -3). Single bound row: `psi1(-1)`.
pub fn boundary_generator_split(
    pair: BoundaryPair,
    gamma1: f64,
    gamma2: f64,
    lattice: LatticeSpec,
) -> Result<Generator> {
    WalkRates::Split { gamma1, gamma2 }.validate()?;
    require_span(&lattice, -8, 8)?;
    let mut g = Generator::empty(lattice);
    match pair {
        BoundaryPair::ThreeFour => {
            let (iii0, iii1) = split_bulk_rows(PhaseName::III, gamma1, gamma2)?;
            let (iv0, iv1) = split_bulk_rows(PhaseName::IV, gamma1, gamma2)?;
            for x in lattice.iter_x() {
                match x {
                    x if x >= 2 => {
                        g.set_row(0, x, &iii0, 1.0);
                        g.set_row(1, x, &iii1, 1.0);
                    }
                    1 => {
                        g.set_row(0, 1, &[(1, 0, gamma1), (1, -1, 2.0 * gamma2)], 1.0);
                        g.set_row(
                            1,
                            1,
                            &[(0, 0, -gamma1), (0, 2, -gamma1), (0, 1, -2.0 * gamma2)],
                            1.0,
                        );
                    }
                    0 => {
                        // d psi0(0) / dt = 0: bound state.
                        g.set_row(1, 0, &[(0, 2, -gamma1), (0, 1, -2.0 * gamma2)], 1.0);
                    }
                    -1 => {
                        // d psi0(-1) / dt = 0: bound state.
                        g.set_row(1, -1, &[(0, -2, -gamma1), (0, -1, -2.0 * gamma2)], 1.0);
                    }
                    -2 => {
                        g.set_row(0, -2, &[(1, 0, gamma1), (1, 1, 2.0 * gamma2)], 1.0);
                        g.set_row(
                            1,
                            -2,
                            &[(0, 0, -gamma1), (0, -2, -gamma1), (0, -1, -2.0 * gamma2)],
                            1.0,
                        );
                    }
                    _ => {
                        g.set_row(0, x, &iv0, 1.0);
                        g.set_row(1, x, &iv1, 1.0);
                    }
                }
            }
        }
        BoundaryPair::OneThree => {
            let (i0, i1) = split_bulk_rows(PhaseName::I, gamma1, gamma2)?;
            let (iii0, iii1) = split_bulk_rows(PhaseName::III, gamma1, gamma2)?;
            for x in lattice.iter_x() {
                match x {
                    x if x >= 1 => {
                        g.set_row(0, x, &i0, 1.0);
                        g.set_row(1, x, &i1, 1.0);
                    }
                    0 => {
                        g.set_row(0, 0, &[(1, 1, -gamma2)], 1.0);
                        g.set_row(1, 0, &[(0, 1, gamma2)], 1.0);
                    }
                    -1 => {
                        g.set_row(0, -1, &[(1, -2, gamma1), (1, -1, 2.0 * gamma2)], 1.0);
                        // d psi1(-1) / dt = 0: bound state.
                    }
                    -2 => {
                        g.set_row(
                            0,
                            -2,
                            &[(1, -2, gamma1), (1, 0, gamma1), (1, -1, 2.0 * gamma2)],
                            1.0,
                        );
                        g.set_row(1, -2, &[(0, 0, -gamma1), (0, 1, -2.0 * gamma2)], 1.0);
                    }
                    _ => {
                        g.set_row(0, x, &iii0, 1.0);
                        g.set_row(1, x, &iii1, 1.0);
                    }
                }
            }
        }
    }
    Ok(g)
}
