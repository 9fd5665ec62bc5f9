//! One-dimensional topological quantum walks on a finite integer lattice.
//!
//! A walker with a two-level internal coin evolves either by discrete unitary
//! steps (a coin flip followed by a coin-conditioned shift, or the split-step
//! variant with two coins and partial shifts) or by the continuous-time
//! generators that emerge when the coin angles are scaled towards their
//! degenerate values. The crate provides:
//!
//! * [`state`]: lattice window, two-component wavefunctions, Gaussian
//!   packets, and probability measurements;
//! * [`profile`]: piecewise-constant coin-angle profiles and the labels of
//!   the topological phases;
//! * [`step`]: position-space step operators in the chiral frame and a
//!   discrete evolver;
//! * [`dense`]: a dense-matrix oracle for the step operators, including the
//!   chiral factorization used to verify the composed form;
//! * [`momentum`]: momentum-space coin matrices and the two-band dispersion;
//! * [`invariants`]: winding-number invariants and phase classification over
//!   the coin-angle plane;
//! * [`generator`]: banded continuous-time generators for every bulk phase
//!   and for the two qualitatively distinct phase boundaries;
//! * [`evolve`]: a fixed-step fourth-order Runge-Kutta integrator;
//! * [`phi`]: the linear transforms that decouple the bulk equations of
//!   motion into counter-propagating fields;
//! * [`oracle`]: extraction of continuous-time generators from the discrete
//!   walk by block expansion and Richardson extrapolation.

pub mod coin;
pub mod dense;
pub mod error;
pub mod evolve;
pub mod generator;
pub mod invariants;
pub mod momentum;
pub mod oracle;
pub mod phi;
pub mod profile;
pub mod state;
pub mod step;

pub use coin::{coin_matrix, Mat2};
pub use error::{Result, WalkError};
pub use evolve::{evolve_continuous, Trajectory};
pub use generator::{
    boundary_generator_simple, boundary_generator_split, bulk_generator_simple,
    bulk_generator_split, BoundaryPair, Generator, SimpleBulkPhase, WalkRates,
};
pub use invariants::{classify_simple, classify_split, phase_diagram, winding_number};
pub use momentum::{dispersion, gc_matrix, wc_matrix, CoinParams, DispersionPoint};
pub use profile::{PhaseLabel, PhaseName, SimpleAngleProfile, SplitAngleProfile, WalkProfile};
pub use state::{
    make_packet, norm_squared, position_mean, position_std, region_probability,
    BoundaryCondition, LatticeSpec, WalkerState,
};
pub use step::{evolve_discrete, step_simple, step_split};

pub use num_complex::Complex64;
