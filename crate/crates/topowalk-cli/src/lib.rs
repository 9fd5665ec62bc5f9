//! Library surface of the experiment CLI: declarative configs, the runner,
//! byte-stable exports, and parameter sweeps. The `topowalk` binary is a thin
//! wrapper over these.

pub mod config;
pub mod export;
pub mod metrics;
pub mod runner;
pub mod sweep;
