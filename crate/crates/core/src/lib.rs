//! Exact simulation of the PXP quantum cellular automaton on the
//! Fibonacci-constrained periodic chain.

pub mod basis;
pub mod classical;
pub mod error;
pub mod evolve;

pub use basis::{build_basis, FibonacciBasis, SpinConfig};
pub use classical::{classical_step, cycle_eigenstate, find_cycles, NamedState};
pub use error::{Error, Result};
pub use evolve::{Propagator, StateVector, StepParams, Trajectory};
pub mod diagnostics;
pub mod harness;
pub mod parallel;
pub mod quadrature;
pub mod quasiparticle;

pub use harness::{run_scenario, ExperimentConfig, Scenario};
pub use parallel::Execution;
