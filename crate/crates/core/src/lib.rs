//! Numerical optimization toolkit: deterministic local and global minimizers
//! over a small vector/objective layer, plus two applications — a quantum-well
//! device response surrogate tuned by a genetic algorithm, and Lennard-Jones
//! cluster relaxation.
//!
//! Everything is seeded and single-threaded: the same inputs produce the same
//! bytes on every run, which the test suite and the CLI lean on heavily.

pub mod bounds;
pub mod error;
pub mod ga;
pub mod linesearch;
pub mod ljcluster;
pub mod localopt;
pub mod objective;
pub mod objectives;
pub mod oracle;
pub mod qwdevice;
pub mod report;
pub mod rng;
pub mod sa;
pub mod vector;

pub use bounds::Bounds;
pub use error::CoreError;
pub use ga::{Genome, GaConfig, GaReport};
pub use objective::ObjectiveFunction;
pub use report::{OptimizerReport, Termination};
pub use rng::RngStream;
pub use vector::{SquareMatrix, VectorN};
