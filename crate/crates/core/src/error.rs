//! Error type shared across the crate.

use thiserror::Error;

use crate::vector::VectorN;

/// Everything that can go wrong in the numeric layer.
///
/// Dimension mismatches in elementwise vector arithmetic are the one
/// exception: those panic (see [`crate::vector::VectorN`]), because they are
/// programming errors rather than data errors.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("vector must have at least one component")]
    EmptyVector,

    #[error("non-finite value in {context}")]
    NonFiniteInput { context: &'static str },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("objective undefined near evaluation point (non-finite energy during finite differencing)")]
    ObjectiveUndefined,

    #[error("direction unbounded: objective still decreasing at step {alpha:.3e}")]
    DirectionUnbounded { alpha: f64 },

    #[error("non-finite energy after {iterations} accepted steps; last valid iterate retained")]
    NonFiniteEnergy {
        last_valid: Box<VectorN>,
        last_value: f64,
        iterations: usize,
    },

    #[error("derivative vanished at x = {at:.6e}")]
    DerivativeVanished { at: f64 },

    #[error("root not bracketed to tolerance in {max_iter} iterations; best |f| = {best_residual:.3e}")]
    RootMaxIter {
        best: f64,
        best_residual: f64,
        max_iter: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bounds require finite lo < hi in every dimension")]
    InvalidBounds,

    #[error("parameter {index} = {value:.6e} outside bounds [{lo:.6e}, {hi:.6e}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("genome length {actual} does not match encoding length {expected}")]
    GenomeLength { expected: usize, actual: usize },

    #[error("crossover site {site} outside [1, {max}]")]
    CrossoverSite { site: usize, max: usize },

    #[error("cutoff not bracketed below {omega_max:.3e} rad/s")]
    CutoffNotFound { omega_max: f64 },

    #[error("coincident atoms: pair ({i}, {j}) closer than {min_dist:.3e}")]
    CoincidentAtoms { i: usize, j: usize, min_dist: f64 },

    #[error("could not place {n} atoms without coincidence after {attempts} attempts")]
    SeedGeometryFailed { n: usize, attempts: usize },

    #[error("oracle cap exceeded: genome length {len} > {cap}")]
    OracleCapExceeded { len: usize, cap: usize },

    #[error("genome parse error: {0}")]
    GenomeParse(String),
}
