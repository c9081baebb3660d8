//! Uniform result type returned by every optimizer.

use crate::vector::VectorN;

/// Why an optimizer stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The convergence criterion was met (gradient norm, residual, or the
    /// schedule ran to completion for annealing).
    Converged,
    /// The iteration budget was exhausted first.
    MaxIter,
    /// No acceptable step could be found (e.g. backtracking bottomed out).
    Stalled,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIter => "max_iter",
            Termination::Stalled => "stalled",
        }
    }
}

/// What an optimizer found and how it got there.
#[derive(Debug, Clone)]
pub struct OptimizerReport {
    /// Best point seen over the whole run (not necessarily the final iterate).
    pub best_point: VectorN,
    /// Objective value at `best_point`.
    pub best_value: f64,
    /// Accepted steps (local methods), total proposals (annealing), or
    /// generations (GA).
    pub iterations: usize,
    /// `(iteration, value)` pairs when recording was requested. For methods
    /// that guard their steps (backtracking or a line search) the value is
    /// the tightest certified energy bound at that iterate — equal to the
    /// computed energy everywhere except inside the final rounding plateau —
    /// and is non-increasing. Verbatim dynamics record raw energies.
    pub trajectory: Option<Vec<(usize, f64)>>,
    /// Full iterate history when recording was requested; used by tests that
    /// compare methods iterate-for-iterate.
    pub iterates: Option<Vec<VectorN>>,
    pub termination: Termination,
    /// Seed of the stream that drove the run, for stochastic methods.
    pub seed: Option<u64>,
}
