//! Exhaustive genome-space enumeration — the independent reference that GA
//! results are judged against.

use crate::error::CoreError;
use crate::ga::Genome;

/// Hard cap on enumerable genome length (2^24 evaluations).
pub const ORACLE_CAP: usize = 24;

/// Exact search result over the full genome space.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best_genome: Genome,
    pub best_fitness: f64,
    /// Always the full enumeration count, `2^genome_length`.
    pub evaluations: u64,
}

/// Evaluates every bit string of the given length and returns the exact
/// argmax. Enumeration runs in ascending binary value (MSB-first genomes),
/// and only a strictly greater fitness displaces the incumbent — so ties
/// resolve to the lowest binary value. Non-finite fitnesses never win
/// against a finite one.
pub fn brute_force_oracle<F: FnMut(&Genome) -> f64>(
    mut fitness: F,
    genome_length: usize,
) -> Result<OracleResult, CoreError> {
    if genome_length == 0 {
        return Err(CoreError::InvalidConfig(
            "genome length must be at least 1".into(),
        ));
    }
    if genome_length > ORACLE_CAP {
        return Err(CoreError::OracleCapExceeded {
            len: genome_length,
            cap: ORACLE_CAP,
        });
    }
    let total: u64 = 1 << genome_length;
    let genome_of = |v: u64| {
        let bits = (0..genome_length)
            .map(|i| (v >> (genome_length - 1 - i)) & 1 == 1)
            .collect();
        Genome::from_bits(bits).expect("non-empty by construction")
    };
    let mut best_value = 0u64;
    let mut best_fitness = fitness(&genome_of(0));
    for v in 1..total {
        let f = fitness(&genome_of(v));
        if f > best_fitness || (best_fitness.is_nan() && !f.is_nan()) {
            best_value = v;
            best_fitness = f;
        }
    }
    Ok(OracleResult {
        best_genome: genome_of(best_value),
        best_fitness,
        evaluations: total,
    })
}
