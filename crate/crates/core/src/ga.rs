//! Binary-encoded genetic algorithm: fixed-length genomes over box bounds,
//! roulette-wheel selection, single-point crossover, per-bit mutation,
//! elitism, and a generational `evolve` loop.
//!
//! RNG draw order inside `evolve` is part of the contract (a seed pins the
//! whole run):
//!
//! 1. initial population: `population_size * P` Bernoulli(0.5) draws;
//! 2. per offspring pair: one uniform for parent A, one for parent B, one
//!    crossover coin; if the coin hits (and P >= 2) one integer draw for the
//!    site; then P mutation uniforms for child 1 and P for child 2 — both
//!    children always consume their mutation draws, even when the second is
//!    discarded because the population is already full.
//!
//! Selection weights are floor-shifted raw fitnesses (`f - min + 1e-12`), so
//! negative fitnesses are admissible and the all-zero wheel cannot occur
//! inside `evolve`; the standalone `select` still guards it by falling back
//! to a uniform pick.

use std::fmt;
use std::str::FromStr;

use crate::bounds::Bounds;
use crate::error::CoreError;
use crate::rng::RngStream;
use crate::vector::VectorN;

/// Fixed-length bit string, most significant bit of each parameter first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self, CoreError> {
        if bits.is_empty() {
            return Err(CoreError::GenomeParse("genome must be non-empty".into()));
        }
        Ok(Self { bits })
    }

    /// Uniformly random genome of length `p`; consumes `p` draws.
    pub fn uniform(p: usize, rng: &mut RngStream) -> Self {
        assert!(p >= 1);
        Self {
            bits: (0..p).map(|_| rng.next_bool(0.5)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of set bits (the OneMax fitness).
    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for Genome {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(CoreError::GenomeParse("empty string".into()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CoreError::GenomeParse(format!(
                    "invalid character '{other}' (expected 0 or 1)"
                ))),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        Genome::from_bits(bits)
    }
}

/// GA settings; see the module docs for the draw-order contract.
#[derive(Debug, Clone)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    /// Per-bit flip probability; the default 0.001 is one mutation per
    /// thousand bit transfers.
    pub mutation_rate: f64,
    pub bits_per_param: Vec<usize>,
    pub bounds: Bounds,
    pub elitism: usize,
    pub seed: u64,
}

impl GaConfig {
    /// Conventional defaults around the given search space.
    pub fn new(bounds: Bounds, bits_per_param: Vec<usize>, seed: u64) -> Self {
        Self {
            population_size: 20,
            generations: 100,
            crossover_prob: 0.9,
            mutation_rate: 0.001,
            bits_per_param,
            bounds,
            elitism: 1,
            seed,
        }
    }

    pub fn genome_length(&self) -> usize {
        self.bits_per_param.iter().sum()
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(CoreError::InvalidConfig(format!(
                "population_size must be even and >= 2, got {}",
                self.population_size
            )));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(CoreError::InvalidConfig(format!(
                "crossover_prob must lie in [0, 1], got {}",
                self.crossover_prob
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(CoreError::InvalidConfig(format!(
                "mutation_rate must lie in [0, 1], got {}",
                self.mutation_rate
            )));
        }
        if self.bits_per_param.is_empty() {
            return Err(CoreError::InvalidConfig(
                "bits_per_param must be non-empty".into(),
            ));
        }
        if self.bits_per_param.iter().any(|&b| b == 0 || b > 32) {
            return Err(CoreError::InvalidConfig(
                "bits_per_param entries must lie in 1..=32".into(),
            ));
        }
        if self.bits_per_param.len() != self.bounds.dims() {
            return Err(CoreError::InvalidConfig(format!(
                "bits_per_param has {} entries but bounds have {} dimensions",
                self.bits_per_param.len(),
                self.bounds.dims()
            )));
        }
        if self.elitism > self.population_size {
            return Err(CoreError::InvalidConfig(format!(
                "elitism {} exceeds population_size {}",
                self.elitism, self.population_size
            )));
        }
        Ok(())
    }
}

/// Binary-encodes `params` over `bounds`: per parameter with B bits the
/// level is `round((v - lo)/(hi - lo) * (2^B - 1))`, written MSB first,
/// fields concatenated in parameter order.
pub fn encode(
    params: &VectorN,
    bounds: &Bounds,
    bits_per_param: &[usize],
) -> Result<Genome, CoreError> {
    if bits_per_param.len() != bounds.dims() || bits_per_param.iter().any(|&b| b == 0 || b > 32) {
        return Err(CoreError::InvalidConfig(
            "bits_per_param must match bounds dimensions, entries in 1..=32".into(),
        ));
    }
    bounds.check(params)?;
    let mut bits = Vec::with_capacity(bits_per_param.iter().sum());
    for (k, &b) in bits_per_param.iter().enumerate() {
        let levels = (1u64 << b) - 1;
        let frac = (params[k] - bounds.lo(k)) / bounds.width(k);
        let level = ((frac * levels as f64).round() as u64).min(levels);
        for i in (0..b).rev() {
            bits.push((level >> i) & 1 == 1);
        }
    }
    Genome::from_bits(bits)
}

/// Inverse of [`encode`]: `v_k = lo + int(bits_k)/(2^B - 1) * (hi - lo)`.
/// The result is clamped into bounds to absorb last-ulp rounding.
pub fn decode(
    g: &Genome,
    bounds: &Bounds,
    bits_per_param: &[usize],
) -> Result<VectorN, CoreError> {
    if bits_per_param.len() != bounds.dims() || bits_per_param.iter().any(|&b| b == 0 || b > 32) {
        return Err(CoreError::InvalidConfig(
            "bits_per_param must match bounds dimensions, entries in 1..=32".into(),
        ));
    }
    let expected: usize = bits_per_param.iter().sum();
    if g.len() != expected {
        return Err(CoreError::GenomeLength {
            expected,
            actual: g.len(),
        });
    }
    let mut values = Vec::with_capacity(bits_per_param.len());
    let mut offset = 0;
    for (k, &b) in bits_per_param.iter().enumerate() {
        let levels = (1u64 << b) - 1;
        let mut int = 0u64;
        for i in 0..b {
            int = (int << 1) | u64::from(g.bit(offset + i));
        }
        offset += b;
        // Multiply before dividing so exact levels (e.g. 10/15 of width 15)
        // decode to exact values.
        values.push(bounds.lo(k) + int as f64 * bounds.width(k) / levels as f64);
    }
    let v = VectorN::new(values)?;
    Ok(bounds.clamp(&v))
}

/// Walks the cumulative roulette wheel for a pre-drawn uniform `u` in
/// `[0, 1)`. Negative weights are treated as zero; a void wheel (total
/// weight zero or non-finite) falls back to a uniform pick, reported in the
/// second component.
fn roulette_with_flag(weights: &[f64], u: f64) -> (usize, bool) {
    assert!(!weights.is_empty(), "selection over an empty population");
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    if !(total > 0.0) || !total.is_finite() {
        let idx = ((u * weights.len() as f64) as usize).min(weights.len() - 1);
        return (idx, true);
    }
    let target = u * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w.max(0.0);
        if target < acc {
            return (i, false);
        }
    }
    (weights.len() - 1, false)
}

/// Roulette-wheel index for a given uniform draw: P(i) proportional to
/// `fitnesses[i]`.
pub fn roulette_index(fitnesses: &[f64], u: f64) -> usize {
    roulette_with_flag(fitnesses, u).0
}

/// Roulette-wheel selection consuming exactly one uniform from `rng`.
/// All-zero total fitness degrades to a uniform pick rather than an error.
pub fn select(fitnesses: &[f64], rng: &mut RngStream) -> usize {
    let u = rng.next_f64();
    roulette_index(fitnesses, u)
}

/// Single-point crossover at site `t` (1-indexed, `1 <= t <= P-1`): children
/// keep positions `1..=t` from their own parent and take `t+1..=P` from the
/// other.
pub fn crossover(x: &Genome, y: &Genome, t: usize) -> Result<(Genome, Genome), CoreError> {
    if x.len() != y.len() {
        return Err(CoreError::GenomeLength {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let p = x.len();
    if t == 0 || t > p - 1 {
        return Err(CoreError::CrossoverSite {
            site: t,
            max: p.saturating_sub(1),
        });
    }
    let mut c1 = x.bits().to_vec();
    let mut c2 = y.bits().to_vec();
    for i in t..p {
        c1[i] = y.bit(i);
        c2[i] = x.bit(i);
    }
    Ok((Genome { bits: c1 }, Genome { bits: c2 }))
}

/// Flips each bit independently with probability `rate`, consuming exactly
/// one uniform per bit.
pub fn mutate(g: &Genome, rate: f64, rng: &mut RngStream) -> Genome {
    assert!(
        (0.0..=1.0).contains(&rate),
        "mutation rate must lie in [0, 1]"
    );
    Genome {
        bits: g
            .bits()
            .iter()
            .map(|&b| if rng.next_f64() < rate { !b } else { b })
            .collect(),
    }
}

/// Best/mean raw fitness of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

/// What `evolve` returns: the champion plus per-generation statistics.
#[derive(Debug, Clone)]
pub struct GaReport {
    pub best_genome: Genome,
    /// `best_genome` decoded over the run's bounds.
    pub best_params: VectorN,
    pub best_fitness: f64,
    /// Entry 0 covers the random initial population.
    pub per_generation: Vec<GenerationStats>,
    /// Evaluations that returned a non-finite value (scored as 0).
    pub non_finite_evaluations: usize,
    /// Times the selection wheel was void and degraded to a uniform pick.
    pub uniform_selection_events: usize,
    pub seed: u64,
}

impl GaReport {
    /// The generic report shape shared with the local optimizers; the
    /// trajectory carries per-generation best fitness.
    pub fn optimizer_report(&self) -> crate::report::OptimizerReport {
        crate::report::OptimizerReport {
            best_point: self.best_params.clone(),
            best_value: self.best_fitness,
            iterations: self.per_generation.len().saturating_sub(1),
            trajectory: Some(
                self.per_generation
                    .iter()
                    .map(|s| (s.generation, s.best))
                    .collect(),
            ),
            iterates: None,
            termination: crate::report::Termination::Converged,
            seed: Some(self.seed),
        }
    }
}

/// Generational GA maximizing `fitness`.
///
/// Non-finite fitness values are scored as 0 and counted in the report.
/// Elites are copied unchanged (no mutation). Ties in the elite ranking are
/// broken by position. The champion is the best raw fitness ever observed.
pub fn evolve<F: FnMut(&Genome) -> f64>(
    mut fitness: F,
    cfg: &GaConfig,
    rng: &mut RngStream,
) -> Result<GaReport, CoreError> {
    cfg.validate()?;
    let p = cfg.genome_length();
    let pop_n = cfg.population_size;
    let mut non_finite = 0usize;
    let mut uniform_events = 0usize;

    let mut population: Vec<Genome> = (0..pop_n).map(|_| Genome::uniform(p, rng)).collect();
    let mut fits = vec![0.0f64; pop_n];
    let mut evaluate = |pop: &[Genome], fits: &mut Vec<f64>, non_finite: &mut usize| {
        fits.clear();
        for g in pop {
            let v = fitness(g);
            if v.is_finite() {
                fits.push(v);
            } else {
                *non_finite += 1;
                fits.push(0.0);
            }
        }
    };
    evaluate(&population, &mut fits, &mut non_finite);

    let stats_of = |generation: usize, fits: &[f64]| GenerationStats {
        generation,
        best: fits.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: fits.iter().sum::<f64>() / fits.len() as f64,
    };
    let argmax = |fits: &[f64]| {
        let mut best = 0;
        for (i, &v) in fits.iter().enumerate() {
            if v > fits[best] {
                best = i;
            }
        }
        best
    };

    let mut per_generation = vec![stats_of(0, &fits)];
    let champion_idx = argmax(&fits);
    let mut champion = (population[champion_idx].clone(), fits[champion_idx]);

    for generation in 1..=cfg.generations {
        let min_fit = fits.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = fits.iter().map(|f| f - min_fit + 1e-12).collect();

        let mut order: Vec<usize> = (0..pop_n).collect();
        order.sort_by(|&a, &b| {
            fits[b]
                .partial_cmp(&fits[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut next: Vec<Genome> = order
            .iter()
            .take(cfg.elitism)
            .map(|&i| population[i].clone())
            .collect();

        while next.len() < pop_n {
            let (i, fb1) = roulette_with_flag(&weights, rng.next_f64());
            let (j, fb2) = roulette_with_flag(&weights, rng.next_f64());
            uniform_events += usize::from(fb1) + usize::from(fb2);
            let (c1, c2) = if rng.next_f64() < cfg.crossover_prob && p >= 2 {
                let t = 1 + rng.next_below(p - 1);
                crossover(&population[i], &population[j], t)?
            } else {
                (population[i].clone(), population[j].clone())
            };
            let c1 = mutate(&c1, cfg.mutation_rate, rng);
            let c2 = mutate(&c2, cfg.mutation_rate, rng);
            next.push(c1);
            if next.len() < pop_n {
                next.push(c2);
            }
        }

        population = next;
        evaluate(&population, &mut fits, &mut non_finite);
        per_generation.push(stats_of(generation, &fits));
        let idx = argmax(&fits);
        if fits[idx] > champion.1 {
            champion = (population[idx].clone(), fits[idx]);
        }
    }

    let best_params = decode(&champion.0, &cfg.bounds, &cfg.bits_per_param)?;
    Ok(GaReport {
        best_genome: champion.0,
        best_params,
        best_fitness: champion.1,
        per_generation,
        non_finite_evaluations: non_finite,
        uniform_selection_events: uniform_events,
        seed: rng.seed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_bounds(dims: usize) -> Bounds {
        Bounds::new(vec![(0.0, 15.0); dims]).unwrap()
    }

    #[test]
    fn encode_hits_spec_examples() {
        let bounds = unit_bounds(1);
        let bits = [4usize];
        let g = |v: f64| {
            encode(&VectorN::new(vec![v]).unwrap(), &bounds, &bits)
                .unwrap()
                .to_string()
        };
        assert_eq!(g(0.0), "0000");
        assert_eq!(g(15.0), "1111");
        assert_eq!(g(10.0), "1010");
    }

    #[test]
    fn decode_hits_spec_examples() {
        let bounds = unit_bounds(1);
        let bits = [4usize];
        let d = |s: &str| {
            decode(&s.parse::<Genome>().unwrap(), &bounds, &bits).unwrap()[0]
        };
        assert_eq!(d("0000"), 0.0);
        assert_eq!(d("1111"), 15.0);
        assert_eq!(d("1010"), 10.0);
    }

    #[test]
    fn encode_rejects_out_of_bounds() {
        let bounds = unit_bounds(1);
        let err = encode(&VectorN::new(vec![16.0]).unwrap(), &bounds, &[4]);
        assert!(matches!(err, Err(CoreError::OutOfBounds { .. })));
    }

    #[test]
    fn decode_rejects_length_mismatch() {
        let bounds = unit_bounds(1);
        let err = decode(&"00001".parse::<Genome>().unwrap(), &bounds, &[4]);
        assert!(matches!(err, Err(CoreError::GenomeLength { .. })));
    }

    #[test]
    fn decode_encode_roundtrip_on_representable_levels() {
        let bounds = Bounds::new(vec![(77.0, 300.0), (5e15, 1e16)]).unwrap();
        let bits = [7usize, 9];
        let mut rng = RngStream::new(4);
        for _ in 0..500 {
            let g = Genome::uniform(16, &mut rng);
            let v = decode(&g, &bounds, &bits).unwrap();
            assert!(bounds.contains(&v));
            let g2 = encode(&v, &bounds, &bits).unwrap();
            assert_eq!(g, g2);
        }
    }

    #[test]
    fn roulette_matches_spec_arithmetic() {
        assert_eq!(roulette_index(&[1.0, 3.0], 0.2), 0);
        assert_eq!(roulette_index(&[1.0, 3.0], 0.5), 1);
        assert_eq!(roulette_index(&[5.0], 0.99), 0);
    }

    #[test]
    fn roulette_all_zero_falls_back_to_uniform() {
        let (idx, fell_back) = roulette_with_flag(&[0.0, 0.0, 0.0, 0.0], 0.6);
        assert!(fell_back);
        assert_eq!(idx, 2);
    }

    #[test]
    fn selection_frequencies_track_fitness_ratios() {
        let fits = [1.0, 2.0, 4.0];
        let mut rng = RngStream::new(2024);
        let n = 100_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[select(&fits, &mut rng)] += 1;
        }
        let expected = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        for (c, e) in counts.iter().zip(expected.iter()) {
            let freq = *c as f64 / n as f64;
            assert!((freq - e).abs() < 0.01, "freq {freq} vs {e}");
        }
    }

    #[test]
    fn crossover_matches_paper_worked_example() {
        let x: Genome = "100111011".parse().unwrap();
        let y: Genome = "001100010".parse().unwrap();
        let (c1, c2) = crossover(&x, &y, 5).unwrap();
        assert_eq!(c1.to_string(), "100110010");
        assert_eq!(c2.to_string(), "001101011");
    }

    #[test]
    fn crossover_boundary_and_errors() {
        let x: Genome = "1111".parse().unwrap();
        let y: Genome = "0000".parse().unwrap();
        let (c1, c2) = crossover(&x, &y, 3).unwrap();
        assert_eq!(c1.to_string(), "1110");
        assert_eq!(c2.to_string(), "0001");
        assert!(matches!(
            crossover(&x, &y, 0),
            Err(CoreError::CrossoverSite { .. })
        ));
        assert!(matches!(
            crossover(&x, &y, 4),
            Err(CoreError::CrossoverSite { .. })
        ));
        let short: Genome = "101".parse().unwrap();
        assert!(matches!(
            crossover(&x, &short, 1),
            Err(CoreError::GenomeLength { .. })
        ));
    }

    #[test]
    fn crossover_identical_parents_reproduce() {
        let x: Genome = "1010110".parse().unwrap();
        let (c1, c2) = crossover(&x, &x.clone(), 4).unwrap();
        assert_eq!(c1, x);
        assert_eq!(c2, x);
    }

    #[test]
    fn mutate_rate_edges() {
        let g: Genome = "101010101".parse().unwrap();
        let mut rng = RngStream::new(5);
        assert_eq!(mutate(&g, 0.0, &mut rng), g);
        assert_eq!(mutate(&g, 1.0, &mut rng).to_string(), "010101010");
    }

    #[test]
    fn mutation_statistics_match_binomial_expectation() {
        let g: Genome = "000000000".parse().unwrap();
        let mut rng = RngStream::new(77);
        let trials = 1_000_000usize;
        let mut flips = 0usize;
        for _ in 0..trials {
            flips += mutate(&g, 0.001, &mut rng).popcount();
        }
        let mean = flips as f64 / trials as f64;
        assert!((mean - 0.009).abs() <= 0.0005, "mean flips {mean}");
    }

    fn onemax_cfg(seed: u64) -> GaConfig {
        GaConfig {
            population_size: 20,
            generations: 100,
            crossover_prob: 0.9,
            mutation_rate: 0.001,
            bits_per_param: vec![16],
            bounds: Bounds::new(vec![(0.0, 65535.0)]).unwrap(),
            elitism: 1,
            seed,
        }
    }

    #[test]
    fn evolve_solves_onemax() {
        let cfg = onemax_cfg(42);
        let mut rng = RngStream::new(cfg.seed);
        let report = evolve(|g| g.popcount() as f64, &cfg, &mut rng).unwrap();
        assert_eq!(report.best_fitness, 16.0);
        assert_eq!(report.best_genome.to_string(), "1111111111111111");
    }

    #[test]
    fn evolve_constant_fitness_stays_constant() {
        let cfg = onemax_cfg(9);
        let mut rng = RngStream::new(cfg.seed);
        let report = evolve(|_| 2.5, &cfg, &mut rng).unwrap();
        for s in &report.per_generation {
            assert_eq!(s.best, 2.5);
            assert_eq!(s.mean, 2.5);
        }
    }

    #[test]
    fn evolve_with_elitism_is_monotone() {
        let cfg = onemax_cfg(7);
        let mut rng = RngStream::new(cfg.seed);
        let report = evolve(|g| g.popcount() as f64, &cfg, &mut rng).unwrap();
        for pair in report.per_generation.windows(2) {
            assert!(
                pair[1].best >= pair[0].best,
                "best fitness dropped: {pair:?}"
            );
        }
    }

    #[test]
    fn evolve_flags_non_finite_fitness() {
        let cfg = onemax_cfg(11);
        let mut rng = RngStream::new(cfg.seed);
        let report = evolve(
            |g| {
                if g.bit(0) {
                    f64::NAN
                } else {
                    g.popcount() as f64
                }
            },
            &cfg,
            &mut rng,
        )
        .unwrap();
        assert!(report.non_finite_evaluations > 0);
        // NaN genomes scored 0, so the champion never starts with a 1 bit.
        assert!(!report.best_genome.bit(0));
    }

    #[test]
    fn evolve_zero_generations_reports_initial_population() {
        let mut cfg = onemax_cfg(3);
        cfg.generations = 0;
        let mut rng = RngStream::new(cfg.seed);
        let report = evolve(|g| g.popcount() as f64, &cfg, &mut rng).unwrap();
        assert_eq!(report.per_generation.len(), 1);
        assert!(report.best_fitness >= 0.0);
    }

    #[test]
    fn evolve_is_deterministic() {
        let cfg = onemax_cfg(1234);
        let run = || {
            let mut rng = RngStream::new(cfg.seed);
            evolve(|g| g.popcount() as f64, &cfg, &mut rng).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.best_genome, b.best_genome);
        assert_eq!(a.best_fitness, b.best_fitness);
        assert_eq!(a.per_generation, b.per_generation);
    }

    #[test]
    fn config_validation_catches_odd_population() {
        let mut cfg = onemax_cfg(1);
        cfg.population_size = 7;
        assert!(cfg.validate().is_err());
        cfg.population_size = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn genome_parse_rejects_garbage() {
        assert!("10x1".parse::<Genome>().is_err());
        assert!("".parse::<Genome>().is_err());
    }
}
