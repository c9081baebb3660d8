//! Simulated annealing with a Kirkpatrick-style geometric temperature
//! schedule and Gaussian proposal moves.
//!
//! Draw order per proposal step: one standard Gaussian per coordinate (in
//! coordinate order), then the Metropolis test — which consumes one uniform
//! only for uphill moves (`delta_e > 0`). A seed therefore pins the entire
//! walk.

use crate::bounds::Bounds;
use crate::error::CoreError;
use crate::objective::ObjectiveFunction;
use crate::report::{OptimizerReport, Termination};
use crate::rng::RngStream;
use crate::vector::VectorN;

/// Annealing schedule parameters.
///
/// The ladder runs T, T·c, T·c², … starting at `t_initial`; after each level
/// the temperature is multiplied by `cooling_factor` and the run stops once
/// it would drop to `t_final` or below. `t_final == t_initial` therefore
/// means a single level — a pure Metropolis walk at fixed temperature.
#[derive(Debug, Clone)]
pub struct SaConfig {
    pub t_initial: f64,
    pub t_final: f64,
    pub cooling_factor: f64,
    pub steps_per_temperature: usize,
    /// Proposal standard deviation at `t_initial`; the effective scale
    /// shrinks with temperature as `proposal_scale * T / t_initial`.
    pub proposal_scale: f64,
    pub seed: u64,
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.t_initial.is_finite() && self.t_initial > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "t_initial must be positive and finite, got {}",
                self.t_initial
            )));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "t_final must be positive and finite, got {}",
                self.t_final
            )));
        }
        if self.t_final > self.t_initial {
            return Err(CoreError::InvalidConfig(format!(
                "t_final {} exceeds t_initial {}",
                self.t_final, self.t_initial
            )));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(CoreError::InvalidConfig(format!(
                "cooling_factor must lie in (0, 1), got {}",
                self.cooling_factor
            )));
        }
        if self.steps_per_temperature == 0 {
            return Err(CoreError::InvalidConfig(
                "steps_per_temperature must be >= 1".into(),
            ));
        }
        if !(self.proposal_scale.is_finite() && self.proposal_scale > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "proposal_scale must be positive and finite, got {}",
                self.proposal_scale
            )));
        }
        Ok(())
    }

    /// Problem-adapted defaults: `t_initial` is the sample standard
    /// deviation of the energy over 100 uniform points in `bounds` (1.0 if
    /// that lands at zero or non-finite), `t_final = 1e-4 * t_initial`,
    /// `proposal_scale` is a tenth of the mean bound width. Sampling uses a
    /// stream seeded with `seed`, kept separate from the annealing stream.
    pub fn auto(obj: &dyn ObjectiveFunction, bounds: &Bounds, seed: u64) -> Self {
        let mut rng = RngStream::new(seed);
        let n = 100;
        let mut energies = Vec::with_capacity(n);
        for _ in 0..n {
            let e = obj.energy(&bounds.sample_uniform(&mut rng));
            if e.is_finite() {
                energies.push(e);
            }
        }
        let std = if energies.len() >= 2 {
            let mean = energies.iter().sum::<f64>() / energies.len() as f64;
            let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>()
                / (energies.len() - 1) as f64;
            var.sqrt()
        } else {
            0.0
        };
        let t_initial = if std.is_finite() && std > 0.0 { std } else { 1.0 };
        let mean_width = (0..bounds.dims()).map(|k| bounds.width(k)).sum::<f64>()
            / bounds.dims() as f64;
        Self {
            t_initial,
            t_final: 1e-4 * t_initial,
            cooling_factor: 0.95,
            steps_per_temperature: 100,
            proposal_scale: mean_width / 10.0,
            seed,
        }
    }
}

/// Metropolis acceptance rule: downhill moves (`delta_e <= 0`) are accepted
/// without touching the stream; uphill moves consume one uniform and accept
/// with probability `exp(-delta_e / t)`. A NaN or `+inf` `delta_e` rejects
/// (after the draw), so undefined proposals are naturally discarded.
pub fn metropolis_accept(delta_e: f64, t: f64, rng: &mut RngStream) -> bool {
    assert!(t > 0.0, "temperature must be positive");
    if delta_e <= 0.0 {
        return true;
    }
    rng.next_f64() < (-delta_e / t).exp()
}

/// Simulated annealing over `obj`, starting from `x0`.
///
/// Runs the geometric ladder described on [`SaConfig`]; each level performs
/// `steps_per_temperature` Gaussian-perturbation proposals with standard
/// deviation `proposal_scale * T / t_initial`, judged by
/// [`metropolis_accept`]. The best point ever visited is returned regardless
/// of where the walk ends. `iterations` counts proposals; the trajectory
/// records (proposals so far, current energy) once per temperature level.
pub fn anneal(
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    cfg: &SaConfig,
    rng: &mut RngStream,
) -> Result<OptimizerReport, CoreError> {
    cfg.validate()?;
    if !x0.is_finite() {
        return Err(CoreError::NonFiniteInput {
            context: "anneal starting point",
        });
    }
    if x0.dim() != obj.dimension() {
        return Err(CoreError::DimensionMismatch {
            expected: obj.dimension(),
            actual: x0.dim(),
        });
    }
    let mut x = x0.clone();
    let mut e = obj.energy(&x);
    if !e.is_finite() {
        return Err(CoreError::NonFiniteInput {
            context: "anneal objective at starting point",
        });
    }
    let mut best = (x.clone(), e);
    let mut trajectory = Vec::new();
    let mut steps = 0usize;
    let dims = x.dim();

    let mut t = cfg.t_initial;
    loop {
        let scale = cfg.proposal_scale * t / cfg.t_initial;
        for _ in 0..cfg.steps_per_temperature {
            let perturbed: Vec<f64> = (0..dims)
                .map(|k| x[k] + scale * rng.next_gaussian())
                .collect();
            steps += 1;
            // A perturbation this small cannot produce non-finite
            // coordinates from a finite x, but the energy may still be
            // non-finite; metropolis_accept rejects those via delta_e.
            let candidate = VectorN::new(perturbed)?;
            let e_cand = obj.energy(&candidate);
            if metropolis_accept(e_cand - e, t, rng) {
                x = candidate;
                e = e_cand;
                if e < best.1 {
                    best = (x.clone(), e);
                }
            }
        }
        trajectory.push((steps, e));
        t *= cfg.cooling_factor;
        if t <= cfg.t_final {
            break;
        }
    }

    Ok(OptimizerReport {
        best_point: best.0,
        best_value: best.1,
        iterations: steps,
        trajectory: Some(trajectory),
        iterates: None,
        termination: Termination::Converged,
        seed: Some(cfg.seed),
    })
}
