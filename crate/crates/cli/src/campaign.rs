//! Campaign execution: builds the configured objective, runs the requested
//! algorithm, and writes the artifact set — CSV data, an XYZ geometry for
//! cluster runs, and a JSON manifest that records everything needed to
//! reproduce the files byte for byte.
//!
//! Error contract: configuration problems surface as
//! [`CampaignError::Config`] (exit 2) before real work starts; numeric
//! breakdowns mid-run surface as [`CampaignError::Numeric`] (exit 3) and
//! leave the artifacts written so far in place, plus a manifest carrying the
//! error message.

use serde_json::{json, Value};

use qwopt_core::error::CoreError;
use qwopt_core::ga;
use qwopt_core::ljcluster::{self, ClusterConfig, LjPotential};
use qwopt_core::localopt::{
    conjugate_gradient, damped_newtonian, quasi_newton, steepest_descent, LocalOptConfig,
};
use qwopt_core::objective::{finite_diff_gradient, finite_diff_gradient_auto};
use qwopt_core::objectives::{Quadratic, Rosenbrock, TiltedDoubleWell};
use qwopt_core::oracle::brute_force_oracle;
use qwopt_core::qwdevice::{
    cutoff_frequency, device_fitness, sweep_optimize, BiasCondition, DeviceParams,
    DrudeSurrogate, MaterialConstants,
};
use qwopt_core::sa::{anneal, SaConfig};
use qwopt_core::{
    Bounds, GaConfig, Genome, ObjectiveFunction, OptimizerReport, RngStream, VectorN,
};

use crate::config::{CampaignConfig, GeometryKind, MethodKind, ObjectiveKind, TaskKind};
use crate::emit::{fmt_f64, json_pretty, write_file, Csv};

const MANIFEST: &str = "manifest.json";
const TRAJECTORY: &str = "trajectory.csv";
const GENERATIONS: &str = "generations.csv";
const SWEEP: &str = "sweep.csv";
const ORACLE: &str = "oracle.csv";
const GRADCHECK: &str = "gradcheck.csv";
const FINAL_XYZ: &str = "final.xyz";

/// Largest acceptable mismatch between analytic forces and central
/// differences before `gradcheck` reports a numeric failure.
const GRADCHECK_TOL: f64 = 1e-4;

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    /// The campaign never made sense; nothing was computed. Exit 2.
    #[error("{0}")]
    Config(String),
    /// The run itself broke down numerically. Exit 3; partial artifacts
    /// stay on disk.
    #[error("{0}")]
    Numeric(String),
}

impl CampaignError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CampaignError::Config(_) => 2,
            CampaignError::Numeric(_) => 3,
        }
    }
}

impl From<CoreError> for CampaignError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            EmptyVector
            | DimensionMismatch { .. }
            | InvalidConfig(_)
            | InvalidBounds
            | OutOfBounds { .. }
            | GenomeLength { .. }
            | CrossoverSite { .. }
            | OracleCapExceeded { .. }
            | GenomeParse(_) => CampaignError::Config(e.to_string()),
            NonFiniteInput { .. }
            | ObjectiveUndefined
            | DirectionUnbounded { .. }
            | NonFiniteEnergy { .. }
            | DerivativeVanished { .. }
            | RootMaxIter { .. }
            | CutoffNotFound { .. }
            | CoincidentAtoms { .. }
            | SeedGeometryFailed { .. } => CampaignError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct CampaignOutcome {
    /// Files written into the output directory, manifest last.
    pub artifacts: Vec<String>,
    /// One-line human summary for stdout.
    pub summary: String,
}

struct TaskOutput {
    /// Runtime-resolved configuration (start point, calibrated schedule,
    /// sampling box) merged into the manifest's `config` block.
    config_extra: serde_json::Map<String, Value>,
    result: Value,
    summary: String,
    /// A failure detected *after* the artifacts were written (failed sweep
    /// rows, a gradient check over tolerance): the manifest records both the
    /// result and the error, and the campaign exits 3.
    failure: Option<String>,
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome, CampaignError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| {
        CampaignError::Config(format!(
            "cannot create output directory {}: {e}",
            cfg.out.display()
        ))
    })?;
    let mut artifacts: Vec<String> = Vec::new();

    let run = match cfg.task {
        TaskKind::Optimize => run_optimize(cfg, &mut artifacts),
        TaskKind::Anneal => run_anneal(cfg, &mut artifacts),
        TaskKind::Evolve => run_evolve(cfg, &mut artifacts),
        TaskKind::Sweep => run_sweep(cfg, &mut artifacts),
        TaskKind::Oracle => run_oracle(cfg, &mut artifacts),
        TaskKind::LjMin => run_ljmin(cfg, &mut artifacts),
        TaskKind::GradCheck => run_gradcheck(cfg, &mut artifacts),
    };

    match run {
        Ok(out) => {
            write_manifest(
                cfg,
                &artifacts,
                Some(&out.config_extra),
                Some(&out.result),
                out.failure.as_deref(),
            )?;
            let mut artifacts = artifacts;
            artifacts.push(MANIFEST.into());
            match out.failure {
                None => Ok(CampaignOutcome {
                    artifacts,
                    summary: out.summary,
                }),
                Some(msg) => Err(CampaignError::Numeric(msg)),
            }
        }
        Err(e) => {
            // Best effort: preserve partial artifacts and record what broke.
            // The original error wins over any manifest write failure.
            let _ = write_manifest(cfg, &artifacts, None, None, Some(&e.to_string()));
            Err(e)
        }
    }
}

// --- manifest -------------------------------------------------------------

fn write_manifest(
    cfg: &CampaignConfig,
    artifacts: &[String],
    extra: Option<&serde_json::Map<String, Value>>,
    result: Option<&Value>,
    error: Option<&str>,
) -> Result<(), CampaignError> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("qwopt"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("task".into(), json!(cfg.task.as_str()));
    m.insert("objective".into(), json!(cfg.objective.as_str()));
    m.insert(
        "method".into(),
        match cfg.method {
            Some(mk) => json!(mk.as_str()),
            None => Value::Null,
        },
    );
    m.insert("seed".into(), json!(cfg.seed));
    m.insert("config".into(), config_echo(cfg, extra));
    m.insert("artifacts".into(), json!(artifacts));
    if let Some(r) = result {
        m.insert("result".into(), r.clone());
    }
    if let Some(e) = error {
        m.insert("error".into(), json!(e));
    }
    write_file(&cfg.out.join(MANIFEST), &json_pretty(&Value::Object(m)))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("config sections serialize")
}

/// The `config` block of the manifest: only the sections the task consults,
/// so two campaigns that run the same computation echo the same block. The
/// output path is deliberately excluded — artifacts must be byte-identical
/// wherever they are written.
fn config_echo(cfg: &CampaignConfig, extra: Option<&serde_json::Map<String, Value>>) -> Value {
    let mut m = serde_json::Map::new();
    let lj_objective = cfg.objective == ObjectiveKind::Lj;
    match cfg.task {
        TaskKind::Optimize => {
            m.insert("local".into(), to_json(&cfg.local));
            if lj_objective {
                m.insert("lj".into(), to_json(&cfg.lj));
            }
        }
        TaskKind::Anneal => {
            // The concrete schedule arrives through `extra` once calibrated.
            if lj_objective {
                m.insert("lj".into(), to_json(&cfg.lj));
            }
        }
        TaskKind::Evolve => {
            m.insert("ga".into(), to_json(&cfg.ga));
            m.insert("qwdevice".into(), to_json(&cfg.qw));
        }
        TaskKind::Sweep => {
            m.insert("ga".into(), to_json(&cfg.ga));
            m.insert("qwdevice".into(), to_json(&cfg.qw));
            m.insert(
                "frequencies_ghz".into(),
                json!(cfg.sweep_frequencies_ghz),
            );
        }
        TaskKind::Oracle => {
            m.insert("qwdevice".into(), to_json(&cfg.qw));
            m.insert("bits_per_param".into(), json!(cfg.ga.bits_per_param));
            m.insert("genome_length".into(), json!(4 * cfg.ga.bits_per_param));
        }
        TaskKind::LjMin => {
            m.insert("local".into(), to_json(&cfg.local));
            m.insert("lj".into(), to_json(&cfg.lj));
        }
        TaskKind::GradCheck => {
            m.insert("gradcheck".into(), to_json(&cfg.gradcheck));
            if lj_objective {
                m.insert("lj".into(), to_json(&cfg.lj));
            }
        }
    }
    if let Some(ex) = extra {
        for (k, v) in ex {
            m.insert(k.clone(), v.clone());
        }
    }
    Value::Object(m)
}

// --- objective construction ------------------------------------------------

/// Objective plus its sampling box (annealing calibration, gradient-check
/// probes). The box comes from `domain.lo/hi` when given, else a built-in
/// per-objective default.
fn objective_and_box(
    cfg: &CampaignConfig,
) -> Result<(Box<dyn ObjectiveFunction>, Bounds), CampaignError> {
    let (obj, default_box): (Box<dyn ObjectiveFunction>, Vec<(f64, f64)>) = match cfg.objective {
        ObjectiveKind::Quadratic => (
            Box::new(Quadratic::two_by_two()),
            vec![(-3.0, 3.0); 2],
        ),
        ObjectiveKind::Rosenbrock => (
            Box::new(Rosenbrock::default()),
            vec![(-2.0, 2.0); 2],
        ),
        ObjectiveKind::DoubleWell => (Box::new(TiltedDoubleWell), vec![(-2.0, 2.0)]),
        ObjectiveKind::Lj => {
            let lj = &cfg.lj;
            // Match the random-seed placement box: side ~ n^(1/3) at unit
            // density, scaled by sigma.
            let half = (lj.n_atoms as f64).cbrt() * 1.2 * lj.sigma / 2.0;
            (
                Box::new(LjPotential {
                    n_atoms: lj.n_atoms,
                    epsilon: lj.epsilon,
                    sigma: lj.sigma,
                }),
                vec![(-half, half); 3 * lj.n_atoms],
            )
        }
        ObjectiveKind::QwDevice => {
            return Err(CampaignError::Config(
                "objective qwdevice has no coordinate representation; use evolve, sweep, or oracle"
                    .into(),
            ))
        }
    };
    let bounds = match (&cfg.domain.lo, &cfg.domain.hi) {
        (Some(lo), Some(hi)) => Bounds::new(
            lo.iter().copied().zip(hi.iter().copied()).collect(),
        )
        .map_err(|_| {
            CampaignError::Config("domain bounds must be finite with lo < hi".into())
        })?,
        _ => Bounds::new(default_box).expect("built-in sampling boxes are valid"),
    };
    Ok((obj, bounds))
}

/// Start point: `domain.x0` when given, else the per-objective default —
/// a fixed textbook start for the analytic objectives, a seeded geometry
/// for clusters.
fn start_point(cfg: &CampaignConfig, rng: &mut RngStream) -> Result<VectorN, CampaignError> {
    if let Some(v) = &cfg.domain.x0 {
        return VectorN::new(v.clone())
            .map_err(|e| CampaignError::Config(format!("domain.x0: {e}")));
    }
    let v = match cfg.objective {
        ObjectiveKind::Quadratic => VectorN::new(vec![0.0, 0.0]),
        ObjectiveKind::Rosenbrock => VectorN::new(vec![-1.2, 1.0]),
        ObjectiveKind::DoubleWell => VectorN::new(vec![1.0]),
        ObjectiveKind::Lj => return lj_start(cfg, rng),
        ObjectiveKind::QwDevice => {
            unreachable!("combination matrix never pairs qwdevice with coordinate tasks")
        }
    };
    Ok(v.expect("fixed start points are finite"))
}

/// Seeds cluster coordinates per the configured geometry, then applies the
/// optional Gaussian shake. Draw order — geometry first, shake second, from
/// the campaign stream — is part of the reproducibility contract.
fn lj_start(cfg: &CampaignConfig, rng: &mut RngStream) -> Result<VectorN, CampaignError> {
    let lj = &cfg.lj;
    let coords = match lj.geometry {
        GeometryKind::Random => {
            // seed_geometry works in reduced units; rescale to sigma.
            let cluster = ljcluster::seed_geometry(lj.n_atoms, rng)?;
            cluster.coordinates.scaled(lj.sigma)
        }
        GeometryKind::Icosahedral => ljcluster::icosahedral_13(1.1 * lj.sigma)?.coordinates,
    };
    if lj.perturbation > 0.0 {
        let shaken: Vec<f64> = coords
            .as_slice()
            .iter()
            .map(|&c| c + lj.perturbation * lj.sigma * rng.next_gaussian())
            .collect();
        return VectorN::new(shaken).map_err(|e| CampaignError::Numeric(e.to_string()));
    }
    Ok(coords)
}

fn local_cfg(cfg: &CampaignConfig) -> LocalOptConfig {
    LocalOptConfig {
        lambda: cfg.local.lambda,
        mu: cfg.local.mu,
        max_iter: cfg.local.max_iter,
        grad_tol: cfg.local.grad_tol,
        use_backtracking: cfg.local.use_backtracking,
        record_trajectory: true,
        record_iterates: false,
    }
}

fn dispatch_local(
    method: MethodKind,
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    lcfg: &LocalOptConfig,
) -> Result<OptimizerReport, CampaignError> {
    let run = match method {
        MethodKind::Sdm => steepest_descent,
        MethodKind::Damped => damped_newtonian,
        MethodKind::Cg => conjugate_gradient,
        MethodKind::Bfgs => quasi_newton,
        MethodKind::Ga | MethodKind::Sa => {
            unreachable!("validation admits only local methods here")
        }
    };
    Ok(run(obj, x0, lcfg)?)
}

fn write_trajectory(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
    report: &OptimizerReport,
) -> Result<(), CampaignError> {
    let mut csv = Csv::new("iteration,energy");
    if let Some(t) = &report.trajectory {
        for &(i, e) in t {
            csv.row(&[i.to_string(), fmt_f64(e)]);
        }
    }
    write_file(&cfg.out.join(TRAJECTORY), &csv.finish())?;
    artifacts.push(TRAJECTORY.into());
    Ok(())
}

fn local_result(report: &OptimizerReport, force_norm: f64) -> Value {
    json!({
        "termination": report.termination.as_str(),
        "iterations": report.iterations,
        "best_value": report.best_value,
        "best_point": report.best_point.to_vec(),
        "force_norm": force_norm,
    })
}

// --- tasks -----------------------------------------------------------------

fn run_optimize(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let mut rng = RngStream::new(cfg.seed);
    let (obj, _) = objective_and_box(cfg)?;
    let x0 = start_point(cfg, &mut rng)?;
    let method = cfg.method.expect("optimize always resolves a method");
    let report = dispatch_local(method, obj.as_ref(), &x0, &local_cfg(cfg))?;
    write_trajectory(cfg, artifacts, &report)?;

    let force_norm = obj.force(&report.best_point).norm();
    let mut extra = serde_json::Map::new();
    extra.insert("x0".into(), json!(x0.to_vec()));
    let summary = format!(
        "optimize {} via {} (seed {}): {} after {} steps; best energy {:.6e}",
        cfg.objective.as_str(),
        method.as_str(),
        cfg.seed,
        report.termination.as_str(),
        report.iterations,
        report.best_value
    );
    Ok(TaskOutput {
        config_extra: extra,
        result: local_result(&report, force_norm),
        summary,
        failure: None,
    })
}

fn run_anneal(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let mut rng = RngStream::new(cfg.seed);
    let (obj, bounds) = objective_and_box(cfg)?;
    let x0 = start_point(cfg, &mut rng)?;

    let mut sa_cfg = SaConfig::auto(obj.as_ref(), &bounds, cfg.seed);
    if let Some(v) = cfg.sa.t_initial {
        sa_cfg.t_initial = v;
    }
    if let Some(v) = cfg.sa.t_final {
        sa_cfg.t_final = v;
    }
    if let Some(v) = cfg.sa.cooling_factor {
        sa_cfg.cooling_factor = v;
    }
    if let Some(v) = cfg.sa.steps_per_temperature {
        sa_cfg.steps_per_temperature = v;
    }
    if let Some(v) = cfg.sa.proposal_scale {
        sa_cfg.proposal_scale = v;
    }

    let report = anneal(obj.as_ref(), &x0, &sa_cfg, &mut rng)?;
    write_trajectory(cfg, artifacts, &report)?;

    let ranges = bounds.ranges();
    let mut extra = serde_json::Map::new();
    extra.insert("x0".into(), json!(x0.to_vec()));
    extra.insert(
        "bounds".into(),
        json!({
            "lo": ranges.iter().map(|r| r.0).collect::<Vec<_>>(),
            "hi": ranges.iter().map(|r| r.1).collect::<Vec<_>>(),
        }),
    );
    extra.insert(
        "sa".into(),
        json!({
            "t_initial": sa_cfg.t_initial,
            "t_final": sa_cfg.t_final,
            "cooling_factor": sa_cfg.cooling_factor,
            "steps_per_temperature": sa_cfg.steps_per_temperature,
            "proposal_scale": sa_cfg.proposal_scale,
        }),
    );
    let result = json!({
        "termination": report.termination.as_str(),
        "proposals": report.iterations,
        "best_value": report.best_value,
        "best_point": report.best_point.to_vec(),
    });
    let summary = format!(
        "anneal {} (seed {}): {} proposals; best energy {:.6e}",
        cfg.objective.as_str(),
        cfg.seed,
        report.iterations,
        report.best_value
    );
    Ok(TaskOutput {
        config_extra: extra,
        result,
        summary,
        failure: None,
    })
}

fn device_context(
    cfg: &CampaignConfig,
) -> Result<(BiasCondition, Bounds, MaterialConstants, DrudeSurrogate), CampaignError> {
    let bias = BiasCondition::new(cfg.qw.f0_v_per_m, cfg.qw.frequency_hz())?;
    let bounds = cfg.qw.bounds()?;
    Ok((bias, bounds, MaterialConstants::gaas(), DrudeSurrogate))
}

fn ga_config(cfg: &CampaignConfig, bounds: Bounds) -> GaConfig {
    let mut g = GaConfig::new(bounds, vec![cfg.ga.bits_per_param; 4], cfg.seed);
    g.population_size = cfg.ga.population_size;
    g.generations = cfg.ga.generations;
    g.crossover_prob = cfg.ga.crossover_prob;
    g.mutation_rate = cfg.ga.mutation_rate;
    g.elitism = cfg.ga.elitism;
    g
}

fn run_evolve(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let (bias, bounds, constants, model) = device_context(cfg)?;
    let ga_cfg = ga_config(cfg, bounds);
    let mut rng = RngStream::new(cfg.seed);
    let fitness = |g: &Genome| {
        device_fitness(g, &bias, &ga_cfg.bounds, &constants, &model).unwrap_or(f64::NAN)
    };
    let report = ga::evolve(fitness, &ga_cfg, &mut rng)?;

    let mut csv = Csv::new("generation,best,mean");
    for s in &report.per_generation {
        csv.row(&[s.generation.to_string(), fmt_f64(s.best), fmt_f64(s.mean)]);
    }
    write_file(&cfg.out.join(GENERATIONS), &csv.finish())?;
    artifacts.push(GENERATIONS.into());

    let best = DeviceParams::from_vector_repaired(&report.best_params)?;
    let f3db = cutoff_frequency(&best, &constants, &model)?;
    let result = json!({
        "best_fitness": report.best_fitness,
        "best_genome": report.best_genome.to_string(),
        "best_params": {
            "t_l_k": best.t_l,
            "t_e_k": best.t_e,
            "n2d_per_m2": best.n_2d,
            "l_z_m": best.l_z,
        },
        "f3db_hz": f3db,
        "non_finite_evaluations": report.non_finite_evaluations,
        "uniform_selection_events": report.uniform_selection_events,
    });
    let summary = format!(
        "evolve qwdevice via ga (seed {}): best fitness {:.6e} m^2/(V s), genome {}",
        cfg.seed, report.best_fitness, report.best_genome
    );
    Ok(TaskOutput {
        config_extra: serde_json::Map::new(),
        result,
        summary,
        failure: None,
    })
}

fn run_sweep(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let (_, bounds, constants, model) = device_context(cfg)?;
    let freqs_hz: Vec<f64> = cfg
        .sweep_frequencies_ghz
        .iter()
        .map(|g| g * 1e9)
        .collect();
    let ga_cfg = ga_config(cfg, bounds);
    let entries = sweep_optimize(&freqs_hz, cfg.qw.f0_v_per_m, &ga_cfg, &constants, &model)?;

    let mut csv = Csv::new(
        "frequency_hz,f0_v_per_m,t_l_k,t_e_k,n2d_per_m2,l_z_m,mu_ac_m2_per_vs,f3db_hz,seed",
    );
    let mut failed: Vec<Value> = Vec::new();
    let mut rows = 0usize;
    for entry in &entries {
        match &entry.result {
            Ok(r) => {
                rows += 1;
                csv.row(&[
                    fmt_f64(r.frequency_hz),
                    fmt_f64(r.f0_v_per_m),
                    fmt_f64(r.t_l_k),
                    fmt_f64(r.t_e_k),
                    fmt_f64(r.n2d_per_m2),
                    fmt_f64(r.l_z_m),
                    fmt_f64(r.mu_ac_m2_per_vs),
                    fmt_f64(r.f3db_hz),
                    r.seed.to_string(),
                ]);
            }
            Err(e) => failed.push(json!({
                "frequency_hz": entry.frequency_hz,
                "seed": entry.seed,
                "error": e.to_string(),
            })),
        }
    }
    write_file(&cfg.out.join(SWEEP), &csv.finish())?;
    artifacts.push(SWEEP.into());

    let n_failed = failed.len();
    let total = entries.len();
    let result = json!({ "rows": rows, "failed": failed });
    let summary = format!(
        "sweep qwdevice via ga (seed {}): {rows}/{total} frequencies optimized",
        cfg.seed
    );
    let failure =
        (n_failed > 0).then(|| format!("{n_failed} of {total} sweep rows failed; see manifest"));
    Ok(TaskOutput {
        config_extra: serde_json::Map::new(),
        result,
        summary,
        failure,
    })
}

fn run_oracle(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let (bias, bounds, constants, model) = device_context(cfg)?;
    let genome_length = 4 * cfg.ga.bits_per_param;
    let fitness = |g: &Genome| {
        device_fitness(g, &bias, &bounds, &constants, &model).unwrap_or(f64::NAN)
    };
    let r = brute_force_oracle(fitness, genome_length)?;

    let mut csv = Csv::new("best_genome,best_fitness,evaluations");
    csv.row(&[
        r.best_genome.to_string(),
        fmt_f64(r.best_fitness),
        r.evaluations.to_string(),
    ]);
    write_file(&cfg.out.join(ORACLE), &csv.finish())?;
    artifacts.push(ORACLE.into());

    let result = json!({
        "best_genome": r.best_genome.to_string(),
        "best_fitness": r.best_fitness,
        "evaluations": r.evaluations,
    });
    let summary = format!(
        "oracle qwdevice ({genome_length}-bit genome): best {} fitness {:.6e} over {} evaluations",
        r.best_genome, r.best_fitness, r.evaluations
    );
    Ok(TaskOutput {
        config_extra: serde_json::Map::new(),
        result,
        summary,
        failure: None,
    })
}

fn run_ljmin(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    let mut rng = RngStream::new(cfg.seed);
    let (obj, _) = objective_and_box(cfg)?;
    let x0 = start_point(cfg, &mut rng)?;
    let method = cfg.method.expect("ljmin always resolves a method");
    let report = dispatch_local(method, obj.as_ref(), &x0, &local_cfg(cfg))?;
    write_trajectory(cfg, artifacts, &report)?;

    let cluster = ClusterConfig::new(
        cfg.lj.n_atoms,
        cfg.lj.epsilon,
        cfg.lj.sigma,
        report.best_point.clone(),
    )
    .map_err(|e| CampaignError::Numeric(format!("final geometry invalid: {e}")))?;
    write_file(
        &cfg.out.join(FINAL_XYZ),
        &ljcluster::xyz_string(&cluster, report.best_value),
    )?;
    artifacts.push(FINAL_XYZ.into());

    let force_norm = obj.force(&report.best_point).norm();
    let mut extra = serde_json::Map::new();
    extra.insert("x0".into(), json!(x0.to_vec()));
    let summary = format!(
        "ljmin n={} via {} (seed {}): {} after {} steps; best energy {:.6e}",
        cfg.lj.n_atoms,
        method.as_str(),
        cfg.seed,
        report.termination.as_str(),
        report.iterations,
        report.best_value
    );
    Ok(TaskOutput {
        config_extra: extra,
        result: local_result(&report, force_norm),
        summary,
        failure: None,
    })
}

fn run_gradcheck(
    cfg: &CampaignConfig,
    artifacts: &mut Vec<String>,
) -> Result<TaskOutput, CampaignError> {
    if cfg.gradcheck.samples == 0 {
        return Err(CampaignError::Config(
            "gradcheck.samples must be at least 1".into(),
        ));
    }
    let mut rng = RngStream::new(cfg.seed);
    let (obj, bounds) = objective_and_box(cfg)?;

    let mut csv = Csv::new("sample,rel_err");
    let mut max_rel = 0.0f64;
    for i in 0..cfg.gradcheck.samples {
        // Clusters need physically sensible probes (no near-coincident
        // atoms), so they sample fresh seed geometries instead of the box.
        let x = match cfg.objective {
            ObjectiveKind::Lj => ljcluster::seed_geometry(cfg.lj.n_atoms, &mut rng)?
                .coordinates
                .scaled(cfg.lj.sigma),
            _ => bounds.sample_uniform(&mut rng),
        };
        let grad = match cfg.gradcheck.step {
            Some(h) => finite_diff_gradient(obj.as_ref(), &x, h)?,
            None => finite_diff_gradient_auto(obj.as_ref(), &x)?,
        };
        // The contract is force = -gradient, so the two should cancel.
        let force = obj.force(&x);
        let rel = force.axpy(1.0, &grad).norm() / (1.0 + force.norm());
        max_rel = max_rel.max(rel);
        csv.row(&[i.to_string(), fmt_f64(rel)]);
    }
    write_file(&cfg.out.join(GRADCHECK), &csv.finish())?;
    artifacts.push(GRADCHECK.into());

    let pass = max_rel <= GRADCHECK_TOL;
    let result = json!({
        "samples": cfg.gradcheck.samples,
        "max_rel_err": max_rel,
        "tolerance": GRADCHECK_TOL,
        "pass": pass,
    });
    let summary = format!(
        "gradcheck {}: max relative error {:.3e} over {} samples (tolerance {:.0e})",
        cfg.objective.as_str(),
        max_rel,
        cfg.gradcheck.samples,
        GRADCHECK_TOL
    );
    let failure = (!pass).then(|| {
        format!(
            "gradient check failed: max relative error {max_rel:.3e} exceeds {GRADCHECK_TOL:.0e}"
        )
    });
    Ok(TaskOutput {
        config_extra: serde_json::Map::new(),
        result,
        summary,
        failure,
    })
}
