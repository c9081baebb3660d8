//! Campaign configuration: the TOML file schema, CLI overrides, and the
//! validation matrix deciding which task/objective/method combinations run.
//!
//! Key precedence, highest first: the `QWOPT_SEED` environment variable
//! (seed only), CLI flags, the config file, built-in defaults. Every CLI
//! flag mirrors a config key of the same name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::campaign::CampaignError;

/// Campaign kinds, named after the CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Optimize,
    Evolve,
    Anneal,
    Sweep,
    Oracle,
    LjMin,
    GradCheck,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Optimize => "optimize",
            TaskKind::Evolve => "evolve",
            TaskKind::Anneal => "anneal",
            TaskKind::Sweep => "sweep",
            TaskKind::Oracle => "oracle",
            TaskKind::LjMin => "ljmin",
            TaskKind::GradCheck => "gradcheck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[value(rename_all = "lower")]
pub enum ObjectiveKind {
    /// 2x2 SPD quadratic with minimum at (1/11, 7/11)
    Quadratic,
    /// Rosenbrock banana, a = 1, b = 100
    Rosenbrock,
    /// Tilted double well (x^2 - 1)^2 + 0.3 x
    DoubleWell,
    /// Lennard-Jones cluster
    Lj,
    /// Quantum-well device ac-mobility surrogate
    QwDevice,
}

impl ObjectiveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Quadratic => "quadratic",
            ObjectiveKind::Rosenbrock => "rosenbrock",
            ObjectiveKind::DoubleWell => "doublewell",
            ObjectiveKind::Lj => "lj",
            ObjectiveKind::QwDevice => "qwdevice",
        }
    }

    /// Coordinate dimension for the continuous objectives; `None` for the
    /// genome-encoded device search.
    pub fn dimension(self, lj_atoms: usize) -> Option<usize> {
        match self {
            ObjectiveKind::Quadratic | ObjectiveKind::Rosenbrock => Some(2),
            ObjectiveKind::DoubleWell => Some(1),
            ObjectiveKind::Lj => Some(3 * lj_atoms),
            ObjectiveKind::QwDevice => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[value(rename_all = "lower")]
pub enum MethodKind {
    /// Steepest-descent with backtracking
    Sdm,
    /// Damped Newtonian dynamics
    Damped,
    /// Polak-Ribiere conjugate gradient
    Cg,
    /// BFGS quasi-Newton
    Bfgs,
    /// Binary genetic algorithm
    Ga,
    /// Simulated annealing
    Sa,
}

impl MethodKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodKind::Sdm => "sdm",
            MethodKind::Damped => "damped",
            MethodKind::Cg => "cg",
            MethodKind::Bfgs => "bfgs",
            MethodKind::Ga => "ga",
            MethodKind::Sa => "sa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[value(rename_all = "lower")]
pub enum GeometryKind {
    /// Uniform random placement in a density-scaled box
    Random,
    /// Centered icosahedron (13 atoms only)
    Icosahedral,
}

impl GeometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeometryKind::Random => "random",
            GeometryKind::Icosahedral => "icosahedral",
        }
    }
}

// --- config file schema -------------------------------------------------
//
// Everything is optional; unknown keys are rejected so typos fail loudly
// (exit 2) instead of silently running with defaults.

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub task: Option<TaskKind>,
    pub objective: Option<ObjectiveKind>,
    pub method: Option<MethodKind>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub local: LocalSection,
    #[serde(default)]
    pub ga: GaSection,
    #[serde(default)]
    pub sa: SaSection,
    #[serde(default)]
    pub qwdevice: QwSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub lj: LjSection,
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub gradcheck: GradCheckSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSection {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub max_iter: Option<usize>,
    pub grad_tol: Option<f64>,
    pub use_backtracking: Option<bool>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSection {
    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_prob: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub bits_per_param: Option<usize>,
    pub elitism: Option<usize>,
}

/// Annealing schedule overrides. Keys left unset are filled by the
/// calibration pass (`SaConfig::auto`) against the chosen objective.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSection {
    pub t_initial: Option<f64>,
    pub t_final: Option<f64>,
    pub cooling_factor: Option<f64>,
    pub steps_per_temperature: Option<usize>,
    pub proposal_scale: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QwSection {
    pub frequency_ghz: Option<f64>,
    pub f0_v_per_m: Option<f64>,
    pub t_l_range: Option<[f64; 2]>,
    pub t_e_range: Option<[f64; 2]>,
    pub n2d_range: Option<[f64; 2]>,
    pub l_z_range: Option<[f64; 2]>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub frequencies_ghz: Option<Vec<f64>>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LjSection {
    pub n_atoms: Option<usize>,
    pub epsilon: Option<f64>,
    pub sigma: Option<f64>,
    pub geometry: Option<GeometryKind>,
    /// Gaussian displacement (in units of sigma) applied per coordinate
    /// after the seed geometry is generated.
    pub perturbation: Option<f64>,
}

/// Start point and box overrides for the continuous objectives.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub x0: Option<Vec<f64>>,
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradCheckSection {
    pub samples: Option<usize>,
    /// Fixed central-difference step; unset means the per-component
    /// relative step h_k = 1e-6 (1 + |x_k|).
    pub step: Option<f64>,
}

pub fn load_file(path: &Path) -> Result<FileConfig, CampaignError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CampaignError::Config(format!("cannot read config {}: {e}", path.display()))
    })?;
    toml::from_str(&text).map_err(|e| {
        CampaignError::Config(format!("invalid config {}: {e}", path.display()))
    })
}

// --- CLI overrides -------------------------------------------------------

/// Values collected from flags and the environment; `None` falls through to
/// the config file and then to the defaults.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub objective: Option<ObjectiveKind>,
    pub method: Option<MethodKind>,
    pub seed: Option<u64>,
    /// Raw `QWOPT_SEED` value; a parse failure is a config error.
    pub env_seed: Option<String>,
    pub out: Option<PathBuf>,
    pub max_iter: Option<usize>,
    pub grad_tol: Option<f64>,
    pub frequency_ghz: Option<f64>,
    pub f0_v_per_m: Option<f64>,
    pub bits_per_param: Option<usize>,
    pub population_size: Option<usize>,
    pub generations: Option<usize>,
    pub n_atoms: Option<usize>,
    pub geometry: Option<GeometryKind>,
    pub samples: Option<usize>,
}

// --- resolved campaign ---------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct LocalResolved {
    pub lambda: f64,
    pub mu: f64,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub use_backtracking: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaResolved {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_rate: f64,
    pub bits_per_param: usize,
    pub elitism: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QwResolved {
    pub frequency_ghz: f64,
    pub f0_v_per_m: f64,
    pub t_l_range: [f64; 2],
    pub t_e_range: [f64; 2],
    pub n2d_range: [f64; 2],
    pub l_z_range: [f64; 2],
}

impl QwResolved {
    pub fn frequency_hz(&self) -> f64 {
        self.frequency_ghz * 1e9
    }

    pub fn bounds(&self) -> Result<qwopt_core::Bounds, CampaignError> {
        qwopt_core::Bounds::new(vec![
            (self.t_l_range[0], self.t_l_range[1]),
            (self.t_e_range[0], self.t_e_range[1]),
            (self.n2d_range[0], self.n2d_range[1]),
            (self.l_z_range[0], self.l_z_range[1]),
        ])
        .map_err(|_| {
            CampaignError::Config(
                "device parameter ranges must be finite with lo < hi".into(),
            )
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LjResolved {
    pub n_atoms: usize,
    pub epsilon: f64,
    pub sigma: f64,
    pub geometry: GeometryKind,
    pub perturbation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradResolved {
    pub samples: usize,
    pub step: Option<f64>,
}

/// A fully validated campaign. Sections irrelevant to `task` carry their
/// defaults and are neither consulted nor echoed into the manifest.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub task: TaskKind,
    pub objective: ObjectiveKind,
    pub method: Option<MethodKind>,
    pub seed: u64,
    pub out: PathBuf,
    pub local: LocalResolved,
    pub ga: GaResolved,
    pub sa: SaSection,
    pub qw: QwResolved,
    pub sweep_frequencies_ghz: Vec<f64>,
    pub lj: LjResolved,
    pub domain: DomainSection,
    pub gradcheck: GradResolved,
}

/// Default frequency grid for `sweep`, GHz.
pub const DEFAULT_SWEEP_GHZ: [f64; 7] = [110.0, 135.0, 160.0, 180.0, 210.0, 230.0, 250.0];

pub fn resolve(
    task: TaskKind,
    file: FileConfig,
    ov: Overrides,
) -> Result<CampaignConfig, CampaignError> {
    if let Some(t) = file.task {
        if t != task {
            return Err(CampaignError::Config(format!(
                "config file declares task \"{}\" but the {} subcommand was invoked",
                t.as_str(),
                task.as_str()
            )));
        }
    }

    let objective = ov
        .objective
        .or(file.objective)
        .unwrap_or_else(|| default_objective(task));
    check_combination(task, objective)?;
    let method = resolve_method(task, ov.method.or(file.method))?;
    let seed = resolve_seed(ov.env_seed.as_deref(), ov.seed, file.seed)?;
    let out = ov
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("qwopt-out"));

    let local = LocalResolved {
        lambda: file.local.lambda.unwrap_or(0.01),
        mu: file.local.mu.unwrap_or(0.5),
        max_iter: ov.max_iter.or(file.local.max_iter).unwrap_or(10_000),
        grad_tol: ov.grad_tol.or(file.local.grad_tol).unwrap_or(1e-8),
        use_backtracking: file.local.use_backtracking.unwrap_or(true),
    };

    let ga = GaResolved {
        population_size: ov
            .population_size
            .or(file.ga.population_size)
            .unwrap_or(20),
        generations: ov.generations.or(file.ga.generations).unwrap_or(100),
        crossover_prob: file.ga.crossover_prob.unwrap_or(0.9),
        mutation_rate: file.ga.mutation_rate.unwrap_or(0.001),
        bits_per_param: ov.bits_per_param.or(file.ga.bits_per_param).unwrap_or(4),
        elitism: file.ga.elitism.unwrap_or(1),
    };

    let qw = QwResolved {
        frequency_ghz: ov
            .frequency_ghz
            .or(file.qwdevice.frequency_ghz)
            .unwrap_or(300.0),
        f0_v_per_m: ov
            .f0_v_per_m
            .or(file.qwdevice.f0_v_per_m)
            .unwrap_or(0.75e5),
        t_l_range: file.qwdevice.t_l_range.unwrap_or([77.0, 300.0]),
        t_e_range: file.qwdevice.t_e_range.unwrap_or([77.0, 400.0]),
        n2d_range: file.qwdevice.n2d_range.unwrap_or([5e15, 1e16]),
        l_z_range: file.qwdevice.l_z_range.unwrap_or([85e-9, 125e-9]),
    };

    let sweep_frequencies_ghz = file
        .sweep
        .frequencies_ghz
        .clone()
        .unwrap_or_else(|| DEFAULT_SWEEP_GHZ.to_vec());

    let lj = LjResolved {
        n_atoms: ov.n_atoms.or(file.lj.n_atoms).unwrap_or(13),
        epsilon: file.lj.epsilon.unwrap_or(1.0),
        sigma: file.lj.sigma.unwrap_or(1.0),
        geometry: ov.geometry.or(file.lj.geometry).unwrap_or(GeometryKind::Random),
        perturbation: file.lj.perturbation.unwrap_or(0.0),
    };

    let gradcheck = GradResolved {
        samples: ov.samples.or(file.gradcheck.samples).unwrap_or(100),
        step: file.gradcheck.step,
    };

    // Cross-field checks that must fail before any work starts.
    if task == TaskKind::Oracle {
        let len = 4 * ga.bits_per_param;
        if len > qwopt_core::oracle::ORACLE_CAP {
            return Err(CampaignError::Config(format!(
                "oracle genome length {len} exceeds the enumeration cap {}; \
                 use at most {} bits per parameter",
                qwopt_core::oracle::ORACLE_CAP,
                qwopt_core::oracle::ORACLE_CAP / 4
            )));
        }
    }
    if objective == ObjectiveKind::Lj {
        if lj.n_atoms < 2 {
            return Err(CampaignError::Config(format!(
                "lj.n_atoms must be at least 2, got {}",
                lj.n_atoms
            )));
        }
        if lj.geometry == GeometryKind::Icosahedral && lj.n_atoms != 13 {
            return Err(CampaignError::Config(format!(
                "icosahedral geometry is defined for 13 atoms, got {}",
                lj.n_atoms
            )));
        }
        if !(lj.perturbation.is_finite() && lj.perturbation >= 0.0) {
            return Err(CampaignError::Config(format!(
                "lj.perturbation must be non-negative and finite, got {}",
                lj.perturbation
            )));
        }
    }
    if uses_domain(task) {
        let dim = objective
            .dimension(lj.n_atoms)
            .expect("combination matrix admits only coordinate objectives here");
        if let Some(x0) = &file.domain.x0 {
            if x0.len() != dim {
                return Err(CampaignError::Config(format!(
                    "domain.x0 has {} components but {} needs {dim}",
                    x0.len(),
                    objective.as_str()
                )));
            }
        }
        match (&file.domain.lo, &file.domain.hi) {
            (None, None) => {}
            (Some(lo), Some(hi)) => {
                if lo.len() != dim || hi.len() != dim {
                    return Err(CampaignError::Config(format!(
                        "domain.lo/hi need {dim} components for {}",
                        objective.as_str()
                    )));
                }
            }
            _ => {
                return Err(CampaignError::Config(
                    "domain.lo and domain.hi must be given together".into(),
                ));
            }
        }
    }

    Ok(CampaignConfig {
        task,
        objective,
        method,
        seed,
        out,
        local,
        ga,
        sa: file.sa,
        qw,
        sweep_frequencies_ghz,
        lj,
        domain: file.domain,
        gradcheck,
    })
}

fn uses_domain(task: TaskKind) -> bool {
    matches!(
        task,
        TaskKind::Optimize | TaskKind::Anneal | TaskKind::GradCheck
    )
}

fn default_objective(task: TaskKind) -> ObjectiveKind {
    match task {
        TaskKind::Optimize | TaskKind::GradCheck => ObjectiveKind::Quadratic,
        TaskKind::Anneal => ObjectiveKind::DoubleWell,
        TaskKind::Evolve | TaskKind::Sweep | TaskKind::Oracle => ObjectiveKind::QwDevice,
        TaskKind::LjMin => ObjectiveKind::Lj,
    }
}

fn check_combination(task: TaskKind, objective: ObjectiveKind) -> Result<(), CampaignError> {
    let ok = match task {
        TaskKind::Optimize | TaskKind::Anneal | TaskKind::GradCheck => {
            objective != ObjectiveKind::QwDevice
        }
        TaskKind::Evolve | TaskKind::Sweep | TaskKind::Oracle => {
            objective == ObjectiveKind::QwDevice
        }
        TaskKind::LjMin => objective == ObjectiveKind::Lj,
    };
    if ok {
        Ok(())
    } else {
        Err(CampaignError::Config(format!(
            "objective \"{}\" is not valid for task \"{}\"",
            objective.as_str(),
            task.as_str()
        )))
    }
}

fn resolve_method(
    task: TaskKind,
    explicit: Option<MethodKind>,
) -> Result<Option<MethodKind>, CampaignError> {
    use MethodKind::*;
    let reject = |m: MethodKind, allowed: &str| {
        Err(CampaignError::Config(format!(
            "method \"{}\" is not valid for task \"{}\" (expected {allowed})",
            m.as_str(),
            task.as_str()
        )))
    };
    match task {
        TaskKind::Optimize => match explicit {
            None => Ok(Some(Bfgs)),
            Some(m @ (Sdm | Damped | Cg | Bfgs)) => Ok(Some(m)),
            Some(m) => reject(m, "sdm, damped, cg, or bfgs"),
        },
        TaskKind::LjMin => match explicit {
            None => Ok(Some(Cg)),
            Some(m @ (Sdm | Cg | Bfgs)) => Ok(Some(m)),
            Some(m) => reject(m, "sdm, cg, or bfgs"),
        },
        TaskKind::Anneal => match explicit {
            None | Some(Sa) => Ok(Some(Sa)),
            Some(m) => reject(m, "sa"),
        },
        TaskKind::Evolve | TaskKind::Sweep => match explicit {
            None | Some(Ga) => Ok(Some(Ga)),
            Some(m) => reject(m, "ga"),
        },
        TaskKind::Oracle | TaskKind::GradCheck => match explicit {
            None => Ok(None),
            Some(m) => reject(m, "no method; the task is exhaustive/analytic"),
        },
    }
}

fn resolve_seed(
    env: Option<&str>,
    flag: Option<u64>,
    file: Option<u64>,
) -> Result<u64, CampaignError> {
    if let Some(raw) = env {
        return raw.trim().parse::<u64>().map_err(|_| {
            CampaignError::Config(format!(
                "QWOPT_SEED must be an unsigned 64-bit integer, got \"{raw}\""
            ))
        });
    }
    Ok(flag.or(file).unwrap_or(0))
}
