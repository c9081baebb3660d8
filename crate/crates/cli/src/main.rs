//! `qwopt` — seeded optimization campaigns from the command line.
//!
//! Every subcommand resolves a campaign (environment > flags > config file >
//! defaults), runs it, and writes artifacts plus a JSON manifest into the
//! output directory. Exit codes: 0 success, 2 configuration error, 3 numeric
//! failure (partial artifacts are preserved).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qwopt_cli::campaign::{run_campaign, CampaignError, CampaignOutcome};
use qwopt_cli::config::{self, GeometryKind, MethodKind, ObjectiveKind, Overrides, TaskKind};

#[derive(Parser)]
#[command(
    name = "qwopt",
    version,
    about = "Seeded optimization campaigns: local descent, evolutionary search, \
             annealing, device frequency sweeps, and cluster relaxation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize a continuous objective with a local method
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        local: LocalFlags,
    },
    /// Tune quantum-well device parameters with the genetic algorithm
    Evolve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ga: GaFlags,
    },
    /// Simulated annealing on a continuous objective
    Anneal {
        #[command(flatten)]
        common: Common,
    },
    /// One GA campaign per frequency over a frequency grid
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        ga: GaFlags,
    },
    /// Exhaustively score small genomes (ground truth for GA quality)
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Relax a Lennard-Jones cluster and write its final geometry
    Ljmin {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        local: LocalFlags,
        #[command(flatten)]
        lj: LjFlags,
    },
    /// Compare analytic forces against central finite differences
    Gradcheck {
        #[command(flatten)]
        common: Common,
        /// Number of random probe points
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML campaign file; flags override file keys
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed (the QWOPT_SEED environment variable wins over this)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for artifacts
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Suppress the summary and timing lines on stdout
    #[arg(long)]
    quiet: bool,
    /// Objective to run (each task constrains the valid set)
    #[arg(long, value_enum)]
    objective: Option<ObjectiveKind>,
    /// Algorithm to run (each task constrains the valid set)
    #[arg(long, value_enum)]
    method: Option<MethodKind>,
}

#[derive(Args)]
struct LocalFlags {
    /// Iteration budget
    #[arg(long)]
    max_iter: Option<usize>,
    /// Convergence threshold on the force norm
    #[arg(long)]
    grad_tol: Option<f64>,
}

#[derive(Args)]
struct GaFlags {
    /// Target ac frequency, GHz
    #[arg(long)]
    frequency_ghz: Option<f64>,
    /// DC bias field, V/m
    #[arg(long)]
    f0_v_per_m: Option<f64>,
    /// Bits per device parameter (the genome is 4x this)
    #[arg(long)]
    bits_per_param: Option<usize>,
    /// Population size (must be even)
    #[arg(long)]
    population_size: Option<usize>,
    /// Generation budget
    #[arg(long)]
    generations: Option<usize>,
}

#[derive(Args)]
struct OracleFlags {
    /// Target ac frequency, GHz
    #[arg(long)]
    frequency_ghz: Option<f64>,
    /// DC bias field, V/m
    #[arg(long)]
    f0_v_per_m: Option<f64>,
    /// Bits per device parameter (4x this is capped at 24 total)
    #[arg(long)]
    bits_per_param: Option<usize>,
}

#[derive(Args)]
struct LjFlags {
    /// Cluster size
    #[arg(long)]
    n_atoms: Option<usize>,
    /// Start geometry
    #[arg(long, value_enum)]
    geometry: Option<GeometryKind>,
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok((outcome, quiet)) => {
            if !quiet {
                println!("{}", outcome.summary);
                println!("artifacts: {}", outcome.artifacts.join(", "));
                println!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(CampaignOutcome, bool), CampaignError> {
    let (task, common, mut overrides) = split(cli.command);
    overrides.objective = common.objective;
    overrides.method = common.method;
    overrides.seed = common.seed;
    overrides.out = common.out.clone();
    overrides.env_seed = std::env::var("QWOPT_SEED").ok();
    let file = match &common.config {
        Some(path) => config::load_file(path)?,
        None => Default::default(),
    };
    let cfg = config::resolve(task, file, overrides)?;
    let outcome = run_campaign(&cfg)?;
    Ok((outcome, common.quiet))
}

fn ga_overrides(ga: GaFlags) -> Overrides {
    Overrides {
        frequency_ghz: ga.frequency_ghz,
        f0_v_per_m: ga.f0_v_per_m,
        bits_per_param: ga.bits_per_param,
        population_size: ga.population_size,
        generations: ga.generations,
        ..Default::default()
    }
}

fn split(cmd: Command) -> (TaskKind, Common, Overrides) {
    match cmd {
        Command::Optimize { common, local } => (
            TaskKind::Optimize,
            common,
            Overrides {
                max_iter: local.max_iter,
                grad_tol: local.grad_tol,
                ..Default::default()
            },
        ),
        Command::Evolve { common, ga } => (TaskKind::Evolve, common, ga_overrides(ga)),
        Command::Anneal { common } => (TaskKind::Anneal, common, Overrides::default()),
        Command::Sweep { common, ga } => (TaskKind::Sweep, common, ga_overrides(ga)),
        Command::Oracle { common, oracle } => (
            TaskKind::Oracle,
            common,
            Overrides {
                frequency_ghz: oracle.frequency_ghz,
                f0_v_per_m: oracle.f0_v_per_m,
                bits_per_param: oracle.bits_per_param,
                ..Default::default()
            },
        ),
        Command::Ljmin { common, local, lj } => (
            TaskKind::LjMin,
            common,
            Overrides {
                max_iter: local.max_iter,
                grad_tol: local.grad_tol,
                n_atoms: lj.n_atoms,
                geometry: lj.geometry,
                ..Default::default()
            },
        ),
        Command::Gradcheck { common, samples } => (
            TaskKind::GradCheck,
            common,
            Overrides {
                samples,
                ..Default::default()
            },
        ),
    }
}
