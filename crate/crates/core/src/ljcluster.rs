//! Lennard-Jones atomic clusters: the 12-6 pair potential, its analytic
//! gradient, random and icosahedral seed geometries, and an
//! [`ObjectiveFunction`] adapter so clusters plug into any optimizer.
//!
//! Full O(n^2) pair sum, no cutoff radius — clusters here are tiny and
//! exactness beats speed. Reduced units (epsilon = sigma = 1) by default so
//! test energies are dimensionless.

use crate::error::CoreError;
use crate::objective::ObjectiveFunction;
use crate::rng::RngStream;
use crate::vector::VectorN;

/// Minimum pair separation, in units of sigma.
const COINCIDENCE_FRACTION: f64 = 1e-10;
const MAX_SEED_ATTEMPTS: usize = 1000;

/// An n-atom cluster: interaction constants plus flat coordinates
/// `(x0, y0, z0, x1, ...)` of dimension `3 * n_atoms`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    pub n_atoms: usize,
    pub epsilon: f64,
    pub sigma: f64,
    pub coordinates: VectorN,
}

impl ClusterConfig {
    /// Validates shape, constants, and the coincidence invariant.
    pub fn new(
        n_atoms: usize,
        epsilon: f64,
        sigma: f64,
        coordinates: VectorN,
    ) -> Result<Self, CoreError> {
        if n_atoms < 2 {
            return Err(CoreError::InvalidConfig(format!(
                "cluster needs at least 2 atoms, got {n_atoms}"
            )));
        }
        for (name, v) in [("epsilon", epsilon), ("sigma", sigma)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CoreError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if coordinates.dim() != 3 * n_atoms {
            return Err(CoreError::DimensionMismatch {
                expected: 3 * n_atoms,
                actual: coordinates.dim(),
            });
        }
        let cfg = Self {
            n_atoms,
            epsilon,
            sigma,
            coordinates,
        };
        cfg.check_coincidence()?;
        Ok(cfg)
    }

    /// Reduced-units cluster (epsilon = sigma = 1).
    pub fn reduced(n_atoms: usize, coordinates: VectorN) -> Result<Self, CoreError> {
        Self::new(n_atoms, 1.0, 1.0, coordinates)
    }

    /// Same constants, new coordinates (re-validated).
    pub fn with_coordinates(&self, coordinates: VectorN) -> Result<Self, CoreError> {
        Self::new(self.n_atoms, self.epsilon, self.sigma, coordinates)
    }

    pub fn atom(&self, i: usize) -> [f64; 3] {
        [
            self.coordinates[3 * i],
            self.coordinates[3 * i + 1],
            self.coordinates[3 * i + 2],
        ]
    }

    fn check_coincidence(&self) -> Result<(), CoreError> {
        let min_dist = COINCIDENCE_FRACTION * self.sigma;
        let min_r2 = min_dist * min_dist;
        for i in 0..self.n_atoms {
            for j in (i + 1)..self.n_atoms {
                if pair_r2(&self.coordinates, i, j) <= min_r2 {
                    return Err(CoreError::CoincidentAtoms { i, j, min_dist });
                }
            }
        }
        Ok(())
    }
}

fn pair_r2(coords: &VectorN, i: usize, j: usize) -> f64 {
    let dx = coords[3 * i] - coords[3 * j];
    let dy = coords[3 * i + 1] - coords[3 * j + 1];
    let dz = coords[3 * i + 2] - coords[3 * j + 2];
    dx * dx + dy * dy + dz * dz
}

/// Total energy `E = sum_{i<j} 4*eps*[(sigma/r)^12 - (sigma/r)^6]`.
pub fn lj_energy(cfg: &ClusterConfig) -> Result<f64, CoreError> {
    cfg.check_coincidence()?;
    let sigma2 = cfg.sigma * cfg.sigma;
    let mut energy = 0.0;
    for i in 0..cfg.n_atoms {
        for j in (i + 1)..cfg.n_atoms {
            let s2 = sigma2 / pair_r2(&cfg.coordinates, i, j);
            let s6 = s2 * s2 * s2;
            energy += 4.0 * cfg.epsilon * (s6 * s6 - s6);
        }
    }
    Ok(energy)
}

/// Analytic gradient of [`lj_energy`] with respect to the coordinates
/// (same orientation as `finite_diff_gradient`), dimension `3 * n_atoms`.
pub fn lj_gradient(cfg: &ClusterConfig) -> Result<VectorN, CoreError> {
    cfg.check_coincidence()?;
    let sigma2 = cfg.sigma * cfg.sigma;
    let mut grad = vec![0.0f64; 3 * cfg.n_atoms];
    for i in 0..cfg.n_atoms {
        for j in (i + 1)..cfg.n_atoms {
            let r2 = pair_r2(&cfg.coordinates, i, j);
            let s2 = sigma2 / r2;
            let s6 = s2 * s2 * s2;
            let s12 = s6 * s6;
            // dE/dx_i = -(24*eps/r^2)*(2*(sigma/r)^12 - (sigma/r)^6)*(x_i - x_j)
            let scale = -(24.0 * cfg.epsilon / r2) * (2.0 * s12 - s6);
            for a in 0..3 {
                let diff = cfg.coordinates[3 * i + a] - cfg.coordinates[3 * j + a];
                grad[3 * i + a] += scale * diff;
                grad[3 * j + a] -= scale * diff;
            }
        }
    }
    VectorN::new(grad)
}

/// Random cluster: atoms uniform in a cube of side `n^(1/3) * 1.2 * sigma`
/// centered at the origin (coordinates drawn x, y, z per atom, in atom
/// order), resampled until no two atoms coincide.
pub fn seed_geometry(n: usize, rng: &mut RngStream) -> Result<ClusterConfig, CoreError> {
    if n < 2 {
        return Err(CoreError::InvalidConfig(format!(
            "cluster needs at least 2 atoms, got {n}"
        )));
    }
    let side = (n as f64).cbrt() * 1.2;
    let half = side / 2.0;
    for _ in 0..MAX_SEED_ATTEMPTS {
        let coords: Vec<f64> = (0..3 * n).map(|_| rng.next_range_f64(-half, half)).collect();
        match ClusterConfig::reduced(n, VectorN::new(coords)?) {
            Ok(cfg) => return Ok(cfg),
            Err(CoreError::CoincidentAtoms { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(CoreError::SeedGeometryFailed {
        n,
        attempts: MAX_SEED_ATTEMPTS,
    })
}

/// The 13-atom icosahedral arrangement: one center atom plus the 12
/// vertices `(0, ±1, ±phi)` and cyclic permutations, each scaled to sit at
/// `shell_radius` from the center. A shell radius near 1.1 (reduced units)
/// starts inside the basin of the global minimum.
pub fn icosahedral_13(shell_radius: f64) -> Result<ClusterConfig, CoreError> {
    if !(shell_radius.is_finite() && shell_radius > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "shell radius must be positive and finite, got {shell_radius}"
        )));
    }
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let unit = shell_radius / (1.0 + phi * phi).sqrt();
    let a = unit;
    let b = unit * phi;
    #[rustfmt::skip]
    let vertices: [[f64; 3]; 12] = [
        [0.0,  a,  b], [0.0,  a, -b], [0.0, -a,  b], [0.0, -a, -b],
        [ a,  b, 0.0], [ a, -b, 0.0], [-a,  b, 0.0], [-a, -b, 0.0],
        [ b, 0.0,  a], [-b, 0.0,  a], [ b, 0.0, -a], [-b, 0.0, -a],
    ];
    let mut coords = vec![0.0, 0.0, 0.0];
    for v in vertices {
        coords.extend_from_slice(&v);
    }
    ClusterConfig::reduced(13, VectorN::new(coords)?)
}

/// XYZ-format text for a geometry: atom count, a comment line carrying the
/// energy, then one `LJ x y z` line per atom.
pub fn xyz_string(cfg: &ClusterConfig, energy: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", cfg.n_atoms));
    out.push_str(&format!("energy = {energy:.16e}\n"));
    for i in 0..cfg.n_atoms {
        let [x, y, z] = cfg.atom(i);
        out.push_str(&format!("LJ {x:.16e} {y:.16e} {z:.16e}\n"));
    }
    out
}

/// [`ObjectiveFunction`] view of an n-atom cluster. Coincident or otherwise
/// invalid coordinates score `+inf` energy (optimizers reject such steps),
/// with a zero force vector at those points.
#[derive(Debug, Clone)]
pub struct LjPotential {
    pub n_atoms: usize,
    pub epsilon: f64,
    pub sigma: f64,
}

impl LjPotential {
    pub fn reduced(n_atoms: usize) -> Self {
        Self {
            n_atoms,
            epsilon: 1.0,
            sigma: 1.0,
        }
    }

    fn cluster(&self, x: &VectorN) -> Result<ClusterConfig, CoreError> {
        ClusterConfig::new(self.n_atoms, self.epsilon, self.sigma, x.clone())
    }
}

impl ObjectiveFunction for LjPotential {
    fn dimension(&self) -> usize {
        3 * self.n_atoms
    }

    fn energy(&self, x: &VectorN) -> f64 {
        match self.cluster(x).and_then(|cfg| lj_energy(&cfg)) {
            Ok(e) => e,
            Err(_) => f64::INFINITY,
        }
    }

    fn force(&self, x: &VectorN) -> VectorN {
        match self.cluster(x).and_then(|cfg| lj_gradient(&cfg)) {
            Ok(g) => g.scaled(-1.0),
            Err(_) => VectorN::zeros(3 * self.n_atoms),
        }
    }
}
