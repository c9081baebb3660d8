//! Shared setup for the criterion benches: representative starting points
//! and problem instances, built once per bench rather than per iteration.

use qwopt_core::ljcluster::icosahedral_13;
use qwopt_core::qwdevice::{
    default_device_bounds, BiasCondition, DrudeSurrogate, MaterialConstants,
};
use qwopt_core::{Bounds, RngStream, VectorN};

/// Icosahedral LJ-13 seed with a small Gaussian shake, the same family of
/// starting points the relaxation tests use.
pub fn perturbed_icosahedron(shake: f64, seed: u64) -> VectorN {
    let base = icosahedral_13(1.1).expect("icosahedral seed");
    let mut rng = RngStream::new(seed);
    let coords: Vec<f64> = base
        .coordinates
        .as_slice()
        .iter()
        .map(|&v| v + shake * rng.next_gaussian())
        .collect();
    VectorN::new(coords).expect("perturbed coordinates")
}

/// The standard device-tuning problem: 300 GHz bias at F0 = 0.75e5 V/m
/// over the default parameter box.
pub fn device_problem() -> (BiasCondition, Bounds, MaterialConstants, DrudeSurrogate) {
    (
        BiasCondition::new(0.75e5, 300e9).expect("bias"),
        default_device_bounds(),
        MaterialConstants::gaas(),
        DrudeSurrogate::default(),
    )
}
