//! The objective contract shared by every minimizer, plus finite-difference
//! gradients for checking analytic forces.

use crate::error::CoreError;
use crate::vector::VectorN;

/// A scalar field `E` over R^n together with its force `f = -grad E`.
///
/// Conventions:
/// - `energy` is total: it may return non-finite values (e.g. +inf at a
///   singularity) but must never panic for vectors of the right dimension.
/// - `force` returns the *negative* gradient, so minimizers step along it.
/// - implementations must be deterministic: same `x`, same result.
pub trait ObjectiveFunction {
    fn dimension(&self) -> usize;

    fn energy(&self, x: &VectorN) -> f64;

    fn force(&self, x: &VectorN) -> VectorN;
}

/// Central-difference gradient estimate with a single step size `h` for
/// every component:
///
/// `g_k = (E(x + h e_k) - E(x - h e_k)) / (2 h)`
///
/// Note this is the gradient, not the force: for a correct objective,
/// `force(x) + finite_diff_gradient(obj, x, h)` is close to zero.
///
/// Returns an error if `h` is not a positive finite number or if any probe
/// energy is non-finite (the objective is undefined near `x`).
pub fn finite_diff_gradient(
    obj: &dyn ObjectiveFunction,
    x: &VectorN,
    h: f64,
) -> Result<VectorN, CoreError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "finite-difference step must be positive and finite, got {h}"
        )));
    }
    central_difference(obj, x, |_| h)
}

/// Central-difference gradient with the default per-component step
/// `h_k = 1e-6 * (1 + |x_k|)`, which keeps the relative truncation error
/// comparable across widely scaled coordinates.
pub fn finite_diff_gradient_auto(
    obj: &dyn ObjectiveFunction,
    x: &VectorN,
) -> Result<VectorN, CoreError> {
    central_difference(obj, x, |xk| 1e-6 * (1.0 + xk.abs()))
}

fn central_difference(
    obj: &dyn ObjectiveFunction,
    x: &VectorN,
    step: impl Fn(f64) -> f64,
) -> Result<VectorN, CoreError> {
    let n = x.dim();
    let mut out = vec![0.0; n];
    let mut probe = x.to_vec();
    for k in 0..n {
        let xk = probe[k];
        let h = step(xk);
        probe[k] = xk + h;
        let e_plus = obj.energy(&VectorN::from_raw(probe.clone()));
        probe[k] = xk - h;
        let e_minus = obj.energy(&VectorN::from_raw(probe.clone()));
        probe[k] = xk;
        if !e_plus.is_finite() || !e_minus.is_finite() {
            return Err(CoreError::ObjectiveUndefined);
        }
        out[k] = (e_plus - e_minus) / (2.0 * h);
    }
    Ok(VectorN::from_raw(out))
}
