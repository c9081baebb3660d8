//! One-dimensional minimization along a search direction.
//!
//! `line_minimize` brackets a minimum of `phi(alpha) = E(x + alpha d)` by
//! step doubling from alpha = 1 (halving first when even alpha = 1 already
//! overshoots), then polishes the bracket with Brent's method — golden
//! section with a parabolic-interpolation shortcut — to relative tolerance
//! 1e-10 in alpha, and finishes with a few secant steps on the directional
//! derivative `phi'(alpha) = -force(x + alpha d) . d`.
//!
//! The derivative polish matters: energy comparisons alone cannot place the
//! minimizer more accurately than the square root of machine epsilon (the
//! energy is flat to roundoff near the bottom), which is not enough for
//! conjugate gradients to terminate on an n-dimensional quadratic in n
//! steps. The directional derivative keeps full relative precision there.

use crate::error::CoreError;
use crate::objective::ObjectiveFunction;
use crate::vector::VectorN;

/// Relative tolerance on the returned step.
const REL_TOL: f64 = 1e-10;
/// Give up doubling past this step: the direction is unbounded below.
const ALPHA_MAX: f64 = 1e12;
/// Brent iteration cap; generous, typically ~50 suffice at 1e-10.
const MAX_BRENT_ITER: usize = 200;

/// Minimizes `E(x + alpha d)` over `alpha >= 0` and returns the step.
///
/// Non-finite energies along the ray are treated as +inf, so a singular
/// region simply bounds the search. Errors with `DirectionUnbounded` when
/// the energy is still strictly decreasing at `ALPHA_MAX`.
///
/// Panics if `d` has zero norm or mismatched dimension.
pub fn line_minimize(
    obj: &dyn ObjectiveFunction,
    x: &VectorN,
    d: &VectorN,
) -> Result<f64, CoreError> {
    assert!(d.norm() > 0.0, "line_minimize requires a nonzero direction");
    let phi = |alpha: f64| -> f64 {
        let e = obj.energy(&x.axpy(alpha, d));
        if e.is_finite() {
            e
        } else {
            f64::INFINITY
        }
    };

    let f0 = phi(0.0);
    if !f0.is_finite() {
        // The current point itself is singular; nothing sensible to do.
        return Err(CoreError::ObjectiveUndefined);
    }

    // Stage 1: find a step with phi(step) < phi(0), halving from 1.
    let mut step = 1.0;
    let mut f_step = phi(step);
    while f_step >= f0 {
        step *= 0.5;
        if step < 1e-18 {
            // No descent visible in the energy at any representable scale:
            // either d is genuinely not a descent direction, or the true
            // improvement has sunk below one ulp of the energy. The
            // directional derivative still resolves the second case.
            return Ok(slope_root(obj, x, d, f0));
        }
        f_step = phi(step);
    }

    // Stage 2: bracket. Invariant: f(b) < f(a) with a < b.
    let (a, b, c, fb) = {
        let mut a = 0.0;
        let mut b = step;
        let mut fb = f_step;
        let mut c = 2.0 * step;
        let mut fc = phi(c);
        loop {
            if fc >= fb {
                break (a, b, c, fb);
            }
            if c >= ALPHA_MAX {
                return Err(CoreError::DirectionUnbounded { alpha: c });
            }
            a = b;
            b = c;
            fb = fc;
            c *= 2.0;
            fc = phi(c);
        }
    };

    let (alpha, f_alpha) = brent(&phi, a, b, c, fb);
    Ok(secant_polish(obj, x, d, &phi, alpha, f_alpha, f0))
}

/// Finds the zero of the directional derivative when energy comparisons
/// have gone blind (all visible differences below roundoff). Returns 0 when
/// `d` is genuinely non-descent or no usable step exists; otherwise an
/// `alpha` whose computed energy does not exceed `f0` by more than the
/// roundoff band `4 eps (1 + |f0|)`.
///
/// This path is what lets the descent methods push the gradient norm orders
/// of magnitude below the square root of machine epsilon: near a minimum
/// the force is a small, fully-resolved number while the energy is a flat
/// plateau of rounding noise.
fn slope_root(obj: &dyn ObjectiveFunction, x: &VectorN, d: &VectorN, f0: f64) -> f64 {
    let slope = |a: f64| -> f64 {
        let p = x.axpy(a, d);
        if !p.is_finite() {
            return f64::INFINITY; // uphill as far as the bracket cares
        }
        let f = obj.force(&p);
        if f.is_finite() {
            -f.dot(d)
        } else {
            f64::INFINITY
        }
    };
    if !(slope(0.0) < 0.0) {
        return 0.0;
    }
    // Bracket the derivative's sign change by doubling.
    let mut lo = 0.0;
    let mut hi = 2f64.powi(-40);
    let mut s_hi = slope(hi);
    while s_hi < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > ALPHA_MAX {
            // Derivative never turns although the energy shows no descent:
            // numerically inconsistent; refuse the step.
            return 0.0;
        }
        s_hi = slope(hi);
    }
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    // The true energy anywhere in (0, alpha] sits at or below f0 — phi
    // decreases up to its first stationary point — but the computed value
    // can land a few ulps either way (f0 itself may be a downward rounding
    // fluke that no nearby point can match). In this saturated regime the
    // force is the trustworthy signal, so among candidates whose energy
    // stays within the roundoff band, prefer the one that most shrinks the
    // force norm; with no such candidate fall back to the largest step that
    // strictly lowers the computed energy.
    let band = 4.0 * f64::EPSILON * (1.0 + f0.abs());
    let base_force = obj.force(x).norm();
    let mut force_best: Option<(f64, f64)> = None; // (alpha, force norm)
    let mut first_strict: Option<f64> = None;
    for gamma in [1.0, 0.9, 0.75, 0.55, 0.4, 0.25, 0.15, 0.08, 0.04, 0.02, 0.01] {
        let cand = gamma * alpha;
        if cand <= 0.0 {
            break;
        }
        let p = x.axpy(cand, d);
        let e = obj.energy(&p);
        if !e.is_finite() || e > f0 + band {
            continue;
        }
        if e <= f0 && first_strict.is_none() {
            first_strict = Some(cand);
        }
        let f_norm = obj.force(&p).norm(); // NaN compares false and is skipped
        if f_norm < base_force && force_best.is_none_or(|(_, b)| f_norm < b) {
            force_best = Some((cand, f_norm));
        }
    }
    match (force_best, first_strict) {
        (Some((a, _)), _) => a,
        (None, Some(a)) => a,
        (None, None) => 0.0,
    }
}

/// Refines `alpha` with secant iteration on the directional derivative.
/// Falls back to the input whenever the derivative misbehaves or the energy
/// would rise more than roundoff allows (and never above `f0`, so callers
/// that insist on monotone progress can trust the result).
fn secant_polish(
    obj: &dyn ObjectiveFunction,
    x: &VectorN,
    d: &VectorN,
    phi: &dyn Fn(f64) -> f64,
    alpha: f64,
    f_alpha: f64,
    f0: f64,
) -> f64 {
    let slope = |a: f64| -> f64 {
        let f = obj.force(&x.axpy(a, d));
        if f.is_finite() {
            -f.dot(d)
        } else {
            f64::NAN
        }
    };
    let mut a0 = alpha;
    let mut s0 = slope(a0);
    if !s0.is_finite() {
        return alpha;
    }
    let mut a1 = a0 + (REL_TOL * a0.abs()).max(1e-16);
    let mut s1 = slope(a1);
    let mut best = (a0, s0.abs());
    for _ in 0..4 {
        if !s1.is_finite() {
            break;
        }
        if s1.abs() < best.1 {
            best = (a1, s1.abs());
        }
        if s1 == 0.0 || s1 == s0 {
            break;
        }
        let a2 = a1 - s1 * (a1 - a0) / (s1 - s0);
        if !a2.is_finite() || a2 < 0.0 || a2 > ALPHA_MAX {
            break;
        }
        (a0, s0) = (a1, s1);
        (a1, s1) = (a2, slope(a2));
    }
    if s1.is_finite() && s1.abs() < best.1 {
        best = (a1, s1.abs());
    }
    // Accept the polished step only when it does not raise the energy beyond
    // roundoff on the Brent value.
    let cand = best.0;
    if cand != alpha {
        let f_cand = phi(cand);
        if f_cand <= f_alpha + 4.0 * f64::EPSILON * (1.0 + f_alpha.abs()) && f_cand <= f0 {
            return cand;
        }
    }
    alpha
}

/// Brent's method on a bracket `a < b < c` with `f(b) < min(f(a), f(c))`.
/// Returns the abscissa of the lowest point found and its value.
fn brent(phi: &dyn Fn(f64) -> f64, a: f64, b: f64, c: f64, fb: f64) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105; // 2 - golden ratio
    let (mut lo, mut hi) = (a, c);
    // x: best; w: second best; v: previous w.
    let (mut x, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0; // step before last

    for _ in 0..MAX_BRENT_ITER {
        let m = 0.5 * (lo + hi);
        let tol = REL_TOL * x.abs() + 1e-21;
        let tol2 = 2.0 * tol;
        if (x - m).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut take_golden = true;
        if e.abs() > tol {
            // Try a parabola through x, w, v.
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            // Accept if the step is small enough and lands inside (lo, hi).
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if (u - lo) < tol2 || (hi - u) < tol2 {
                    d = if m > x { tol } else { -tol };
                }
                take_golden = false;
            }
        }
        if take_golden {
            e = if x < m { hi - x } else { lo - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol {
            x + d
        } else if d > 0.0 {
            x + tol
        } else {
            x - tol
        };
        let fu = phi(u);
        if fu <= fx {
            if u < x {
                hi = x;
            } else {
                lo = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, fx)
}
