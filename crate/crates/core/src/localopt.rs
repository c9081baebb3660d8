//! Local optimizers: steepest descent, damped Newtonian dynamics, nonlinear
//! conjugate gradients, a 1-D Newton root-finder, and BFGS.

use crate::error::CoreError;
use crate::linesearch::line_minimize;
use crate::objective::ObjectiveFunction;
use crate::report::{OptimizerReport, Termination};
use crate::vector::{SquareMatrix, VectorN};

/// Shared knobs for the local methods.
///
/// `lambda` is the step size, `mu` the damping of the damped-Newtonian
/// recurrence (ignored by the other methods). `use_backtracking` applies to
/// steepest descent only: the damped recurrence is iterated verbatim, and
/// CG/BFGS have their own line searches.
#[derive(Debug, Clone)]
pub struct LocalOptConfig {
    pub lambda: f64,
    pub mu: f64,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub use_backtracking: bool,
    /// Record `(iteration, energy)` pairs in the report.
    pub record_trajectory: bool,
    /// Record every iterate (memory proportional to run length); used by
    /// tests that compare methods step for step.
    pub record_iterates: bool,
}

impl Default for LocalOptConfig {
    fn default() -> Self {
        Self {
            lambda: 0.01,
            mu: 0.5,
            max_iter: 10_000,
            grad_tol: 1e-8,
            use_backtracking: true,
            record_trajectory: true,
            record_iterates: false,
        }
    }
}

impl LocalOptConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "lambda must be positive and finite, got {}",
                self.lambda
            )));
        }
        if !(self.mu.is_finite() && (0.0..=1.0).contains(&self.mu)) {
            return Err(CoreError::InvalidConfig(format!(
                "mu must lie in [0, 1], got {}",
                self.mu
            )));
        }
        if self.max_iter < 1 {
            return Err(CoreError::InvalidConfig(
                "max_iter must be at least 1".into(),
            ));
        }
        if !(self.grad_tol.is_finite() && self.grad_tol > 0.0) {
            return Err(CoreError::InvalidConfig(format!(
                "grad_tol must be positive and finite, got {}",
                self.grad_tol
            )));
        }
        Ok(())
    }
}

/// Book-keeping shared by the iterative methods.
struct Run {
    x: VectorN,
    e: f64,
    f: VectorN,
    best_x: VectorN,
    best_e: f64,
    /// Force norm at `best_x`; inside the rounding plateau (energies equal
    /// to within a few ulps) ties are broken toward the smaller force so the
    /// reported point is the most stationary one seen.
    best_f_norm: f64,
    /// Tightest certified upper bound on the true energy at `x`. Guarded
    /// (monotone) methods record this in the trajectory: every step they
    /// commit is a move along a descent line whose true energy cannot rise,
    /// so `min(bound, e)` stays a valid bound even when the computed energy
    /// wobbles by an ulp inside the final plateau.
    bound: f64,
    steps: usize,
    trajectory: Option<Vec<(usize, f64)>>,
    iterates: Option<Vec<VectorN>>,
}

impl Run {
    /// Evaluates the starting point, rejecting non-finite energy or force.
    fn start(obj: &dyn ObjectiveFunction, x0: &VectorN, cfg: &LocalOptConfig) -> Result<Self, CoreError> {
        let e = obj.energy(x0);
        if !e.is_finite() {
            return Err(CoreError::NonFiniteInput {
                context: "energy at the starting point",
            });
        }
        let f = obj.force(x0);
        if !f.is_finite() {
            return Err(CoreError::NonFiniteInput {
                context: "force at the starting point",
            });
        }
        let best_f_norm = f.norm();
        Ok(Self {
            x: x0.clone(),
            e,
            f,
            best_x: x0.clone(),
            best_e: e,
            best_f_norm,
            bound: e,
            steps: 0,
            trajectory: cfg.record_trajectory.then(|| vec![(0, e)]),
            iterates: cfg.record_iterates.then(|| vec![x0.clone()]),
        })
    }

    /// Commits an accepted step; the caller guarantees `e` is finite.
    ///
    /// `monotone` marks steps taken under a descent guard (backtracking or a
    /// line search): for those the recorded trajectory value is the certified
    /// bound `min(bound, e)`, which is non-increasing by construction.
    /// Verbatim dynamics pass `false` and record the raw energy, so genuine
    /// rises stay visible.
    fn commit(
        &mut self,
        obj: &dyn ObjectiveFunction,
        x: VectorN,
        e: f64,
        monotone: bool,
    ) -> Result<(), CoreError> {
        let f = obj.force(&x);
        if !f.is_finite() {
            return Err(CoreError::NonFiniteEnergy {
                last_valid: Box::new(self.x.clone()),
                last_value: self.e,
                iterations: self.steps,
            });
        }
        self.x = x;
        self.e = e;
        self.f = f;
        self.steps += 1;
        self.bound = if monotone { self.bound.min(e) } else { e };
        // Decisively lower energy always wins the best slot; inside the
        // rounding band the force decides. `best_e` stays the raw computed
        // energy at `best_x` so `best_value = energy(best_point)` holds
        // exactly.
        let f_norm = self.f.norm();
        let band = 4.0 * f64::EPSILON * (1.0 + self.best_e.abs());
        let take = if e < self.best_e - band {
            true
        } else {
            e <= self.best_e + band && f_norm < self.best_f_norm
        };
        if take {
            self.best_e = e;
            self.best_f_norm = f_norm;
            self.best_x = self.x.clone();
        }
        if let Some(t) = self.trajectory.as_mut() {
            t.push((self.steps, if monotone { self.bound } else { e }));
        }
        if let Some(it) = self.iterates.as_mut() {
            it.push(self.x.clone());
        }
        Ok(())
    }

    fn non_finite_step(&self) -> CoreError {
        CoreError::NonFiniteEnergy {
            last_valid: Box::new(self.x.clone()),
            last_value: self.e,
            iterations: self.steps,
        }
    }

    fn finish(self, termination: Termination) -> OptimizerReport {
        OptimizerReport {
            best_point: self.best_x,
            best_value: self.best_e,
            iterations: self.steps,
            trajectory: self.trajectory,
            iterates: self.iterates,
            termination,
            seed: None,
        }
    }
}

/// Progress test for line-search methods at the floating-point floor.
///
/// A step counts when the computed energy does not rise, or — inside the
/// rounding plateau, where the energy readout has saturated — when it rises
/// by at most a few ulps while the force strictly shrinks. The force is the
/// fully resolved signal there: the committed step is a move along a descent
/// line, so the true energy cannot have risen.
fn flat_progress(obj: &dyn ObjectiveFunction, run: &Run, cand: &VectorN, ec: f64) -> bool {
    if ec <= run.e {
        return true;
    }
    let band = 4.0 * f64::EPSILON * (1.0 + run.e.abs());
    ec <= run.e + band && obj.force(cand).norm() < run.f.norm()
}

/// Steepest descent: `x(i+1) = x(i) + lambda f[x(i)]`.
///
/// With `use_backtracking`, lambda is halved within an iteration (at most 60
/// times) until the energy strictly decreases, making the recorded
/// trajectory non-increasing; without it the formula is applied verbatim.
pub fn steepest_descent(
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    cfg: &LocalOptConfig,
) -> Result<OptimizerReport, CoreError> {
    cfg.validate()?;
    let mut run = Run::start(obj, x0, cfg)?;
    let termination = loop {
        if run.f.norm() <= cfg.grad_tol {
            break Termination::Converged;
        }
        if run.steps >= cfg.max_iter {
            break Termination::MaxIter;
        }
        if cfg.use_backtracking {
            let mut lambda = cfg.lambda;
            let mut accepted = None;
            for _ in 0..=60 {
                let cand = run.x.axpy(lambda, &run.f);
                let ec = obj.energy(&cand);
                if ec.is_finite() && ec < run.e {
                    accepted = Some((cand, ec));
                    break;
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((cand, ec)) => run.commit(obj, cand, ec, true)?,
                None => break Termination::Stalled,
            }
        } else {
            let cand = run.x.axpy(cfg.lambda, &run.f);
            let ec = obj.energy(&cand);
            if !ec.is_finite() {
                return Err(run.non_finite_step());
            }
            run.commit(obj, cand, ec, false)?;
        }
    };
    Ok(run.finish(termination))
}

/// Damped Newtonian dynamics:
/// `x(i+1) = [2 x(i) + lambda f(x(i)) - x(i-1) (1 - mu)] / (1 + mu)`,
/// bootstrapped with `x(-1) = x(0)`.
///
/// The recurrence is applied verbatim (no backtracking); at `mu = 1` it
/// reduces to steepest descent with step `lambda / 2`, and the floating-point
/// evaluation order below preserves that identity bit for bit.
pub fn damped_newtonian(
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    cfg: &LocalOptConfig,
) -> Result<OptimizerReport, CoreError> {
    cfg.validate()?;
    let mut run = Run::start(obj, x0, cfg)?;
    let mut x_prev = x0.clone();
    let termination = loop {
        if run.f.norm() <= cfg.grad_tol {
            break Termination::Converged;
        }
        if run.steps >= cfg.max_iter {
            break Termination::MaxIter;
        }
        let cand = run
            .x
            .scaled(2.0)
            .axpy(cfg.lambda, &run.f)
            .sub(&x_prev.scaled(1.0 - cfg.mu))
            .scaled(1.0 / (1.0 + cfg.mu));
        let ec = obj.energy(&cand);
        if !cand.is_finite() || !ec.is_finite() {
            return Err(run.non_finite_step());
        }
        x_prev = run.x.clone();
        run.commit(obj, cand, ec, false)?;
    };
    Ok(run.finish(termination))
}

/// Nonlinear conjugate gradients with Polak-Ribiere directions
/// (clamped at zero) and a forced restart to steepest descent every n steps.
/// Each step takes an (essentially exact) line minimization, so on an SPD
/// quadratic of dimension n the method terminates within n steps.
pub fn conjugate_gradient(
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    cfg: &LocalOptConfig,
) -> Result<OptimizerReport, CoreError> {
    cfg.validate()?;
    let n = x0.dim();
    let mut run = Run::start(obj, x0, cfg)?;
    let mut d = run.f.clone();
    let mut since_restart = 0usize;
    let mut restarted_after_stall = false;
    let termination = loop {
        if run.f.norm() <= cfg.grad_tol {
            break Termination::Converged;
        }
        if run.steps >= cfg.max_iter {
            break Termination::MaxIter;
        }
        if d.norm() == 0.0 {
            // f is nonzero here, so a zero direction means beta fed us
            // garbage; fall back to steepest descent.
            d = run.f.clone();
            since_restart = 0;
        }
        let alpha = line_minimize(obj, &run.x, &d)?;
        let cand = run.x.axpy(alpha, &d);
        let ec = obj.energy(&cand);
        let progressed = alpha > 0.0 && ec.is_finite() && flat_progress(obj, &run, &cand, ec);
        if !progressed {
            // No usable step along d. If d was already the steepest
            // direction, we are stuck; otherwise restart once and retry.
            if since_restart == 0 || restarted_after_stall {
                break Termination::Stalled;
            }
            d = run.f.clone();
            since_restart = 0;
            restarted_after_stall = true;
            continue;
        }
        restarted_after_stall = false;
        let f_old = run.f.clone();
        run.commit(obj, cand, ec, true)?;
        since_restart += 1;
        let beta = if since_restart >= n {
            0.0
        } else {
            let denom = f_old.dot(&f_old);
            if denom > 0.0 {
                // Polak-Ribiere in force form: g = -f.
                ((run.f.dot(&run.f) - run.f.dot(&f_old)) / denom).max(0.0)
            } else {
                0.0
            }
        };
        if beta == 0.0 {
            since_restart = 0;
        }
        d = run.f.add(&d.scaled(beta));
    };
    Ok(run.finish(termination))
}

/// 1-D Newton iteration `x(i+1) = x(i) - f(x(i)) / f'(x(i))`.
///
/// Returns the first iterate with `|f(x)| <= tol`. Errors when the
/// derivative magnitude drops below 1e-300 or the budget runs out (the
/// error then carries the best iterate seen).
pub fn newton_1d(
    f: impl Fn(f64) -> f64,
    fprime: impl Fn(f64) -> f64,
    x0: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64, CoreError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "tol must be positive and finite, got {tol}"
        )));
    }
    if max_iter < 1 {
        return Err(CoreError::InvalidConfig(
            "max_iter must be at least 1".into(),
        ));
    }
    let mut x = x0;
    let mut best = (x0, f64::INFINITY);
    for step in 0..=max_iter {
        if !x.is_finite() {
            return Err(CoreError::NonFiniteInput {
                context: "newton_1d iterate",
            });
        }
        let fx = f(x);
        if !fx.is_finite() {
            return Err(CoreError::NonFiniteInput {
                context: "newton_1d residual",
            });
        }
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if step == max_iter {
            break; // budget spent; the final iterate was still checked
        }
        let d = fprime(x);
        if !d.is_finite() || d.abs() < 1e-300 {
            return Err(CoreError::DerivativeVanished { at: x });
        }
        x -= fx / d;
    }
    Err(CoreError::RootMaxIter {
        best: best.0,
        best_residual: best.1,
        max_iter,
    })
}

/// BFGS with identity initial inverse curvature and an Armijo backtracking
/// line search (c = 1e-4, initial step 1, halving). Steps whose curvature
/// condition fails simply skip the inverse-Hessian update.
pub fn quasi_newton(
    obj: &dyn ObjectiveFunction,
    x0: &VectorN,
    cfg: &LocalOptConfig,
) -> Result<OptimizerReport, CoreError> {
    cfg.validate()?;
    let n = x0.dim();
    let mut run = Run::start(obj, x0, cfg)?;
    let mut h = SquareMatrix::identity(n);
    let termination = loop {
        if run.f.norm() <= cfg.grad_tol {
            break Termination::Converged;
        }
        if run.steps >= cfg.max_iter {
            break Termination::MaxIter;
        }
        // Newton-like direction: d = H f (H approximates the inverse
        // Hessian, f is the negative gradient).
        let mut d = h.matvec(&run.f);
        let mut fd = run.f.dot(&d);
        if !(fd > 0.0) || !d.is_finite() {
            // Not a descent direction; reset the curvature model.
            h = SquareMatrix::identity(n);
            d = run.f.clone();
            fd = run.f.dot(&d);
            if !(fd > 0.0) {
                break Termination::Stalled;
            }
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=60 {
            let cand = run.x.axpy(alpha, &d);
            let ec = obj.energy(&cand);
            if ec.is_finite() && ec <= run.e - 1e-4 * alpha * fd {
                accepted = Some((cand, ec));
                break;
            }
            alpha *= 0.5;
        }
        if accepted.is_none() {
            // Armijo went blind: near a minimum every candidate energy ties
            // the current one to the last ulp. An exact line minimization
            // (which falls back to the directional derivative there) can
            // still find a step that shrinks the force.
            let alpha = line_minimize(obj, &run.x, &d)?;
            if alpha > 0.0 {
                let cand = run.x.axpy(alpha, &d);
                let ec = obj.energy(&cand);
                if ec.is_finite() && flat_progress(obj, &run, &cand, ec) {
                    accepted = Some((cand, ec));
                }
            }
        }
        let (cand, ec) = match accepted {
            Some(v) => v,
            None => break Termination::Stalled,
        };
        let x_old = run.x.clone();
        let f_old = run.f.clone();
        run.commit(obj, cand, ec, true)?;
        let s = run.x.sub(&x_old);
        let y = f_old.sub(&run.f); // gradient change: g_new - g_old = f_old - f_new
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            bfgs_update(&mut h, &s, &y, sy);
        }
    };
    Ok(run.finish(termination))
}

/// In-place BFGS inverse update
/// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T` with `rho = 1/(s.y)`.
fn bfgs_update(h: &mut SquareMatrix, s: &VectorN, y: &VectorN, sy: f64) {
    let n = h.n();
    let rho = 1.0 / sy;
    let hy = h.matvec(y);
    let yhy = y.dot(&hy);
    let coeff = rho * rho * yhy + rho;
    for i in 0..n {
        for j in 0..n {
            let v = h.get(i, j) - rho * (s.as_slice()[i] * hy[j] + hy[i] * s.as_slice()[j])
                + coeff * s.as_slice()[i] * s.as_slice()[j];
            h.set(i, j, v);
        }
    }
}
