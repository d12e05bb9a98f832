//! Minimum-effort hover commands.
//!
//! Two constrained programs share one solver. Both minimise `eta^T eta`
//! over `0 <= eta <= 1` with total specific thrust `|B_f eta| = g`:
//!
//! * static hover also requires `B_m eta = 0`;
//! * spinning hover only requires the net moment to be parallel to the net
//!   thrust. It is posed with one extra free unknown `s` as
//!   `B_m eta = s * B_f eta`, which is equivalent to a vanishing cross
//!   product whenever the thrust is non-zero and keeps the constraint
//!   Jacobian full rank.
//!
//! Each program is solved by an augmented Lagrangian outer loop around a
//! projected Newton inner solver, followed by Newton iterations on the KKT
//! system of the identified active set. Several deterministic starts are
//! tried and the cheapest feasible optimum is returned.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::effectiveness::ActuatorMatrices;

const N_CONSTRAINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct HoverOptions {
    /// Absolute tolerance on the thrust (m/s^2) and moment (rad/s^2)
    /// residuals.
    pub tol_eq: f64,
    /// Newton iterations allowed per start.
    pub max_iter: usize,
    /// Random starts in addition to the uniform one.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for HoverOptions {
    fn default() -> Self {
        Self {
            tol_eq: 1e-6,
            max_iter: 200,
            random_starts: 4,
            seed: 0x5e_ed0f_4057,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HoverClass {
    Static,
    Spinning,
    None,
}

/// Constraint violation of a command vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Residuals {
    /// `| |B_f eta| - g |`, m/s^2.
    pub thrust: f64,
    /// Static: `|B_m eta|`. Spinning: component of `B_m eta` normal to the
    /// thrust, `|f x m| / |f|`. rad/s^2.
    pub moment: f64,
}

impl Residuals {
    pub fn total(&self) -> f64 {
        self.thrust + self.moment
    }

    fn within(&self, tol: f64) -> bool {
        self.thrust <= tol && self.moment <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoverSolution {
    pub eta_hat: DVector<f64>,
    pub cost: f64,
    pub hover_class: HoverClass,
    pub residuals: Residuals,
}

/// Best attempt of a program that has no feasible point within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Infeasible {
    pub eta: DVector<f64>,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoverReport {
    pub hover_class: HoverClass,
    pub solution: Option<HoverSolution>,
    /// Smallest spinning-hover violation found when no class applies;
    /// zero otherwise.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Static,
    Spinning,
}

pub fn solve_static_hover(
    b: &ActuatorMatrices,
    g: f64,
    opts: &HoverOptions,
) -> Result<HoverSolution, Infeasible> {
    Program::new(b, g, Mode::Static).solve(opts)
}

pub fn solve_spinning_hover(
    b: &ActuatorMatrices,
    g: f64,
    opts: &HoverOptions,
) -> Result<HoverSolution, Infeasible> {
    Program::new(b, g, Mode::Spinning).solve(opts)
}

/// Static hover if possible, otherwise spinning hover, otherwise `None`
/// together with the smallest violation reached.
pub fn classify_hover(b: &ActuatorMatrices, g: f64, opts: &HoverOptions) -> HoverReport {
    if let Ok(sol) = solve_static_hover(b, g, opts) {
        return HoverReport {
            hover_class: HoverClass::Static,
            solution: Some(sol),
            residual: 0.0,
        };
    }
    match solve_spinning_hover(b, g, opts) {
        Ok(sol) => HoverReport {
            hover_class: HoverClass::Spinning,
            solution: Some(sol),
            residual: 0.0,
        },
        Err(inf) => HoverReport {
            hover_class: HoverClass::None,
            solution: None,
            residual: inf.residuals.total(),
        },
    }
}

/// Unscaled residuals of `eta` for static hover.
pub fn static_residuals(b: &ActuatorMatrices, g: f64, eta: &DVector<f64>) -> Residuals {
    let f = &b.b_f * eta;
    let m = &b.b_m * eta;
    Residuals {
        thrust: (f.norm() - g).abs(),
        moment: m.norm(),
    }
}

/// Unscaled residuals of `eta` for spinning hover.
pub fn spinning_residuals(b: &ActuatorMatrices, g: f64, eta: &DVector<f64>) -> Residuals {
    let f: Vector3<f64> = &b.b_f * eta;
    let m: Vector3<f64> = &b.b_m * eta;
    let fnorm = f.norm();
    let moment = if fnorm > 0.0 {
        f.cross(&m).norm() / fnorm
    } else {
        m.norm()
    };
    Residuals {
        thrust: (fnorm - g).abs(),
        moment,
    }
}

struct Program<'a> {
    b: &'a ActuatorMatrices,
    g: f64,
    mode: Mode,
    /// Rescales moment rows to the magnitude of the force rows.
    moment_weight: f64,
}

struct StartResult {
    x: DVector<f64>,
    residuals: Residuals,
    cost: f64,
}

impl<'a> Program<'a> {
    fn new(b: &'a ActuatorMatrices, g: f64, mode: Mode) -> Self {
        let fm = b.b_f.norm();
        let mm = b.b_m.norm();
        let moment_weight = if mm > 0.0 && fm > 0.0 { fm / mm } else { 1.0 };
        Self {
            b,
            g,
            mode,
            moment_weight,
        }
    }

    fn n(&self) -> usize {
        self.b.n()
    }

    fn dim(&self) -> usize {
        match self.mode {
            Mode::Static => self.n(),
            Mode::Spinning => self.n() + 1,
        }
    }

    fn eta(&self, x: &DVector<f64>) -> DVector<f64> {
        x.rows(0, self.n()).into_owned()
    }

    fn bounds(&self, i: usize) -> (f64, f64) {
        if i < self.n() {
            (0.0, 1.0)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    fn project(&self, x: &mut DVector<f64>) {
        for i in 0..self.n() {
            x[i] = x[i].clamp(0.0, 1.0);
        }
    }

    fn residuals(&self, eta: &DVector<f64>) -> Residuals {
        match self.mode {
            Mode::Static => static_residuals(self.b, self.g, eta),
            Mode::Spinning => spinning_residuals(self.b, self.g, eta),
        }
    }

    fn cost(&self, x: &DVector<f64>) -> f64 {
        x.rows(0, self.n()).norm_squared()
    }

    /// Scaled constraint values, all dimensionless and zero at a solution.
    fn constraints(&self, x: &DVector<f64>) -> [f64; N_CONSTRAINTS] {
        let eta = x.rows(0, self.n());
        let f: Vector3<f64> = &self.b.b_f * eta;
        let m: Vector3<f64> = &self.b.b_m * eta;
        let w = self.moment_weight / self.g;
        let mut c = [0.0; N_CONSTRAINTS];
        c[0] = (f.norm_squared() - self.g * self.g) / (2.0 * self.g * self.g);
        let rhs = match self.mode {
            Mode::Static => Vector3::zeros(),
            Mode::Spinning => f * x[self.n()],
        };
        for k in 0..3 {
            c[k + 1] = w * (m[k] - rhs[k]);
        }
        c
    }

    /// Constraint Jacobian, `N_CONSTRAINTS x dim`.
    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let eta = x.rows(0, n);
        let f: Vector3<f64> = &self.b.b_f * eta;
        let w = self.moment_weight / self.g;
        let mut jac = DMatrix::zeros(N_CONSTRAINTS, self.dim());
        let grad_thrust = self.b.b_f.transpose() * f / (self.g * self.g);
        for j in 0..n {
            jac[(0, j)] = grad_thrust[j];
        }
        let s = match self.mode {
            Mode::Static => 0.0,
            Mode::Spinning => x[n],
        };
        for k in 0..3 {
            for j in 0..n {
                jac[(k + 1, j)] = w * (self.b.b_m[(k, j)] - s * self.b.b_f[(k, j)]);
            }
            if self.mode == Mode::Spinning {
                jac[(k + 1, n)] = -w * f[k];
            }
        }
        jac
    }

    /// Hessian of the Lagrangian `eta^T eta + sum_k mult_k c_k`.
    fn lagrangian_hessian(&self, mult: &[f64; N_CONSTRAINTS]) -> DMatrix<f64> {
        let n = self.n();
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        for i in 0..n {
            h[(i, i)] = 2.0;
        }
        let gram = self.b.b_f.transpose() * &self.b.b_f;
        let scale = mult[0] / (self.g * self.g);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] += scale * gram[(i, j)];
            }
        }
        if self.mode == Mode::Spinning {
            let w = self.moment_weight / self.g;
            for j in 0..n {
                let mixed: f64 = (0..3).map(|k| -w * mult[k + 1] * self.b.b_f[(k, j)]).sum();
                h[(j, n)] += mixed;
                h[(n, j)] += mixed;
            }
        }
        h
    }

    fn cost_gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut grad = DVector::zeros(self.dim());
        for i in 0..self.n() {
            grad[i] = 2.0 * x[i];
        }
        grad
    }

    /// Augmented Lagrangian value, gradient and Hessian.
    fn augmented(
        &self,
        x: &DVector<f64>,
        lambda: &[f64; N_CONSTRAINTS],
        rho: f64,
    ) -> (f64, DVector<f64>, DMatrix<f64>) {
        let c = self.constraints(x);
        let jac = self.jacobian(x);
        let mut shifted = [0.0; N_CONSTRAINTS];
        let mut value = self.cost(x);
        for k in 0..N_CONSTRAINTS {
            shifted[k] = lambda[k] + rho * c[k];
            value += lambda[k] * c[k] + 0.5 * rho * c[k] * c[k];
        }
        let shifted_vec = DVector::from_column_slice(&shifted);
        let grad = self.cost_gradient(x) + jac.transpose() * &shifted_vec;
        let hess = self.lagrangian_hessian(&shifted) + jac.transpose() * &jac * rho;
        (value, grad, hess)
    }

    fn augmented_value(&self, x: &DVector<f64>, lambda: &[f64; N_CONSTRAINTS], rho: f64) -> f64 {
        let c = self.constraints(x);
        let mut value = self.cost(x);
        for k in 0..N_CONSTRAINTS {
            value += lambda[k] * c[k] + 0.5 * rho * c[k] * c[k];
        }
        value
    }

    /// Projected Newton on the box for a fixed multiplier estimate.
    /// Returns true when the projected gradient vanished.
    fn minimize_box(
        &self,
        x: &mut DVector<f64>,
        lambda: &[f64; N_CONSTRAINTS],
        rho: f64,
        budget: &mut usize,
    ) -> bool {
        let dim = self.dim();
        loop {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;

            let (value, grad, hess) = self.augmented(x, lambda, rho);
            let mut pg: f64 = 0.0;
            for i in 0..dim {
                let (lo, hi) = self.bounds(i);
                pg = pg.max((x[i] - (x[i] - grad[i]).clamp(lo, hi)).abs());
            }
            if pg < 1e-12 {
                return true;
            }

            let eps = pg.min(1e-6);
            let mut free = Vec::with_capacity(dim);
            let mut step = DVector::zeros(dim);
            for i in 0..dim {
                let (lo, hi) = self.bounds(i);
                let binding = (x[i] <= lo + eps && grad[i] > 0.0) || (x[i] >= hi - eps && grad[i] < 0.0);
                if binding {
                    step[i] = -grad[i] / hess[(i, i)].max(1e-12);
                } else {
                    free.push(i);
                }
            }
            if !free.is_empty() {
                let sub_h = hess.select_rows(&free).select_columns(&free);
                let sub_g = DVector::from_iterator(free.len(), free.iter().map(|&i| grad[i]));
                let dir = regularized_newton(&sub_h, &sub_g);
                for (k, &i) in free.iter().enumerate() {
                    step[i] = dir[k];
                }
            }

            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let mut trial = &*x + &step * t;
                self.project(&mut trial);
                let decrease = grad.dot(&(&trial - &*x));
                let trial_value = self.augmented_value(&trial, lambda, rho);
                if trial_value <= value + 1e-4 * decrease.min(0.0) && trial_value <= value {
                    accepted = Some(trial);
                    break;
                }
                t *= 0.5;
            }
            let Some(next) = accepted else {
                return false;
            };
            let moved = (&next - &*x).amax();
            *x = next;
            if moved < 1e-15 {
                return true;
            }
        }
    }

    fn augmented_lagrangian(&self, x: &mut DVector<f64>, max_iter: usize) -> [f64; N_CONSTRAINTS] {
        let mut lambda = [0.0; N_CONSTRAINTS];
        let mut rho = 10.0;
        let mut prev = f64::INFINITY;
        let mut budget = max_iter;
        for _ in 0..40 {
            let converged = self.minimize_box(x, &lambda, rho, &mut budget);
            let c = self.constraints(x);
            let violation = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            if converged && violation < 1e-13 {
                break;
            }
            for k in 0..N_CONSTRAINTS {
                lambda[k] += rho * c[k];
            }
            if violation > 0.25 * prev {
                rho = (rho * 10.0).min(1e10);
            }
            prev = violation;
            if budget == 0 {
                break;
            }
        }
        lambda
    }

    /// Newton iterations on the KKT system with the active bounds held
    /// fixed. Bounds that turn out to carry a multiplier of the wrong sign
    /// are released and the iteration repeated.
    fn polish(&self, x: &mut DVector<f64>, lambda: &mut [f64; N_CONSTRAINTS]) {
        let n = self.n();
        let dim = self.dim();
        let mut fixed: Vec<bool> = (0..dim)
            .map(|i| i < n && (x[i] <= 1e-12 || x[i] >= 1.0 - 1e-12))
            .collect();
        for i in 0..n {
            if fixed[i] {
                x[i] = if x[i] < 0.5 { 0.0 } else { 1.0 };
            }
        }

        for _round in 0..4 {
            for _ in 0..20 {
                let free: Vec<usize> = (0..dim).filter(|&i| !fixed[i]).collect();
                let c = self.constraints(x);
                let jac = self.jacobian(x).select_columns(&free);
                let hess = self
                    .lagrangian_hessian(lambda)
                    .select_rows(&free)
                    .select_columns(&free);
                let grad = self.cost_gradient(x);

                let nf = free.len();
                let size = nf + N_CONSTRAINTS;
                let mut kkt = DMatrix::zeros(size, size);
                kkt.view_mut((0, 0), (nf, nf)).copy_from(&hess);
                kkt.view_mut((0, nf), (nf, N_CONSTRAINTS))
                    .copy_from(&jac.transpose());
                kkt.view_mut((nf, 0), (N_CONSTRAINTS, nf)).copy_from(&jac);
                let mut rhs = DVector::zeros(size);
                for (k, &i) in free.iter().enumerate() {
                    rhs[k] = -grad[i];
                }
                for k in 0..N_CONSTRAINTS {
                    rhs[nf + k] = -c[k];
                }
                let Some(sol) = kkt.lu().solve(&rhs) else {
                    return;
                };
                if sol.iter().any(|v| !v.is_finite()) {
                    return;
                }

                let mut hit_bound = false;
                let mut moved: f64 = 0.0;
                for (k, &i) in free.iter().enumerate() {
                    x[i] += sol[k];
                    moved = moved.max(sol[k].abs());
                    if i < n && (x[i] <= 0.0 || x[i] >= 1.0) {
                        x[i] = x[i].clamp(0.0, 1.0);
                        fixed[i] = true;
                        hit_bound = true;
                    }
                }
                for k in 0..N_CONSTRAINTS {
                    lambda[k] = sol[nf + k];
                }
                let violation = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                if !hit_bound && moved < 1e-15 && violation < 1e-15 {
                    break;
                }
            }

            // bound multipliers: gradient of the Lagrangian must push outward
            let jac = self.jacobian(x);
            let lam = DVector::from_column_slice(lambda);
            let lag_grad = self.cost_gradient(x) + jac.transpose() * lam;
            let mut released = false;
            for i in 0..n {
                if !fixed[i] {
                    continue;
                }
                let wrong_sign = if x[i] == 0.0 {
                    lag_grad[i] < -1e-9
                } else {
                    lag_grad[i] > 1e-9
                };
                if wrong_sign {
                    fixed[i] = false;
                    released = true;
                }
            }
            if !released {
                return;
            }
        }
    }

    fn run_start(&self, start: DVector<f64>, max_iter: usize) -> StartResult {
        let mut x = start;
        let mut lambda = self.augmented_lagrangian(&mut x, max_iter);
        let before = x.clone();
        let before_res = self.residuals(&self.eta(&before));

        self.polish(&mut x, &mut lambda);
        self.project(&mut x);
        let mut residuals = self.residuals(&self.eta(&x));
        let polished_ok = x.iter().all(|v| v.is_finite()) && residuals.total() <= before_res.total();
        if !polished_ok {
            x = before;
            residuals = before_res;
        }
        StartResult {
            cost: self.cost(&x),
            x,
            residuals,
        }
    }

    fn starts(&self, opts: &HoverOptions) -> Vec<DVector<f64>> {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut out = Vec::with_capacity(1 + opts.random_starts);
        out.push(self.start_from(DVector::from_element(n, 1.0)));
        for _ in 0..opts.random_starts {
            let eta = DVector::from_fn(n, |_, _| rng.random::<f64>());
            out.push(self.start_from(eta));
        }
        out
    }

    /// Scales a direction in command space onto the thrust sphere and
    /// appends the spin ratio estimate for the spinning program.
    fn start_from(&self, direction: DVector<f64>) -> DVector<f64> {
        let n = self.n();
        let f_norm = (&self.b.b_f * &direction).norm();
        let peak = direction.amax();
        let mut eta = direction;
        if f_norm > 0.0 && peak > 0.0 {
            let scale = (self.g / f_norm).min(1.0 / peak);
            eta *= scale;
        }
        let mut x = DVector::zeros(self.dim());
        x.rows_mut(0, n).copy_from(&eta);
        if self.mode == Mode::Spinning {
            let f: Vector3<f64> = &self.b.b_f * &eta;
            let m: Vector3<f64> = &self.b.b_m * &eta;
            let ff = f.norm_squared();
            x[n] = if ff > 0.0 { f.dot(&m) / ff } else { 0.0 };
        }
        x
    }

    fn solve(&self, opts: &HoverOptions) -> Result<HoverSolution, Infeasible> {
        let class = match self.mode {
            Mode::Static => HoverClass::Static,
            Mode::Spinning => HoverClass::Spinning,
        };
        let mut best: Option<StartResult> = None;
        let mut least_violation: Option<StartResult> = None;
        for start in self.starts(opts) {
            let r = self.run_start(start, opts.max_iter);
            if r.residuals.within(opts.tol_eq) {
                if best.as_ref().is_none_or(|b| r.cost < b.cost) {
                    best = Some(r);
                }
            } else if least_violation
                .as_ref()
                .is_none_or(|b| r.residuals.total() < b.residuals.total())
            {
                least_violation = Some(r);
            }
        }
        match (best, least_violation) {
            (Some(b), _) => Ok(HoverSolution {
                eta_hat: self.eta(&b.x),
                cost: b.cost,
                hover_class: class,
                residuals: b.residuals,
            }),
            (None, Some(r)) => Err(Infeasible {
                eta: self.eta(&r.x),
                residuals: r.residuals,
            }),
            (None, None) => unreachable!("at least one start is always run"),
        }
    }
}

/// Newton direction `-(H + tau I)^{-1} g`, with the shift raised until the
/// matrix is positive definite.
fn regularized_newton(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let scale = h.diagonal().amax().max(1e-12);
    let mut tau = 0.0;
    for _ in 0..30 {
        let shifted = h + DMatrix::identity(h.nrows(), h.ncols()) * tau;
        if let Some(chol) = shifted.cholesky() {
            return -chol.solve(g);
        }
        tau = if tau == 0.0 { 1e-10 * scale } else { tau * 10.0 };
    }
    -g / scale
}
