//! Explicit time integration of the viscous equation
//!
//! ```text
//! u_t = (u + eps) lap u - gamma |grad u|^2 + f(t, u)
//! ```
//!
//! and the vanishing-viscosity driver that repeats the solve along a ladder
//! of decreasing `eps`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::grid::{quadrature_weight, ExactBoundary, Grid, GridError, Padded, ScalarField};
use crate::problem::{Forcing, ProblemConfig, ProblemError};

/// Regularizer in the stable-step denominator so it never vanishes.
pub const DT_GUARD: f64 = 1e-12;
/// Multiplier of `h^2 max(1, max u0)` in the undershoot tolerance.
pub const NEGATIVITY_FACTOR: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("degenerate state: max u + eps = 0 and gamma * G = 0; solution is identically zero")]
    Degenerate,
    #[error("cfl safety must lie in (0, 1], got {0}")]
    BadSafety(f64),
    #[error(
        "non-finite update at node {node}, t = {t}: u = {u}, lap = {laplacian}, |grad|^2 = {grad_sq}, f = {forcing}"
    )]
    NonFinite {
        node: usize,
        t: f64,
        u: f64,
        laplacian: f64,
        grad_sq: f64,
        forcing: f64,
    },
    #[error("undershoot at node {node}, t = {t}: u = {value} < -{tolerance}")]
    Undershoot {
        node: usize,
        t: f64,
        value: f64,
        tolerance: f64,
    },
    #[error("schedule too short for convergence table (eps_count = {0}, need >= 2)")]
    ScheduleTooShort(usize),
}

/// Largest stable forward-Euler step,
/// `safety h^2 / (2N (max u + eps) + h gamma G + h^2 DT_GUARD)`.
///
/// `grad_max` is `max |grad u|` from the previous step (0 on the first).
pub fn stable_dt(
    u: &ScalarField,
    eps: f64,
    gamma: f64,
    grad_max: f64,
    safety: f64,
) -> Result<f64, SolverError> {
    let grid = u.grid();
    stable_dt_from(
        grid.dim(),
        grid.spacing(),
        u.max(),
        eps,
        gamma,
        grad_max,
        safety,
    )
}

fn stable_dt_from(
    dim: usize,
    h: f64,
    u_max: f64,
    eps: f64,
    gamma: f64,
    grad_max: f64,
    safety: f64,
) -> Result<f64, SolverError> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(SolverError::BadSafety(safety));
    }
    let diffusivity = (u_max + eps).max(0.0);
    let transport = gamma * grad_max;
    if diffusivity == 0.0 && transport == 0.0 {
        return Err(SolverError::Degenerate);
    }
    Ok(safety * h * h / (2.0 * dim as f64 * diffusivity + h * transport + h * h * DT_GUARD))
}

#[derive(Debug, Clone, Copy)]
struct StepStats {
    /// `max |grad u|` of the input state.
    grad_max: f64,
    out_min: (usize, f64),
    out_max: f64,
}

/// Reusable buffers for repeated steps on one grid.
struct Stepper {
    padded: Padded,
}

impl Stepper {
    fn new(grid: Grid) -> Self {
        Stepper {
            padded: Padded::new(grid),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn advance(
        &mut self,
        u: &[f64],
        out: &mut [f64],
        t: f64,
        dt: f64,
        eps: f64,
        gamma: f64,
        forcing: &Forcing,
        bc: Option<&dyn ExactBoundary>,
    ) -> Result<StepStats, SolverError> {
        self.padded.fill(u, t, bc)?;
        let mut stats = StepStats {
            grad_max: 0.0,
            out_min: (0, f64::INFINITY),
            out_max: f64::NEG_INFINITY,
        };
        for (k, (&uk, next)) in u.iter().zip(out.iter_mut()).enumerate() {
            let lap = self.padded.laplacian_at(k);
            let g = self.padded.gradient_at(k);
            let grad_sq = g[0] * g[0] + g[1] * g[1];
            let f = forcing.eval(t, uk);
            let v = uk + dt * ((uk + eps) * lap - gamma * grad_sq + f);
            if !v.is_finite() {
                return Err(SolverError::NonFinite {
                    node: k,
                    t,
                    u: uk,
                    laplacian: lap,
                    grad_sq,
                    forcing: f,
                });
            }
            *next = v;
            stats.grad_max = stats.grad_max.max(grad_sq);
            if v < stats.out_min.1 {
                stats.out_min = (k, v);
            }
            stats.out_max = stats.out_max.max(v);
        }
        stats.grad_max = stats.grad_max.sqrt();
        Ok(stats)
    }
}

/// One forward-Euler step of the viscous equation. Negative values are not
/// clamped.
#[allow(clippy::too_many_arguments)]
pub fn step(
    u: &ScalarField,
    t: f64,
    dt: f64,
    eps: f64,
    gamma: f64,
    forcing: &Forcing,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, SolverError> {
    let grid = *u.grid();
    let mut out = vec![0.0; grid.len()];
    Stepper::new(grid).advance(u.values(), &mut out, t, dt, eps, gamma, forcing, bc)?;
    Ok(ScalarField::from_raw(grid, out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: ScalarField,
}

/// Snapshots of one viscous solve.
#[derive(Clone)]
pub struct Trajectory {
    pub epsilon: f64,
    pub snapshots: Vec<Snapshot>,
    pub step_count: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Undershoot tolerance the run was accepted under.
    pub tol_neg: f64,
    boundary: Option<Arc<dyn ExactBoundary>>,
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trajectory")
            .field("epsilon", &self.epsilon)
            .field("snapshots", &self.snapshots.len())
            .field("step_count", &self.step_count)
            .field("dt_min", &self.dt_min)
            .field("dt_max", &self.dt_max)
            .field("tol_neg", &self.tol_neg)
            .field("exact_boundary", &self.boundary.is_some())
            .finish()
    }
}

impl Trajectory {
    /// Assembles a trajectory from snapshots computed elsewhere.
    pub fn from_snapshots(
        epsilon: f64,
        snapshots: Vec<Snapshot>,
        boundary: Option<Arc<dyn ExactBoundary>>,
    ) -> Self {
        Trajectory {
            epsilon,
            snapshots,
            step_count: 0,
            dt_min: 0.0,
            dt_max: 0.0,
            tol_neg: 0.0,
            boundary,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.snapshots[0].field.grid()
    }

    /// Exact boundary callback for exact-mode runs.
    pub fn boundary(&self) -> Option<&dyn ExactBoundary> {
        self.boundary.as_deref()
    }

    pub fn initial(&self) -> &ScalarField {
        &self.snapshots[0].field
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trajectory has snapshots")
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }
}

/// Undershoot tolerance `10 h^2 max(1, max u0)`.
pub fn negativity_tolerance(grid: &Grid, u0: &ScalarField) -> f64 {
    NEGATIVITY_FACTOR * grid.spacing() * grid.spacing() * u0.max().max(1.0)
}

/// Forward-Euler march of the viscous problem with viscosity `eps` from the
/// configured initial data (lifted by `eps` when `config.eps_lift`), landing
/// exactly on every snapshot time.
pub fn solve_viscous(config: &ProblemConfig, eps: f64) -> Result<Trajectory, SolverError> {
    config.validate()?;
    let grid = config.build_grid()?;
    let u0 = config.initial_condition(eps)?;
    let exact: Option<Arc<dyn ExactBoundary>> = config
        .exact_solution(eps)
        .map(|s| Arc::new(s) as Arc<dyn ExactBoundary>);
    let bc = exact.as_deref();
    let tol_neg = negativity_tolerance(&grid, &u0);
    let h = grid.spacing();

    let times = config.snapshot_schedule();
    let mut snapshots = Vec::with_capacity(times.len());
    let mut stepper = Stepper::new(grid);
    let mut u = u0.into_values();
    let mut next = vec![0.0; u.len()];
    let mut u_max = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut grad_max = 0.0;
    let mut t = 0.0;
    let mut step_count = 0;
    let (mut dt_min, mut dt_max) = (f64::INFINITY, 0.0f64);

    snapshots.push(Snapshot {
        t: 0.0,
        field: ScalarField::from_raw(grid, u.clone()),
    });
    for &target in &times[1..] {
        while t < target {
            let dt = match stable_dt_from(
                grid.dim(),
                h,
                u_max,
                eps,
                config.gamma,
                grad_max,
                config.cfl_safety,
            ) {
                Ok(dt) => dt,
                Err(SolverError::Degenerate) if config.forcing.is_zero() => {
                    // u = 0 is a fixed point: nothing left to integrate.
                    t = target;
                    break;
                }
                Err(SolverError::Degenerate) => config.cfl_safety * h * h,
                Err(e) => return Err(e),
            };
            let (dt, t_next) = if t + dt >= target {
                (target - t, target)
            } else {
                (dt, t + dt)
            };
            let stats =
                stepper.advance(&u, &mut next, t, dt, eps, config.gamma, &config.forcing, bc)?;
            if stats.out_min.1 < -tol_neg {
                return Err(SolverError::Undershoot {
                    node: stats.out_min.0,
                    t: t_next,
                    value: stats.out_min.1,
                    tolerance: tol_neg,
                });
            }
            std::mem::swap(&mut u, &mut next);
            grad_max = stats.grad_max;
            u_max = stats.out_max;
            t = t_next;
            step_count += 1;
            dt_min = dt_min.min(dt);
            dt_max = dt_max.max(dt);
        }
        snapshots.push(Snapshot {
            t: target,
            field: ScalarField::from_raw(grid, u.clone()),
        });
    }
    if step_count == 0 {
        dt_min = 0.0;
    }
    Ok(Trajectory {
        epsilon: eps,
        snapshots,
        step_count,
        dt_min,
        dt_max,
        tol_neg,
        boundary: exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    /// `max |u^{eps_k} - u^{eps_{k-1}}|` at T.
    pub diff_inf: f64,
    /// Same difference in L1 at T.
    pub diff_l1: f64,
    /// `ln(d_{k-1} / d_k) / ln(eps_{k-1} / eps_k)` for the sup differences;
    /// absent on the first row or when a difference is zero.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub warnings: Vec<String>,
}

impl ConvergenceTable {
    /// Whether the sup-norm differences strictly decrease down the table.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].diff_inf < w[0].diff_inf)
    }
}

/// Successive differences at the final time of trajectories ordered by
/// decreasing `eps`.
pub fn convergence_table(trajectories: &[Trajectory]) -> Result<ConvergenceTable, SolverError> {
    let mut table = ConvergenceTable::default();
    for pair in trajectories.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        let a = &coarse.last().field;
        let b = &fine.last().field;
        if a.grid() != b.grid() {
            return Err(GridError::GridMismatch.into());
        }
        let grid = *a.grid();
        let mut diff_inf = 0.0f64;
        let mut diff_l1 = 0.0;
        for (k, (x, y)) in a.values().iter().zip(b.values()).enumerate() {
            let d = (x - y).abs();
            diff_inf = diff_inf.max(d);
            diff_l1 += quadrature_weight(&grid, k) * d;
        }
        let order = table.rows.last().and_then(|prev: &ConvergenceRow| {
            (prev.diff_inf > 0.0 && diff_inf > 0.0)
                .then(|| (prev.diff_inf / diff_inf).ln() / (prev.eps / fine.epsilon).ln())
        });
        table.rows.push(ConvergenceRow {
            eps: fine.epsilon,
            diff_inf,
            diff_l1,
            order,
        });
    }
    for w in table.rows.windows(2) {
        if w[1].diff_inf >= w[0].diff_inf && w[0].diff_inf > 0.0 {
            table.warnings.push(format!(
                "sup difference did not decrease from eps = {} to eps = {} ({:.3e} -> {:.3e})",
                w[0].eps, w[1].eps, w[0].diff_inf, w[1].diff_inf
            ));
        }
    }
    Ok(table)
}

/// All solves of an `eps` ladder and their convergence table.
#[derive(Debug, Clone)]
pub struct ViscositySweep {
    /// Ordered by decreasing `eps`.
    pub trajectories: Vec<Trajectory>,
    pub table: ConvergenceTable,
}

impl ViscositySweep {
    /// Trajectory with the smallest `eps`.
    pub fn limit_candidate(&self) -> &Trajectory {
        self.trajectories.last().expect("sweep is nonempty")
    }
}

/// Solves for every `eps_k = eps0 factor^k` (in parallel) and tabulates
/// successive differences at T.
pub fn vanishing_viscosity(config: &ProblemConfig) -> Result<ViscositySweep, SolverError> {
    let schedule = config.eps_schedule;
    if schedule.count < 2 {
        return Err(SolverError::ScheduleTooShort(schedule.count));
    }
    let trajectories = schedule
        .values()
        .into_par_iter()
        .map(|eps| solve_viscous(config, eps))
        .collect::<Result<Vec<_>, _>>()?;
    let table = convergence_table(&trajectories)?;
    Ok(ViscositySweep {
        trajectories,
        table,
    })
}
