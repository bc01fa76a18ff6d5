//! Manufactured-solution studies: the affine solution (reproduced exactly),
//! the spatially uniform ODE (first order in time) and the quadratic ansatz
//! (exact in space, compared with its closed-form ODE solution).

use crate::grid::{BoundaryMode, GridSpec};
use crate::io::MmsRow;
use crate::problem::{EpsSchedule, Forcing, ForcingKind, InitialData, ProblemConfig};
use crate::solver::{solve_viscous, SolverError};

pub const AFFINE_POINTS: [usize; 3] = [100, 200, 400];
pub const UNIFORM_POINTS: [usize; 3] = [16, 32, 64];
pub const QUADRATIC_POINTS: [usize; 3] = [101, 201, 401];

fn base(
    points: usize,
    boundary: BoundaryMode,
    gamma: f64,
    forcing: Forcing,
    initial: InitialData,
    horizon: f64,
) -> ProblemConfig {
    ProblemConfig {
        grid: GridSpec {
            dim: 1,
            extent: 1.0,
            points,
            boundary,
        },
        gamma,
        forcing,
        initial,
        alpha: -1.0,
        alpha_auto: false,
        horizon,
        eps_schedule: EpsSchedule {
            eps0: 0.01,
            factor: 0.5,
            count: 1,
        },
        cfl_safety: 0.4,
        snapshot_times: Vec::new(),
        eps_lift: false,
    }
}

/// `u = 2 + x - t` with `gamma = 1`, zero forcing, up to `T = 0.05`.
pub fn affine_config(points: usize) -> ProblemConfig {
    base(
        points,
        BoundaryMode::Exact,
        1.0,
        Forcing::zero(),
        InitialData::Linear { a0: 2.0, b: 1.0 },
        0.05,
    )
}

/// `u0 = 1` on a periodic grid with spatially uniform forcing, `T = 1`.
pub fn uniform_config(points: usize, forcing: Forcing, safety: f64) -> ProblemConfig {
    let mut cfg = base(
        points,
        BoundaryMode::Periodic,
        1.0,
        forcing,
        InitialData::Uniform { c: 1.0 },
        1.0,
    );
    cfg.cfl_safety = safety;
    cfg
}

/// `u = A(t) + B(t) x^2` with `A0 = 1`, `B0 = 0.1`, `gamma = 0`, `T = 0.5`.
pub fn quadratic_config(points: usize) -> ProblemConfig {
    base(
        points,
        BoundaryMode::Exact,
        0.0,
        Forcing::zero(),
        InitialData::Quadratic { a0: 1.0, b0: 0.1 },
        0.5,
    )
}

/// Exact solution of `u' = f(u)`, `u(0) = 1`, for the uniform-forcing
/// kinds that have one in closed form.
pub fn uniform_exact(forcing: &Forcing, t: f64) -> Option<f64> {
    match forcing.kind {
        ForcingKind::Zero => Some(1.0),
        ForcingKind::Constant(k) => Some(1.0 + k * t),
        // e^u u' = k
        ForcingKind::ExpDecay(k) => Some((1f64.exp() + k * t).ln()),
        // (1 + u) u' = k
        ForcingKind::Rational(k) => Some(-1.0 + (4.0 + 2.0 * k * t).sqrt()),
        ForcingKind::TimeProfile(_) => None,
    }
}

/// Max-norm error at `T` against the closed-form solution of an
/// exact-boundary configuration.
pub fn exact_boundary_error(config: &ProblemConfig, eps: f64) -> Result<f64, SolverError> {
    let traj = solve_viscous(config, eps)?;
    let sol = config
        .exact_solution(eps)
        .expect("exact-boundary configuration has a closed-form solution");
    let last = traj.last();
    let grid = last.field.grid();
    Ok(last
        .field
        .values()
        .iter()
        .enumerate()
        .map(|(k, &u)| (u - sol.eval(&grid.coords(k)[..grid.dim()], last.t)).abs())
        .fold(0.0, f64::max))
}

/// Max-norm error at `T` of the uniform run against [`uniform_exact`].
pub fn uniform_error(config: &ProblemConfig) -> Result<f64, SolverError> {
    let traj = solve_viscous(config, config.eps_schedule.eps0)?;
    let last = traj.last();
    let exact =
        uniform_exact(&config.forcing, last.t).expect("forcing has a closed-form ODE solution");
    Ok(last
        .field
        .values()
        .iter()
        .map(|u| (u - exact).abs())
        .fold(0.0, f64::max))
}

/// Errors below this are roundoff; no order is reported for them.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Observed order between successive rows of one case.
pub fn orders(points: &[usize], errors: &[f64]) -> Vec<Option<f64>> {
    let mut out = vec![None];
    for i in 1..errors.len() {
        let (e0, e1) = (errors[i - 1], errors[i]);
        out.push(if e0 > ROUNDOFF_FLOOR && e1 > ROUNDOFF_FLOOR {
            Some((e0 / e1).ln() / (points[i] as f64 / points[i - 1] as f64).ln())
        } else {
            None
        });
    }
    out
}

fn rows(case: &str, points: &[usize], errors: Vec<f64>) -> Vec<MmsRow> {
    let ord = orders(points, &errors);
    points
        .iter()
        .zip(errors)
        .zip(ord)
        .map(|((&n, error), order)| MmsRow {
            case: case.to_string(),
            n,
            error,
            order,
        })
        .collect()
}

/// The full table: affine, uniform ODE with constant forcing, quadratic.
pub fn run_mms() -> Result<Vec<MmsRow>, SolverError> {
    let mut out = Vec::new();
    let affine = AFFINE_POINTS
        .iter()
        .map(|&n| exact_boundary_error(&affine_config(n), 0.01))
        .collect::<Result<Vec<_>, _>>()?;
    out.extend(rows("affine", &AFFINE_POINTS, affine));
    let uniform = UNIFORM_POINTS
        .iter()
        .map(|&n| uniform_error(&uniform_config(n, Forcing::constant(0.25), 0.4)))
        .collect::<Result<Vec<_>, _>>()?;
    out.extend(rows("uniform_ode", &UNIFORM_POINTS, uniform));
    let quadratic = QUADRATIC_POINTS
        .iter()
        .map(|&n| exact_boundary_error(&quadratic_config(n), 0.0))
        .collect::<Result<Vec<_>, _>>()?;
    out.extend(rows("quadratic", &QUADRATIC_POINTS, quadratic));
    Ok(out)
}

/// Uniform-ODE error as the CFL safety factor is halved, for a forcing whose
/// exact solution is not reproduced by forward Euler.
pub fn time_refinement(
    forcing: &Forcing,
    safeties: &[f64],
) -> Result<Vec<(f64, f64)>, SolverError> {
    safeties
        .iter()
        .map(|&s| Ok((s, uniform_error(&uniform_config(16, forcing.clone(), s))?)))
        .collect()
}
