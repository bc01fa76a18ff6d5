//! Command dispatch behind the `degenpar` binary.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or
//! configuration error, 3 numerical abort. Any nonzero exit after the output
//! directory exists leaves a `FAILED` marker next to the partial artifacts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{parse_alpha_range, parse_problem, Command, ConfigError, RunConfig};
use crate::io::{self, IoError};
use crate::mms;
use crate::problem::{Forcing, ForcingKind};
use crate::report::{certify, ReportError, Tolerances};
use crate::solver::{solve_viscous, vanishing_viscosity, SolverError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Acceptance thresholds of the manufactured-solution table.
pub const MMS_AFFINE_TOL: f64 = 1e-10;
pub const MMS_UNIFORM_TOL: f64 = 5e-4;
pub const MMS_QUADRATIC_TOL: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Solver(SolverError::ScheduleTooShort(_) | SolverError::BadSafety(_))
            | CliError::Solver(SolverError::Problem(_)) => EXIT_USAGE,
            CliError::Solver(_) => EXIT_NUMERICAL,
            CliError::Report(ReportError::Problem(_)) => EXIT_USAGE,
            CliError::Report(_) => EXIT_NUMERICAL,
        }
    }
}

/// Command line after argument parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub tol_grad: Option<f64>,
    pub no_eps_lift: bool,
}

/// Runs an invocation, writing progress to `log` and errors to `err`, and
/// returns the exit code.
pub fn execute(inv: &Invocation, log: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(inv, log) {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            let _ = io::write_failed_marker(&inv.out, "one or more checks failed");
            EXIT_CHECK_FAILED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = e.exit_code();
            if inv.out.exists() {
                let _ = io::write_failed_marker(&inv.out, &e.to_string());
            }
            code
        }
    }
}

fn read_config(inv: &Invocation) -> Result<String, CliError> {
    let path = inv
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("`{}` needs --config <path>", inv.command)))?;
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses the config file and applies command-line overrides.
pub fn load(inv: &Invocation) -> Result<RunConfig, CliError> {
    let text = read_config(inv)?;
    let mut problem = parse_problem(&text)?;
    problem.eps_lift = !inv.no_eps_lift;
    let mut tolerances = Tolerances::default();
    if let Some(t) = inv.tol_grad {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Usage(format!("--tol-grad must be >= 0, got {t}")));
        }
        tolerances.grad = t;
    }
    Ok(RunConfig::new(
        inv.command,
        problem,
        inv.out.clone(),
        tolerances,
    )?)
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let marker = dir.join("FAILED");
    if marker.exists() {
        let _ = fs::remove_file(marker);
    }
    Ok(())
}

fn dispatch(inv: &Invocation, log: &mut dyn Write) -> Result<bool, CliError> {
    match inv.command {
        Command::AlphaRange => {
            let (gamma, dim, interval) = parse_alpha_range(&read_config(inv)?)?;
            let _ = writeln!(log, "{interval}");
            if interval.is_empty() {
                let _ = writeln!(
                    log,
                    "no admissible alpha: gamma = {gamma} below sqrt(2N)-1 = {:.7} for N = {dim}",
                    (2.0 * dim as f64).sqrt() - 1.0
                );
            }
            Ok(true)
        }
        Command::Mms => {
            prepare_out(&inv.out)?;
            mms_command(&inv.out, log)
        }
        Command::Solve => {
            let run = load(inv)?;
            prepare_out(&run.output_dir)?;
            let p = &run.problem;
            let eps = p.eps_schedule.eps0;
            let traj = solve_viscous(p, eps)?;
            io::write_trajectory(&run.output_dir, &traj)?;
            io::emit_plot_data(&run.output_dir.join("plot"), &traj)?;
            let _ = writeln!(
                log,
                "eps = {eps}: {} steps, dt in [{:.3e}, {:.3e}], {} snapshots",
                traj.step_count,
                traj.dt_min,
                traj.dt_max,
                traj.len()
            );
            Ok(true)
        }
        Command::SweepEps => {
            let run = load(inv)?;
            prepare_out(&run.output_dir)?;
            let sweep = vanishing_viscosity(&run.problem)?;
            for (k, traj) in sweep.trajectories.iter().enumerate() {
                io::write_trajectory(&run.output_dir.join(format!("eps_{k}")), traj)?;
            }
            io::write_convergence(&run.output_dir.join("eps_convergence.csv"), &sweep.table)?;
            io::emit_plot_data(&run.output_dir.join("plot"), sweep.limit_candidate())?;
            log_table(log, &sweep.table);
            Ok(true)
        }
        Command::Verify => {
            let run = load(inv)?;
            prepare_out(&run.output_dir)?;
            let sweep = vanishing_viscosity(&run.problem)?;
            io::write_convergence(&run.output_dir.join("eps_convergence.csv"), &sweep.table)?;
            log_table(log, &sweep.table);
            let limit = sweep.limit_candidate();
            io::write_trajectory(&run.output_dir.join("limit"), limit)?;
            io::emit_plot_data(&run.output_dir.join("plot"), limit)?;
            let report = certify(&run.problem, limit, &run.tolerances)?;
            io::write_report(&run.output_dir, &report)?;
            for c in &report.checks {
                let _ = writeln!(
                    log,
                    "{:<22} {}",
                    c.name,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
            for note in &report.hypotheses.notes {
                let _ = writeln!(log, "hypothesis: {note}");
            }
            Ok(report.passed())
        }
    }
}

fn log_table(log: &mut dyn Write, table: &crate::solver::ConvergenceTable) {
    let _ = writeln!(
        log,
        "{:>12} {:>12} {:>12} {:>8}",
        "eps", "diff_inf", "diff_l1", "order"
    );
    for r in &table.rows {
        let order = r.order.map_or(String::new(), |o| format!("{o:.3}"));
        let _ = writeln!(
            log,
            "{:>12.4e} {:>12.4e} {:>12.4e} {:>8}",
            r.eps, r.diff_inf, r.diff_l1, order
        );
    }
    for w in &table.warnings {
        let _ = writeln!(log, "warning: {w}");
    }
}

fn mms_command(out: &Path, log: &mut dyn Write) -> Result<bool, CliError> {
    let rows = mms::run_mms()?;
    io::write_mms(&out.join("mms.csv"), &rows)?;
    let mut pass = true;
    for r in &rows {
        let tol = match r.case.as_str() {
            "affine" => Some(MMS_AFFINE_TOL),
            "uniform_ode" => Some(MMS_UNIFORM_TOL),
            "quadratic" if r.n == *mms::QUADRATIC_POINTS.last().unwrap() => Some(MMS_QUADRATIC_TOL),
            _ => None,
        };
        let ok = tol.is_none_or(|t| r.error <= t);
        pass &= ok;
        let _ = writeln!(
            log,
            "{:<12} n = {:>4}  error = {:.3e}{}",
            r.case,
            r.n,
            r.error,
            if ok { "" } else { "  FAIL" }
        );
    }
    let refinement =
        mms::time_refinement(&Forcing::new(ForcingKind::ExpDecay(1.0)), &[0.4, 0.2, 0.1])?;
    let mut text = String::from("case,cfl_safety,error\n");
    for (s, e) in &refinement {
        text.push_str(&format!(
            "uniform_ode_exp_decay,{},{}\n",
            io::real(*s),
            io::real(*e)
        ));
        let _ = writeln!(
            log,
            "uniform_ode_exp_decay cfl_safety = {s}  error = {e:.3e}"
        );
    }
    fs::write(out.join("mms_time.csv"), text).map_err(|source| IoError::Io {
        path: out.join("mms_time.csv"),
        source,
    })?;
    Ok(pass)
}
