//! Regularity report: runs every checker on one trajectory and compares the
//! outcomes with the hypotheses of the configuration.

use thiserror::Error;

use crate::analysis::{
    self, bump, check_gradient_bound, comparison_check, holder_t, lipschitz_bound, lipschitz_x,
    pointwise_inequalities, weak_residual, z_max_principle, AnalysisError, Bump,
    GradientBoundCheck, HolderEstimate, SignConvention, Witness, ZMaxPrinciple,
};
use crate::problem::{validate_forcing, ProblemConfig, ProblemError};
use crate::solver::{solve_viscous, SolverError, Trajectory};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Tolerances used by [`certify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative overshoot for the gradient bound and the `z` maximum principle.
    pub grad: f64,
    /// Slack factor on the Lipschitz bound.
    pub lipschitz_factor: f64,
    /// Additive Lipschitz slack in units of `h`.
    pub lipschitz_h: f64,
    /// Smallest accepted fitted time exponent.
    pub holder_exponent: f64,
    /// Relative weak residual, derived sign.
    pub weak: f64,
    /// Relative trace-inequality violation.
    pub trace: f64,
    /// Relative quadratic-inequality violation.
    pub quadratic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            grad: analysis::TOL_GRAD,
            lipschitz_factor: 1.05,
            lipschitz_h: 10.0,
            holder_exponent: 0.45,
            weak: 1e-2,
            trace: 1e-12,
            quadratic: 1e-10,
        }
    }
}

/// Rerun of the gradient bound on a grid twice as fine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub points: usize,
    pub overshoot_coarse: f64,
    pub overshoot_fine: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzCheck {
    /// Largest discrete Lipschitz constant over snapshots.
    pub max_constant: f64,
    /// Bound at the snapshot where `constant - bound` is largest.
    pub bound: f64,
    /// Same bound evaluated with `min u` in place of `sup u`.
    pub bound_min_u: f64,
    pub worst_margin: f64,
    pub snapshot: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidualEntry {
    pub id: usize,
    pub psi: Bump,
    pub derived: analysis::WeakResidual,
    pub flipped: analysis::WeakResidual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub trace_violation: f64,
    pub trace_witness: Witness,
    pub quadratic_violation: f64,
    pub quadratic_witness: Witness,
}

/// Hypotheses of the regularity results, evaluated on the configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypotheses {
    pub gamma: bool,
    pub alpha_admissible: bool,
    pub alpha_not_minus_two: bool,
    pub forcing: bool,
    pub notes: Vec<String>,
}

impl Hypotheses {
    pub fn evaluate(config: &ProblemConfig, u_max: f64) -> Self {
        let interval = config.alpha_interval();
        let mut notes = Vec::new();
        let forcing_report = validate_forcing(&config.forcing, u_max.max(1.0), config.horizon);
        notes.extend(forcing_report.failures());
        let gamma = !interval.is_empty();
        if !gamma {
            notes.push(format!("gamma = {} below sqrt(2N)-1", config.gamma));
        }
        let alpha_admissible = interval.contains(config.alpha, 1e-12);
        if gamma && !alpha_admissible {
            notes.push(format!("alpha = {} outside {interval}", config.alpha));
        }
        Hypotheses {
            gamma,
            alpha_admissible,
            alpha_not_minus_two: (config.alpha + 2.0).abs() > 1e-12,
            forcing: forcing_report.passed(),
            notes,
        }
    }

    pub fn all(&self) -> bool {
        self.gamma && self.alpha_admissible && self.alpha_not_minus_two && self.forcing
    }
}

/// One row of the pass/fail table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub tolerance: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub epsilon: f64,
    pub alpha: f64,
    pub h: f64,
    pub m_bound: f64,
    pub gradient: GradientBoundCheck,
    pub refinement: Option<Refinement>,
    pub z: ZMaxPrinciple,
    pub lipschitz: LipschitzCheck,
    pub holder: HolderEstimate,
    pub weak_residuals: Vec<WeakResidualEntry>,
    pub inequalities: InequalityCheck,
    pub comparison: analysis::ComparisonCheck,
    pub hypotheses: Hypotheses,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckOutcome>,
}

impl RegularityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Scalar entries as `(key, value)` pairs.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = vec![
            ("epsilon".into(), self.epsilon),
            ("alpha".into(), self.alpha),
            ("h".into(), self.h),
            ("M".into(), self.m_bound),
            ("sup_grad_power".into(), self.gradient.sup),
            ("grad_overshoot".into(), self.gradient.overshoot),
        ];
        if let Some(r) = &self.refinement {
            out.push(("refined_points".into(), r.points as f64));
            out.push(("refined_overshoot".into(), r.overshoot_fine));
        }
        out.extend([
            ("z_sup_initial".into(), self.z.z_sup_initial),
            ("z_sup_overall".into(), self.z.z_sup_overall),
            ("lipschitz_x".into(), self.lipschitz.max_constant),
            ("lipschitz_bound".into(), self.lipschitz.bound),
            ("lipschitz_bound_min_u".into(), self.lipschitz.bound_min_u),
            ("holder_K".into(), self.holder.k_const),
            (
                "holder_exponent".into(),
                self.holder.exponent.value().unwrap_or(f64::INFINITY),
            ),
            ("holder_delta".into(), self.holder.delta),
        ]);
        for w in &self.weak_residuals {
            out.push((
                format!("weak_residual_{}_derived", w.id),
                w.derived.residual,
            ));
            out.push((
                format!("weak_residual_{}_flipped", w.id),
                w.flipped.residual,
            ));
            out.push((
                format!("weak_residual_{}_magnitude", w.id),
                w.derived.magnitude,
            ));
        }
        out.extend([
            (
                "trace_max_violation".into(),
                self.inequalities.trace_violation,
            ),
            (
                "quadratic_max_violation".into(),
                self.inequalities.quadratic_violation,
            ),
            ("max_u_excess".into(), self.comparison.max_excess),
            ("min_u".into(), self.comparison.min_value),
            ("tol_neg".into(), self.comparison.tol_neg),
        ]);
        out
    }
}

/// The three interior bumps used for the weak residual: distinct centres in
/// space and time, supports inside the box and inside `(0, T)`.
pub fn default_bumps(config: &ProblemConfig) -> Result<Vec<Bump>, AnalysisError> {
    let grid = config.build_grid().map_err(|_| AnalysisError::BadRadius)?;
    let span = match config.grid.boundary {
        crate::grid::BoundaryMode::Periodic => grid.extent(),
        _ => (grid.n() - 1) as f64 * grid.spacing(),
    };
    let t = config.horizon;
    let dim = config.dim();
    [
        (0.3, 0.45, 0.2, 0.35),
        (0.5, 0.5, 0.25, 0.4),
        (0.7, 0.55, 0.2, 0.35),
    ]
    .iter()
    .map(|&(cx, ct, rx, rt)| {
        let center = vec![cx * span; dim];
        bump(&center, ct * t, rx * span, rt * t)
    })
    .collect()
}

/// Runs every check on `traj`, which must come from `config`.
pub fn certify(
    config: &ProblemConfig,
    traj: &Trajectory,
    tol: &Tolerances,
) -> Result<RegularityReport, ReportError> {
    let alpha = config.alpha;
    let (_, m) = config.initial_bound()?;
    let h = traj.grid().spacing();
    let mut checks = Vec::new();

    let gradient = check_gradient_bound(traj, alpha, m, tol.grad)?;
    let refinement = if gradient.pass && gradient.overshoot > 0.0 {
        let fine_cfg = config.with_points(2 * config.grid.points);
        let fine = solve_viscous(&fine_cfg, traj.epsilon)?;
        let (_, m_fine) = fine_cfg.initial_bound()?;
        let g = check_gradient_bound(&fine, alpha, m_fine, tol.grad)?;
        Some(Refinement {
            points: fine_cfg.grid.points,
            overshoot_coarse: gradient.overshoot,
            overshoot_fine: g.overshoot,
            pass: g.overshoot < gradient.overshoot,
        })
    } else {
        None
    };
    checks.push(CheckOutcome {
        name: "gradient_bound".into(),
        pass: gradient.pass,
        tolerance: tol.grad,
        witness: Some(gradient.witness),
    });
    if let Some(r) = &refinement {
        checks.push(CheckOutcome {
            name: "gradient_refinement".into(),
            pass: r.pass,
            tolerance: tol.grad,
            witness: None,
        });
    }

    let z = z_max_principle(traj, alpha, tol.grad)?;
    checks.push(CheckOutcome {
        name: "z_max_principle".into(),
        pass: z.pass,
        tolerance: tol.grad,
        witness: Some(z.witness),
    });

    let lipschitz = lipschitz_check(traj, alpha, m, h, tol);
    checks.push(CheckOutcome {
        name: "lipschitz_x".into(),
        pass: lipschitz.pass,
        tolerance: tol.lipschitz_factor - 1.0,
        witness: None,
    });

    let holder = holder_t(traj, config.horizon / 4.0)?;
    checks.push(CheckOutcome {
        name: "holder_t".into(),
        pass: holder
            .exponent
            .value()
            .is_none_or(|e| e >= tol.holder_exponent),
        tolerance: tol.holder_exponent,
        witness: Some(holder.witness),
    });

    let mut weak_residuals = Vec::new();
    for (id, psi) in default_bumps(config)?.into_iter().enumerate() {
        let derived = weak_residual(
            traj,
            &psi,
            config.gamma,
            &config.forcing,
            SignConvention::Derived,
        )?;
        let flipped = weak_residual(
            traj,
            &psi,
            config.gamma,
            &config.forcing,
            SignConvention::Flipped,
        )?;
        checks.push(CheckOutcome {
            name: format!("weak_residual_{id}"),
            pass: derived.relative() <= tol.weak,
            tolerance: tol.weak,
            witness: None,
        });
        weak_residuals.push(WeakResidualEntry {
            id,
            psi,
            derived,
            flipped,
        });
    }

    let inequalities = inequality_check(traj, alpha, config.gamma)?;
    checks.push(CheckOutcome {
        name: "trace_inequality".into(),
        pass: inequalities.trace_violation <= tol.trace,
        tolerance: tol.trace,
        witness: Some(inequalities.trace_witness),
    });
    checks.push(CheckOutcome {
        name: "quadratic_inequality".into(),
        pass: inequalities.quadratic_violation <= tol.quadratic,
        tolerance: tol.quadratic,
        witness: Some(inequalities.quadratic_witness),
    });

    let comparison = comparison_check(traj, config.forcing.sup_bound(config.horizon));
    checks.push(CheckOutcome {
        name: "comparison".into(),
        pass: comparison.pass,
        tolerance: analysis::COMPARISON_SLACK,
        witness: None,
    });

    let u_max = traj
        .snapshots
        .iter()
        .map(|s| s.field.max())
        .fold(0.0, f64::max);
    let hypotheses = Hypotheses::evaluate(config, u_max);
    checks.push(CheckOutcome {
        name: "hypotheses".into(),
        pass: hypotheses.all(),
        tolerance: 0.0,
        witness: None,
    });

    Ok(RegularityReport {
        epsilon: traj.epsilon,
        alpha,
        h,
        m_bound: m,
        gradient,
        refinement,
        z,
        lipschitz,
        holder,
        weak_residuals,
        inequalities,
        comparison,
        hypotheses,
        tolerances: *tol,
        checks,
    })
}

fn lipschitz_check(
    traj: &Trajectory,
    alpha: f64,
    m: f64,
    h: f64,
    tol: &Tolerances,
) -> LipschitzCheck {
    let mut out = LipschitzCheck {
        max_constant: 0.0,
        bound: 0.0,
        bound_min_u: 0.0,
        worst_margin: f64::NEG_INFINITY,
        snapshot: 0,
        pass: true,
    };
    let exponent = (1.0 + alpha / 2.0).abs();
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let l = lipschitz_x(&snap.field);
        let bound = lipschitz_bound(&snap.field, alpha, m);
        let margin = l - (bound * tol.lipschitz_factor + tol.lipschitz_h * h);
        out.max_constant = out.max_constant.max(l);
        if margin > out.worst_margin {
            out.worst_margin = margin;
            out.bound = bound;
            out.bound_min_u = m * snap.field.min().max(0.0).powf(-alpha / 2.0) / exponent;
            out.snapshot = i;
        }
    }
    out.pass = out.worst_margin <= 0.0;
    out
}

fn inequality_check(
    traj: &Trajectory,
    alpha: f64,
    gamma: f64,
) -> Result<InequalityCheck, AnalysisError> {
    let mut out = InequalityCheck {
        trace_violation: 0.0,
        trace_witness: blank_witness(),
        quadratic_violation: 0.0,
        quadratic_witness: blank_witness(),
    };
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let v = pointwise_inequalities(&snap.field, alpha, gamma, snap.t, traj.boundary())?;
        let coords = |node| snap.field.grid().coords(node);
        let trace = v.trace.relative();
        if trace > out.trace_violation || i == 0 {
            out.trace_violation = out.trace_violation.max(trace);
            out.trace_witness = Witness {
                snapshot: i,
                t: snap.t,
                node: v.trace.node,
                coords: coords(v.trace.node),
                value: v.trace.value,
            };
        }
        let quad = v.quadratic.relative();
        if quad > out.quadratic_violation || i == 0 {
            out.quadratic_violation = out.quadratic_violation.max(quad);
            out.quadratic_witness = Witness {
                snapshot: i,
                t: snap.t,
                node: v.quadratic.node,
                coords: coords(v.quadratic.node),
                value: v.quadratic.value,
            };
        }
    }
    Ok(out)
}

fn blank_witness() -> Witness {
    Witness {
        snapshot: 0,
        t: 0.0,
        node: 0,
        coords: [0.0; 2],
        value: 0.0,
    }
}
