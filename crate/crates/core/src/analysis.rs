//! Regularity checks on computed fields and trajectories.
//!
//! The checkers are hypothesis-blind: they evaluate whatever they are given
//! and report. Comparing outcomes with the hypotheses (admissible `alpha`,
//! forcing signs) is the job of [`crate::report`].
//!
//! Notation: `w = |grad u|^2 / 2`, `z = u^alpha w`, and the gradient power
//! `|grad(u^(1 + alpha/2))|`, all from the grid module's central differences.

use thiserror::Error;

use crate::grid::{quadrature_weight, ExactBoundary, GridError, Padded, ScalarField};
use crate::problem::Forcing;
use crate::solver::Trajectory;

/// Relative overshoot tolerated by the gradient-bound and `z` checks.
pub const TOL_GRAD: f64 = 0.05;
/// Forward-Euler slack per unit time in the comparison with uniform
/// supersolutions.
pub const COMPARISON_SLACK: f64 = 5e-4;
/// Minimum number of snapshots inside a test function's time support.
pub const MIN_SUPPORT_SNAPSHOTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("u = {value} at node {node} cannot be raised to the power {exponent}")]
    NonPositive {
        node: usize,
        value: f64,
        exponent: f64,
    },
    #[error("need at least {need} snapshots, got {got}")]
    TooFewSnapshots { need: usize, got: usize },
    #[error("need at least 2 snapshot pairs with 0 < |t - t0| <= delta, got {0}")]
    TooFewPairs(usize),
    #[error("all admissible pairs share one time gap; exponent fit needs two")]
    SingleGap,
    #[error("delta must lie in (0, T), got {0}")]
    BadDelta(f64),
    #[error("test function support violation: {0}")]
    Support(String),
    #[error("test function radii must be positive")]
    BadRadius,
}

/// Location of a worst-case value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub snapshot: usize,
    pub t: f64,
    pub node: usize,
    pub coords: [f64; 2],
    pub value: f64,
}

impl Witness {
    fn none() -> Self {
        Witness {
            snapshot: 0,
            t: 0.0,
            node: 0,
            coords: [0.0; 2],
            value: f64::NEG_INFINITY,
        }
    }

    fn offer(&mut self, field: &ScalarField, snapshot: usize, t: f64) {
        let (node, value) = field.argmax();
        if value > self.value {
            *self = Witness {
                snapshot,
                t,
                node,
                coords: field.grid().coords(node),
                value,
            };
        }
    }
}

/// `|grad u|^2 / 2`.
pub fn w_field(
    u: &ScalarField,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, AnalysisError> {
    let padded = Padded::from_field(u, t, bc)?;
    let values = (0..u.grid().len())
        .map(|k| {
            let g = padded.gradient_at(k);
            0.5 * (g[0] * g[0] + g[1] * g[1])
        })
        .collect();
    Ok(ScalarField::new(*u.grid(), values)?)
}

fn check_power(u: &ScalarField, exponent: f64) -> Result<(), AnalysisError> {
    if exponent == 0.0 || exponent == 1.0 {
        return Ok(());
    }
    let strict = exponent < 0.0;
    for (node, &value) in u.values().iter().enumerate() {
        if value < 0.0 || (strict && value == 0.0) {
            return Err(AnalysisError::NonPositive {
                node,
                value,
                exponent,
            });
        }
    }
    Ok(())
}

/// `u^alpha w`.
pub fn z_field(
    u: &ScalarField,
    alpha: f64,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, AnalysisError> {
    check_power(u, alpha)?;
    let w = w_field(u, t, bc)?;
    if alpha == 0.0 {
        return Ok(w);
    }
    Ok(u.zip_with(&w, |uk, wk| uk.powf(alpha) * wk)?)
}

struct PowerBoundary<'a> {
    inner: &'a dyn ExactBoundary,
    exponent: f64,
}

impl ExactBoundary for PowerBoundary<'_> {
    fn value(&self, x: &[f64], t: f64) -> f64 {
        self.inner.value(x, t).powf(self.exponent)
    }
}

/// Norm of the discrete gradient of `u^exponent`; the power is applied
/// before differencing and `bc` (if any) is raised to the same power.
pub(crate) fn power_gradient_norm(
    u: &ScalarField,
    exponent: f64,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, GridError> {
    let powered = if exponent == 1.0 {
        u.clone()
    } else {
        u.map(|v| v.powf(exponent))?
    };
    let power_bc = bc.map(|inner| PowerBoundary { inner, exponent });
    let padded = Padded::from_field(
        &powered,
        t,
        power_bc.as_ref().map(|b| b as &dyn ExactBoundary),
    )?;
    let values = (0..u.grid().len())
        .map(|k| {
            let g = padded.gradient_at(k);
            (g[0] * g[0] + g[1] * g[1]).sqrt()
        })
        .collect();
    ScalarField::new(*u.grid(), values)
}

/// `|grad(u^(1 + alpha/2))|` nodewise.
pub fn grad_power_field(
    u: &ScalarField,
    alpha: f64,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, AnalysisError> {
    let exponent = 1.0 + alpha / 2.0;
    check_power(u, exponent)?;
    Ok(power_gradient_norm(u, exponent, t, bc)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBoundCheck {
    pub sup: f64,
    pub bound: f64,
    /// `max(0, sup - M) / M`, or the absolute excess when `M = 0`.
    pub overshoot: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Witness,
}

/// Sup over snapshots and nodes of the gradient power against `M`.
pub fn check_gradient_bound(
    traj: &Trajectory,
    alpha: f64,
    bound: f64,
    tolerance: f64,
) -> Result<GradientBoundCheck, AnalysisError> {
    let mut witness = Witness::none();
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let field = grad_power_field(&snap.field, alpha, snap.t, traj.boundary())?;
        witness.offer(&field, i, snap.t);
    }
    let sup = witness.value.max(0.0);
    let overshoot = if bound > 0.0 {
        (sup - bound).max(0.0) / bound
    } else {
        sup
    };
    Ok(GradientBoundCheck {
        sup,
        bound,
        overshoot,
        tolerance,
        pass: sup <= bound * (1.0 + tolerance),
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZMaxPrinciple {
    pub z_sup_initial: f64,
    pub z_sup_overall: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: Witness,
}

/// Compares `sup z` over the whole trajectory with its initial value.
pub fn z_max_principle(
    traj: &Trajectory,
    alpha: f64,
    tolerance: f64,
) -> Result<ZMaxPrinciple, AnalysisError> {
    let mut witness = Witness::none();
    let mut z_sup_initial = 0.0;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let z = z_field(&snap.field, alpha, snap.t, traj.boundary())?;
        if i == 0 {
            z_sup_initial = z.max();
        }
        witness.offer(&z, i, snap.t);
    }
    let z_sup_overall = witness.value.max(z_sup_initial);
    Ok(ZMaxPrinciple {
        z_sup_initial,
        z_sup_overall,
        tolerance,
        pass: z_sup_overall <= z_sup_initial * (1.0 + tolerance),
        witness,
    })
}

/// Discrete Lipschitz constant: the largest `|u_a - u_b| / h` over
/// neighbouring node pairs along every axis (wrapping on periodic grids).
pub fn lipschitz_x(u: &ScalarField) -> f64 {
    let grid = u.grid();
    let n = grid.n();
    let h = grid.spacing();
    let periodic = grid.boundary() == crate::grid::BoundaryMode::Periodic;
    let v = u.values();
    let mut best = 0.0f64;
    let pairs = if periodic { n } else { n - 1 };
    match grid.dim() {
        1 => {
            for i in 0..pairs {
                best = best.max((v[(i + 1) % n] - v[i]).abs());
            }
        }
        _ => {
            for i in 0..n {
                for j in 0..pairs {
                    // along y
                    best = best.max((v[i * n + (j + 1) % n] - v[i * n + j]).abs());
                    // along x
                    best = best.max((v[((j + 1) % n) * n + i] - v[j * n + i]).abs());
                }
            }
        }
    }
    best / h
}

/// Lipschitz bound implied by the gradient bound,
/// `|1 + alpha/2|^-1 sup_x u^(-alpha/2) M`.
pub fn lipschitz_bound(u: &ScalarField, alpha: f64, bound: f64) -> f64 {
    let power = -alpha / 2.0;
    let base = if power >= 0.0 { u.max() } else { u.min() };
    bound * base.max(0.0).powf(power) / (1.0 + alpha / 2.0).abs()
}

/// Result of the time-Hölder estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HolderExponent {
    Fitted(f64),
    /// The trajectory does not move; no exponent can be fitted.
    Flat,
}

impl HolderExponent {
    pub fn value(&self) -> Option<f64> {
        match self {
            HolderExponent::Fitted(e) => Some(*e),
            HolderExponent::Flat => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderEstimate {
    /// `max |u(x, t) - u(x, t0)| / |t - t0|^(1/2)` over admissible pairs.
    pub k_const: f64,
    pub exponent: HolderExponent,
    pub delta: f64,
    pub pairs: usize,
    /// Node and later time of the pair attaining `k_const`.
    pub witness: Witness,
}

/// Half-Hölder seminorm in time and the fitted exponent of
/// `max_x |u(t) - u(t0)|` against `|t - t0|`, over all snapshot pairs with
/// `0 < |t - t0| <= delta`.
pub fn holder_t(traj: &Trajectory, delta: f64) -> Result<HolderEstimate, AnalysisError> {
    let snaps = &traj.snapshots;
    if snaps.len() < 4 {
        return Err(AnalysisError::TooFewSnapshots {
            need: 4,
            got: snaps.len(),
        });
    }
    let horizon = traj.last().t - snaps[0].t;
    if !(delta > 0.0 && delta <= horizon) {
        return Err(AnalysisError::BadDelta(delta));
    }
    let grid = *traj.grid();
    let cap = delta * (1.0 + 1e-12);
    let mut k_const = 0.0f64;
    let mut witness = Witness::none();
    let mut fit = Vec::new();
    let mut pairs = 0;
    for i in 0..snaps.len() {
        for j in i + 1..snaps.len() {
            let gap = snaps[j].t - snaps[i].t;
            if gap <= 0.0 || gap > cap {
                continue;
            }
            pairs += 1;
            let (node, diff) = snaps[i]
                .field
                .values()
                .iter()
                .zip(snaps[j].field.values())
                .map(|(a, b)| (a - b).abs())
                .enumerate()
                .fold(
                    (0, 0.0f64),
                    |best, (k, d)| if d > best.1 { (k, d) } else { best },
                );
            let ratio = diff / gap.sqrt();
            if ratio > k_const {
                k_const = ratio;
                witness = Witness {
                    snapshot: j,
                    t: snaps[j].t,
                    node,
                    coords: grid.coords(node),
                    value: ratio,
                };
            }
            if diff > 0.0 {
                fit.push((gap.ln(), diff.ln()));
            }
        }
    }
    if pairs < 2 {
        return Err(AnalysisError::TooFewPairs(pairs));
    }
    let exponent = if fit.is_empty() {
        HolderExponent::Flat
    } else {
        HolderExponent::Fitted(least_squares_slope(&fit).ok_or(AnalysisError::SingleGap)?)
    };
    if witness.value == f64::NEG_INFINITY {
        witness.value = 0.0;
    }
    Ok(HolderEstimate {
        k_const,
        exponent,
        delta,
        pairs,
        witness,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 1e-12 * n).then(|| sxy / sxx)
}

/// Value and first derivatives of a test function at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TestValue {
    pub value: f64,
    pub dt: f64,
    /// Second entry is 0 in 1D.
    pub grad: [f64; 2],
}

/// Bounding box of a test function's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub x_lo: [f64; 2],
    pub x_hi: [f64; 2],
    pub t_lo: f64,
    pub t_hi: f64,
}

/// Compactly supported space-time test function with closed-form derivatives.
pub trait TestFunction: Sync {
    fn eval(&self, x: &[f64], t: f64) -> TestValue;
    fn support(&self) -> Support;
}

/// Mollifier profile `exp(-1 / (1 - s^2))` on `|s| < 1`, and `b'(s) / b(s)`.
#[inline]
fn mollifier(s: f64) -> (f64, f64) {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        return (0.0, 0.0);
    }
    let b = (-1.0 / q).exp();
    if b == 0.0 {
        return (0.0, 0.0);
    }
    (b, -2.0 * s / (q * q))
}

/// Product bump `b(|x - x0| / r_x) b((t - t0) / r_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub dim: usize,
    pub center_x: [f64; 2],
    pub center_t: f64,
    pub radius_x: f64,
    pub radius_t: f64,
}

/// Builds a bump test function; `center_x` has one entry per dimension.
pub fn bump(
    center_x: &[f64],
    center_t: f64,
    radius_x: f64,
    radius_t: f64,
) -> Result<Bump, AnalysisError> {
    if !(radius_x > 0.0 && radius_t > 0.0 && radius_x.is_finite() && radius_t.is_finite()) {
        return Err(AnalysisError::BadRadius);
    }
    let mut c = [0.0; 2];
    c[..center_x.len()].copy_from_slice(center_x);
    Ok(Bump {
        dim: center_x.len(),
        center_x: c,
        center_t,
        radius_x,
        radius_t,
    })
}

impl TestFunction for Bump {
    fn eval(&self, x: &[f64], t: f64) -> TestValue {
        let tau = (t - self.center_t) / self.radius_t;
        let (bt, dlog_t) = mollifier(tau);
        if bt == 0.0 {
            return TestValue::default();
        }
        let mut d = [0.0; 2];
        let mut r2 = 0.0;
        for axis in 0..self.dim {
            d[axis] = x[axis] - self.center_x[axis];
            r2 += d[axis] * d[axis];
        }
        let s2 = r2 / (self.radius_x * self.radius_x);
        let q = 1.0 - s2;
        if q <= 0.0 {
            return TestValue::default();
        }
        let bx = (-1.0 / q).exp();
        if bx == 0.0 {
            return TestValue::default();
        }
        let value = bx * bt;
        // d/dx_i b(|x - x0| / r) = -2 b (x_i - x0_i) / (r^2 q^2)
        let radial = -2.0 * value / (q * q * self.radius_x * self.radius_x);
        TestValue {
            value,
            dt: value * dlog_t / self.radius_t,
            grad: [radial * d[0], radial * d[1]],
        }
    }

    fn support(&self) -> Support {
        let mut x_lo = [0.0; 2];
        let mut x_hi = [0.0; 2];
        for axis in 0..self.dim {
            x_lo[axis] = self.center_x[axis] - self.radius_x;
            x_hi[axis] = self.center_x[axis] + self.radius_x;
        }
        Support {
            x_lo,
            x_hi,
            t_lo: self.center_t - self.radius_t,
            t_hi: self.center_t + self.radius_t,
        }
    }
}

/// `sum_i c_i psi_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub terms: Vec<(f64, Bump)>,
}

impl TestFunction for Combination {
    fn eval(&self, x: &[f64], t: f64) -> TestValue {
        self.terms.iter().fold(TestValue::default(), |acc, (c, b)| {
            let v = b.eval(x, t);
            TestValue {
                value: acc.value + c * v.value,
                dt: acc.dt + c * v.dt,
                grad: [acc.grad[0] + c * v.grad[0], acc.grad[1] + c * v.grad[1]],
            }
        })
    }

    fn support(&self) -> Support {
        let mut it = self.terms.iter().map(|(_, b)| b.support());
        let first = it.next().expect("combination has terms");
        it.fold(first, |a, b| Support {
            x_lo: [a.x_lo[0].min(b.x_lo[0]), a.x_lo[1].min(b.x_lo[1])],
            x_hi: [a.x_hi[0].max(b.x_hi[0]), a.x_hi[1].max(b.x_hi[1])],
            t_lo: a.t_lo.min(b.t_lo),
            t_hi: a.t_hi.max(b.t_hi),
        })
    }
}

/// Sign attached to the forcing term in the weak identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// `- f psi`, the opposite sign; kept as a control.
    Flipped,
    /// `+ f psi`, what integration by parts of the equation produces.
    Derived,
}

impl SignConvention {
    fn sign(self) -> f64 {
        match self {
            SignConvention::Flipped => -1.0,
            SignConvention::Derived => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    /// `int u0 psi(., 0) + iint (u psi_t - u grad u . grad psi
    ///  - (1 + gamma) |grad u|^2 psi + s f psi)`
    pub residual: f64,
    /// Same integrals with every term in absolute value.
    pub magnitude: f64,
}

impl WeakResidual {
    pub fn relative(&self) -> f64 {
        if self.magnitude > 0.0 {
            self.residual.abs() / self.magnitude
        } else {
            0.0
        }
    }
}

/// Weak-form residual of a trajectory against one test function: spatial
/// integrals by grid quadrature, time integral by the trapezoid rule over
/// snapshots, test-function derivatives in closed form.
pub fn weak_residual(
    traj: &Trajectory,
    psi: &dyn TestFunction,
    gamma: f64,
    forcing: &Forcing,
    convention: SignConvention,
) -> Result<WeakResidual, AnalysisError> {
    let grid = *traj.grid();
    let support = psi.support();
    let t0 = traj.snapshots[0].t;
    let t_end = traj.last().t;
    let lim = match grid.boundary() {
        crate::grid::BoundaryMode::Periodic => grid.extent(),
        _ => (grid.n() - 1) as f64 * grid.spacing(),
    };
    for axis in 0..grid.dim() {
        if support.x_lo[axis] < 0.0 || support.x_hi[axis] > lim {
            return Err(AnalysisError::Support(format!(
                "axis {axis}: [{}, {}] not inside [0, {lim}]",
                support.x_lo[axis], support.x_hi[axis]
            )));
        }
    }
    let t_center = 0.5 * (support.t_lo + support.t_hi);
    if support.t_hi > t_end || t_center < t0 {
        return Err(AnalysisError::Support(format!(
            "time support [{}, {}] not inside [{t0}, {t_end}]",
            support.t_lo, support.t_hi
        )));
    }
    let inside = traj
        .snapshots
        .iter()
        .filter(|s| s.t >= support.t_lo && s.t <= support.t_hi)
        .count();
    if inside < MIN_SUPPORT_SNAPSHOTS {
        return Err(AnalysisError::TooFewSnapshots {
            need: MIN_SUPPORT_SNAPSHOTS,
            got: inside,
        });
    }

    let sign = convention.sign();
    let dim = grid.dim();
    let mut padded = Padded::new(grid);
    let mut slices = Vec::with_capacity(traj.len());
    for snap in &traj.snapshots {
        if snap.t < support.t_lo || snap.t > support.t_hi {
            slices.push((snap.t, 0.0, 0.0));
            continue;
        }
        padded.fill(snap.field.values(), snap.t, traj.boundary())?;
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (k, &u) in snap.field.values().iter().enumerate() {
            let x = grid.coords(k);
            let p = psi.eval(&x[..dim], snap.t);
            if p.value == 0.0 && p.dt == 0.0 {
                continue;
            }
            let g = padded.gradient_at(k);
            let transport = u * (g[0] * p.grad[0] + g[1] * p.grad[1]);
            let dissipation = (1.0 + gamma) * (g[0] * g[0] + g[1] * g[1]) * p.value;
            let source = forcing.eval(snap.t, u) * p.value;
            let wk = quadrature_weight(&grid, k);
            value += wk * (u * p.dt - transport - dissipation + sign * source);
            magnitude +=
                wk * ((u * p.dt).abs() + transport.abs() + dissipation.abs() + source.abs());
        }
        slices.push((snap.t, value, magnitude));
    }

    let initial = &traj.snapshots[0];
    let (mut residual, mut magnitude) = (0.0, 0.0);
    for (k, &u) in initial.field.values().iter().enumerate() {
        let x = grid.coords(k);
        let p = psi.eval(&x[..dim], initial.t);
        let wk = quadrature_weight(&grid, k);
        residual += wk * u * p.value;
        magnitude += wk * (u * p.value).abs();
    }
    for w in slices.windows(2) {
        let half = 0.5 * (w[1].0 - w[0].0);
        residual += half * (w[0].1 + w[1].1);
        magnitude += half * (w[0].2 + w[1].2);
    }
    Ok(WeakResidual {
        residual,
        magnitude,
    })
}

/// Worst positive part of one pointwise inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub value: f64,
    pub node: usize,
    /// Size of the terms involved, for relative tolerances.
    pub scale: f64,
}

impl Violation {
    fn new() -> Self {
        Violation {
            value: 0.0,
            node: 0,
            scale: 1.0,
        }
    }

    fn offer(&mut self, node: usize, value: f64, scale: f64) {
        if value > self.value {
            self.value = value;
            self.node = node;
        }
        self.scale = self.scale.max(1.0 + scale);
    }

    pub fn relative(&self) -> f64 {
        self.value / self.scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseViolations {
    /// `((lap u)^2 / N - |Hess u|^2)_+`
    pub trace: Violation,
    /// `(2 alpha (alpha + gamma + 1) u^(-alpha-1) z^2 + 2 z lap u
    ///   - u^(alpha+1) (lap u)^2 / N)_+`
    pub quadratic: Violation,
}

/// Evaluates the trace inequality and the quadratic nonpositivity at every
/// node, from a single set of second differences.
pub fn pointwise_inequalities(
    u: &ScalarField,
    alpha: f64,
    gamma: f64,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<PointwiseViolations, AnalysisError> {
    check_power(u, -alpha - 1.0)?;
    check_power(u, alpha)?;
    let grid = u.grid();
    let n_dim = grid.dim() as f64;
    let padded = Padded::from_field(u, t, bc)?;
    let mut trace = Violation::new();
    let mut quadratic = Violation::new();
    let coeff = 2.0 * alpha * (alpha + gamma + 1.0);
    for (k, &uk) in u.values().iter().enumerate() {
        let sd = padded.second_differences_at(k);
        let lap = sd.trace();
        let frob = sd.frobenius_sq();
        trace.offer(k, lap * lap / n_dim - frob, frob);

        let g = padded.gradient_at(k);
        let z = uk.powf(alpha) * 0.5 * (g[0] * g[0] + g[1] * g[1]);
        let a = coeff * uk.powf(-alpha - 1.0) * z * z;
        let b = 2.0 * z * lap;
        let c = uk.powf(alpha + 1.0) * lap * lap / n_dim;
        quadratic.offer(k, a + b - c, a.abs() + b.abs() + c.abs());
    }
    Ok(PointwiseViolations { trace, quadratic })
}

/// Comparison of `max u` with the uniform supersolution
/// `max u0 + k t`, plus the undershoot floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonCheck {
    /// Largest `max u(t) - (max u0 + k t + slack (1 + k) t)`.
    pub max_excess: f64,
    /// Largest increase of `max u` between consecutive snapshots beyond the
    /// slack; only meaningful for zero forcing.
    pub max_increase: f64,
    pub min_value: f64,
    pub tol_neg: f64,
    pub pass: bool,
}

/// `forcing_sup` is an upper bound of `f` on the run (0 for zero forcing).
pub fn comparison_check(traj: &Trajectory, forcing_sup: f64) -> ComparisonCheck {
    let k = forcing_sup.max(0.0);
    let t0 = traj.snapshots[0].t;
    let m0 = traj.initial().max();
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_increase = f64::NEG_INFINITY;
    let mut min_value = f64::INFINITY;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        let elapsed = snap.t - t0;
        let m = snap.field.max();
        max_excess =
            max_excess.max(m - (m0 + k * elapsed + COMPARISON_SLACK * (1.0 + k) * elapsed));
        if i > 0 {
            let prev = &traj.snapshots[i - 1];
            let dt = snap.t - prev.t;
            max_increase =
                max_increase.max(m - prev.field.max() - (k + COMPARISON_SLACK * (1.0 + k)) * dt);
        }
        min_value = min_value.min(snap.field.min());
    }
    let pass = max_excess <= 0.0 && max_increase <= 0.0 && min_value >= -traj.tol_neg;
    ComparisonCheck {
        max_excess,
        max_increase: max_increase.max(f64::MIN),
        min_value,
        tol_neg: traj.tol_neg,
        pass,
    }
}
