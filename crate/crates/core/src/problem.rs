//! Experiment definition: coefficient `gamma`, forcing `f(t, u)`, initial
//! data, the admissible exponent range for `alpha`, and the assembled
//! [`ProblemConfig`].

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::analysis;
use crate::grid::{BoundaryMode, ExactBoundary, Grid, GridError, GridSpec, ScalarField};

/// Worst violation tolerated by [`validate_forcing`].
pub const FORCING_TOLERANCE: f64 = 1e-10;
/// Lattice resolution per axis used by [`validate_forcing`].
pub const FORCING_SAMPLES: usize = 200;
/// Sample count for checking a time profile polynomial on `[0, T]`.
pub const PROFILE_SAMPLES: usize = 10_000;
/// Distance kept between an automatically chosen `alpha` and -2.
pub const ALPHA_NUDGE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("invalid `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },
    #[error("initial data negative at node {node}: u0 = {value}")]
    NegativeInitialData { node: usize, value: f64 },
    #[error(
        "initial data vanishes at node {node} but exponent 1 + alpha/2 = {exponent} is not positive"
    )]
    DegeneratePower { node: usize, exponent: f64 },
    #[error("{0}")]
    Hypothesis(String),
}

pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> ProblemError {
    ProblemError::InvalidParameter {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Closed-form forcing terms. None of them depend on `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingKind {
    Zero,
    Constant(f64),
    /// `k * exp(-u)`
    ExpDecay(f64),
    /// `k / (1 + u)`
    Rational(f64),
    /// `c(t)` with polynomial coefficients in increasing degree.
    TimeProfile(Vec<f64>),
}

impl ForcingKind {
    pub fn name(&self) -> &'static str {
        match self {
            ForcingKind::Zero => "zero",
            ForcingKind::Constant(_) => "constant",
            ForcingKind::ExpDecay(_) => "exp_decay",
            ForcingKind::Rational(_) => "rational",
            ForcingKind::TimeProfile(_) => "time_profile",
        }
    }
}

/// Forcing term together with its declared growth exponent `m` in
/// `|f(t, u)| <= k |u|^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcing {
    pub kind: ForcingKind,
    pub growth_exponent: f64,
}

impl Forcing {
    pub fn new(kind: ForcingKind) -> Self {
        Forcing {
            kind,
            growth_exponent: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self::new(ForcingKind::Zero)
    }

    pub fn constant(k: f64) -> Self {
        Self::new(ForcingKind::Constant(k))
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            ForcingKind::Zero => true,
            ForcingKind::Constant(k) | ForcingKind::ExpDecay(k) | ForcingKind::Rational(k) => {
                *k == 0.0
            }
            ForcingKind::TimeProfile(c) => c.iter().all(|&a| a == 0.0),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64, u: f64) -> f64 {
        match &self.kind {
            ForcingKind::Zero => 0.0,
            ForcingKind::Constant(k) => *k,
            ForcingKind::ExpDecay(k) => k * (-u).exp(),
            ForcingKind::Rational(k) => k / (1.0 + u),
            ForcingKind::TimeProfile(c) => horner(c, t),
        }
    }

    /// Pointwise evaluation over a field.
    pub fn eval_field(&self, t: f64, u: &ScalarField) -> Result<ScalarField, GridError> {
        u.map(|v| self.eval(t, v))
    }

    /// Constant `k` of the growth envelope `|f| <= k |u|^m` on `[0, T]`.
    pub fn growth_constant(&self, horizon: f64) -> f64 {
        match &self.kind {
            ForcingKind::Zero => 0.0,
            ForcingKind::Constant(k) | ForcingKind::ExpDecay(k) | ForcingKind::Rational(k) => {
                k.abs()
            }
            ForcingKind::TimeProfile(c) => sample_times(horizon, PROFILE_SAMPLES)
                .map(|t| horner(c, t).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Upper bound of `f(t, u)` over `t` in `[0, T]` and `u >= 0`, valid for
    /// forcings that pass [`validate_forcing`].
    pub fn sup_bound(&self, horizon: f64) -> f64 {
        match &self.kind {
            ForcingKind::TimeProfile(c) => sample_times(horizon, PROFILE_SAMPLES)
                .map(|t| horner(c, t))
                .fold(0.0, f64::max),
            _ => self.eval(0.0, 0.0).max(0.0),
        }
    }
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn sample_times(horizon: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| horizon * i as f64 / (count - 1) as f64)
}

/// Worst violation of one forcing hypothesis, with the `(t, u)` where it
/// occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisCheck {
    pub hypothesis: &'static str,
    pub worst: f64,
    pub witness: (f64, f64),
}

impl HypothesisCheck {
    fn new(hypothesis: &'static str) -> Self {
        HypothesisCheck {
            hypothesis,
            worst: 0.0,
            witness: (0.0, 0.0),
        }
    }

    fn record(&mut self, violation: f64, t: f64, u: f64) {
        if violation > self.worst {
            self.worst = violation;
            self.witness = (t, u);
        }
    }

    pub fn passed(&self) -> bool {
        self.worst <= FORCING_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub nonnegative: HypothesisCheck,
    pub nonincreasing: HypothesisCheck,
    pub growth: HypothesisCheck,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed())
    }

    pub fn checks(&self) -> [&HypothesisCheck; 3] {
        [&self.nonnegative, &self.nonincreasing, &self.growth]
    }

    /// One message per failed hypothesis.
    pub fn failures(&self) -> Vec<String> {
        self.checks()
            .iter()
            .filter(|c| !c.passed())
            .map(|c| {
                format!(
                    "{} violated by {:.3e} at (t, u) = ({}, {})",
                    c.hypothesis, c.worst, c.witness.0, c.witness.1
                )
            })
            .collect()
    }
}

/// Samples `f` and a centered difference of `f_u` on a lattice over
/// `[0, T] x [0, u_max]` and reports the worst violation of `f >= 0`,
/// `f_u <= 0` and `|f| <= k |u|^m`.
pub fn validate_forcing(forcing: &Forcing, u_max: f64, horizon: f64) -> ValidationReport {
    let mut nonnegative = HypothesisCheck::new("f >= 0");
    let mut nonincreasing = HypothesisCheck::new("f_u <= 0");
    let mut growth = HypothesisCheck::new("growth bound |f| <= k|u|^m");

    let k_growth = forcing.growth_constant(horizon);
    let m = forcing.growth_exponent;
    let du = 1e-6 * (1.0 + u_max.abs());
    for t in sample_times(horizon, FORCING_SAMPLES) {
        for u in sample_times(u_max, FORCING_SAMPLES) {
            let f = forcing.eval(t, u);
            nonnegative.record(-f, t, u);
            let f_u = (forcing.eval(t, u + du) - forcing.eval(t, u - du)) / (2.0 * du);
            nonincreasing.record(f_u, t, u);
            growth.record(f.abs() - k_growth * u.abs().powf(m), t, u);
        }
    }
    if let ForcingKind::TimeProfile(c) = &forcing.kind {
        for t in sample_times(horizon, PROFILE_SAMPLES) {
            nonnegative.record(-horner(c, t), t, 0.0);
        }
    }
    ValidationReport {
        nonnegative,
        nonincreasing,
        growth,
    }
}

/// Solution set of `alpha^2 + (gamma + 1) alpha + N/2 <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaInterval {
    Empty,
    Point(f64),
    Closed { lo: f64, hi: f64 },
}

impl AlphaInterval {
    pub fn is_empty(&self) -> bool {
        matches!(self, AlphaInterval::Empty)
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            AlphaInterval::Empty => None,
            AlphaInterval::Point(a) => Some((a, a)),
            AlphaInterval::Closed { lo, hi } => Some((lo, hi)),
        }
    }

    /// Membership with an absolute slack for roundoff in user-supplied values.
    pub fn contains(&self, alpha: f64, slack: f64) -> bool {
        self.bounds()
            .is_some_and(|(lo, hi)| alpha >= lo - slack && alpha <= hi + slack)
    }

    pub fn midpoint(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| 0.5 * (lo + hi))
    }

    /// Midpoint moved off -2 by [`ALPHA_NUDGE`] when it lands too close.
    pub fn auto_alpha(&self) -> Option<f64> {
        let (lo, hi) = self.bounds()?;
        let mid = 0.5 * (lo + hi);
        if (mid + 2.0).abs() >= ALPHA_NUDGE {
            return Some(mid);
        }
        let above = -2.0 + ALPHA_NUDGE;
        let below = -2.0 - ALPHA_NUDGE;
        let preferred = if mid >= -2.0 {
            [above, below]
        } else {
            [below, above]
        };
        preferred
            .into_iter()
            .find(|&a| a >= lo && a <= hi)
            .or(Some(mid))
    }
}

impl fmt::Display for AlphaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AlphaInterval::Empty => f.write_str("empty"),
            AlphaInterval::Point(a) => write!(f, "[{a:.7}, {a:.7}]"),
            AlphaInterval::Closed { lo, hi } => write!(f, "[{lo:.7}, {hi:.7}]"),
        }
    }
}

/// Exponents `alpha` admissible for the gradient bound in dimension `dim`.
pub fn admissible_alpha_interval(gamma: f64, dim: usize) -> AlphaInterval {
    let b = gamma + 1.0;
    let half_n = dim as f64 / 2.0;
    let disc = b * b - 2.0 * dim as f64;
    let tie = 4.0 * f64::EPSILON * b * b;
    if disc.abs() <= tie {
        return AlphaInterval::Point(-b / 2.0);
    }
    if disc < 0.0 {
        return AlphaInterval::Empty;
    }
    // Larger-magnitude root directly, the other from the product of roots.
    let lo = -(b + disc.sqrt()) / 2.0;
    let hi = half_n / lo;
    AlphaInterval::Closed { lo, hi }
}

/// Initial data catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Uniform {
        c: f64,
    },
    /// `c + a * prod_i cos(2 pi x_i / L)`
    Cosine {
        c: f64,
        a: f64,
    },
    /// `c + A exp(-|x - x0|^2 / (2 sigma^2))`; `center = None` means the box
    /// centre.
    Gaussian {
        c: f64,
        amplitude: f64,
        sigma: f64,
        center: Option<[f64; 2]>,
    },
    /// `a0 + b * sum_i x_i`, exact-boundary grids only.
    Linear {
        a0: f64,
        b: f64,
    },
    /// `a0 + b0 |x|^2`, exact-boundary grids only.
    Quadratic {
        a0: f64,
        b0: f64,
    },
}

impl InitialData {
    pub fn name(&self) -> &'static str {
        match self {
            InitialData::Uniform { .. } => "uniform",
            InitialData::Cosine { .. } => "cosine",
            InitialData::Gaussian { .. } => "gaussian",
            InitialData::Linear { .. } => "linear",
            InitialData::Quadratic { .. } => "quadratic",
        }
    }

    pub fn needs_exact_boundary(&self) -> bool {
        matches!(
            self,
            InitialData::Linear { .. } | InitialData::Quadratic { .. }
        )
    }

    /// Value at a point of a box with side `extent`.
    pub fn value(&self, x: &[f64], extent: f64) -> f64 {
        match *self {
            InitialData::Uniform { c } => c,
            InitialData::Cosine { c, a } => {
                c + a * x
                    .iter()
                    .map(|&xi| (2.0 * PI * xi / extent).cos())
                    .product::<f64>()
            }
            InitialData::Gaussian {
                c,
                amplitude,
                sigma,
                center,
            } => {
                let r2: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(axis, &xi)| {
                        let x0 = center.map_or(0.5 * extent, |cen| cen[axis]);
                        (xi - x0) * (xi - x0)
                    })
                    .sum();
                c + amplitude * (-r2 / (2.0 * sigma * sigma)).exp()
            }
            InitialData::Linear { a0, b } => a0 + b * x.iter().sum::<f64>(),
            InitialData::Quadratic { a0, b0 } => a0 + b0 * x.iter().map(|xi| xi * xi).sum::<f64>(),
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<ScalarField, GridError> {
        ScalarField::from_fn(*grid, |x| self.value(x, grid.extent()))
    }
}

/// Samples the initial data and computes `M = max |grad(u0^(1 + alpha/2))|`
/// with the grid stencils.
pub fn build_initial_data(
    spec: &InitialData,
    grid: &Grid,
    alpha: f64,
) -> Result<(ScalarField, f64), ProblemError> {
    let u0 = spec.sample(grid)?;
    let exponent = 1.0 + alpha / 2.0;
    check_power_domain(&u0, exponent)?;
    let extent = grid.extent();
    let exact = |x: &[f64], _t: f64| spec.value(x, extent);
    let bc: Option<&dyn ExactBoundary> = match grid.boundary() {
        BoundaryMode::Exact => Some(&exact),
        _ => None,
    };
    let m = analysis::power_gradient_norm(&u0, exponent, 0.0, bc)?.max();
    Ok((u0, m))
}

fn check_power_domain(u0: &ScalarField, exponent: f64) -> Result<(), ProblemError> {
    for (node, &value) in u0.values().iter().enumerate() {
        if value < 0.0 {
            return Err(ProblemError::NegativeInitialData { node, value });
        }
        if value == 0.0 && exponent <= 0.0 {
            return Err(ProblemError::DegeneratePower { node, exponent });
        }
    }
    Ok(())
}

/// Closed-form solutions used as ground truth on exact-boundary grids.
///
/// Both solve the viscous equation `u_t = (u + eps) lap u - gamma |grad u|^2 + f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ManufacturedSolution {
    /// `a0 + b sum x_i - (gamma N b^2 - k) t` with constant forcing `k`.
    Affine {
        a0: f64,
        b: f64,
        gamma: f64,
        forcing: f64,
        dim: usize,
    },
    /// `A(t) + B(t) |x|^2` with zero forcing, where
    /// `B' = (2N - 4 gamma) B^2` and `(A + eps)' = 2N (A + eps) B`.
    Quadratic {
        a0: f64,
        b0: f64,
        gamma: f64,
        eps: f64,
        dim: usize,
    },
}

impl ManufacturedSolution {
    /// Coefficients `(A(t), B(t))` of the quadratic ansatz.
    pub fn quadratic_coefficients(&self, t: f64) -> Option<(f64, f64)> {
        let ManufacturedSolution::Quadratic {
            a0,
            b0,
            gamma,
            eps,
            dim,
        } = *self
        else {
            return None;
        };
        let n = dim as f64;
        let c = 2.0 * n - 4.0 * gamma;
        let (b, growth) = if c == 0.0 {
            (b0, (2.0 * n * b0 * t).exp())
        } else {
            let s = 1.0 - c * b0 * t;
            (b0 / s, s.powf(-2.0 * n / c))
        };
        Some(((a0 + eps) * growth - eps, b))
    }

    /// First time at which the solution ceases to exist, if any.
    pub fn blowup_time(&self) -> Option<f64> {
        match *self {
            ManufacturedSolution::Affine { .. } => None,
            ManufacturedSolution::Quadratic { b0, gamma, dim, .. } => {
                let rate = (2.0 * dim as f64 - 4.0 * gamma) * b0;
                (rate > 0.0).then(|| 1.0 / rate)
            }
        }
    }

    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        match *self {
            ManufacturedSolution::Affine {
                a0,
                b,
                gamma,
                forcing,
                dim,
            } => a0 + b * x.iter().sum::<f64>() - (gamma * dim as f64 * b * b - forcing) * t,
            ManufacturedSolution::Quadratic { .. } => {
                let (a, b) = self
                    .quadratic_coefficients(t)
                    .unwrap_or((f64::NAN, f64::NAN));
                a + b * x.iter().map(|xi| xi * xi).sum::<f64>()
            }
        }
    }
}

impl ExactBoundary for ManufacturedSolution {
    fn value(&self, x: &[f64], t: f64) -> f64 {
        self.eval(x, t)
    }
}

/// Geometric ladder `eps_k = eps0 * factor^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsSchedule {
    pub eps0: f64,
    pub factor: f64,
    pub count: usize,
}

impl EpsSchedule {
    pub fn values(&self) -> Vec<f64> {
        (0..self.count)
            .map(|k| self.eps0 * self.factor.powi(k as i32))
            .collect()
    }

    pub fn smallest(&self) -> f64 {
        self.eps0 * self.factor.powi(self.count as i32 - 1)
    }
}

/// Full experiment definition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub grid: GridSpec,
    pub gamma: f64,
    pub forcing: Forcing,
    pub initial: InitialData,
    /// Resolved exponent.
    pub alpha: f64,
    /// Whether `alpha` was chosen automatically from the admissible interval.
    pub alpha_auto: bool,
    pub horizon: f64,
    pub eps_schedule: EpsSchedule,
    pub cfl_safety: f64,
    /// Requested snapshot times in `[0, T]`; 0 and T are always added.
    pub snapshot_times: Vec<f64>,
    /// Start from `u0 + eps` instead of `u0`.
    pub eps_lift: bool,
}

impl ProblemConfig {
    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    pub fn build_grid(&self) -> Result<Grid, ProblemError> {
        Ok(Grid::new(self.grid)?)
    }

    pub fn alpha_interval(&self) -> AlphaInterval {
        admissible_alpha_interval(self.gamma, self.dim())
    }

    /// Copy of the configuration on a grid with `points` samples per axis.
    pub fn with_points(&self, points: usize) -> Self {
        let mut cfg = self.clone();
        cfg.grid.points = points;
        cfg
    }

    /// Sorted snapshot schedule starting at 0 and ending at T.
    pub fn snapshot_schedule(&self) -> Vec<f64> {
        let mut times = Vec::with_capacity(self.snapshot_times.len() + 2);
        times.push(0.0);
        times.extend(
            self.snapshot_times
                .iter()
                .copied()
                .filter(|&t| t > 0.0 && t < self.horizon),
        );
        times.push(self.horizon);
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }

    /// Structural validation; hypotheses of the regularity results are
    /// checked separately by [`ProblemConfig::check_certification`].
    pub fn validate(&self) -> Result<(), ProblemError> {
        self.build_grid()?;
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(invalid(
                "gamma",
                format!("must be finite and >= 0, got {}", self.gamma),
            ));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(invalid(
                "T",
                format!("must be positive, got {}", self.horizon),
            ));
        }
        if !self.alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        let s = &self.eps_schedule;
        if !(s.eps0.is_finite() && s.eps0 > 0.0) {
            return Err(invalid("eps0", format!("must be positive, got {}", s.eps0)));
        }
        if !(s.factor > 0.0 && s.factor < 1.0) {
            return Err(invalid(
                "eps_factor",
                format!("must lie in (0, 1), got {}", s.factor),
            ));
        }
        if s.count < 1 {
            return Err(invalid("eps_count", "must be at least 1"));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(invalid(
                "cfl_safety",
                format!("must lie in (0, 1], got {}", self.cfl_safety),
            ));
        }
        for pair in self.snapshot_times.windows(2) {
            if pair[1] < pair[0] {
                return Err(invalid("snapshots", "times must be in increasing order"));
            }
        }
        if let Some(&t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(0.0..=self.horizon).contains(&t))
        {
            return Err(invalid("snapshots", format!("time {t} outside [0, T]")));
        }
        self.validate_forcing_params()?;
        self.validate_initial_params()?;
        Ok(())
    }

    fn validate_forcing_params(&self) -> Result<(), ProblemError> {
        let m = self.forcing.growth_exponent;
        if !(m.is_finite() && m >= 0.0) {
            return Err(invalid("forcing.m", format!("must be >= 0, got {m}")));
        }
        match &self.forcing.kind {
            ForcingKind::Constant(k) | ForcingKind::ExpDecay(k) | ForcingKind::Rational(k)
                if !k.is_finite() =>
            {
                Err(invalid("forcing.k", "must be finite"))
            }
            ForcingKind::TimeProfile(c) if c.is_empty() || c.iter().any(|v| !v.is_finite()) => Err(
                invalid("forcing.coeffs", "need at least one finite coefficient"),
            ),
            _ => Ok(()),
        }
    }

    fn validate_initial_params(&self) -> Result<(), ProblemError> {
        let exact = self.grid.boundary == BoundaryMode::Exact;
        match (&self.initial, exact) {
            (data, false) if data.needs_exact_boundary() => {
                return Err(invalid(
                    "initial.kind",
                    format!("{} data requires boundary = exact", data.name()),
                ))
            }
            (data, true) if !data.needs_exact_boundary() => {
                return Err(invalid(
                    "boundary",
                    format!(
                        "exact boundary needs a closed-form solution; {} data has none",
                        data.name()
                    ),
                ))
            }
            _ => {}
        }
        if let InitialData::Gaussian { sigma, .. } = self.initial {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(invalid("initial.sigma", "must be positive"));
            }
        }
        match (&self.initial, &self.forcing.kind) {
            (InitialData::Linear { .. }, ForcingKind::Zero | ForcingKind::Constant(_)) => {}
            (InitialData::Linear { .. }, _) => {
                return Err(invalid(
                    "forcing.kind",
                    "linear exact solution needs zero or constant forcing",
                ))
            }
            (InitialData::Quadratic { .. }, kind) if !matches!(kind, ForcingKind::Zero) => {
                return Err(invalid(
                    "forcing.kind",
                    "quadratic exact solution needs zero forcing",
                ))
            }
            _ => {}
        }
        if let Some(sol) = self.exact_solution(self.eps_schedule.eps0) {
            if let Some(tb) = sol.blowup_time() {
                if tb <= self.horizon {
                    return Err(invalid(
                        "T",
                        format!("quadratic solution blows up at t = {tb} <= T"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Initial lift applied for viscosity `eps`.
    pub fn lift(&self, eps: f64) -> f64 {
        if self.eps_lift {
            eps
        } else {
            0.0
        }
    }

    /// Exact solution of the viscous problem with viscosity `eps`, for
    /// exact-boundary configurations.
    pub fn exact_solution(&self, eps: f64) -> Option<ManufacturedSolution> {
        let lift = self.lift(eps);
        match self.initial {
            InitialData::Linear { a0, b } => Some(ManufacturedSolution::Affine {
                a0: a0 + lift,
                b,
                gamma: self.gamma,
                forcing: match self.forcing.kind {
                    ForcingKind::Constant(k) => k,
                    _ => 0.0,
                },
                dim: self.dim(),
            }),
            InitialData::Quadratic { a0, b0 } => Some(ManufacturedSolution::Quadratic {
                a0: a0 + lift,
                b0,
                gamma: self.gamma,
                eps,
                dim: self.dim(),
            }),
            _ => None,
        }
    }

    /// Initial condition for viscosity `eps`, lifted when configured.
    pub fn initial_condition(&self, eps: f64) -> Result<ScalarField, ProblemError> {
        let grid = self.build_grid()?;
        let u0 = self.initial.sample(&grid)?;
        check_power_domain(&u0, 1.0)?;
        let lift = self.lift(eps);
        if lift == 0.0 {
            Ok(u0)
        } else {
            Ok(u0.map(|v| v + lift)?)
        }
    }

    /// Initial data and its bound `M` for the configured `alpha`.
    pub fn initial_bound(&self) -> Result<(ScalarField, f64), ProblemError> {
        build_initial_data(&self.initial, &self.build_grid()?, self.alpha)
    }

    /// Checks every hypothesis of the gradient bound and of the Lipschitz and
    /// Hölder consequences. Errors name the offending key.
    pub fn check_certification(&self) -> Result<(), ProblemError> {
        let dim = self.dim();
        let interval = self.alpha_interval();
        let threshold = (2.0 * dim as f64).sqrt() - 1.0;
        if interval.is_empty() {
            return Err(ProblemError::Hypothesis(format!(
                "gamma = {} below sqrt(2N)-1 = {threshold:.7} for N = {dim}; gradient-bound hypothesis fails (key `gamma`)",
                self.gamma
            )));
        }
        if !interval.contains(self.alpha, 1e-12) {
            return Err(ProblemError::Hypothesis(format!(
                "alpha = {} outside admissible interval {interval}; alpha^2 + (gamma+1) alpha + N/2 <= 0 fails (key `alpha`)",
                self.alpha
            )));
        }
        if (self.alpha + 2.0).abs() <= 1e-12 {
            return Err(ProblemError::Hypothesis(
                "alpha = -2 excluded for the Lipschitz and Hölder estimates (key `alpha`)".into(),
            ));
        }
        let (u0, _) = self.initial_bound()?;
        let u_max = u0.max()
            + self.lift(self.eps_schedule.eps0)
            + self.forcing.sup_bound(self.horizon) * self.horizon;
        let report = validate_forcing(&self.forcing, u_max.max(1.0), self.horizon);
        if !report.passed() {
            return Err(ProblemError::Hypothesis(format!(
                "forcing hypotheses fail (key `forcing.kind`): {}",
                report.failures().join("; ")
            )));
        }
        Ok(())
    }
}
