//! Flat `key = value` experiment files.
//!
//! ```text
//! # comment
//! dim = 1
//! L = 1
//! n = 400
//! gamma = 1
//! forcing.kind = zero
//! initial.kind = cosine
//! alpha = auto
//! T = 0.1
//! eps0 = 0.05
//! eps_factor = 0.5
//! eps_count = 5
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::grid::{BoundaryMode, GridSpec};
use crate::problem::{
    admissible_alpha_interval, AlphaInterval, EpsSchedule, Forcing, ForcingKind, InitialData,
    ProblemConfig, ProblemError,
};
use crate::report::Tolerances;

pub const DEFAULT_CFL_SAFETY: f64 = 0.4;
/// Snapshot count when `snapshots` is absent, equispaced on `[0, T]`.
pub const DEFAULT_SNAPSHOTS: usize = 65;

const KEYS: &[&str] = &[
    "dim",
    "L",
    "n",
    "boundary",
    "gamma",
    "forcing.kind",
    "forcing.k",
    "forcing.m",
    "forcing.coeffs",
    "initial.kind",
    "initial.c",
    "initial.a",
    "initial.A",
    "initial.sigma",
    "initial.x0",
    "initial.a0",
    "initial.b",
    "initial.B0",
    "alpha",
    "T",
    "eps0",
    "eps_factor",
    "eps_count",
    "cfl_safety",
    "snapshots",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: key `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{key}` does not apply to {context}")]
    Unused { key: String, context: String },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    SweepEps,
    Verify,
    AlphaRange,
    Mms,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::SweepEps => "sweep-eps",
            Command::Verify => "verify",
            Command::AlphaRange => "alpha-range",
            Command::Mms => "mms",
        }
    }

    /// Commands whose output asserts the regularity results.
    pub fn certifies(self) -> bool {
        self == Command::Verify
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "solve" => Command::Solve,
            "sweep-eps" => Command::SweepEps,
            "verify" => Command::Verify,
            "alpha-range" => Command::AlphaRange,
            "mms" => Command::Mms,
            other => return Err(format!("unknown command `{other}`")),
        })
    }
}

/// A parsed experiment plus the command that will run it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub problem: ProblemConfig,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
}

impl RunConfig {
    /// Validates `problem` for `command`; certification commands also check
    /// every hypothesis of the regularity results.
    pub fn new(
        command: Command,
        problem: ProblemConfig,
        output_dir: PathBuf,
        tolerances: Tolerances,
    ) -> Result<Self, ConfigError> {
        problem.validate()?;
        if command.certifies() {
            problem.check_certification()?;
        }
        Ok(RunConfig {
            command,
            problem,
            output_dir,
            tolerances,
        })
    }
}

/// Parses and validates a full experiment file for `command`, writing to
/// `out` with default tolerances.
pub fn parse_config(text: &str, command: Command) -> Result<RunConfig, ConfigError> {
    let problem = parse_problem(text)?;
    RunConfig::new(
        command,
        problem,
        PathBuf::from("out"),
        Tolerances::default(),
    )
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    value: String,
}

/// Raw `key = value` pairs, checked against the known key set.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                reason: format!("expected `key = value`, got `{body}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::BadValue {
                    line,
                    key: key.to_string(),
                    reason: "empty value".into(),
                });
            }
            let prev = entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
            if prev.is_some() {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn bad(&self, key: &str, reason: impl Into<String>) -> ConfigError {
        ConfigError::BadValue {
            line: self.entries.get(key).map_or(0, |e| e.line),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    fn parse_value<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.str(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.bad(key, format!("expected {what}, got `{v}`"))),
        }
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.parse_value(key, "a real number")
    }

    pub fn integer(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.parse_value(key, "a nonnegative integer")
    }

    pub fn reals(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.str(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| self.bad(key, format!("expected reals, got `{}`", s.trim())))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    pub fn required_real(&self, key: &str) -> Result<f64, ConfigError> {
        self.real(key)?
            .ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    pub fn required_integer(&self, key: &str) -> Result<usize, ConfigError> {
        self.integer(key)?
            .ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    fn required_str(&self, key: &str) -> Result<&str, ConfigError> {
        self.str(key)
            .ok_or_else(|| ConfigError::Missing(key.to_string()))
    }

    fn reject_unused(&self, keys: &[&str], context: &str) -> Result<(), ConfigError> {
        match keys.iter().find(|k| self.contains(k)) {
            Some(k) => Err(ConfigError::Unused {
                key: k.to_string(),
                context: context.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Only `gamma` and `dim` are needed to report the admissible interval.
pub fn parse_alpha_range(text: &str) -> Result<(f64, usize, AlphaInterval), ConfigError> {
    let raw = RawConfig::parse(text)?;
    let gamma = raw.required_real("gamma")?;
    let dim = raw.required_integer("dim")?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(raw.bad("gamma", "must be finite and >= 0"));
    }
    if dim < 1 {
        return Err(raw.bad("dim", "must be at least 1"));
    }
    Ok((gamma, dim, admissible_alpha_interval(gamma, dim)))
}

/// Parses an experiment file into a structurally validated [`ProblemConfig`].
/// `alpha = auto` resolves to the admissible midpoint; with an empty interval
/// it resolves to 0 and certification later rejects the configuration.
pub fn parse_problem(text: &str) -> Result<ProblemConfig, ConfigError> {
    let raw = RawConfig::parse(text)?;
    let dim = raw.required_integer("dim")?;
    let extent = raw.required_real("L")?;
    let points = raw.required_integer("n")?;
    let boundary = match raw.str("boundary") {
        None => BoundaryMode::Periodic,
        Some(v) => v.parse().map_err(|_| {
            raw.bad(
                "boundary",
                format!("expected periodic, neumann or exact, got `{v}`"),
            )
        })?,
    };
    let gamma = raw.required_real("gamma")?;
    let forcing = parse_forcing(&raw)?;
    let initial = parse_initial(&raw, dim, extent)?;
    let horizon = raw.required_real("T")?;
    let eps_schedule = EpsSchedule {
        eps0: raw.required_real("eps0")?,
        factor: raw.required_real("eps_factor")?,
        count: raw.required_integer("eps_count")?,
    };
    let cfl_safety = raw.real("cfl_safety")?.unwrap_or(DEFAULT_CFL_SAFETY);
    let snapshot_times = match raw.reals("snapshots")? {
        Some(v) => v,
        None => (0..DEFAULT_SNAPSHOTS)
            .map(|k| horizon * k as f64 / (DEFAULT_SNAPSHOTS - 1) as f64)
            .collect(),
    };
    let (alpha, alpha_auto) = match raw.required_str("alpha")? {
        "auto" => {
            let interval = admissible_alpha_interval(gamma.max(0.0), dim.max(1));
            (interval.auto_alpha().unwrap_or(0.0), true)
        }
        _ => (raw.required_real("alpha")?, false),
    };
    let config = ProblemConfig {
        grid: GridSpec {
            dim,
            extent,
            points,
            boundary,
        },
        gamma,
        forcing,
        initial,
        alpha,
        alpha_auto,
        horizon,
        eps_schedule,
        cfl_safety,
        snapshot_times,
        eps_lift: true,
    };
    config.validate()?;
    Ok(config)
}

fn parse_forcing(raw: &RawConfig) -> Result<Forcing, ConfigError> {
    let kind = raw.required_str("forcing.kind")?;
    let k = || raw.required_real("forcing.k");
    let kind =
        match kind {
            "zero" => {
                raw.reject_unused(&["forcing.k", "forcing.coeffs"], "zero forcing")?;
                ForcingKind::Zero
            }
            "constant" => ForcingKind::Constant(k()?),
            "exp_decay" => ForcingKind::ExpDecay(k()?),
            "rational" => ForcingKind::Rational(k()?),
            "time_profile" => {
                raw.reject_unused(&["forcing.k"], "time_profile forcing")?;
                ForcingKind::TimeProfile(
                    raw.reals("forcing.coeffs")?
                        .ok_or_else(|| ConfigError::Missing("forcing.coeffs".into()))?,
                )
            }
            other => return Err(raw.bad(
                "forcing.kind",
                format!(
                    "expected zero, constant, exp_decay, rational or time_profile, got `{other}`"
                ),
            )),
        };
    if !matches!(kind, ForcingKind::TimeProfile(_)) {
        raw.reject_unused(&["forcing.coeffs"], "this forcing kind")?;
    }
    Ok(Forcing {
        kind,
        growth_exponent: raw.real("forcing.m")?.unwrap_or(0.0),
    })
}

fn parse_initial(raw: &RawConfig, dim: usize, extent: f64) -> Result<InitialData, ConfigError> {
    let kind = raw.required_str("initial.kind")?;
    let get = |key: &str, default: f64| -> Result<f64, ConfigError> {
        Ok(raw.real(key)?.unwrap_or(default))
    };
    let allowed: &[&str] = match kind {
        "uniform" => &["initial.c"],
        "cosine" => &["initial.c", "initial.a"],
        "gaussian" => &["initial.c", "initial.A", "initial.sigma", "initial.x0"],
        "linear" => &["initial.a0", "initial.b"],
        "quadratic" => &["initial.a0", "initial.B0"],
        other => {
            return Err(raw.bad(
                "initial.kind",
                format!("expected uniform, cosine, gaussian, linear or quadratic, got `{other}`"),
            ))
        }
    };
    let extra: Vec<&str> = KEYS
        .iter()
        .copied()
        .filter(|k| k.starts_with("initial.") && *k != "initial.kind" && !allowed.contains(k))
        .collect();
    raw.reject_unused(&extra, &format!("{kind} initial data"))?;
    Ok(match kind {
        "uniform" => InitialData::Uniform {
            c: get("initial.c", 1.0)?,
        },
        "cosine" => InitialData::Cosine {
            c: get("initial.c", 2.0)?,
            a: get("initial.a", 0.5)?,
        },
        "gaussian" => {
            let center = match raw.reals("initial.x0")? {
                None => None,
                Some(v) if v.len() == dim => {
                    let mut c = [0.5 * extent; 2];
                    c[..dim].copy_from_slice(&v);
                    Some(c)
                }
                Some(v) => {
                    return Err(raw.bad(
                        "initial.x0",
                        format!("expected {dim} coordinates, got {}", v.len()),
                    ))
                }
            };
            InitialData::Gaussian {
                c: get("initial.c", 0.5)?,
                amplitude: get("initial.A", 1.0)?,
                sigma: get("initial.sigma", 0.1)?,
                center,
            }
        }
        "linear" => InitialData::Linear {
            a0: get("initial.a0", 2.0)?,
            b: get("initial.b", 1.0)?,
        },
        _ => InitialData::Quadratic {
            a0: get("initial.a0", 1.0)?,
            b0: get("initial.B0", 0.1)?,
        },
    })
}

fn reals(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

/// Renders a configuration in the file grammar; [`parse_problem`] reads it
/// back unchanged. `eps_lift` is a command-line switch and is not rendered.
pub fn render_config(config: &ProblemConfig) -> String {
    let mut out = String::new();
    let g = &config.grid;
    let _ = writeln!(out, "dim = {}", g.dim);
    let _ = writeln!(out, "L = {}", g.extent);
    let _ = writeln!(out, "n = {}", g.points);
    let _ = writeln!(out, "boundary = {}", g.boundary);
    let _ = writeln!(out, "gamma = {}", config.gamma);
    let f = &config.forcing;
    let _ = writeln!(out, "forcing.kind = {}", f.kind.name());
    match &f.kind {
        ForcingKind::Zero => {}
        ForcingKind::Constant(k) | ForcingKind::ExpDecay(k) | ForcingKind::Rational(k) => {
            let _ = writeln!(out, "forcing.k = {k}");
        }
        ForcingKind::TimeProfile(c) => {
            let _ = writeln!(out, "forcing.coeffs = {}", reals(c));
        }
    }
    let _ = writeln!(out, "forcing.m = {}", f.growth_exponent);
    let _ = writeln!(out, "initial.kind = {}", config.initial.name());
    match config.initial {
        InitialData::Uniform { c } => {
            let _ = writeln!(out, "initial.c = {c}");
        }
        InitialData::Cosine { c, a } => {
            let _ = writeln!(out, "initial.c = {c}\ninitial.a = {a}");
        }
        InitialData::Gaussian {
            c,
            amplitude,
            sigma,
            center,
        } => {
            let _ = writeln!(
                out,
                "initial.c = {c}\ninitial.A = {amplitude}\ninitial.sigma = {sigma}"
            );
            if let Some(x0) = center {
                let _ = writeln!(out, "initial.x0 = {}", reals(&x0[..g.dim]));
            }
        }
        InitialData::Linear { a0, b } => {
            let _ = writeln!(out, "initial.a0 = {a0}\ninitial.b = {b}");
        }
        InitialData::Quadratic { a0, b0 } => {
            let _ = writeln!(out, "initial.a0 = {a0}\ninitial.B0 = {b0}");
        }
    }
    if config.alpha_auto {
        out.push_str("alpha = auto\n");
    } else {
        let _ = writeln!(out, "alpha = {}", config.alpha);
    }
    let _ = writeln!(out, "T = {}", config.horizon);
    let s = &config.eps_schedule;
    let _ = writeln!(out, "eps0 = {}", s.eps0);
    let _ = writeln!(out, "eps_factor = {}", s.factor);
    let _ = writeln!(out, "eps_count = {}", s.count);
    let _ = writeln!(out, "cfl_safety = {}", config.cfl_safety);
    let _ = writeln!(out, "snapshots = {}", reals(&config.snapshot_times));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
dim = 1
L = 1
n = 400
gamma = 1
forcing.kind = zero
initial.kind = cosine
alpha = auto
T = 0.1
eps0 = 0.05
eps_factor = 0.5
eps_count = 5
";

    #[test]
    fn minimal_file_resolves_auto_alpha() {
        let run = parse_config(MINIMAL, Command::Verify).unwrap();
        assert!(run.problem.alpha_auto);
        assert!(
            (run.problem.alpha + 1.0).abs() < 1e-12,
            "{}",
            run.problem.alpha
        );
        assert_eq!(run.problem.grid.boundary, BoundaryMode::Periodic);
        assert_eq!(run.problem.snapshot_times.len(), DEFAULT_SNAPSHOTS);
    }

    #[test]
    fn small_gamma_rejected_for_verify_only() {
        let text = MINIMAL.replace("gamma = 1", "gamma = 0.2");
        let err = parse_config(&text, Command::Verify)
            .unwrap_err()
            .to_string();
        assert!(err.contains("gamma"), "{err}");
        assert!(err.contains("below sqrt(2N)-1"), "{err}");
        assert!(err.contains("hypothesis fails"), "{err}");
        parse_config(&text, Command::Solve).unwrap();
    }

    #[test]
    fn unknown_key_names_line() {
        let text = format!("{MINIMAL}fo = 1\n");
        match parse_problem(&text) {
            Err(ConfigError::UnknownKey { line, key }) => {
                assert_eq!(line, 12);
                assert_eq!(key, "fo");
            }
            other => panic!("expected unknown key, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = format!(
            "# header\n\n{}",
            MINIMAL.replace("n = 400", "n = 400  # points")
        );
        assert_eq!(parse_problem(&text).unwrap().grid.points, 400);
    }

    #[test]
    fn type_mismatch_names_key() {
        let text = MINIMAL.replace("n = 400", "n = many");
        let err = parse_problem(&text).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("`n`"), "{err}");
    }

    #[test]
    fn missing_and_duplicate_keys() {
        let text = MINIMAL.replace("T = 0.1\n", "");
        assert!(matches!(parse_problem(&text), Err(ConfigError::Missing(k)) if k == "T"));
        let text = format!("{MINIMAL}T = 0.2\n");
        assert!(matches!(
            parse_problem(&text),
            Err(ConfigError::Duplicate { .. })
        ));
    }

    #[test]
    fn inadmissible_alpha_rejected_for_verify() {
        let text = MINIMAL.replace("alpha = auto", "alpha = -0.05");
        let err = parse_config(&text, Command::Verify)
            .unwrap_err()
            .to_string();
        assert!(err.contains("alpha"), "{err}");
    }

    #[test]
    fn negative_forcing_rejected_for_verify() {
        let text = MINIMAL.replace(
            "forcing.kind = zero",
            "forcing.kind = constant\nforcing.k = -1",
        );
        let err = parse_config(&text, Command::Verify)
            .unwrap_err()
            .to_string();
        assert!(err.contains("f >= 0 violated"), "{err}");
    }

    #[test]
    fn alpha_range_reads_gamma_and_dim() {
        let (_, _, interval) = parse_alpha_range("gamma = 3\ndim = 1\n").unwrap();
        assert_eq!(interval.to_string(), "[-3.8708287, -0.1291713]");
    }

    #[test]
    fn render_round_trip() {
        let text = "\
dim = 2
L = 2
n = 32
boundary = neumann
gamma = 2.5
forcing.kind = time_profile
forcing.coeffs = 0.1, 0, 0.3
forcing.m = 0
initial.kind = gaussian
initial.c = 0.25
initial.A = 1.5
initial.sigma = 0.2
initial.x0 = 0.9, 1.1
alpha = -0.7
T = 0.3
eps0 = 0.1
eps_factor = 0.5
eps_count = 3
snapshots = 0, 0.1, 0.2, 0.3
";
        let cfg = parse_problem(text).unwrap();
        let again = parse_problem(&render_config(&cfg)).unwrap();
        assert_eq!(cfg, again);
    }
}
