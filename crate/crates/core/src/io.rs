//! CSV artifacts. Reals are written with 17 significant digits so that a
//! write/read round trip is exact.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::grid::{BoundaryMode, Grid, GridError, GridSpec, ScalarField};
use crate::report::RegularityReport;
use crate::solver::{ConvergenceTable, Trajectory};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("trajectory has no snapshots")]
    EmptyTrajectory,
}

/// Formats a real with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_real(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), IoError> {
    fs::create_dir_all(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `.field.csv` text: a header row `dim,n,L,boundary` holding the grid
/// values, then one value per line in row-major order.
pub fn field_to_string(field: &ScalarField) -> String {
    let g = field.grid();
    let mut out = String::with_capacity(24 * (g.len() + 1));
    let _ = writeln!(
        out,
        "{},{},{},{}",
        g.dim(),
        g.n(),
        real(g.extent()),
        g.boundary()
    );
    for &v in field.values() {
        out.push_str(&real(v));
        out.push('\n');
    }
    out
}

pub fn write_field(path: &Path, field: &ScalarField) -> Result<(), IoError> {
    write_text(path, &field_to_string(field))
}

pub fn parse_field(text: &str, path: &Path) -> Result<ScalarField, IoError> {
    let err = |line: usize, reason: String| IoError::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (i, meta) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let parts: Vec<&str> = meta.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(err(
            i + 1,
            format!("expected 4 grid fields, got {}", parts.len()),
        ));
    }
    let dim = parts[0]
        .parse()
        .map_err(|_| err(i + 1, format!("bad dim `{}`", parts[0])))?;
    let points = parts[1]
        .parse()
        .map_err(|_| err(i + 1, format!("bad n `{}`", parts[1])))?;
    let extent = parts[2]
        .parse()
        .map_err(|_| err(i + 1, format!("bad L `{}`", parts[2])))?;
    let boundary: BoundaryMode = parts[3].parse()?;
    let grid = Grid::new(GridSpec {
        dim,
        extent,
        points,
        boundary,
    })?;
    let mut values = Vec::with_capacity(grid.len());
    for (i, l) in lines {
        let v = l
            .trim()
            .parse::<f64>()
            .map_err(|_| err(i + 1, format!("bad value `{}`", l.trim())))?;
        values.push(v);
    }
    Ok(ScalarField::new(grid, values)?)
}

pub fn read_field(path: &Path) -> Result<ScalarField, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_field(&text, path)
}

/// Writes `snap_<k>.field.csv` for every snapshot and a `manifest.csv`.
pub fn write_trajectory(dir: &Path, traj: &Trajectory) -> Result<(), IoError> {
    if traj.is_empty() {
        return Err(IoError::EmptyTrajectory);
    }
    create_dir(dir)?;
    let mut manifest = String::from("index,t,filename,min_u,max_u\n");
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let name = format!("snap_{k:04}.field.csv");
        write_field(&dir.join(&name), &snap.field)?;
        let _ = writeln!(
            manifest,
            "{k},{},{name},{},{}",
            real(snap.t),
            real(snap.field.min()),
            real(snap.field.max())
        );
    }
    write_text(&dir.join("manifest.csv"), &manifest)
}

pub fn write_convergence(path: &Path, table: &ConvergenceTable) -> Result<(), IoError> {
    let mut out = String::from("eps,diff_inf,diff_l1,order\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            real(row.eps),
            real(row.diff_inf),
            real(row.diff_l1),
            opt_real(row.order)
        );
    }
    write_text(path, &out)
}

/// `report.csv` (key/value rows, then check rows) and `witness.csv`.
pub fn write_report(dir: &Path, report: &RegularityReport) -> Result<(), IoError> {
    create_dir(dir)?;
    let mut out = String::from("key,value\n");
    for (key, value) in report.entries() {
        let _ = writeln!(out, "{key},{}", real(value));
    }
    out.push_str("check,pass,tolerance\n");
    for c in &report.checks {
        let _ = writeln!(out, "{},{},{}", c.name, c.pass, real(c.tolerance));
    }
    write_text(&dir.join("report.csv"), &out)?;

    let mut wit = String::from("check,snapshot,t,node,x,y,value\n");
    for c in &report.checks {
        if let Some(w) = &c.witness {
            let _ = writeln!(
                wit,
                "{},{},{},{},{},{},{}",
                c.name,
                w.snapshot,
                real(w.t),
                w.node,
                real(w.coords[0]),
                real(w.coords[1]),
                real(w.value)
            );
        }
    }
    write_text(&dir.join("witness.csv"), &wit)
}

/// One `profile_t<k>.csv` per snapshot with coordinate columns and `u`.
pub fn emit_plot_data(dir: &Path, traj: &Trajectory) -> Result<Vec<PathBuf>, IoError> {
    if traj.is_empty() {
        return Err(IoError::EmptyTrajectory);
    }
    create_dir(dir)?;
    let grid = traj.grid();
    let mut paths = Vec::with_capacity(traj.len());
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let mut out = String::new();
        if grid.dim() == 1 {
            out.push_str("x,u\n");
        } else {
            out.push_str("x,y,u\n");
        }
        for (node, &u) in snap.field.values().iter().enumerate() {
            let c = grid.coords(node);
            if grid.dim() == 1 {
                let _ = writeln!(out, "{},{}", real(c[0]), real(u));
            } else {
                let _ = writeln!(out, "{},{},{}", real(c[0]), real(c[1]), real(u));
            }
        }
        let path = dir.join(format!("profile_t{k}.csv"));
        write_text(&path, &out)?;
        paths.push(path);
    }
    Ok(paths)
}

/// One row of the manufactured-solution table.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsRow {
    pub case: String,
    pub n: usize,
    pub error: f64,
    pub order: Option<f64>,
}

pub fn write_mms(path: &Path, rows: &[MmsRow]) -> Result<(), IoError> {
    let mut out = String::from("case,n,error,order\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.case,
            r.n,
            real(r.error),
            opt_real(r.order)
        );
    }
    write_text(path, &out)
}

/// Marks an output directory as holding partial results.
pub fn write_failed_marker(dir: &Path, reason: &str) -> Result<(), IoError> {
    create_dir(dir)?;
    write_text(&dir.join("FAILED"), &format!("{reason}\n"))
}
