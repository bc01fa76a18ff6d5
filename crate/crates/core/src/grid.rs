//! Uniform lattices in one or two dimensions, sampled fields on them, and the
//! second-order finite-difference operators used everywhere else.
//!
//! Every operator reads its neighbours through a [`Padded`] copy of the field
//! that carries one ghost layer. The ghost layer is filled according to the
//! grid's [`BoundaryMode`]:
//!
//! * `periodic` wraps indices,
//! * `neumann` mirrors across the boundary node (zero normal derivative),
//! * `exact` asks an [`ExactBoundary`] for the true value at the ghost location.
//!
//! Nodes are stored row-major: in 2D the flat index is `i * n + j` where `i`
//! runs along `x` and `j` along `y`. Node `i` sits at `x = i * h`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Smallest accepted number of samples per axis.
pub const MIN_POINTS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("dim must be 1 or 2, got {0}")]
    BadDim(usize),
    #[error("n too small: {0} < {MIN_POINTS}")]
    TooFewPoints(usize),
    #[error("extent L must be positive and finite, got {0}")]
    BadExtent(f64),
    #[error("unknown boundary mode `{0}` (expected periodic, neumann or exact)")]
    UnknownBoundary(String),
    #[error("exact boundary mode requires an exact boundary callback")]
    MissingExactBoundary,
    #[error("exact boundary callback supplied for {0} grid")]
    UnexpectedExactBoundary(BoundaryMode),
    #[error("field has {got} samples, grid has {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} at node {node}")]
    NonFinite { node: usize, value: f64 },
    #[error("exact boundary returned non-finite value at x = {x:?}, t = {t}")]
    NonFiniteGhost { x: [f64; 2], t: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    Periodic,
    Neumann,
    Exact,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::Neumann => "neumann",
            BoundaryMode::Exact => "exact",
        })
    }
}

impl FromStr for BoundaryMode {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "periodic" => Ok(BoundaryMode::Periodic),
            "neumann" => Ok(BoundaryMode::Neumann),
            "exact" => Ok(BoundaryMode::Exact),
            other => Err(GridError::UnknownBoundary(other.to_string())),
        }
    }
}

/// User-facing description of a lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    /// Box side length `L` along every axis.
    pub extent: f64,
    /// Samples per axis.
    pub points: usize,
    pub boundary: BoundaryMode,
}

/// A validated lattice with its spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    spec: GridSpec,
    spacing: f64,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self, GridError> {
        if spec.dim != 1 && spec.dim != 2 {
            return Err(GridError::BadDim(spec.dim));
        }
        if spec.points < MIN_POINTS {
            return Err(GridError::TooFewPoints(spec.points));
        }
        if !(spec.extent.is_finite() && spec.extent > 0.0) {
            return Err(GridError::BadExtent(spec.extent));
        }
        let cells = match spec.boundary {
            BoundaryMode::Periodic => spec.points,
            BoundaryMode::Neumann | BoundaryMode::Exact => spec.points - 1,
        };
        let spacing = spec.extent / cells as f64;
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GridError::BadExtent(spec.extent));
        }
        Ok(Grid { spec, spacing })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Samples per axis.
    pub fn n(&self) -> usize {
        self.spec.points
    }

    pub fn extent(&self) -> f64 {
        self.spec.extent
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.spec.boundary
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of nodes, `n^dim`.
    pub fn len(&self) -> usize {
        self.spec.points.pow(self.spec.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell volume `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.spec.dim as i32)
    }

    /// Per-axis indices of a flat node index. The second entry is 0 in 1D.
    pub fn unravel(&self, k: usize) -> [usize; 2] {
        match self.spec.dim {
            1 => [k, 0],
            _ => [k / self.spec.points, k % self.spec.points],
        }
    }

    /// Coordinates of a node. The second entry is 0 in 1D.
    pub fn coords(&self, k: usize) -> [f64; 2] {
        let [i, j] = self.unravel(k);
        match self.spec.dim {
            1 => [i as f64 * self.spacing, 0.0],
            _ => [i as f64 * self.spacing, j as f64 * self.spacing],
        }
    }

    /// Whether the node touches the boundary of a non-periodic box.
    pub fn is_boundary_node(&self, k: usize) -> bool {
        if self.spec.boundary == BoundaryMode::Periodic {
            return false;
        }
        let last = self.spec.points - 1;
        let idx = self.unravel(k);
        idx[..self.spec.dim].iter().any(|&i| i == 0 || i == last)
    }
}

/// `build_grid` under its operational name.
pub fn build_grid(spec: GridSpec) -> Result<Grid, GridError> {
    Grid::new(spec)
}

/// True solution values at ghost locations, used by the `exact` boundary mode.
///
/// `x` has one entry per dimension.
pub trait ExactBoundary: Send + Sync {
    fn value(&self, x: &[f64], t: f64) -> f64;
}

impl<F> ExactBoundary for F
where
    F: Fn(&[f64], f64) -> f64 + Send + Sync,
{
    fn value(&self, x: &[f64], t: f64) -> f64 {
        self(x, t)
    }
}

/// Real samples on a grid. All values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::ShapeMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some((node, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GridError::NonFinite { node, value });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self, GridError> {
        Self::new(grid, vec![c; grid.len()])
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self, GridError> {
        let dim = grid.dim();
        let values = (0..grid.len()).map(|k| f(&grid.coords(k)[..dim])).collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index and value of the largest sample.
    pub fn argmax(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (k, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (k, v);
            }
        }
        best
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Elementwise map; fails if the result is not finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Elementwise combination of two fields on the same grid.
    pub fn zip_with(
        &self,
        other: &ScalarField,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }
}

/// One real array per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl VectorField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    /// Squared Euclidean norm at node `k`.
    pub fn norm_sq_at(&self, k: usize) -> f64 {
        self.components.iter().map(|c| c[k] * c[k]).sum()
    }

    /// Nodewise Euclidean norm.
    pub fn norm(&self) -> ScalarField {
        let values = (0..self.grid.len())
            .map(|k| self.norm_sq_at(k).sqrt())
            .collect();
        ScalarField::from_raw(self.grid, values)
    }
}

/// The three independent second differences at a node. In 1D `yy` and `xy`
/// are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondDifferences {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl SecondDifferences {
    /// Discrete Laplacian: the trace of the same diagonal entries.
    #[inline]
    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Sum of squares of all Hessian entries (mixed entry counted twice).
    #[inline]
    pub fn frobenius_sq(&self) -> f64 {
        self.xx * self.xx + self.yy * self.yy + 2.0 * self.xy * self.xy
    }
}

/// Field values surrounded by one ghost layer.
#[derive(Debug, Clone)]
pub struct Padded {
    grid: Grid,
    stride: usize,
    data: Vec<f64>,
    inv_2h: f64,
    inv_h2: f64,
    inv_4h2: f64,
}

impl Padded {
    pub fn new(grid: Grid) -> Self {
        let stride = grid.n() + 2;
        let h = grid.spacing();
        Padded {
            grid,
            stride,
            data: vec![0.0; stride.pow(grid.dim() as u32)],
            inv_2h: 0.5 / h,
            inv_h2: 1.0 / (h * h),
            inv_4h2: 0.25 / (h * h),
        }
    }

    pub fn from_field(
        u: &ScalarField,
        t: f64,
        bc: Option<&dyn ExactBoundary>,
    ) -> Result<Self, GridError> {
        let mut padded = Padded::new(u.grid);
        padded.fill(u.values(), t, bc)?;
        Ok(padded)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Copies `values` into the interior and rebuilds the ghost layer.
    pub fn fill(
        &mut self,
        values: &[f64],
        t: f64,
        bc: Option<&dyn ExactBoundary>,
    ) -> Result<(), GridError> {
        check_bc(&self.grid, bc)?;
        let n = self.grid.n();
        if values.len() != self.grid.len() {
            return Err(GridError::ShapeMismatch {
                expected: self.grid.len(),
                got: values.len(),
            });
        }
        let h = self.grid.spacing();
        let mode = self.grid.boundary();
        match self.grid.dim() {
            1 => {
                self.data[1..=n].copy_from_slice(values);
                for p in [0, n + 1] {
                    self.data[p] = match ghost_source(mode, p, n) {
                        Some(i) => values[i],
                        None => exact_ghost(bc, [ghost_coord(p, h), 0.0], 1, t)?,
                    };
                }
            }
            _ => {
                let s = self.stride;
                for i in 0..n {
                    self.data[(i + 1) * s + 1..(i + 1) * s + 1 + n]
                        .copy_from_slice(&values[i * n..(i + 1) * n]);
                }
                for pi in 0..s {
                    for pj in 0..s {
                        let interior_i = (1..=n).contains(&pi);
                        let interior_j = (1..=n).contains(&pj);
                        if interior_i && interior_j {
                            continue;
                        }
                        let src_i = if interior_i {
                            Some(pi - 1)
                        } else {
                            ghost_source(mode, pi, n)
                        };
                        let src_j = if interior_j {
                            Some(pj - 1)
                        } else {
                            ghost_source(mode, pj, n)
                        };
                        self.data[pi * s + pj] = match (src_i, src_j) {
                            (Some(i), Some(j)) => values[i * n + j],
                            _ => exact_ghost(bc, [ghost_coord(pi, h), ghost_coord(pj, h)], 2, t)?,
                        };
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    fn padded_index(&self, k: usize) -> usize {
        match self.grid.dim() {
            1 => k + 1,
            _ => {
                let n = self.grid.n();
                (k / n + 1) * self.stride + (k % n + 1)
            }
        }
    }

    /// Central-difference gradient at node `k`; the second entry is 0 in 1D.
    #[inline]
    pub fn gradient_at(&self, k: usize) -> [f64; 2] {
        let p = self.padded_index(k);
        let d = &self.data;
        match self.grid.dim() {
            1 => [(d[p + 1] - d[p - 1]) * self.inv_2h, 0.0],
            _ => {
                let s = self.stride;
                [
                    (d[p + s] - d[p - s]) * self.inv_2h,
                    (d[p + 1] - d[p - 1]) * self.inv_2h,
                ]
            }
        }
    }

    #[inline]
    pub fn second_differences_at(&self, k: usize) -> SecondDifferences {
        let p = self.padded_index(k);
        let d = &self.data;
        match self.grid.dim() {
            1 => SecondDifferences {
                xx: (d[p + 1] - 2.0 * d[p] + d[p - 1]) * self.inv_h2,
                yy: 0.0,
                xy: 0.0,
            },
            _ => {
                let s = self.stride;
                SecondDifferences {
                    xx: (d[p + s] - 2.0 * d[p] + d[p - s]) * self.inv_h2,
                    yy: (d[p + 1] - 2.0 * d[p] + d[p - 1]) * self.inv_h2,
                    xy: (d[p + s + 1] - d[p + s - 1] - d[p - s + 1] + d[p - s - 1]) * self.inv_4h2,
                }
            }
        }
    }

    #[inline]
    pub fn laplacian_at(&self, k: usize) -> f64 {
        self.second_differences_at(k).trace()
    }
}

fn check_bc(grid: &Grid, bc: Option<&dyn ExactBoundary>) -> Result<(), GridError> {
    match (grid.boundary(), bc.is_some()) {
        (BoundaryMode::Exact, false) => Err(GridError::MissingExactBoundary),
        (BoundaryMode::Exact, true) => Ok(()),
        (mode, true) => Err(GridError::UnexpectedExactBoundary(mode)),
        (_, false) => Ok(()),
    }
}

/// Interior node whose value a ghost at padded position `p` copies, or `None`
/// when the ghost must come from the exact boundary.
#[inline]
fn ghost_source(mode: BoundaryMode, p: usize, n: usize) -> Option<usize> {
    let low = p == 0;
    match mode {
        BoundaryMode::Periodic => Some(if low { n - 1 } else { 0 }),
        BoundaryMode::Neumann => Some(if low { 1 } else { n - 2 }),
        BoundaryMode::Exact => None,
    }
}

#[inline]
fn ghost_coord(p: usize, h: f64) -> f64 {
    (p as f64 - 1.0) * h
}

fn exact_ghost(
    bc: Option<&dyn ExactBoundary>,
    x: [f64; 2],
    dim: usize,
    t: f64,
) -> Result<f64, GridError> {
    let bc = bc.ok_or(GridError::MissingExactBoundary)?;
    let v = bc.value(&x[..dim], t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GridError::NonFiniteGhost { x, t })
    }
}

/// Second-order central-difference gradient.
pub fn gradient(
    u: &ScalarField,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<VectorField, GridError> {
    let padded = Padded::from_field(u, t, bc)?;
    let grid = u.grid;
    let mut components = vec![Vec::with_capacity(grid.len()); grid.dim()];
    for k in 0..grid.len() {
        let g = padded.gradient_at(k);
        for (axis, c) in components.iter_mut().enumerate() {
            c.push(g[axis]);
        }
    }
    for c in &components {
        if let Some((node, &value)) = c.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GridError::NonFinite { node, value });
        }
    }
    Ok(VectorField { grid, components })
}

/// 3-point (1D) or 5-point (2D) Laplacian.
pub fn laplacian(
    u: &ScalarField,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, GridError> {
    let padded = Padded::from_field(u, t, bc)?;
    let values = (0..u.grid.len()).map(|k| padded.laplacian_at(k)).collect();
    ScalarField::new(u.grid, values)
}

/// Nodewise second differences, for checks that need the Laplacian and the
/// Hessian norm from the same numbers.
pub fn second_differences(
    u: &ScalarField,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<Vec<SecondDifferences>, GridError> {
    let padded = Padded::from_field(u, t, bc)?;
    Ok((0..u.grid.len())
        .map(|k| padded.second_differences_at(k))
        .collect())
}

/// Squared Frobenius norm of the discrete Hessian.
pub fn hessian_frobenius_sq(
    u: &ScalarField,
    t: f64,
    bc: Option<&dyn ExactBoundary>,
) -> Result<ScalarField, GridError> {
    let values = second_differences(u, t, bc)?
        .iter()
        .map(SecondDifferences::frobenius_sq)
        .collect();
    ScalarField::new(u.grid, values)
}

/// Trapezoid weight of node `k`, including the cell volume.
pub fn quadrature_weight(grid: &Grid, k: usize) -> f64 {
    let w = grid.cell_volume();
    if grid.boundary() == BoundaryMode::Periodic {
        return w;
    }
    let last = grid.n() - 1;
    let idx = grid.unravel(k);
    idx[..grid.dim()].iter().fold(
        w,
        |acc, &i| if i == 0 || i == last { acc * 0.5 } else { acc },
    )
}

/// Integral of the field over the box: rectangle rule on periodic grids,
/// trapezoid with half-weight boundary nodes otherwise.
pub fn quadrature(u: &ScalarField) -> f64 {
    let grid = u.grid;
    u.values
        .iter()
        .enumerate()
        .map(|(k, &v)| quadrature_weight(&grid, k) * v)
        .sum()
}
