//! Vanishing-viscosity solutions of the degenerate parabolic problem
//!
//! ```text
//! u_t = u lap u - gamma |grad u|^2 + f(t, u),   u(x, 0) = u0(x) >= 0,
//! ```
//!
//! and numerical checks of their regularity: the a-priori bound on
//! `|grad(u^(1 + alpha/2))|`, Lipschitz continuity in space, half-Hölder
//! continuity in time and the weak-form identity.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod grid;
pub mod io;
pub mod mms;
pub mod problem;
pub mod report;
pub mod solver;

pub use grid::{BoundaryMode, ExactBoundary, Grid, GridSpec, ScalarField, VectorField};
pub use problem::{AlphaInterval, Forcing, ForcingKind, InitialData, ProblemConfig};
pub use report::{certify, RegularityReport, Tolerances};
pub use solver::{Trajectory, ViscositySweep};
