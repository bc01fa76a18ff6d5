use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use degenpar::cli::{execute, Invocation};
use degenpar::config::Command;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Single viscous solve at eps0; dumps the trajectory.
    Solve,
    /// Full eps ladder and its convergence table.
    SweepEps,
    /// Sweep, then certify the smallest-eps trajectory.
    Verify,
    /// Print the admissible alpha interval for (gamma, dim).
    AlphaRange,
    /// Manufactured-solution convergence table.
    Mms,
}

#[derive(Debug, Parser)]
#[command(
    name = "degenpar",
    version,
    about = "Vanishing-viscosity lab for u_t = u lap u - gamma |grad u|^2 + f"
)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Experiment file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Relative tolerance of the gradient-bound and z checks.
    #[arg(long)]
    tol_grad: Option<f64>,
    /// Start from u0 instead of u0 + eps.
    #[arg(long)]
    no_eps_lift: bool,
}

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command = match args.command {
        Cmd::Solve => Command::Solve,
        Cmd::SweepEps => Command::SweepEps,
        Cmd::Verify => Command::Verify,
        Cmd::AlphaRange => Command::AlphaRange,
        Cmd::Mms => Command::Mms,
    };
    let inv = Invocation {
        command,
        config: args.config,
        out: args.out,
        tol_grad: args.tol_grad,
        no_eps_lift: args.no_eps_lift,
    };
    let code = execute(&inv, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
