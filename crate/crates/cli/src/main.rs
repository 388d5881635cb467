//! `magspec`: eigenvalues, bounds and verification for the magnetic Neumann
//! Laplacian on planar domains.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solver failure, 3 I/O failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "magspec", version, about = "Magnetic Neumann eigenvalues on planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Relative residual tolerance of the eigensolver.
    #[arg(long, default_value_t = magspec_core::eigensolve::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed of the random starting block.
    #[arg(long, default_value_t = magspec_core::eigensolve::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    /// Domain: short form (`disk:R=1`), inline JSON, or a JSON file.
    #[arg(long)]
    pub domain: String,
    /// Constant magnetic field.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    /// Target mesh size.
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lowest eigenvalues of a domain as CSV.
    Spectrum {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Use the closed form (disks only) instead of finite elements.
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First eigenvalues on each angular branch of disks over a radius grid.
    DiskBranches {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Radii: `start:stop:count` or a comma list.
        #[arg(long, default_value = "0.2:6:59")]
        r_grid: String,
        #[arg(long, default_value_t = 10)]
        n_max: i64,
        /// Include the negative angular indices -n_max..-1.
        #[arg(long)]
        negative: bool,
        #[arg(long, default_value_t = 1)]
        j_max: usize,
        /// First eigenvalue on the circle of radius R instead.
        #[arg(long)]
        circle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every applicable bound checked against the computed first eigenvalue.
    Bounds {
        #[command(flatten)]
        domain: DomainArgs,
        /// JSON file overriding the universal constants.
        #[arg(long)]
        constants_file: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Riesz means, averages and single-eigenvalue bounds for a spectrum.
    Riesz {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 40)]
        k: usize,
        #[arg(long)]
        closed_form: bool,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the acceptance suite; exits 0 iff every criterion passes.
    Verify {
        /// Only the criteria that need no finite element solve.
        #[arg(long)]
        fast: bool,
        /// Multiply the spectra of the Riesz criterion by 1 + p.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The de Gennes constant.
    Theta0 {
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thin-tube convergence: first eigenvalue of tubes of decreasing thickness.
    Sweep {
        /// Curve: `ellipse:a=1,b=0.5` or `circle:R=1.4142`.
        #[arg(long)]
        curve: String,
        /// Comma list of thicknesses.
        #[arg(long, default_value = "0.2,0.1,0.05")]
        thickness: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Mesh size as a fraction of the thickness.
        #[arg(long, default_value_t = 0.2)]
        h_ratio: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data series for figures.
    Figure {
        #[command(subcommand)]
        figure: Figure,
    },
}

#[derive(Subcommand, Debug)]
enum Figure {
    /// Dirichlet and Neumann first eigenvalues of disks against the radius.
    Dvsn {
        #[arg(long, default_value = "0.5,1,2,4")]
        r_grid: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Solver(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
        }
    }
}

impl From<magspec_core::Error> for CliError {
    fn from(e: magspec_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Solver(e.to_string())
        }
    }
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                magspec_core::Error::from(e).into()
            }
        }
    )*};
}

core_error!(
    magspec_core::geometry::GeometryError,
    magspec_core::closedform::ClosedFormError,
    magspec_core::bounds::BoundError,
    magspec_core::eigensolve::EigenError,
    magspec_core::mesh::MeshError
);

pub type CliResult<T> = Result<T, CliError>;

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("MAGSPEC_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Validation(format!("MAGSPEC_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Solver(e.to_string()))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Spectrum { domain, k, closed_form, solver, out } => {
            commands::spectrum(&domain, k, closed_form, &solver, out.as_deref())
        }
        Command::DiskBranches { beta, r_grid, n_max, negative, j_max, circle, out } => {
            commands::disk_branches(beta, &r_grid, n_max, negative, j_max, circle, out.as_deref())
        }
        Command::Bounds { domain, constants_file, solver, out } => {
            commands::bounds(&domain, constants_file.as_deref(), &solver, out.as_deref())
        }
        Command::Riesz { domain, k, closed_form, solver, out } => {
            commands::riesz(&domain, k, closed_form, &solver, out.as_deref())
        }
        Command::Verify { fast, perturb, solver, out } => commands::verify(fast, perturb, &solver, out.as_deref()),
        Command::Theta0 { tol, out } => commands::theta0(tol, out.as_deref()),
        Command::Sweep { curve, thickness, beta, h_ratio, solver, out } => {
            commands::sweep(&curve, &thickness, beta, h_ratio, &solver, out.as_deref())
        }
        Command::Figure { figure: Figure::Dvsn { r_grid, beta, h, solver, out } } => {
            commands::dvsn(&r_grid, beta, h, &solver, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magspec: {e}");
            ExitCode::from(e.code())
        }
    }
}
