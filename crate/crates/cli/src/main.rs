//! `phase-ovm`: phase distributions, phase operator matrices and checks.

mod commands;
mod output;
mod schema;
mod state;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;
use crate::state::StateSpec;

#[derive(Debug, Parser)]
#[command(name = "phase-ovm", version, about = "Wigner phase OVM and Q phase POVM toolkit")]
#[command(after_help = "Environment: PHASE_OVM_THREADS caps the worker thread count.\n\
Exit status: 0 success, 1 failed check or I/O error, 2 usage error.")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Number-space truncation dimension.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    /// Half-width L of the square grid [−L, L]²; defaults to max(6, 0.75·√dim).
    #[arg(long, global = true, value_parser = positive_f64)]
    pub grid_half_width: Option<f64>,
    /// Grid nodes per axis; defaults to spacing 0.05.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(3..))]
    pub grid_nodes: Option<u64>,
    /// Gauss–Legendre nodes for radial integrals.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub radial_nodes: u64,
    /// Radial cutoff; defaults depend on the integrand and dimension.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub r_max: Option<f64>,
    /// Angles θ_k = 2πk/N for phase distributions.
    #[arg(long, global = true, default_value_t = 720, value_parser = clap::value_parser!(u64).range(1..))]
    pub theta_nodes: u64,
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Wigner,
    Husimi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseKind {
    #[value(alias = "w")]
    Wigner,
    #[value(alias = "q")]
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseMethod {
    /// Trace against the phase operator matrix.
    Matrix,
    /// Radial integral of the phase-space function.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    /// τ = 0.2, 0.1, 0.05, 0.025 at fixed β.
    FixedBeta,
    /// Same τ with β sin τ held at --product.
    FixedProduct,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wigner or Husimi function of a state on the phase-space grid.
    #[command(after_help = schema::GRID_HELP)]
    StateDist {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, value_enum, default_value_t = DistKind::Wigner)]
        kind: DistKind,
    },
    /// Wigner or Q phase distribution of a state.
    #[command(after_help = schema::PHASE_HELP)]
    PhaseDist {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, value_enum)]
        kind: PhaseKind,
        #[arg(long, value_enum, default_value_t = PhaseMethod::Matrix)]
        method: PhaseMethod,
    },
    /// Matrix of the Wigner phase OVM element ρ_W(θ).
    #[command(after_help = schema::MATRIX_HELP)]
    OvmMatrix {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Use the radial quadrature of cross-Wigner symbols instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Matrix of the Q phase POVM element ρ_Q(θ).
    #[command(after_help = schema::MATRIX_HELP)]
    PovmMatrix {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Use the radial quadrature of coherent-state projectors instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Gaussian smoothing of the Wigner grid compared with the Husimi grid.
    #[command(after_help = schema::COARSE_HELP)]
    CoarseGrain {
        #[arg(long)]
        state: StateSpec,
        /// Filter standard deviation per axis; 1/√2 maps Wigner onto Husimi.
        #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
        width: f64,
    },
    /// Eigenfunction residuals of the position-space kernel of ρ_W(0).
    #[command(after_help = schema::EIGEN_HELP)]
    Eigencheck {
        /// Eigenvalues to test; default ±1/(4π), ±1/(8π).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 401)]
        kernel_nodes: usize,
        #[arg(long, default_value_t = 10.0)]
        kernel_half_span: f64,
    },
    /// Block deviation of [ρ_W(0), η_W(0)] from i·I over several truncations.
    #[command(after_help = schema::COMMUTATOR_HELP)]
    ConjugateCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [40usize, 80, 160])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        block: usize,
    },
    /// Distance of the beam-splitter dilation to ρ_Q(θ) along a schedule.
    #[command(after_help = schema::DILATION_HELP)]
    DilationSweep {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = Schedule::FixedBeta)]
        schedule: Schedule,
        /// Ancilla amplitude for the fixed-β schedule, as re,im.
        #[arg(long, default_value = "1,0")]
        beta: String,
        #[arg(long, default_value_t = 0.5)]
        product: f64,
    },
    /// Phase-space and phase distributions of the even cat state.
    #[command(after_help = schema::CAT_HELP)]
    CatDemo {
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        gamma: f64,
    },
    /// Runs every acceptance check with dimensions capped by --dim.
    #[command(after_help = schema::REPORT_HELP)]
    VerifyAll,
}

fn configure_threads() {
    if let Some(n) = std::env::var("PHASE_OVM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // an already-initialised pool is not an error worth reporting
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match commands::run(&cli) {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) if e.is::<commands::UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
