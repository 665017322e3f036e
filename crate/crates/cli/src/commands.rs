use std::fmt;
use std::path::PathBuf;

use anyhow::Result;
use num_complex::Complex;
use phase_ovm::dilation::{dilation_convergence, fixed_beta_schedule, fixed_product_schedule};
use phase_ovm::phasespace::{
    gaussian_coarse_grain, husimi_grid, radial_phase_distribution, uniform_thetas, wigner_grid, GridSpec,
    HusimiEvaluator, WignerEvaluator, DEFAULT_SPACING,
};
use phase_ovm::q_povm::{q_phase_distribution, rho_q_matrix, rho_q_matrix_oracle};
use phase_ovm::quadrature::QuadratureSpec;
use phase_ovm::verify::{run_all, tol, CheckReport, Comparison, VerifyConfig};
use phase_ovm::wigner_ovm::{
    commutator_table, eigenfunction_residual, number_commutator_norm, position_kernel_w0, rho_w_matrix,
    rho_w_matrix_oracle, symmetric_axis, wigner_phase_distribution, Parity,
};

use crate::output::{ensure_writable, num, Sink};
use crate::schema;
use crate::state::{parse_complex, StateSpec};
use crate::{Cli, Command, DistKind, PhaseKind, PhaseMethod, RunConfig, Schedule};

pub enum Outcome {
    Success,
    ChecksFailed,
}

/// Invalid argument combination detected after parsing; exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl RunConfig {
    fn dim(&self) -> usize {
        self.dim as usize
    }

    fn grid(&self) -> GridSpec<f64> {
        let default = GridSpec::default_for_dim(self.dim());
        let half = self.grid_half_width.unwrap_or(default.x_max);
        let nodes = self
            .grid_nodes
            .map(|n| n as usize)
            .unwrap_or_else(|| (2.0 * half / DEFAULT_SPACING).round() as usize + 1);
        GridSpec::square(half, nodes)
    }

    fn quad(&self, default: QuadratureSpec<f64>) -> QuadratureSpec<f64> {
        QuadratureSpec::gauss_legendre(self.radial_nodes as usize, self.r_max.unwrap_or(default.r_max))
    }

    fn thetas(&self) -> Vec<f64> {
        uniform_thetas(self.theta_nodes as usize)
    }
}

fn density(state: &StateSpec, dim: usize) -> Result<phase_ovm::OperatorMatrix> {
    state.density(dim).map_err(usage)
}

fn announce(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn outcome(checks: &[CheckReport]) -> Outcome {
    for c in checks {
        println!("{:<4} {} measured={} tolerance={}", c.status, c.qualified_name(), num(c.measured), num(c.tolerance));
    }
    if checks.iter().all(CheckReport::passed) {
        Outcome::Success
    } else {
        Outcome::ChecksFailed
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let run = &cli.run;
    validate(&cli.command, run)?;
    ensure_writable(&run.output_dir)?;
    let sink = Sink {
        dir: run.output_dir.clone(),
        format: run.format,
    };
    let dim = run.dim();
    match &cli.command {
        Command::StateDist { state, kind } => {
            let rho = density(state, dim)?;
            let spec = run.grid();
            let (grid, label) = match kind {
                DistKind::Wigner => (wigner_grid(&rho, spec)?, "wigner"),
                DistKind::Husimi => (husimi_grid(&rho, spec)?, "husimi"),
            };
            announce(&[sink.grid(&format!("state_dist_{label}"), label, &state.to_string(), &grid)?]);
            Ok(Outcome::Success)
        }
        Command::PhaseDist { state, kind, method } => {
            let rho = density(state, dim)?;
            let thetas = run.thetas();
            let (dist, label) = match (kind, method) {
                (PhaseKind::Wigner, PhaseMethod::Matrix) => (wigner_phase_distribution(&rho, &thetas)?, "wigner"),
                (PhaseKind::Q, PhaseMethod::Matrix) => (q_phase_distribution(&rho, &thetas)?, "q"),
                (PhaseKind::Wigner, PhaseMethod::Radial) => {
                    let quad = run.quad(QuadratureSpec::matrix_symbol(dim));
                    (radial_phase_distribution(&WignerEvaluator::new(&rho)?, &thetas, &quad)?, "wigner")
                }
                (PhaseKind::Q, PhaseMethod::Radial) => {
                    let default = QuadratureSpec::gauss_legendre(200, (2.0 * dim as f64).sqrt() + 8.0);
                    let quad = run.quad(default);
                    (radial_phase_distribution(&HusimiEvaluator::new(&rho)?, &thetas, &quad)?, "q")
                }
            };
            announce(&[sink.phase(&format!("phase_dist_{label}"), label, &state.to_string(), &dist)?]);
            Ok(Outcome::Success)
        }
        Command::OvmMatrix { theta, oracle } => {
            let m = if *oracle {
                rho_w_matrix_oracle(*theta, dim, &run.quad(QuadratureSpec::matrix_symbol(dim)))?
            } else {
                rho_w_matrix(*theta, dim)
            };
            announce(&[sink.matrix("ovm_matrix", "rho_w", *theta, &m.matrix)?]);
            Ok(Outcome::Success)
        }
        Command::PovmMatrix { theta, oracle } => {
            let m = if *oracle {
                rho_q_matrix_oracle(*theta, dim, &run.quad(QuadratureSpec::coherent(dim)))?
            } else {
                rho_q_matrix(*theta, dim)
            };
            announce(&[sink.matrix("povm_matrix", "rho_q", *theta, &m.matrix)?]);
            Ok(Outcome::Success)
        }
        Command::CoarseGrain { state, width } => {
            let rho = density(state, dim)?;
            let spec = run.grid();
            let start = std::time::Instant::now();
            let smoothed = gaussian_coarse_grain(&wigner_grid(&rho, spec)?, *width)?;
            let husimi = husimi_grid(&rho, spec)?;
            let diff = smoothed.max_abs_diff(&husimi);
            let label = state.to_string();
            let checks = vec![CheckReport::new(
                "coarse_grain_max_difference",
                diff,
                Comparison::AtMost,
                tol::COARSE_GRAIN,
                start.elapsed().as_secs_f64(),
            )];
            announce(&[
                sink.grid("coarse_grain_smoothed_wigner", "smoothed_wigner", &label, &smoothed)?,
                sink.grid("coarse_grain_husimi", "husimi", &label, &husimi)?,
                sink.report("coarse_grain_report", &checks)?,
            ]);
            Ok(outcome(&checks))
        }
        Command::Eigencheck {
            lambda,
            kernel_nodes,
            kernel_half_span,
        } => {
            let pi = std::f64::consts::PI;
            let lambdas = if lambda.is_empty() {
                vec![-1.0 / (4.0 * pi), 1.0 / (4.0 * pi), -1.0 / (8.0 * pi), 1.0 / (8.0 * pi)]
            } else {
                lambda.clone()
            };
            let kernel = position_kernel_w0(&symmetric_axis(*kernel_half_span, *kernel_nodes))?;
            println!("kernel constant c = {} (4πc = {})", num(kernel.constant), num(4.0 * pi * kernel.constant));
            let mut rows = Vec::new();
            let mut checks = Vec::new();
            for &l in &lambdas {
                let start = std::time::Instant::now();
                let r = eigenfunction_residual(l, &kernel)?;
                let t = start.elapsed().as_secs_f64();
                rows.push(vec![
                    num(r.lambda),
                    num(r.momentum),
                    match r.parity {
                        Parity::Even => "even".to_string(),
                        Parity::Odd => "odd".to_string(),
                    },
                    num(r.differential_residual),
                    num(r.kernel_eigenvalue),
                    num(r.eigenvalue_ratio),
                    num(r.ratio_spread),
                    num(r.kernel_residual),
                ]);
                checks.push(CheckReport::new(
                    format!("differential_residual_{l}"),
                    r.differential_residual,
                    Comparison::AtMost,
                    tol::DIFFERENTIAL,
                    t,
                ));
                checks.push(CheckReport::new(
                    format!("kernel_ratio_spread_{l}"),
                    r.ratio_spread,
                    Comparison::AtMost,
                    tol::RATIO_SPREAD,
                    t,
                ));
            }
            announce(&[
                sink.table("eigencheck", &schema::EIGEN_CSV_HEADER, rows)?,
                sink.report("eigencheck_report", &checks)?,
            ]);
            Ok(outcome(&checks))
        }
        Command::ConjugateCheck { dims, block } => {
            let start = std::time::Instant::now();
            let table = commutator_table::<f64>(dims, *block)?;
            let t = start.elapsed().as_secs_f64();
            let rows = table
                .iter()
                .map(|(d, v)| vec![d.to_string(), block.to_string(), num(*v)])
                .collect();
            let mut checks: Vec<CheckReport> = table
                .iter()
                .map(|(d, v)| {
                    CheckReport::new(
                        format!("block_deviation_dim_{d}"),
                        *v,
                        Comparison::AtMost,
                        tol::COMMUTATOR_IDENTITY,
                        t,
                    )
                })
                .collect();
            if table.len() > 1 {
                let worst_step = table.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
                checks.push(CheckReport::new(
                    "block_deviation_strict_decrease",
                    worst_step,
                    Comparison::Below,
                    0.0,
                    t,
                ));
            }
            let start = std::time::Instant::now();
            let n = number_commutator_norm::<f64>(dim);
            checks.push(CheckReport::new(
                format!("number_commutator_norm_dim_{dim}"),
                n,
                Comparison::Above,
                tol::NUMBER_COMMUTATOR,
                start.elapsed().as_secs_f64(),
            ));
            announce(&[
                sink.table("conjugate", &schema::COMMUTATOR_CSV_HEADER, rows)?,
                sink.report("conjugate_report", &checks)?,
            ]);
            Ok(outcome(&checks))
        }
        Command::DilationSweep {
            theta,
            schedule,
            beta,
            product,
        } => {
            let plan = match schedule {
                Schedule::FixedBeta => {
                    let b = parse_complex(beta).map_err(usage)?;
                    fixed_beta_schedule::<f64>().into_iter().map(|(t, _)| (t, b)).collect()
                }
                Schedule::FixedProduct => fixed_product_schedule(*product),
            };
            let rows = dilation_convergence(*theta, &plan, dim, &run.quad(QuadratureSpec::coherent(dim)))?;
            let table = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.theta),
                        num(r.tau),
                        num(r.beta.re),
                        num(r.beta.im),
                        num(r.distance),
                        num(r.beta_sin_tau),
                    ]
                })
                .collect();
            announce(&[sink.table("dilation", &schema::DILATION_CSV_HEADER, table)?]);
            Ok(Outcome::Success)
        }
        Command::CatDemo { gamma } => {
            let state = StateSpec::Cat(Complex::new(*gamma, 0.0));
            let rho = density(&state, dim)?;
            let label = state.to_string();
            let spec = run.grid();
            let thetas = run.thetas();
            let ext = run.format.extension();
            let paths = vec![
                sink.grid("cat_wigner_grid", "wigner", &label, &wigner_grid(&rho, spec)?)?,
                sink.grid("cat_husimi_grid", "husimi", &label, &husimi_grid(&rho, spec)?)?,
                sink.phase("cat_wigner_phase", "wigner", &label, &wigner_phase_distribution(&rho, &thetas)?)?,
                sink.phase("cat_q_phase", "q", &label, &q_phase_distribution(&rho, &thetas)?)?,
                sink.text("cat_demo.gp", &gnuplot_script(ext, *gamma))?,
            ];
            announce(&paths);
            Ok(Outcome::Success)
        }
        Command::VerifyAll => {
            let cfg = VerifyConfig {
                theta_nodes: run.theta_nodes as usize,
                ..VerifyConfig::with_dim(dim)
            };
            let reports = run_all(&cfg);
            for r in &reports {
                println!("criterion {:>2} {} {}", r.number, r.status(), r.title);
            }
            let checks: Vec<CheckReport> = reports.into_iter().flat_map(|r| r.checks).collect();
            let path = sink.report("verify_report", &checks)?;
            let result = outcome(&checks);
            announce(&[path]);
            Ok(result)
        }
    }
}

fn validate(command: &Command, run: &RunConfig) -> Result<()> {
    let dim = run.dim();
    match command {
        Command::VerifyAll if dim < 21 => Err(usage("verify-all needs --dim of at least 21 (it uses |20⟩)")),
        Command::ConjugateCheck { dims, block } => {
            if dims.is_empty() || *block == 0 {
                return Err(usage("conjugate-check needs at least one dimension and a positive block"));
            }
            if let Some(d) = dims.iter().find(|&&d| 4 * block > d) {
                return Err(usage(format!("block {block} exceeds dim/4 for dim {d}")));
            }
            Ok(())
        }
        Command::CoarseGrain { width, .. } if !(width.is_finite() && *width >= 0.0) => {
            Err(usage("--width must be a non-negative number"))
        }
        Command::Eigencheck { lambda, .. } if lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) => {
            Err(usage("--lambda values must be finite and nonzero"))
        }
        _ => Ok(()),
    }
}

fn gnuplot_script(ext: &str, gamma: f64) -> String {
    if ext != "csv" {
        return format!(
            "# Data were written as JSON; rerun cat-demo with --format csv for this script.\n# even cat state, gamma = {gamma}\n"
        );
    }
    format!(
        "# even cat state, gamma = {gamma}\n\
set datafile separator ','\n\
set terminal pngcairo size 1200,900\n\
set output 'cat_demo.png'\n\
set multiplot layout 2,2\n\
set view map\n\
set title 'Wigner function'\n\
splot 'cat_wigner_grid.csv' every ::1 using 1:2:3 with image notitle\n\
set title 'Husimi function'\n\
splot 'cat_husimi_grid.csv' every ::1 using 1:2:3 with image notitle\n\
set title 'Wigner phase distribution'\n\
plot 'cat_wigner_phase.csv' every ::1 using 1:2 with lines notitle\n\
set title 'Q phase distribution'\n\
plot 'cat_q_phase.csv' every ::1 using 1:2 with lines notitle\n\
unset multiplot\n"
    )
}
