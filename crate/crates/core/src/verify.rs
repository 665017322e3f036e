//! The twelve acceptance criteria as executable checks.
//!
//! Every check produces a [`CheckReport`]; a criterion passes when all of its
//! checks do. Tolerances are fixed constants, only the dimensions scale.

use std::fmt;
use std::time::Instant;

use num_complex::Complex;

use crate::dilation::{dilation_convergence, fixed_beta_schedule, fixed_product_schedule, pi_tau_beta};
use crate::error::Result;
use crate::fock::{coherent_state, even_cat_state, fock_state, Operator};
use crate::phasespace::{gaussian_coarse_grain, husimi_grid, uniform_thetas, wigner_grid, GridSpec, HUSIMI_FILTER_WIDTH};
use crate::q_povm::{
    coherent_q_phase_closed, coherent_q_phase_quadrature, q_phase_distribution, rho_q_matrix, rho_q_matrix_oracle,
};
use crate::quadrature::QuadratureSpec;
use crate::spectrum::hermitian_spectrum;
use crate::wigner_ovm::{
    commutator_table, eigenfunction_residual, number_commutator_norm, position_kernel_w0, rho_w_matrix,
    rho_w_matrix_oracle, symmetric_axis, wigner_phase_distribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `measured` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// `|measured| ≤ tolerance`
    AbsAtMost,
    /// `measured ≤ tolerance`
    AtMost,
    /// `measured < tolerance`
    Below,
    /// `measured ≥ tolerance`
    AtLeast,
    /// `measured > tolerance`
    Above,
}

impl Comparison {
    pub fn holds(self, measured: f64, tolerance: f64) -> bool {
        match self {
            Comparison::AbsAtMost => measured.abs() <= tolerance,
            Comparison::AtMost => measured <= tolerance,
            Comparison::Below => measured < tolerance,
            Comparison::AtLeast => measured >= tolerance,
            Comparison::Above => measured > tolerance,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::AbsAtMost => "|m|<=",
            Comparison::AtMost => "<=",
            Comparison::Below => "<",
            Comparison::AtLeast => ">=",
            Comparison::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub runtime_s: f64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, measured: f64, comparison: Comparison, tolerance: f64, runtime_s: f64) -> Self {
        let status = if comparison.holds(measured, tolerance) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            status,
            measured,
            tolerance,
            comparison,
            runtime_s,
        }
    }

    /// Name with the comparison appended, as written to reports.
    pub fn qualified_name(&self) -> String {
        format!("{} [{}]", self.name, self.comparison.symbol())
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub number: usize,
    pub title: &'static str,
    pub checks: Vec<CheckReport>,
    pub runtime_s: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn status(&self) -> Status {
        if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub mod tol {
    pub const Q_UNIFORMITY: f64 = 1e-12;
    pub const COMPLETENESS: f64 = 1e-9;
    pub const Q_MIN_EIGENVALUE: f64 = -1e-10;
    pub const W_MIN_EIGENVALUE: f64 = -1e-3;
    pub const ROTATION: f64 = 1e-10;
    pub const Q_ORACLE: f64 = 1e-9;
    pub const W_ORACLE: f64 = 1e-7;
    pub const COARSE_GRAIN: f64 = 2e-6;
    pub const NORMALIZATION: f64 = 1e-8;
    pub const DIFFERENTIAL: f64 = 1e-8;
    pub const RATIO_SPREAD: f64 = 1e-2;
    pub const NUMBER_COMMUTATOR: f64 = 0.01;
    pub const PLATEAU: f64 = 1e-3;
    pub const COHERENT_CLOSED: f64 = 1e-10;
    pub const COHERENT_TOTAL: f64 = 1e-9;
    /// Not itself a criterion: size of the block commutator defect.
    pub const COMMUTATOR_IDENTITY: f64 = 1e-12;
}

/// Dimensions used by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub dim: usize,
    pub completeness_dim: usize,
    pub q_oracle_dim: usize,
    pub w_oracle_dim: usize,
    pub commutator_dims: Vec<usize>,
    pub commutator_block: usize,
    pub dilation_dim: usize,
    pub theta_nodes: usize,
    pub kernel_nodes: usize,
    pub kernel_half_span: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dim: 64,
            completeness_dim: 32,
            q_oracle_dim: 24,
            w_oracle_dim: 16,
            commutator_dims: vec![40, 80, 160],
            commutator_block: 8,
            dilation_dim: 24,
            theta_nodes: 720,
            kernel_nodes: 401,
            kernel_half_span: 10.0,
        }
    }
}

impl VerifyConfig {
    /// Main dimension `dim`; the smaller test dimensions are capped by it.
    /// The commutator study keeps its own dimensions.
    pub fn with_dim(dim: usize) -> Self {
        let base = Self::default();
        Self {
            dim,
            completeness_dim: base.completeness_dim.min(dim),
            q_oracle_dim: base.q_oracle_dim.min(dim),
            w_oracle_dim: base.w_oracle_dim.min(dim),
            dilation_dim: base.dilation_dim.min(dim),
            ..base
        }
    }
}

struct Collector {
    checks: Vec<CheckReport>,
}

impl Collector {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, comparison: Comparison, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        let start = Instant::now();
        let measured = f().unwrap_or(f64::NAN);
        let runtime = start.elapsed().as_secs_f64();
        self.checks
            .push(CheckReport::new(name, measured, comparison, tolerance, runtime));
    }
}

const TITLES: [&str; 12] = [
    "Q phase uniformity",
    "Q POVM completeness",
    "Wigner phase OVM completeness",
    "positivity split",
    "rotation covariance",
    "oracle equivalence",
    "coarse-graining",
    "even cat phase distributions",
    "position-kernel eigenfunctions",
    "conjugate commutator",
    "dilation",
    "coherent Q phase closed form",
];

pub fn criterion_title(number: usize) -> &'static str {
    TITLES[number - 1]
}

pub fn run_criterion(number: usize, cfg: &VerifyConfig) -> CriterionReport {
    assert!((1..=12).contains(&number), "criteria are numbered 1 to 12");
    let start = Instant::now();
    let mut c = Collector::new();
    match number {
        1 => c1(&mut c, cfg),
        2 => c2(&mut c, cfg),
        3 => c3(&mut c, cfg),
        4 => c4(&mut c, cfg),
        5 => c5(&mut c, cfg),
        6 => c6(&mut c, cfg),
        7 => c7(&mut c, cfg),
        8 => c8(&mut c, cfg),
        9 => c9(&mut c, cfg),
        10 => c10(&mut c, cfg),
        11 => c11(&mut c, cfg),
        _ => c12(&mut c, cfg),
    }
    CriterionReport {
        number,
        title: criterion_title(number),
        checks: c.checks,
        runtime_s: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    (1..=12).map(|n| run_criterion(n, cfg)).collect()
}

fn c1(c: &mut Collector, cfg: &VerifyConfig) {
    let thetas = uniform_thetas::<f64>(cfg.theta_nodes);
    for n in [0usize, 1, 5, 20] {
        let name = format!("c01.q_uniform_fock_{n}");
        c.check(&name, Comparison::AtMost, tol::Q_UNIFORMITY, || {
            let rho = fock_state::<f64>(n, cfg.dim.max(n + 1))?.projector();
            let d = q_phase_distribution(&rho, &thetas)?;
            Ok(d.values.iter().fold(0.0, |a, v| a.max((v - 1.0 / std::f64::consts::TAU).abs())))
        });
    }
}

fn diag_identity_defect(op: &Operator<f64>) -> f64 {
    (0..op.dim()).fold(0.0, |a, n| a.max((op.get(n, n) - Complex::new(1.0, 0.0)).norm()))
}

fn c2(c: &mut Collector, cfg: &VerifyConfig) {
    let d = cfg.completeness_dim;
    c.check("c02.q_analytic_diagonal", Comparison::AtMost, 0.0, || {
        Ok(diag_identity_defect(&crate::q_povm::completeness_analytic(d)))
    });
    c.check("c02.q_trapezoid_completeness", Comparison::AtMost, tol::COMPLETENESS, || {
        Ok(crate::q_povm::completeness_trapezoid(d, cfg.theta_nodes))
    });
}

fn c3(c: &mut Collector, cfg: &VerifyConfig) {
    let d = cfg.completeness_dim;
    c.check("c03.w_analytic_diagonal", Comparison::AtMost, tol::COMPLETENESS, || {
        Ok(diag_identity_defect(&crate::wigner_ovm::completeness_analytic(d)))
    });
    c.check("c03.w_trapezoid_completeness", Comparison::AtMost, tol::COMPLETENESS, || {
        Ok(crate::wigner_ovm::completeness_trapezoid(d, cfg.theta_nodes))
    });
}

fn c4(c: &mut Collector, cfg: &VerifyConfig) {
    c.check("c04.q_min_eigenvalue", Comparison::AtLeast, tol::Q_MIN_EIGENVALUE, || {
        Ok(hermitian_spectrum(&rho_q_matrix(0.0, cfg.dim).matrix)?.min())
    });
    c.check("c04.w_min_eigenvalue", Comparison::AtMost, tol::W_MIN_EIGENVALUE, || {
        Ok(hermitian_spectrum(&rho_w_matrix(0.0, cfg.dim).matrix)?.min())
    });
}

// e^{iNθ} M e^{−iNθ} as an explicit matrix product
fn conjugate_by_number_phase(m: &Operator<f64>, theta: f64) -> Operator<f64> {
    let u = Operator::from_fn(m.dim(), |n, k| {
        if n == k {
            Complex::from_polar(1.0, n as f64 * theta)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    u.matmul(m).matmul(&u.adjoint())
}

fn c5(c: &mut Collector, cfg: &VerifyConfig) {
    let w0 = rho_w_matrix(0.0, cfg.dim).matrix;
    let q0 = rho_q_matrix(0.0, cfg.dim).matrix;
    for theta in [0.3, 1.7, 5.1] {
        c.check(&format!("c05.w_rotation_{theta}"), Comparison::AtMost, tol::ROTATION, || {
            Ok(rho_w_matrix(theta, cfg.dim).matrix.distance(&conjugate_by_number_phase(&w0, theta)))
        });
        c.check(&format!("c05.q_rotation_{theta}"), Comparison::AtMost, tol::ROTATION, || {
            Ok(rho_q_matrix(theta, cfg.dim).matrix.distance(&conjugate_by_number_phase(&q0, theta)))
        });
    }
}

fn c6(c: &mut Collector, cfg: &VerifyConfig) {
    let dq = cfg.q_oracle_dim;
    c.check("c06.q_oracle", Comparison::AtMost, tol::Q_ORACLE, || {
        let o = rho_q_matrix_oracle(0.0, dq, &QuadratureSpec::coherent(dq))?;
        Ok(o.matrix.distance(&rho_q_matrix(0.0, dq).matrix))
    });
    let dw = cfg.w_oracle_dim;
    c.check("c06.w_oracle", Comparison::AtMost, tol::W_ORACLE, || {
        let o = rho_w_matrix_oracle(0.0, dw, &QuadratureSpec::matrix_symbol(dw))?;
        Ok(o.matrix.distance(&rho_w_matrix(0.0, dw).matrix))
    });
}

/// The four states used by the smoothing and distribution checks.
pub fn standard_states(dim: usize) -> Result<Vec<(&'static str, Operator<f64>)>> {
    Ok(vec![
        ("vacuum", fock_state(0, dim)?.projector()),
        ("fock_1", fock_state(1, dim)?.projector()),
        ("coherent_2", coherent_state(Complex::new(2.0, 0.0), dim).state.projector()),
        ("even_cat_2", even_cat_state(Complex::new(2.0, 0.0), dim).state.projector()),
    ])
}

fn c7(c: &mut Collector, cfg: &VerifyConfig) {
    let spec = GridSpec::default_for_dim(cfg.dim);
    let states = match standard_states(cfg.dim) {
        Ok(s) => s,
        Err(_) => {
            c.check("c07.states", Comparison::AtMost, 0.0, || Ok(f64::NAN));
            return;
        }
    };
    for (label, rho) in states {
        c.check(&format!("c07.coarse_grain_{label}"), Comparison::AtMost, tol::COARSE_GRAIN, || {
            let smoothed = gaussian_coarse_grain(&wigner_grid(&rho, spec)?, HUSIMI_FILTER_WIDTH)?;
            Ok(smoothed.max_abs_diff(&husimi_grid(&rho, spec)?))
        });
    }
}

fn c8(c: &mut Collector, cfg: &VerifyConfig) {
    let rho = even_cat_state(Complex::new(2.0, 0.0), cfg.dim).state.projector();
    let thetas = uniform_thetas::<f64>(cfg.theta_nodes);
    let pw = wigner_phase_distribution(&rho, &thetas);
    let pq = q_phase_distribution(&rho, &thetas);
    c.check("c08.w_phase_min", Comparison::Below, 0.0, || Ok(pw.clone()?.min()));
    c.check("c08.q_phase_min", Comparison::AtLeast, 0.0, || Ok(pq.clone()?.min()));
    c.check("c08.w_phase_total", Comparison::AbsAtMost, tol::NORMALIZATION, || {
        Ok(pw.clone()?.total() - 1.0)
    });
    c.check("c08.q_phase_total", Comparison::AbsAtMost, tol::NORMALIZATION, || {
        Ok(pq.clone()?.total() - 1.0)
    });
    c.check("c08.wigner_min_between_lobes", Comparison::Below, 0.0, || {
        let spec = GridSpec::default_for_dim(cfg.dim);
        let w = wigner_grid(&rho, spec)?;
        let mut lowest = f64::INFINITY;
        for i in 0..spec.nx {
            if spec.x(i).abs() <= 1.0 {
                for j in 0..spec.np {
                    lowest = lowest.min(w.values[[i, j]]);
                }
            }
        }
        Ok(lowest)
    });
}

fn c9(c: &mut Collector, cfg: &VerifyConfig) {
    let axis = symmetric_axis(cfg.kernel_half_span, cfg.kernel_nodes);
    let kernel = position_kernel_w0(&axis);
    let pi = std::f64::consts::PI;
    for (label, lambda) in [
        ("-1/4pi", -1.0 / (4.0 * pi)),
        ("+1/4pi", 1.0 / (4.0 * pi)),
        ("-1/8pi", -1.0 / (8.0 * pi)),
        ("+1/8pi", 1.0 / (8.0 * pi)),
    ] {
        let res = kernel.as_ref().map_err(Clone::clone).and_then(|k| eigenfunction_residual(lambda, k));
        c.check(&format!("c09.differential_residual_{label}"), Comparison::AtMost, tol::DIFFERENTIAL, || {
            Ok(res.clone()?.differential_residual)
        });
        c.check(&format!("c09.kernel_ratio_spread_{label}"), Comparison::AtMost, tol::RATIO_SPREAD, || {
            Ok(res.clone()?.ratio_spread)
        });
    }
    // reported only
    c.check("c09.kernel_constant_times_4pi", Comparison::Above, f64::NEG_INFINITY, || {
        Ok(kernel.clone()?.constant * 4.0 * pi)
    });
}

fn c10(c: &mut Collector, cfg: &VerifyConfig) {
    let table = commutator_table::<f64>(&cfg.commutator_dims, cfg.commutator_block);
    for (k, &d) in cfg.commutator_dims.iter().enumerate() {
        c.check(&format!("c10.block_deviation_dim_{d}"), Comparison::AtMost, tol::COMMUTATOR_IDENTITY, || {
            Ok(table.clone()?[k].1)
        });
    }
    // strictly decreasing ⟺ every successive difference is negative
    c.check("c10.block_deviation_strict_decrease", Comparison::Below, 0.0, || {
        let t = table.clone()?;
        Ok(t.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max))
    });
    c.check("c10.number_commutator_norm", Comparison::Above, tol::NUMBER_COMMUTATOR, || {
        Ok(number_commutator_norm(cfg.dim))
    });
}

fn c11(c: &mut Collector, cfg: &VerifyConfig) {
    let dim = cfg.dilation_dim;
    let quad = QuadratureSpec::coherent(dim);
    c.check("c11.tau_zero_bitwise", Comparison::AtMost, 0.0, || {
        let mut worst = 0.0f64;
        for (theta, beta) in [(0.0f64, Complex::new(1.0f64, 0.0)), (1.3, Complex::new(-2.0, 0.5))] {
            let p = pi_tau_beta(theta, 0.0f64, beta, dim, &quad)?.matrix;
            let o = rho_q_matrix_oracle(theta, dim, &quad)?.matrix;
            for (a, b) in p.entries().iter().zip(o.entries().iter()) {
                if a != b {
                    worst = worst.max((a - b).norm().max(f64::MIN_POSITIVE));
                }
            }
        }
        Ok(worst)
    });
    c.check("c11.fixed_beta_monotone", Comparison::Below, 0.0, || {
        let rows = dilation_convergence(0.0, &fixed_beta_schedule(), dim, &quad)?;
        Ok(rows.windows(2).map(|w| w[1].distance - w[0].distance).fold(f64::NEG_INFINITY, f64::max))
    });
    c.check("c11.fixed_product_plateau", Comparison::Above, tol::PLATEAU, || {
        let rows = dilation_convergence(0.0, &fixed_product_schedule(0.5), dim, &quad)?;
        Ok(rows.iter().map(|r| r.distance).fold(f64::INFINITY, f64::min))
    });
}

fn c12(c: &mut Collector, cfg: &VerifyConfig) {
    let alphas = [
        ("0.5", Complex::new(0.5, 0.0)),
        ("2", Complex::new(2.0, 0.0)),
        ("3+i", Complex::new(3.0, 1.0)),
    ];
    let thetas64 = uniform_thetas::<f64>(64);
    let quad = QuadratureSpec::<f64>::gauss_legendre(200, 14.0);
    for (label, alpha) in alphas {
        c.check(&format!("c12.closed_vs_quadrature_{label}"), Comparison::AtMost, tol::COHERENT_CLOSED, || {
            let mut worst = 0.0f64;
            for &t in &thetas64 {
                let want = coherent_q_phase_quadrature(alpha, t, &quad)?;
                worst = worst.max((coherent_q_phase_closed(alpha, t) - want).abs());
            }
            Ok(worst)
        });
        c.check(&format!("c12.closed_total_{label}"), Comparison::AbsAtMost, tol::COHERENT_TOTAL, || {
            let thetas = uniform_thetas::<f64>(cfg.theta_nodes);
            let w = std::f64::consts::TAU / thetas.len() as f64;
            Ok(thetas.iter().map(|&t| coherent_q_phase_closed(alpha, t) * w).sum::<f64>() - 1.0)
        });
    }
}
