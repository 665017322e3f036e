//! Output schemas, versioned together.
//!
//! Every JSON artifact carries `schema_version`. CSV files start with the
//! header given here; numbers use `{:.16e}` (17 significant digits).

pub const SCHEMA_VERSION: u32 = 1;

pub const GRID_CSV_HEADER: [&str; 3] = ["x", "p", "value"];
pub const PHASE_CSV_HEADER: [&str; 2] = ["theta", "value"];
pub const MATRIX_CSV_HEADER: [&str; 4] = ["n", "m", "re", "im"];
pub const REPORT_CSV_HEADER: [&str; 5] = ["name", "status", "measured", "tolerance", "runtime_s"];
pub const DILATION_CSV_HEADER: [&str; 6] = ["theta", "tau", "beta_re", "beta_im", "distance", "beta_sin_tau"];
pub const EIGEN_CSV_HEADER: [&str; 8] = [
    "lambda",
    "momentum",
    "parity",
    "differential_residual",
    "kernel_eigenvalue",
    "eigenvalue_ratio",
    "ratio_spread",
    "kernel_residual",
];
pub const COMMUTATOR_CSV_HEADER: [&str; 3] = ["dim", "block", "deviation"];

pub const GRID_HELP: &str = "\
Output (schema v1):
  csv   header x,p,value; one row per node, x outer, p inner
  json  {schema_version, kind, state, x_min, x_max, nx, p_min, p_max, np, values}
        values row-major: values[i*np + j] at (x_i, p_j)
Grid values are densities with respect to dx dp.";

pub const PHASE_HELP: &str = "\
Output (schema v1):
  csv   header theta,value
  json  {schema_version, kind, state, thetas, values}";

pub const MATRIX_HELP: &str = "\
Output (schema v1):
  csv   header n,m,re,im; row-major over (n, m)
  json  {schema_version, kind, dim, theta, entries}
        entries row-major: entries[n*dim + m] = [re, im]";

pub const REPORT_HELP: &str = "\
Report (schema v1):
  csv   header name,status,measured,tolerance,runtime_s
  json  {schema_version, checks: [{name, status, measured, tolerance, runtime_s}]}
The bracketed suffix of each name gives the pass rule, e.g. [<=] means
measured <= tolerance. runtime_s is wall-clock time and the only field that
varies between identical runs.
Exit status 1 if any check fails.";

pub const DILATION_HELP: &str = "\
Output (schema v1):
  csv   header theta,tau,beta_re,beta_im,distance,beta_sin_tau
  json  {schema_version, rows: [{theta, tau, beta_re, beta_im, distance, beta_sin_tau}]}
distance is the max-norm distance of the dilated element to the Q phase POVM element.";

pub const EIGEN_HELP: &str = "\
Output (schema v1):
  eigencheck.{csv,json}  csv header lambda,momentum,parity,differential_residual,
                         kernel_eigenvalue,eigenvalue_ratio,ratio_spread,kernel_residual
  eigencheck_report.*    check report, see verify-all --help";

pub const COMMUTATOR_HELP: &str = "\
Output (schema v1):
  conjugate.{csv,json}   csv header dim,block,deviation
  conjugate_report.*     check report, see verify-all --help";

pub const CAT_HELP: &str = "\
Writes cat_wigner_grid, cat_husimi_grid (grid schema), cat_wigner_phase,
cat_q_phase (phase schema) and the gnuplot script cat_demo.gp.";

pub const COARSE_HELP: &str = "\
Writes coarse_grain_smoothed_wigner and coarse_grain_husimi (grid schema) and
coarse_grain_report (report schema) with the max-norm difference.";
