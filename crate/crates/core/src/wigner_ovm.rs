//! The Wigner phase operator-valued measure `ρ_W(θ)`.
//!
//! # Matrix elements
//!
//! Start from the diagonal form
//! `ρ_W(θ) = (1/π) ∫₀^∞ du u e^{−u²} Σ_k (−1)^k |z,k⟩⟨z,k|`, `z = √2 u e^{iθ}`,
//! with `|z,k⟩ = e^{z a†}|k⟩`, so `⟨n|z,k⟩ = √(n!/k!) z^{n−k}/(n−k)!`.
//! Collecting powers of `u` gives
//!
//! ```text
//! ⟨n|ρ_W(θ)|m⟩ = (1/π) e^{i(n−m)θ} Σ_{k ≤ min(n,m)} (−1)^k √(n!m!) / (k!(n−k)!(m−k)!)
//!                · 2^{j/2} G(j),   j = n + m − 2k,   G(j) = ∫₀^∞ u^{j+1} e^{−u²} du = Γ(j/2 + 1)/2.
//! ```
//!
//! The terms alternate and grow like `3ⁿ`, so the sum is formed exactly in
//! integers. Writing `√(n!m!)/(k!(n−k)!(m−k)!) = C(n,k)·m!/(m−k)! / √(n!m!)`:
//!
//! * `n + m` even, `h = (n+m)/2 − k`: `2^{j/2}Γ(j/2+1) = 2^h h!`, and
//!   `⟨n|ρ_W(0)|m⟩ = Z / (2π √(n!m!))`.
//! * `n + m` odd, `h = (n+m−1)/2 − k`: `2^{j/2}Γ(j/2+1) = √(2π)(2h+1)!!/2`, and
//!   `⟨n|ρ_W(0)|m⟩ = Z / (2√(2π) √(n!m!))`.
//!
//! `Z` is the integer `Σ_k (−1)^k C(n,k) m!/(m−k)! g(h)` and the only rounding
//! is the final `sign(Z)·√(Z²/(n!m!))` conversion. On the diagonal `Z = n!`,
//! so every diagonal entry is exactly `1/2π`.

use ndarray::Array2;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{contract, Error, Result};
use crate::fock::{build_operator, position_wavefunctions, rotate_by_number_phase, Operator, OperatorKind};
use crate::phasespace::PhaseDistribution;
use crate::quadrature::{gauss_legendre_on, QuadratureSpec};
use crate::spectrum::hermitian_spectrum;
use crate::Real;

/// `ρ_W(θ)` in a `dim`-dimensional number space. Hermitian, not positive.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerPhaseMatrix<T> {
    pub theta: T,
    pub dim: usize,
    pub matrix: Operator<T>,
}

/// Exact `⟨n|ρ_W(0)|m⟩` rounded to `f64`.
pub fn rho_w_entry(n: usize, m: usize) -> f64 {
    let (n, m) = if n >= m { (n, m) } else { (m, n) };
    let z = exact_sum(n, m);
    if z.is_zero() {
        return 0.0;
    }
    let denom = factorial(n) * factorial(m);
    let ratio = BigRational::new(&z * &z, denom).to_f64().unwrap_or(f64::NAN);
    let magnitude = ratio.sqrt();
    let signed = if z.is_negative() { -magnitude } else { magnitude };
    let pi = std::f64::consts::PI;
    if (n + m) % 2 == 0 {
        signed / (2.0 * pi)
    } else {
        signed / (2.0 * (2.0 * pi).sqrt())
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn double_factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

// Z = Σ_k (−1)^k C(n,k) · m!/(m−k)! · g(h), requires n ≥ m.
fn exact_sum(n: usize, m: usize) -> BigInt {
    let odd = (n + m) % 2 == 1;
    let h0 = if odd { (n + m - 1) / 2 } else { (n + m) / 2 };
    let mut g = if odd {
        double_factorial(2 * h0 + 1)
    } else {
        (BigInt::one() << h0) * factorial(h0)
    };
    let mut binom = BigInt::one();
    let mut falling = BigInt::one();
    let mut total = BigInt::zero();
    for k in 0..=m {
        let term = &binom * &falling * &g;
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        if k == m {
            break;
        }
        // advance k → k+1, h → h−1
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
        falling *= BigInt::from(m - k);
        let h = h0 - k;
        g = if odd { g / BigInt::from(2 * h + 1) } else { g / BigInt::from(2 * h) };
    }
    total
}

/// Real symmetric `⟨n|ρ_W(0)|m⟩` for `n, m < dim`.
pub fn rho_w_base<T: Real>(dim: usize) -> Array2<T> {
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|n| (0..=n).map(|m| rho_w_entry(n, m)).collect())
        .collect();
    Array2::from_shape_fn((dim, dim), |(n, m)| {
        let v = if n >= m { rows[n][m] } else { rows[m][n] };
        T::lit(v)
    })
}

fn to_operator<T: Real>(base: &Array2<T>) -> Operator<T> {
    Operator::from_entries(base.mapv(|v| Complex::new(v, T::zero())))
}

/// `ρ_W(θ)` from the exact finite sum.
pub fn rho_w_matrix<T: Real>(theta: T, dim: usize) -> WignerPhaseMatrix<T> {
    let base = to_operator(&rho_w_base::<T>(dim));
    WignerPhaseMatrix {
        theta,
        dim,
        matrix: rotate_by_number_phase(&base, theta),
    }
}

/// `ρ_W(θ)` by radial quadrature of cross-Wigner symbols.
///
/// `⟨n|ρ_W(θ)|m⟩ = ∫₀^{r_max} W_{|m⟩⟨n|}(r cos θ, r sin θ) r dr`, where each
/// symbol comes from the Moyal integral
/// `W_{|m⟩⟨n|}(x, p) = (1/π) ∫ ψ_m(x+y) ψ_n(x−y) e^{−2ipy} dy`, evaluated by
/// the trapezoid rule with step 1/32 on `|y| ≤ r_max`. Slow; meant for
/// cross-checking [`rho_w_matrix`].
pub fn rho_w_matrix_oracle<T: Real>(theta: T, dim: usize, quad: &QuadratureSpec<T>) -> Result<WignerPhaseMatrix<T>> {
    let (rs, ws) = quad.nodes_weights()?;
    let (s, c) = theta.sin_cos();
    let hy = T::lit(1.0 / 32.0);
    let ny = (quad.r_max / hy).ceil().to_usize().unwrap_or(0);
    let ys: Vec<T> = (0..=2 * ny)
        .map(|j| hy * (T::from_usize_lossy(j) - T::from_usize_lossy(ny)))
        .collect();

    let symbols = |r: T| -> Array2<Complex<T>> {
        let x = r * c;
        let p = r * s;
        let plus: Vec<Vec<T>> = ys.iter().map(|&y| position_wavefunctions(x + y, dim)).collect();
        let minus: Vec<Vec<T>> = ys.iter().map(|&y| position_wavefunctions(x - y, dim)).collect();
        let phase: Vec<Complex<T>> = ys
            .iter()
            .map(|&y| Complex::from_polar(hy, -T::lit(2.0) * p * y))
            .collect();
        // out[[n, m]] = W_{|m⟩⟨n|}(x, p)
        Array2::from_shape_fn((dim, dim), |(n, m)| {
            let mut acc = Complex::zero();
            for j in 0..ys.len() {
                acc += phase[j] * (plus[j][m] * minus[j][n]);
            }
            acc * T::FRAC_1_PI()
        })
    };

    let contributions: Vec<Array2<Complex<T>>> = rs
        .par_iter()
        .zip(ws.par_iter())
        .map(|(&r, &w)| symbols(r).mapv(|v| v * (w * r)))
        .collect();
    let mut acc = Array2::from_elem((dim, dim), Complex::zero());
    for part in contributions {
        acc = acc + part;
    }
    let tail = symbols(quad.r_max)
        .iter()
        .fold(T::zero(), |a, v| a.max(v.norm()))
        * quad.r_max;
    quad.check_tail(tail)?;
    Ok(WignerPhaseMatrix {
        theta,
        dim,
        matrix: Operator::from_entries(acc),
    })
}

/// `P_W(θ) = Tr[ρ ρ_W(θ)]` at each angle.
pub fn wigner_phase_distribution<T: Real>(rho: &Operator<T>, thetas: &[T]) -> Result<PhaseDistribution<T>> {
    let tr = rho.trace();
    if (tr - Complex::one()).norm() > T::lit(1e-8) {
        return Err(contract(format!("density matrix trace is {} (expected 1)", tr.re)));
    }
    let base = rho_w_base::<T>(rho.dim());
    phase_distribution_from_base(rho, &base, thetas, T::lit(1e-8))
}

// P(θ) = Σ_d c_d e^{idθ}, c_d = Σ_{n−m=d} ρ_{mn} B_{nm}.
pub(crate) fn phase_distribution_from_base<T: Real>(
    rho: &Operator<T>,
    base: &Array2<T>,
    thetas: &[T],
    imag_tol: T,
) -> Result<PhaseDistribution<T>> {
    let d = rho.dim();
    let mut coeff = vec![Complex::<T>::zero(); 2 * d - 1];
    for n in 0..d {
        for m in 0..d {
            coeff[n + d - 1 - m] += rho.get(m, n) * base[[n, m]];
        }
    }
    let mut values = Vec::with_capacity(thetas.len());
    let mut worst = T::zero();
    for &theta in thetas {
        let mut acc = Complex::<T>::zero();
        for (idx, c) in coeff.iter().enumerate() {
            let diff = T::from_usize_lossy(idx) - T::from_usize_lossy(d - 1);
            acc += *c * Complex::from_polar(T::one(), diff * theta);
        }
        worst = worst.max(acc.im.abs());
        values.push(acc.re);
    }
    if worst > imag_tol {
        return Err(Error::ImaginaryResidue {
            residue: worst.to_f64_lossy(),
        });
    }
    Ok(PhaseDistribution::new(thetas.to_vec(), values))
}

/// `∫₀^{2π} ρ_W(θ) dθ` computed from the angular factor: off-diagonal
/// entries integrate to zero and diagonal entries to `2π ⟨n|ρ_W(0)|n⟩`.
pub fn completeness_analytic<T: Real>(dim: usize) -> Operator<T> {
    let base = rho_w_base::<T>(dim);
    Operator::diagonal((0..dim).map(|n| base[[n, n]] * T::TAU()))
}

/// `‖∫ρ_W dθ − I‖_max` with the periodic trapezoid rule on `nodes` angles.
pub fn completeness_trapezoid<T: Real>(dim: usize, nodes: usize) -> T {
    let base = to_operator(&rho_w_base::<T>(dim));
    crate::fock::angular_integral(&base, nodes).distance(&Operator::identity(dim))
}

/// Position-space kernel `⟨a|ρ_W(0)|b⟩ = c (a + b) Θ(a + b)` on a symmetric axis.
#[derive(Debug, Clone)]
pub struct PositionKernel<T> {
    pub axis: Vec<T>,
    pub kernel: Array2<T>,
    /// Least-squares `c` matched against number-basis elements with `n, m ≤ 8`.
    pub constant: T,
    /// Largest relative deviation of per-element `c_nm` from `constant`.
    pub spread: T,
    /// `max |⟨n|ρ_W(0)|m⟩ − c·I_nm|` over the fitted block.
    pub residual: T,
}

pub const KERNEL_FIT_BLOCK: usize = 9;
pub const KERNEL_MIN_NODES: usize = 200;
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-4;

impl<T: Real> PositionKernel<T> {
    pub fn spacing(&self) -> T {
        self.axis[1] - self.axis[0]
    }

    /// `(Kf)(a) = c ∫_{−a}^∞ (a + b) f(b) db` for a bounded `f`, regularised
    /// by `e^{−ε(a+b)}` and extrapolated to `ε → 0` by Neville's scheme over
    /// `ε = 0.2, 0.1, …, 0.0125`.
    pub fn apply_regularized(&self, f: &(impl Fn(T) -> T + Sync), a: T) -> T {
        let eps: Vec<T> = (0..ABEL_LEVELS).map(|k| T::lit(0.2 / f64::powi(2.0, k as i32))).collect();
        let mut table: Vec<T> = eps.iter().map(|&e| damped_action(f, a, e)).collect();
        for j in 1..ABEL_LEVELS {
            for i in 0..ABEL_LEVELS - j {
                table[i] = (eps[i] * table[i + 1] - eps[i + j] * table[i]) / (eps[i] - eps[i + j]);
            }
        }
        self.constant * table[0]
    }
}

const ABEL_LEVELS: usize = 5;

// ∫₀^U u f(u − a) e^{−εu} du with εU = 40, Gauss–Legendre panels of width 1.
fn damped_action<T: Real>(f: &impl Fn(T) -> T, a: T, eps: T) -> T {
    let upper = T::lit(40.0) / eps;
    let panels = upper.ceil().to_usize().unwrap_or(1);
    let (xs, ws) = gauss_legendre_on::<T>(16, T::zero(), T::one());
    let mut acc = T::zero();
    for k in 0..panels {
        let base = T::from_usize_lossy(k);
        for (x, w) in xs.iter().zip(&ws) {
            let u = base + *x;
            acc += *w * u * f(u - a) * (-eps * u).exp();
        }
    }
    acc
}

/// Builds the kernel on `axis` and fixes `c` by matching number-basis elements.
pub fn position_kernel_w0<T: Real>(axis: &[T]) -> Result<PositionKernel<T>> {
    let n = axis.len();
    if n < KERNEL_MIN_NODES {
        return Err(contract(format!("kernel axis needs at least {KERNEL_MIN_NODES} nodes")));
    }
    let h = axis[1] - axis[0];
    let half_span = axis[n - 1];
    for i in 0..n {
        let sym = (axis[i] + axis[n - 1 - i]).abs();
        let step = if i > 0 { axis[i] - axis[i - 1] } else { h };
        if sym > T::lit(1e-9) * half_span || (step - h).abs() > T::lit(1e-9) * h {
            return Err(contract("kernel axis must be uniform and symmetric about 0"));
        }
    }

    let block = KERNEL_FIT_BLOCK;
    // F_m(a) = ∫_{−a}^{L} (a + b) ψ_m(b) db
    let (gx, gw) = crate::quadrature::gauss_legendre::<T>(96);
    let inner: Vec<Vec<T>> = axis
        .par_iter()
        .map(|&a| {
            let lo = -a;
            let mut out = vec![T::zero(); block];
            if lo >= half_span {
                return out;
            }
            let mid = (half_span + lo) * T::lit(0.5);
            let rad = (half_span - lo) * T::lit(0.5);
            for (x, w) in gx.iter().zip(&gw) {
                let b = mid + rad * *x;
                let psi = position_wavefunctions(b, block);
                for m in 0..block {
                    out[m] += *w * rad * (a + b) * psi[m];
                }
            }
            out
        })
        .collect();
    let mut integrals = Array2::from_elem((block, block), T::zero());
    for (i, &a) in axis.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { h * T::lit(0.5) } else { h };
        let psi = position_wavefunctions(a, block);
        for nn in 0..block {
            for m in 0..block {
                integrals[[nn, m]] += w * psi[nn] * inner[i][m];
            }
        }
    }
    let target = rho_w_base::<T>(block);
    let mut num = T::zero();
    let mut den = T::zero();
    for (t, i) in target.iter().zip(integrals.iter()) {
        num += *t * *i;
        den += *i * *i;
    }
    let constant = num / den;
    let largest = integrals.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    let mut spread = T::zero();
    let mut residual = T::zero();
    for (t, i) in target.iter().zip(integrals.iter()) {
        residual = residual.max((*t - constant * *i).abs());
        if i.abs() >= T::lit(1e-2) * largest {
            spread = spread.max((*t / *i / constant - T::one()).abs());
        }
    }
    if residual > T::lit(KERNEL_RESIDUAL_TOL) {
        return Err(Error::ConventionMismatch {
            residual: residual.to_f64_lossy(),
            tolerance: KERNEL_RESIDUAL_TOL,
        });
    }
    let kernel = Array2::from_shape_fn((n, n), |(i, j)| {
        let s = axis[i] + axis[j];
        if s > T::zero() {
            constant * s
        } else {
            T::zero()
        }
    });
    Ok(PositionKernel {
        axis: axis.to_vec(),
        kernel,
        constant,
        spread,
        residual,
    })
}

/// Symmetric uniform axis `[−half_span, half_span]` with `nodes` points.
pub fn symmetric_axis<T: Real>(half_span: T, nodes: usize) -> Vec<T> {
    let h = T::lit(2.0) * half_span / T::from_usize_lossy(nodes - 1);
    (0..nodes)
        .map(|i| {
            let v = -half_span + h * T::from_usize_lossy(i);
            // exact mirror symmetry
            if 2 * i + 1 == nodes {
                T::zero()
            } else if 2 * i + 1 > nodes {
                half_span - h * T::from_usize_lossy(nodes - 1 - i)
            } else {
                v
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Residuals of the eigenfunction `cos(px)` (λ < 0) or `sin(px)` (λ > 0),
/// `p = 1/√(4π|λ|)`.
#[derive(Debug, Clone, Copy)]
pub struct EigenResidual<T> {
    pub lambda: T,
    pub momentum: T,
    pub parity: Parity,
    /// `max |4πλ f″(x) − f(−x)|` with an eighth-order difference stencil.
    pub differential_residual: T,
    /// Rayleigh quotient of the kernel action over `|a| ≤ 3`.
    pub kernel_eigenvalue: T,
    /// `‖K f − λ′ f‖ / ‖f‖` over the same window.
    pub kernel_residual: T,
    /// `λ′ / λ`.
    pub eigenvalue_ratio: T,
    /// `(max − min)/|mean|` of the pointwise ratio `(Kf)(a)/f(a)` over
    /// window samples with `|f(a)| ≥ 0.2`.
    pub ratio_spread: T,
}

const FD8: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];
const KERNEL_WINDOW: f64 = 3.0;

pub fn eigenfunction_residual<T: Real>(lambda: T, kernel: &PositionKernel<T>) -> Result<EigenResidual<T>> {
    if lambda == T::zero() || !lambda.is_finite() {
        return Err(contract("eigenvalue must be finite and nonzero"));
    }
    let momentum = (T::lit(4.0) * T::PI() * lambda.abs()).sqrt().recip();
    let parity = if lambda < T::zero() { Parity::Even } else { Parity::Odd };
    let f = move |x: T| match parity {
        Parity::Even => (momentum * x).cos(),
        Parity::Odd => (momentum * x).sin(),
    };
    let axis = &kernel.axis;
    let h = kernel.spacing();
    let four_pi_lambda = T::lit(4.0) * T::PI() * lambda;
    let mut differential_residual = T::zero();
    for i in 4..axis.len() - 4 {
        let mut d2 = T::zero();
        for (k, c) in FD8.iter().enumerate() {
            d2 += T::lit(*c) * f(axis[i + k - 4]);
        }
        d2 /= h * h;
        let x = axis[i];
        differential_residual = differential_residual.max((four_pi_lambda * d2 - f(-x)).abs());
    }

    let window: Vec<T> = axis.iter().copied().filter(|a| a.abs() <= T::lit(KERNEL_WINDOW)).collect();
    let action: Vec<T> = window.par_iter().map(|&a| kernel.apply_regularized(&f, a)).collect();
    let fv: Vec<T> = window.iter().map(|&a| f(a)).collect();
    let ff: T = fv.iter().map(|v| *v * *v).sum();
    let fk: T = fv.iter().zip(&action).map(|(a, b)| *a * *b).sum();
    let kernel_eigenvalue = fk / ff;
    let res: T = fv
        .iter()
        .zip(&action)
        .map(|(a, b)| {
            let d = *b - kernel_eigenvalue * *a;
            d * d
        })
        .sum();
    let ratios: Vec<T> = fv
        .iter()
        .zip(&action)
        .filter(|(a, _)| a.abs() >= T::lit(0.2))
        .map(|(a, b)| *b / *a)
        .collect();
    let rmax = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    let rmin = ratios.iter().copied().fold(T::infinity(), T::min);
    let rmean = ratios.iter().copied().sum::<T>() / T::from_usize_lossy(ratios.len().max(1));
    Ok(EigenResidual {
        ratio_spread: (rmax - rmin) / rmean.abs(),
        lambda,
        momentum,
        parity,
        differential_residual,
        kernel_eigenvalue,
        kernel_residual: (res / ff).sqrt(),
        eigenvalue_ratio: kernel_eigenvalue / lambda,
    })
}

pub const ETA_MIN_DIM: usize = 8;

/// `η_W(0) = −π (p³x + xp³) P` as a product of truncated matrices.
pub fn eta_w_matrix<T: Real>(dim: usize) -> Result<Operator<T>> {
    if dim < ETA_MIN_DIM {
        return Err(contract(format!("η_W needs dim ≥ {ETA_MIN_DIM}")));
    }
    let x = build_operator::<T>(OperatorKind::Position, dim);
    let p = build_operator::<T>(OperatorKind::Momentum, dim);
    let parity = build_operator::<T>(OperatorKind::Parity, dim);
    let p3 = p.matmul(&p).matmul(&p);
    let sym = &p3.matmul(&x) + &x.matmul(&p3);
    Ok(sym.matmul(&parity).scale(Complex::new(-T::PI(), T::zero())))
}

/// `‖[ρ_W(0), η_W(0)] − i·I‖_max` over the leading `block × block` corner.
pub fn commutator_check<T: Real>(dim: usize, block: usize) -> Result<T> {
    if block == 0 || 4 * block > dim {
        return Err(contract("commutator block must satisfy 1 ≤ block ≤ dim/4"));
    }
    let rho = rho_w_matrix::<T>(T::zero(), dim).matrix;
    let eta = eta_w_matrix::<T>(dim)?;
    let comm = rho.commutator(&eta);
    let shifted = &comm - &Operator::identity(dim).scale(Complex::new(T::zero(), T::one()));
    Ok(shifted.block_max_abs(block))
}

/// Deviation of the block commutator for each truncation dimension.
pub fn commutator_table<T: Real>(dims: &[usize], block: usize) -> Result<Vec<(usize, T)>> {
    dims.iter().map(|&d| commutator_check::<T>(d, block).map(|v| (d, v))).collect()
}

/// `‖[N, ρ_W(0)]‖_max`.
pub fn number_commutator_norm<T: Real>(dim: usize) -> T {
    let rho = rho_w_matrix::<T>(T::zero(), dim).matrix;
    let n = build_operator::<T>(OperatorKind::Number, dim);
    n.commutator(&rho).max_abs()
}

/// Sign structure of the truncated spectrum of `ρ_W(0)`.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumSummary<T> {
    pub min_eigenvalue: T,
    pub max_eigenvalue: T,
    /// Mean over eigenpairs of `−sign(λ_k) ⟨v_k|P|v_k⟩`; positive when even
    /// parity goes with negative eigenvalues and odd with positive.
    pub parity_sign_correlation: T,
}

pub fn spectrum_summary<T: Real>(dim: usize) -> Result<SpectrumSummary<T>> {
    let rho = rho_w_matrix::<T>(T::zero(), dim).matrix;
    let spec = hermitian_spectrum(&rho)?;
    let parity = build_operator::<T>(OperatorKind::Parity, dim);
    let mut corr = T::zero();
    for k in 0..dim {
        let v = spec.eigenvector(k);
        let pv = v.expectation(&parity).re;
        corr += -spec.eigenvalues[k].signum() * pv;
    }
    Ok(SpectrumSummary {
        min_eigenvalue: spec.min(),
        max_eigenvalue: spec.max(),
        parity_sign_correlation: corr / T::from_usize_lossy(dim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_state;
    use crate::phasespace::uniform_thetas;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn vacuum_element_is_one_over_two_pi() {
        // oracle: (1/π) ∫ u e^{−u²} du with the k = 0 term only, by quadrature
        let q = QuadratureSpec::<f64>::gauss_legendre(100, 10.0);
        let (us, ws) = q.nodes_weights().unwrap();
        let direct: f64 = us.iter().zip(&ws).map(|(u, w)| w * u * (-u * u).exp()).sum::<f64>() / PI;
        for theta in [0.0, 1.0, 4.0] {
            let m = rho_w_matrix::<f64>(theta, 4);
            assert!((m.matrix.get(0, 0).re - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_sum_small_cases() {
        // ⟨1|ρ_W|0⟩ = √2 Γ(3/2) / (2π)
        let want = 2f64.sqrt() * (PI.sqrt() / 2.0) / (2.0 * PI);
        assert!((rho_w_entry(1, 0) - want).abs() < 1e-16);
        assert!((rho_w_entry(0, 1) - want).abs() < 1e-16);
        // ⟨2|ρ_W|0⟩ = (1/π) √2 · 2 · Γ(2)/2 / √2! ... = 1/π · (√2)^2·1/2·√2/√2
        let direct = |n: usize, m: usize| -> f64 {
            // floating-point k-sum, fine for tiny n, m
            let f = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
            let mut s = 0.0;
            for k in 0..=n.min(m) {
                let j = (n + m - 2 * k) as f64;
                let g = crate::special::ln_gamma(j / 2.0 + 1.0).exp() / 2.0;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * (f(n) * f(m)).sqrt() / (f(k) * f(n - k) * f(m - k)) * 2f64.powf(j / 2.0) * g;
            }
            s / PI
        };
        for n in 0..8 {
            for m in 0..8 {
                assert!((rho_w_entry(n, m) - direct(n, m)).abs() < 1e-13, "({n},{m})");
            }
        }
    }

    #[test]
    fn diagonal_is_exactly_one_over_two_pi() {
        for n in [0usize, 5, 40, 120] {
            assert_eq!(rho_w_entry(n, n), 1.0 / (2.0 * PI));
        }
    }

    #[test]
    fn theta_zero_is_real_symmetric_and_rotation_covariant() {
        let m0 = rho_w_matrix::<f64>(0.0, 16).matrix;
        for n in 0..16 {
            for k in 0..16 {
                assert_eq!(m0.get(n, k).im, 0.0);
                assert_eq!(m0.get(n, k), m0.get(k, n));
            }
        }
        let m = rho_w_matrix::<f64>(1.3, 16).matrix;
        assert!(m.hermiticity_defect(None) < 1e-15);
        assert!(m.distance(&rotate_by_number_phase(&m0, 1.3)) < 1e-15);
    }

    #[test]
    fn oracle_self_check_dim_two() {
        let o = rho_w_matrix_oracle::<f64>(0.0, 2, &QuadratureSpec::matrix_symbol(2)).unwrap();
        assert!((o.matrix.get(0, 0).re - 1.0 / (2.0 * PI)).abs() < 1e-8);
    }

    #[test]
    fn oracle_rotates_with_theta() {
        let dim = 6;
        let q = QuadratureSpec::matrix_symbol(dim);
        let a = rho_w_matrix_oracle::<f64>(0.0, dim, &q).unwrap().matrix;
        let b = rho_w_matrix_oracle::<f64>(0.9, dim, &q).unwrap().matrix;
        assert!(b.distance(&rotate_by_number_phase(&a, 0.9)) < 1e-9);
    }

    #[test]
    fn fock_projectors_give_uniform_wigner_phase() {
        let thetas = uniform_thetas::<f64>(64);
        for n in [0usize, 3, 9] {
            let rho = fock_state::<f64>(n, 12).unwrap().projector();
            let d = wigner_phase_distribution(&rho, &thetas).unwrap();
            for v in &d.values {
                assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_precondition_is_enforced() {
        let rho = fock_state::<f64>(1, 4).unwrap().projector().scale(Complex::new(2.0, 0.0));
        assert!(wigner_phase_distribution(&rho, &[0.0]).is_err());
    }

    #[test]
    fn completeness_both_routes() {
        let analytic = completeness_analytic::<f64>(32);
        assert!(analytic.distance(&Operator::identity(32)) < 1e-15);
        assert!(completeness_trapezoid::<f64>(32, 720) < 1e-9);
    }

    #[test]
    fn kernel_constant_is_one_over_four_pi() {
        // ∫∫ ψ₀(a)ψ₀(b)(a+b)Θ(a+b) da db = 2 in rotated coordinates, and
        // ⟨0|ρ_W(0)|0⟩ = 1/2π, so c = 1/(4π).
        let axis = symmetric_axis::<f64>(10.0, 401);
        let k = position_kernel_w0(&axis).unwrap();
        assert!((k.constant - 1.0 / (4.0 * PI)).abs() < 1e-9, "{}", k.constant);
        assert!(k.spread < 1e-2);
        assert!(k.residual < 1e-8);
        let i1 = axis.iter().position(|&a| a == 1.0).unwrap();
        let im2 = axis.iter().position(|&a| a == -2.0).unwrap();
        assert_eq!(k.kernel[[i1, im2]], 0.0);
        for i in (0..401).step_by(37) {
            for j in (0..401).step_by(41) {
                assert_eq!(k.kernel[[i, j]], k.kernel[[j, i]]);
            }
        }
    }

    #[test]
    fn kernel_rejects_bad_axes() {
        assert!(position_kernel_w0(&symmetric_axis::<f64>(10.0, 100)).is_err());
        let shifted: Vec<f64> = symmetric_axis::<f64>(10.0, 401).iter().map(|a| a + 0.3).collect();
        assert!(position_kernel_w0(&shifted).is_err());
    }

    #[test]
    fn eigenfunction_residuals() {
        let axis = symmetric_axis::<f64>(10.0, 401);
        let k = position_kernel_w0(&axis).unwrap();
        for lambda in [-1.0 / (4.0 * PI), 1.0 / (4.0 * PI), -1.0 / (8.0 * PI), 1.0 / (8.0 * PI)] {
            let r = eigenfunction_residual(lambda, &k).unwrap();
            assert!((r.momentum - (4.0 * PI * lambda.abs()).sqrt().recip()).abs() < 1e-15);
            assert!(r.differential_residual <= 1e-8, "{}", r.differential_residual);
            assert!(r.kernel_residual < 1e-2);
            assert!((r.eigenvalue_ratio - 1.0).abs() < 1e-2, "{}", r.eigenvalue_ratio);
            assert!(r.ratio_spread < 1e-2, "{}", r.ratio_spread);
        }
        assert_eq!(eigenfunction_residual(-0.1, &k).unwrap().parity, Parity::Even);
        assert_eq!(eigenfunction_residual(0.1, &k).unwrap().parity, Parity::Odd);
        assert!(eigenfunction_residual(0.0, &k).is_err());
    }

    // Independent oracle for η_W: expand p³x + xp³ into words over {a, a†}
    // and apply them to basis kets without truncation.
    fn eta_by_words(n: usize, m: usize) -> Complex<f64> {
        use std::collections::BTreeMap;
        // x = (a + a†)/√2, p = i(a† − a)/√2; a word is a list of letters,
        // true = a†, false = a, applied right to left.
        let x: Vec<(Complex<f64>, bool)> = vec![
            (Complex::new(1.0 / 2f64.sqrt(), 0.0), false),
            (Complex::new(1.0 / 2f64.sqrt(), 0.0), true),
        ];
        let p: Vec<(Complex<f64>, bool)> = vec![
            (Complex::new(0.0, -1.0 / 2f64.sqrt()), false),
            (Complex::new(0.0, 1.0 / 2f64.sqrt()), true),
        ];
        let apply = |factors: &[&Vec<(Complex<f64>, bool)>], ket: usize| -> BTreeMap<usize, Complex<f64>> {
            let mut state: BTreeMap<usize, Complex<f64>> = BTreeMap::new();
            state.insert(ket, Complex::new(1.0, 0.0));
            for f in factors.iter().rev() {
                let mut next: BTreeMap<usize, Complex<f64>> = BTreeMap::new();
                for (&k, &amp) in &state {
                    for &(c, raise) in f.iter() {
                        if raise {
                            *next.entry(k + 1).or_default() += amp * c * ((k + 1) as f64).sqrt();
                        } else if k > 0 {
                            *next.entry(k - 1).or_default() += amp * c * (k as f64).sqrt();
                        }
                    }
                }
                state = next;
            }
            state
        };
        let parity = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let a = apply(&[&p, &p, &p, &x], m);
        let b = apply(&[&x, &p, &p, &p], m);
        let v = a.get(&n).copied().unwrap_or_default() + b.get(&n).copied().unwrap_or_default();
        v * (-PI * parity)
    }

    #[test]
    fn eta_matches_word_expansion_and_structure() {
        let dim = 64;
        let eta = eta_w_matrix::<f64>(dim).unwrap();
        assert!((eta.get(0, 0) - eta_by_words(0, 0)).norm() < 1e-10);
        for n in 0..dim - 4 {
            for m in 0..dim - 4 {
                assert!((eta.get(n, m) - eta_by_words(n, m)).norm() < 1e-9 * (1.0 + eta.get(n, m).norm()));
                if (n + m) % 2 == 1 {
                    assert_eq!(eta.get(n, m).norm(), 0.0);
                }
            }
        }
        assert!(eta.hermiticity_defect(Some(61)) <= 1e-9);
        assert!(eta_w_matrix::<f64>(7).is_err());
    }

    #[test]
    fn commutator_examples() {
        let rho = rho_w_matrix::<f64>(0.0, 24).matrix;
        assert_eq!(rho.commutator(&rho).max_abs(), 0.0);
        assert!(number_commutator_norm::<f64>(64) > 0.01);
        assert!(commutator_check::<f64>(40, 8).unwrap() < 1e-12);
        assert!(commutator_check::<f64>(16, 8).is_err());
    }

    #[test]
    fn truncated_spectrum_is_indefinite_with_parity_sign_pairing() {
        let s = spectrum_summary::<f64>(64).unwrap();
        assert!(s.min_eigenvalue < -1e-3);
        assert!(s.max_eigenvalue > 0.0);
        assert!(s.parity_sign_correlation > 0.5);
    }
}
