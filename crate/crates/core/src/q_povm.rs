//! The Q phase POVM `ρ_Q(θ) = (1/π) ∫₀^∞ r |re^{iθ}⟩⟨re^{iθ}| dr`.
//!
//! With `∫₀^∞ r^{n+m+1} e^{−r²} dr = Γ(1 + (n+m)/2)/2`,
//! `⟨n|ρ_Q(θ)|m⟩ = Γ(1 + (n+m)/2) e^{i(n−m)θ} / (2π √(n!m!))`.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{contract, Error, Result};
use crate::fock::{coherent_amplitudes, rotate_by_number_phase, Operator};
use crate::phasespace::PhaseDistribution;
use crate::quadrature::QuadratureSpec;
use crate::special::{erfc, ln_gamma};
use crate::spectrum::hermitian_spectrum;
use crate::wigner_ovm::phase_distribution_from_base;
use crate::Real;

/// `ρ_Q(θ)` in a `dim`-dimensional number space. Hermitian and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QPhaseMatrix<T> {
    pub theta: T,
    pub dim: usize,
    pub matrix: Operator<T>,
}

pub const Q_NEGATIVITY_TOL: f64 = 1e-10;

/// Real symmetric `⟨n|ρ_Q(0)|m⟩`, evaluated through `ln Γ`.
pub fn rho_q_base<T: Real>(dim: usize) -> Array2<T> {
    let half_ln_fact: Vec<T> = (0..dim)
        .map(|n| ln_gamma(T::from_usize_lossy(n) + T::one()) * T::lit(0.5))
        .collect();
    let inv_two_pi = (T::TAU()).recip();
    Array2::from_shape_fn((dim, dim), |(n, m)| {
        if n == m {
            return inv_two_pi;
        }
        let arg = T::one() + T::from_usize_lossy(n + m) * T::lit(0.5);
        (ln_gamma(arg) - half_ln_fact[n] - half_ln_fact[m]).exp() * inv_two_pi
    })
}

/// `ρ_Q(θ)` from its closed-form matrix elements.
pub fn rho_q_matrix<T: Real>(theta: T, dim: usize) -> QPhaseMatrix<T> {
    let base = Operator::from_entries(rho_q_base::<T>(dim).mapv(|v| Complex::new(v, T::zero())));
    QPhaseMatrix {
        theta,
        dim,
        matrix: rotate_by_number_phase(&base, theta),
    }
}

/// `(1/π) ∫₀^{r_max} r |γ(r)⟩⟨γ(r)| dr` with `γ(r) = r cos τ e^{iθ} + shift`.
///
/// This is the single code path behind both [`rho_q_matrix_oracle`]
/// (`cos τ = 1`, `shift = 0`) and the beam-splitter dilation.
pub(crate) fn ray_integral<T: Real>(
    theta: T,
    cos_tau: T,
    shift: Complex<T>,
    dim: usize,
    quad: &QuadratureSpec<T>,
) -> Result<Operator<T>> {
    let (rs, ws) = quad.nodes_weights()?;
    let dir = Complex::from_polar(T::one(), theta);
    let amplitude = |r: T| dir * (r * cos_tau) + shift;
    let parts: Vec<Array2<Complex<T>>> = rs
        .par_iter()
        .zip(ws.par_iter())
        .map(|(&r, &w)| {
            let c = coherent_amplitudes(amplitude(r), dim);
            let s = w * r * T::FRAC_1_PI();
            Array2::from_shape_fn((dim, dim), |(n, m)| c[n] * c[m].conj() * s)
        })
        .collect();
    let mut acc = Array2::from_elem((dim, dim), Complex::zero());
    for part in parts {
        acc = acc + part;
    }
    let edge = coherent_amplitudes(amplitude(quad.r_max), dim);
    let peak = edge.iter().fold(T::zero(), |a, c| a.max(c.norm_sqr()));
    quad.check_tail(peak * quad.r_max * T::FRAC_1_PI())?;
    Ok(Operator::from_entries(acc))
}

/// `ρ_Q(θ)` by Gauss–Legendre quadrature of coherent-state projectors.
pub fn rho_q_matrix_oracle<T: Real>(theta: T, dim: usize, quad: &QuadratureSpec<T>) -> Result<QPhaseMatrix<T>> {
    let matrix = ray_integral(theta, T::one(), Complex::zero(), dim, quad)?;
    Ok(QPhaseMatrix { theta, dim, matrix })
}

/// `P_Q(θ) = Tr[ρ ρ_Q(θ)]` at each angle.
///
/// A value below `−1e-10` is an error when `ρ` is itself positive.
pub fn q_phase_distribution<T: Real>(rho: &Operator<T>, thetas: &[T]) -> Result<PhaseDistribution<T>> {
    let tr = rho.trace();
    if (tr - Complex::one()).norm() > T::lit(1e-8) {
        return Err(contract(format!("density matrix trace is {} (expected 1)", tr.re)));
    }
    let base = rho_q_base::<T>(rho.dim());
    let dist = phase_distribution_from_base(rho, &base, thetas, T::lit(1e-8))?;
    let lowest = dist.min();
    if lowest < -T::lit(Q_NEGATIVITY_TOL) {
        let positive = hermitian_spectrum(rho).map(|s| s.min() >= -T::lit(1e-12)).unwrap_or(false);
        if positive {
            return Err(Error::InternalConsistency(format!(
                "Q phase distribution reached {lowest} for a positive density matrix"
            )));
        }
    }
    Ok(dist)
}

/// `∫₀^{2π} ρ_Q(θ) dθ` from the angular factor.
pub fn completeness_analytic<T: Real>(dim: usize) -> Operator<T> {
    let base = rho_q_base::<T>(dim);
    Operator::diagonal((0..dim).map(|n| base[[n, n]] * T::TAU()))
}

/// `‖∫ρ_Q dθ − I‖_max` with the periodic trapezoid rule on `nodes` angles.
pub fn completeness_trapezoid<T: Real>(dim: usize, nodes: usize) -> T {
    let base = rho_q_matrix::<T>(T::zero(), dim).matrix;
    crate::fock::angular_integral(&base, nodes).distance(&Operator::identity(dim))
}

/// Q phase distribution of the coherent state `|α⟩`:
/// `(1/2π) e^{−|α|²} [1 + √π x e^{x²}(1 + erf x)]`, `x = Re(α e^{−iθ})`.
pub fn coherent_q_phase_closed<T: Real>(alpha: Complex<T>, theta: T) -> T {
    let rotated = alpha * Complex::from_polar(T::one(), -theta);
    let x = rotated.re;
    let y = rotated.im;
    // e^{−|α|²} e^{x²} (1 + erf x) = e^{−y²} erfc(−x)
    let body = (-alpha.norm_sqr()).exp() + T::PI().sqrt() * x * (-y * y).exp() * erfc(-x);
    body / T::TAU()
}

/// The coherent-state display in its printed form,
/// `(1/2π) e^{−|α|²}[1 + √π Re(α e^{−iθ} e^{−iθx/2}) + 2√π x e^{−iθx/2} erf x]`.
///
/// Complex-valued away from `θ = 0`; kept only for comparison reports.
pub fn coherent_q_phase_as_printed<T: Real>(alpha: Complex<T>, theta: T) -> Complex<T> {
    let x = (alpha * Complex::from_polar(T::one(), -theta)).re;
    let twist = Complex::from_polar(T::one(), -theta * x * T::lit(0.5));
    let sqrt_pi = T::PI().sqrt();
    let second = (alpha * Complex::from_polar(T::one(), -theta) * twist).re * sqrt_pi;
    let third = twist * (T::lit(2.0) * sqrt_pi * x * crate::special::erf(x));
    (third + (T::one() + second)) * ((-alpha.norm_sqr()).exp() / T::TAU())
}

/// `(1/π) ∫₀^{r_max} r |⟨re^{iθ}|α⟩|² dr` by Gauss–Legendre quadrature,
/// using `|⟨β|α⟩|² = e^{−|α−β|²}`.
pub fn coherent_q_phase_quadrature<T: Real>(alpha: Complex<T>, theta: T, quad: &QuadratureSpec<T>) -> Result<T> {
    let (rs, ws) = quad.nodes_weights()?;
    let dir = Complex::from_polar(T::one(), theta);
    let f = |r: T| r * (-(dir * r - alpha).norm_sqr()).exp() * T::FRAC_1_PI();
    quad.check_tail(f(quad.r_max))?;
    Ok(rs.iter().zip(&ws).map(|(&r, &w)| w * f(r)).sum())
}

/// Smallest eigenvalue of `ρ_Q(θ)`.
pub fn min_eigenvalue<T: Real>(theta: T, dim: usize) -> Result<T> {
    Ok(hermitian_spectrum(&rho_q_matrix(theta, dim).matrix)?.min())
}
