//! Beam-splitter dilation of the Q phase POVM.
//!
//! The signal interferes with a coherent ancilla `|β⟩` on
//! `U_τ = exp[iτ(a†b + ab†)]`, which maps `|α⟩|β⟩` to
//! `|α cos τ + iβ sin τ⟩|β cos τ + iα sin τ⟩`. Projecting the signal onto the
//! ray `re^{iθ}` gives
//! `Π_τ(β) = (1/π) ∫₀^{r_max} r |re^{iθ} cos τ + iβ sin τ⟩⟨·| dr`,
//! which reduces to `ρ_Q(θ)` at `τ = 0` and approaches it as `τ → 0` only
//! while `β sin τ → 0`.

use ndarray::Array1;
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{contract, Error, Result};
use crate::fock::{Ket, Operator};
use crate::q_povm::{ray_integral, rho_q_matrix};
use crate::quadrature::QuadratureSpec;
use crate::spectrum::hermitian_spectrum;
use crate::Real;

/// Beam splitter with coupling angle `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec<T> {
    pub tau: T,
}

impl<T: Real> BeamSplitterSpec<T> {
    pub fn new(tau: T) -> Self {
        Self { tau }
    }

    /// `cos² 2τ`.
    pub fn transmissivity(&self) -> T {
        let c = (T::lit(2.0) * self.tau).cos();
        c * c
    }
}

/// Output amplitudes of `U_τ |α⟩|β⟩`.
pub fn bs_transform_coherent<T: Real>(alpha: Complex<T>, beta: Complex<T>, tau: T) -> (Complex<T>, Complex<T>) {
    let (s, c) = tau.sin_cos();
    let i = Complex::new(T::zero(), T::one());
    (alpha * c + i * beta * s, beta * c + i * alpha * s)
}

pub const ORACLE_MAX_PRODUCT_DIM: usize = 4096;
const DENSE_MAX_PRODUCT_DIM: usize = 1024;

/// Fixed-total-photon-number block of the two-mode unitary.
///
/// Basis vectors are `|k⟩_a |N − k⟩_b` for `k = k_min, …, k_min + len − 1`.
#[derive(Debug, Clone)]
pub struct PhotonBlock<T> {
    pub total: usize,
    pub k_min: usize,
    pub unitary: Operator<T>,
}

/// `exp[iτ G]` for the generator `G = a†b + ab†` truncated to
/// `dim_a × dim_b`, stored block by block in total photon number.
///
/// `G` conserves `N_a + N_b`, so each block is exponentiated exactly through
/// its eigen-decomposition.
#[derive(Debug, Clone)]
pub struct TwoModeUnitary<T> {
    pub dim_a: usize,
    pub dim_b: usize,
    pub tau: T,
    pub blocks: Vec<PhotonBlock<T>>,
}

/// Builds the truncated two-mode beam-splitter unitary. Refuses
/// `dim_a · dim_b > 4096`.
pub fn two_mode_bs_oracle<T: Real>(dim_a: usize, dim_b: usize, tau: T) -> Result<TwoModeUnitary<T>> {
    let product = dim_a * dim_b;
    if product > ORACLE_MAX_PRODUCT_DIM {
        return Err(Error::DimensionTooLarge {
            requested: product,
            limit: ORACLE_MAX_PRODUCT_DIM,
        });
    }
    if dim_a == 0 || dim_b == 0 {
        return Err(contract("both modes need at least one level"));
    }
    let mut blocks = Vec::with_capacity(dim_a + dim_b - 1);
    for total in 0..dim_a + dim_b - 1 {
        let k_min = total.saturating_sub(dim_b - 1);
        let k_max = total.min(dim_a - 1);
        let len = k_max - k_min + 1;
        // ⟨k+1, N−k−1| G |k, N−k⟩ = √(k+1) √(N−k)
        let generator = Operator::from_fn(len, |r, c| {
            let (kr, kc) = (k_min + r, k_min + c);
            let v = if kr == kc + 1 {
                (T::from_usize_lossy(kc + 1) * T::from_usize_lossy(total - kc)).sqrt()
            } else if kc == kr + 1 {
                (T::from_usize_lossy(kr + 1) * T::from_usize_lossy(total - kr)).sqrt()
            } else {
                T::zero()
            };
            Complex::new(v, T::zero())
        });
        let unitary = if len == 1 {
            Operator::identity(1)
        } else {
            hermitian_spectrum(&generator)?.apply_function(|l| Complex::from_polar(T::one(), tau * l))
        };
        blocks.push(PhotonBlock { total, k_min, unitary });
    }
    Ok(TwoModeUnitary {
        dim_a,
        dim_b,
        tau,
        blocks,
    })
}

impl<T: Real> TwoModeUnitary<T> {
    pub fn product_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    fn index(&self, k: usize, total: usize) -> usize {
        k * self.dim_b + (total - k)
    }

    /// Applies the unitary to a vector indexed by `k_a · dim_b + k_b`.
    pub fn apply(&self, state: &Array1<Complex<T>>) -> Result<Array1<Complex<T>>> {
        if state.len() != self.product_dim() {
            return Err(contract("two-mode state has the wrong length"));
        }
        let mut out = Array1::from_elem(state.len(), Complex::zero());
        for b in &self.blocks {
            let len = b.unitary.dim();
            for r in 0..len {
                let mut acc = Complex::zero();
                for c in 0..len {
                    acc += b.unitary.get(r, c) * state[self.index(b.k_min + c, b.total)];
                }
                out[self.index(b.k_min + r, b.total)] = acc;
            }
        }
        Ok(out)
    }

    /// Dense matrix; only for `dim_a · dim_b ≤ 1024`.
    pub fn to_dense(&self) -> Result<Operator<T>> {
        let d = self.product_dim();
        if d > DENSE_MAX_PRODUCT_DIM {
            return Err(Error::DimensionTooLarge {
                requested: d,
                limit: DENSE_MAX_PRODUCT_DIM,
            });
        }
        let mut out = Operator::zeros(d);
        let mut entries = out.entries().clone();
        for b in &self.blocks {
            let len = b.unitary.dim();
            for r in 0..len {
                for c in 0..len {
                    entries[[self.index(b.k_min + r, b.total), self.index(b.k_min + c, b.total)]] = b.unitary.get(r, c);
                }
            }
        }
        out = Operator::from_entries(entries);
        Ok(out)
    }

    /// Largest `|U†U − I|` entry over the blocks with total photon number
    /// below `min(dim_a, dim_b)`, where the truncation does not cut the block.
    pub fn interior_unitarity_defect(&self) -> T {
        let interior = self.dim_a.min(self.dim_b);
        self.blocks
            .iter()
            .filter(|b| b.total < interior)
            .map(|b| {
                let u = &b.unitary;
                u.adjoint().matmul(u).distance(&Operator::identity(u.dim()))
            })
            .fold(T::zero(), T::max)
    }
}

/// `|a⟩ ⊗ |b⟩` indexed by `k_a · dim_b + k_b`.
pub fn product_state<T: Real>(a: &Ket<T>, b: &Ket<T>) -> Array1<Complex<T>> {
    let (da, db) = (a.dim(), b.dim());
    Array1::from_shape_fn(da * db, |i| a.amps()[i / db] * b.amps()[i % db])
}

/// `|⟨u|v⟩|² / (‖u‖² ‖v‖²)`.
pub fn fidelity<T: Real>(u: &Array1<Complex<T>>, v: &Array1<Complex<T>>) -> T {
    let mut overlap = Complex::<T>::zero();
    let mut nu = T::zero();
    let mut nv = T::zero();
    for (a, b) in u.iter().zip(v.iter()) {
        overlap += a.conj() * *b;
        nu += a.norm_sqr();
        nv += b.norm_sqr();
    }
    overlap.norm_sqr() / (nu * nv)
}

/// `Π_τ(β)` at angle `θ` with its max-norm distance to `ρ_Q(θ)`.
#[derive(Debug, Clone)]
pub struct DilationResult<T> {
    pub theta: T,
    pub tau: T,
    pub beta: Complex<T>,
    pub matrix: Operator<T>,
    pub distance_to_q: T,
}

/// Builds `Π_τ(β)`. Shares its quadrature with the Q phase oracle, so `τ = 0`
/// reproduces that oracle bit for bit.
pub fn pi_tau_beta<T: Real>(
    theta: T,
    tau: T,
    beta: Complex<T>,
    dim: usize,
    quad: &QuadratureSpec<T>,
) -> Result<DilationResult<T>> {
    if !tau.is_finite() || !beta.re.is_finite() || !beta.im.is_finite() {
        return Err(contract("τ and β must be finite"));
    }
    let (s, c) = tau.sin_cos();
    let shift = Complex::new(T::zero(), T::one()) * beta * s;
    // the ray starts at the displacement; its number support must fit
    if shift.norm_sqr() > T::from_usize_lossy(dim) {
        return Err(contract(format!(
            "displacement |β sin τ| = {} exceeds the support of a {dim}-level space",
            shift.norm()
        )));
    }
    let matrix = ray_integral(theta, c, shift, dim, quad)?;
    let distance_to_q = matrix.distance(&rho_q_matrix(theta, dim).matrix);
    Ok(DilationResult {
        theta,
        tau,
        beta,
        matrix,
        distance_to_q,
    })
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub theta: T,
    pub tau: T,
    pub beta: Complex<T>,
    pub distance: T,
    /// `|β| sin τ`, which must vanish for convergence to `ρ_Q(θ)`.
    pub beta_sin_tau: T,
}

pub fn dilation_convergence<T: Real>(
    theta: T,
    schedule: &[(T, Complex<T>)],
    dim: usize,
    quad: &QuadratureSpec<T>,
) -> Result<Vec<ConvergenceRow<T>>> {
    if schedule.is_empty() {
        return Err(contract("convergence schedule is empty"));
    }
    schedule
        .iter()
        .map(|&(tau, beta)| {
            let r = pi_tau_beta(theta, tau, beta, dim, quad)?;
            Ok(ConvergenceRow {
                theta,
                tau,
                beta,
                distance: r.distance_to_q,
                beta_sin_tau: beta.norm() * tau.sin(),
            })
        })
        .collect()
}

/// `τ = 0.2, 0.1, 0.05, 0.025` at `β = 1`.
pub fn fixed_beta_schedule<T: Real>() -> Vec<(T, Complex<T>)> {
    [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&t| (T::lit(t), Complex::new(T::one(), T::zero())))
        .collect()
}

/// Same angles with `β = product / sin τ`, holding `β sin τ` fixed.
pub fn fixed_product_schedule<T: Real>(product: T) -> Vec<(T, Complex<T>)> {
    [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&t| {
            let tau = T::lit(t);
            (tau, Complex::new(product / tau.sin(), T::zero()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_operator, coherent_amplitudes, coherent_state, OperatorKind};
    use crate::q_povm::rho_q_matrix_oracle;

    const PI: f64 = std::f64::consts::PI;
    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn transform_examples() {
        assert_eq!(bs_transform_coherent(c(0.3, -1.0), c(2.0, 0.5), 0.0), (c(0.3, -1.0), c(2.0, 0.5)));
        let (a, b) = bs_transform_coherent(c(1.0, 0.0), c(0.0, 0.0), PI / 4.0);
        let h = 2f64.sqrt() / 2.0;
        assert!((a - c(h, 0.0)).norm() < 1e-15 && (b - c(0.0, h)).norm() < 1e-15);
        assert_eq!(BeamSplitterSpec::new(0.0).transmissivity(), 1.0);
        assert!(BeamSplitterSpec::new(PI / 4.0).transmissivity() < 1e-30);
    }

    #[test]
    fn oracle_identity_and_number_conservation() {
        let u = two_mode_bs_oracle::<f64>(6, 5, 0.0).unwrap().to_dense().unwrap();
        assert!(u.distance(&Operator::identity(30)) < 1e-14);

        let (da, db) = (8, 7);
        let u = two_mode_bs_oracle::<f64>(da, db, 0.7).unwrap();
        let dense = u.to_dense().unwrap();
        let na = build_operator::<f64>(OperatorKind::Number, da);
        let nb = build_operator::<f64>(OperatorKind::Number, db);
        let total = Operator::from_fn(da * db, |i, j| {
            if i == j {
                na.get(i / db, i / db) + nb.get(i % db, i % db)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(dense.commutator(&total).max_abs() <= 1e-8);
        assert!(u.interior_unitarity_defect() <= 1e-12);
    }

    #[test]
    fn oracle_matches_generator_series() {
        // U = Σ (iτG)^k/k! on a small space
        let (da, db, tau) = (4usize, 4usize, 0.4);
        let d = da * db;
        let lower_a = build_operator::<f64>(OperatorKind::Lower, da);
        let lower_b = build_operator::<f64>(OperatorKind::Lower, db);
        let g = Operator::from_fn(d, |i, j| {
            let (ia, ib, ja, jb) = (i / db, i % db, j / db, j % db);
            // a†b + ab†
            lower_a.get(ja, ia).conj() * lower_b.get(ib, jb) + lower_a.get(ia, ja) * lower_b.get(jb, ib).conj()
        });
        let step = g.scale(c(0.0, tau));
        let mut term = Operator::identity(d);
        let mut sum = Operator::identity(d);
        for k in 1..40 {
            term = term.matmul(&step).scale(c(1.0 / k as f64, 0.0));
            sum = &sum + &term;
        }
        let u = two_mode_bs_oracle::<f64>(da, db, tau).unwrap().to_dense().unwrap();
        assert!(u.distance(&sum) < 1e-12);
    }

    #[test]
    fn coherent_inputs_stay_coherent() {
        let (alpha, beta, tau) = (c(1.0, 0.0), c(0.0, 2.0), 0.3);
        let dim = 48;
        let u = two_mode_bs_oracle::<f64>(dim, dim, tau).unwrap();
        let input = product_state(&coherent_state(alpha, dim).state, &coherent_state(beta, dim).state);
        let out = u.apply(&input).unwrap();
        let (a2, b2) = bs_transform_coherent(alpha, beta, tau);
        let predicted = product_state(&coherent_state(a2, dim).state, &coherent_state(b2, dim).state);
        assert!(fidelity(&out, &predicted) >= 1.0 - 1e-6);
        assert!(fidelity(&out, &predicted) >= 1.0 - 1e-8);
    }

    #[test]
    fn oracle_size_limit() {
        assert!(matches!(
            two_mode_bs_oracle::<f64>(65, 64, 0.1),
            Err(Error::DimensionTooLarge { .. })
        ));
        assert!(two_mode_bs_oracle::<f64>(48, 48, 0.1).unwrap().to_dense().is_err());
    }

    #[test]
    fn tau_zero_reduces_to_q_oracle_bitwise() {
        let dim = 16;
        let quad = QuadratureSpec::coherent(dim);
        for beta in [c(0.0, 0.0), c(1.0, -2.0), c(1e6, 0.0)] {
            let r = pi_tau_beta(0.8, 0.0, beta, dim, &quad).unwrap();
            let o = rho_q_matrix_oracle(0.8, dim, &quad).unwrap().matrix;
            assert_eq!(r.matrix, o);
            assert!(r.distance_to_q < 1e-10);
        }
    }

    #[test]
    fn pure_contraction_at_zero_beta() {
        // direct quadrature at rescaled nodes
        let (dim, tau) = (16, 0.2f64);
        let quad = QuadratureSpec::coherent(dim);
        let (rs, ws) = quad.nodes_weights().unwrap();
        let mut want = Operator::<f64>::zeros(dim);
        for (&r, &w) in rs.iter().zip(&ws) {
            let k = Ket::from_amps(coherent_amplitudes(c(r * tau.cos(), 0.0), dim));
            want = &want + &k.projector().scale(c(w * r / PI, 0.0));
        }
        let got = pi_tau_beta(0.0, tau, c(0.0, 0.0), dim, &quad).unwrap();
        assert!(got.matrix.distance(&want) < 1e-14);
        // change of variables: Π = ρ_Q / cos²τ
        let scaled = rho_q_matrix(0.0, dim).matrix.scale(c(1.0 / tau.cos().powi(2), 0.0));
        assert!(got.matrix.distance(&scaled) < 1e-9);
    }

    #[test]
    fn hermitian_and_positive() {
        let dim = 16;
        let quad = QuadratureSpec::coherent(dim);
        for (tau, beta) in [(0.3, c(1.0, 0.5)), (0.05, c(-4.0, 2.0))] {
            let r = pi_tau_beta(1.2, tau, beta, dim, &quad).unwrap();
            assert!(r.matrix.hermiticity_defect(None) <= 1e-10);
            assert!(hermitian_spectrum(&r.matrix).unwrap().min() >= -1e-10);
        }
    }

    #[test]
    fn convergence_schedules() {
        let dim = 24;
        let quad = QuadratureSpec::coherent(dim);
        let rows = dilation_convergence(0.0, &fixed_beta_schedule(), dim, &quad).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].distance < w[0].distance);
        }
        let rows = dilation_convergence(0.0f64, &fixed_product_schedule(0.5), dim, &quad).unwrap();
        for r in &rows {
            assert!((r.beta_sin_tau - 0.5).abs() < 1e-12);
            assert!(r.distance > 1e-3);
        }
        assert!(dilation_convergence::<f64>(0.0, &[], dim, &quad).is_err());
        let single = dilation_convergence(0.0, &[(0.0, c(1e6, 0.0))], dim, &quad).unwrap();
        assert!(single[0].distance < 1e-10);
    }

    #[test]
    fn oversized_displacement_is_refused() {
        let quad = QuadratureSpec::coherent(8);
        assert!(pi_tau_beta(0.0, 0.5, c(100.0, 0.0), 8, &quad).is_err());
    }
}
