//! Phase operators of the single-mode field in a truncated number basis.
//!
//! The crate builds the Wigner phase operator-valued measure `ρ_W(θ)`, the
//! Q phase POVM `ρ_Q(θ)`, the Gaussian phase-space smoothing that maps one
//! onto the other, and the beam-splitter dilation of `ρ_Q(θ)`.
//!
//! All numerical code is generic over a [`Real`] scalar (`f32` or `f64`).
//! The aliases below fix the scalar to `f64`, which is what every stated
//! tolerance assumes. Matrix elements of `ρ_W` are summed exactly in big
//! integers before being rounded.
//!
//! Conventions: ħ = 1, `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`,
//! `α = (x + i p)/√2`. Phase-space grids are laid out over `(x, p)` and hold
//! densities with respect to `dx dp`.

pub mod dilation;
pub mod error;
pub mod fock;
pub mod phasespace;
pub mod q_povm;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectrum;
pub mod verify;
pub mod wigner_ovm;

pub use error::{Error, Result};
pub use scalar::Real;

/// Pure state in the number basis.
pub type StateVector = fock::Ket<f64>;
/// Dense complex operator in the number basis.
pub type OperatorMatrix = fock::Operator<f64>;
/// Eigen-decomposition of a hermitian operator.
pub type Spectrum = spectrum::Spectrum<f64>;
/// Sampled real function on a uniform `(x, p)` grid.
pub type PhaseSpaceGrid = phasespace::Grid<f64>;
/// Geometry of a phase-space grid.
pub type GridSpec = phasespace::GridSpec<f64>;
/// Phase distribution sampled on `[0, 2π)`.
pub type PhaseDistribution = phasespace::PhaseDistribution<f64>;
/// Radial quadrature rule and cutoff.
pub type QuadratureSpec = quadrature::QuadratureSpec<f64>;
/// `ρ_W(θ)` at a fixed angle.
pub type WignerPhaseMatrix = wigner_ovm::WignerPhaseMatrix<f64>;
/// `ρ_Q(θ)` at a fixed angle.
pub type QPhaseMatrix = q_povm::QPhaseMatrix<f64>;
/// Position-space kernel of `ρ_W(0)`.
pub type PositionKernel = wigner_ovm::PositionKernel<f64>;
/// Outcome of one `Π_τ(β)` construction.
pub type DilationResult = dilation::DilationResult<f64>;
/// Complex scalar used by the aliases.
pub type C64 = num_complex::Complex<f64>;
