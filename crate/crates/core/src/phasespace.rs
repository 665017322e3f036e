//! Wigner and Husimi distributions on `(x, p)` grids, Gaussian smoothing, and
//! radial integration into phase distributions.
//!
//! Grid values are densities with respect to `dx dp`. The Husimi density on a
//! grid is therefore `⟨α|ρ|α⟩/(2π)` at `α = (x + ip)/√2`, which is
//! `Q(α) = ⟨α|ρ|α⟩/π` times the Jacobian `d²α/(dx dp) = 1/2`. Radial integrals
//! `∫ f r dr` give the same phase distribution in either coordinate system.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{contract, Result};
use crate::fock::{coherent_amplitudes, Operator};
use crate::quadrature::QuadratureSpec;
use crate::Real;

/// Density-matrix tolerance used by the grid evaluators.
pub const DENSITY_TOL: f64 = 1e-10;
/// Default node spacing of [`GridSpec::default_for_dim`].
pub const DEFAULT_SPACING: f64 = 0.05;
/// Number of angular samples used for phase distributions by default.
pub const DEFAULT_THETA_NODES: usize = 720;
/// Standard deviation per quadrature axis of the smoothing filter that maps
/// the Wigner density onto the Husimi density.
pub const HUSIMI_FILTER_WIDTH: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Kernel truncation, in standard deviations.
pub const KERNEL_TRUNCATION_SIGMAS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub p_min: T,
    pub p_max: T,
    pub nx: usize,
    pub np: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn square(half_width: T, nodes: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            nx: nodes,
            np: nodes,
        }
    }

    /// `[−L, L]²` with `L = max(6, 0.75·√dim)` and spacing 0.05, which is
    /// `[−6, 6]²` on 241 × 241 nodes for `dim ≤ 64`.
    pub fn default_for_dim(dim: usize) -> Self {
        let l = (T::lit(0.75) * T::from_usize_lossy(dim).sqrt()).max(T::lit(6.0));
        let cells = (T::lit(2.0) * l / T::lit(DEFAULT_SPACING)).round();
        let n = cells.to_usize().unwrap_or(240) + 1;
        Self::square(l, n)
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.nx - 1)
    }

    pub fn dp(&self) -> T {
        (self.p_max - self.p_min) / T::from_usize_lossy(self.np - 1)
    }

    pub fn x(&self, i: usize) -> T {
        self.x_min + self.dx() * T::from_usize_lossy(i)
    }

    pub fn p(&self, j: usize) -> T {
        self.p_min + self.dp() * T::from_usize_lossy(j)
    }

    pub fn cell_area(&self) -> T {
        self.dx() * self.dp()
    }

    /// Radius of the largest origin-centred disc inside the grid.
    pub fn inscribed_radius(&self) -> T {
        (-self.x_min).min(self.x_max).min(-self.p_min).min(self.p_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(contract("grid needs at least two nodes per axis"));
        }
        if !(self.x_max > self.x_min) || !(self.p_max > self.p_min) {
            return Err(contract("grid bounds must be increasing"));
        }
        Ok(())
    }
}

/// Real values on a uniform grid, `values[[i, j]]` at `(x_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub spec: GridSpec<T>,
    pub values: Array2<T>,
}

const INTERP_POINTS: usize = 8;

impl<T: Real> Grid<T> {
    pub fn from_fn(spec: GridSpec<T>, f: impl Fn(T, T) -> T + Sync) -> Result<Self> {
        spec.validate()?;
        let rows: Vec<Vec<T>> = (0..spec.nx)
            .into_par_iter()
            .map(|i| {
                let x = spec.x(i);
                (0..spec.np).map(|j| f(x, spec.p(j))).collect()
            })
            .collect();
        let values = Array2::from_shape_fn((spec.nx, spec.np), |(i, j)| rows[i][j]);
        Ok(Self { spec, values })
    }

    /// Riemann sum times cell area.
    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.spec.cell_area()
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |a, &b| a.min(b))
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |a, &b| a.max(b))
    }

    /// `‖self − other‖_∞`; the grids must share a geometry.
    pub fn max_abs_diff(&self, other: &Grid<T>) -> T {
        assert_eq!(self.values.dim(), other.values.dim());
        self.values
            .iter()
            .zip(other.values.iter())
            .fold(T::zero(), |a, (x, y)| a.max((*x - *y).abs()))
    }

    /// Eight-point tensor Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, x: T, p: T) -> T {
        let s = &self.spec;
        if x < s.x_min || x > s.x_max || p < s.p_min || p > s.p_max {
            return T::zero();
        }
        let (i0, wx) = lagrange_stencil((x - s.x_min) / s.dx(), s.nx);
        let (j0, wp) = lagrange_stencil((p - s.p_min) / s.dp(), s.np);
        let mut acc = T::zero();
        for (a, wa) in wx.iter().enumerate() {
            let mut row = T::zero();
            for (b, wb) in wp.iter().enumerate() {
                row += *wb * self.values[[i0 + a, j0 + b]];
            }
            acc += *wa * row;
        }
        acc
    }
}

fn lagrange_stencil<T: Real>(u: T, n: usize) -> (usize, Vec<T>) {
    let k = INTERP_POINTS.min(n);
    let base = u.floor().to_isize().unwrap_or(0) - (k as isize / 2 - 1);
    let i0 = base.clamp(0, (n - k) as isize) as usize;
    let t = u - T::from_usize_lossy(i0);
    let weights = (0..k)
        .map(|a| {
            let mut w = T::one();
            for b in 0..k {
                if b != a {
                    w *= (t - T::from_usize_lossy(b)) / (T::from_usize_lossy(a) - T::from_usize_lossy(b));
                }
            }
            w
        })
        .collect();
    (i0, weights)
}

/// Evaluates the Wigner density of a fixed density matrix at single points.
///
/// `W(x, p) = (1/π) Σ_{mn} ρ_{mn} (−1)^m ⟨n|D(β)|m⟩` with `β = √2 (x + ip)`,
/// where the displacement elements are generated row by row from
/// `⟨n+1|D|m⟩ = (√m ⟨n|D|m−1⟩ + β ⟨n|D|m⟩)/√(n+1)`.
#[derive(Debug, Clone)]
pub struct WignerEvaluator<T> {
    rho: Operator<T>,
    // (−1)^m ρ_{mn} stored at n·d + m
    signed_columns: Vec<Complex<T>>,
    sqrt: Vec<T>,
    inv_sqrt: Vec<T>,
}

impl<T: Real> WignerEvaluator<T> {
    pub fn new(rho: &Operator<T>) -> Result<Self> {
        rho.check_density(T::lit(DENSITY_TOL))?;
        Ok(Self::new_unchecked(rho))
    }

    /// Skips the density-matrix check; used for cross-Wigner symbols of
    /// off-diagonal operators such as `|m⟩⟨n|`.
    pub fn new_unchecked(rho: &Operator<T>) -> Self {
        let d = rho.dim();
        let mut signed_columns = Vec::with_capacity(d * d);
        for n in 0..d {
            for m in 0..d {
                let v = rho.get(m, n);
                signed_columns.push(if m % 2 == 0 { v } else { -v });
            }
        }
        Self {
            rho: rho.clone(),
            signed_columns,
            sqrt: (0..=d).map(|k| T::from_usize_lossy(k).sqrt()).collect(),
            inv_sqrt: (0..=d)
                .map(|k| if k == 0 { T::zero() } else { T::from_usize_lossy(k).sqrt().recip() })
                .collect(),
        }
    }

    /// Complex Weyl symbol; real for hermitian input.
    pub fn symbol(&self, x: T, p: T) -> Complex<T> {
        let d = self.rho.dim();
        let beta = Complex::new(x, p) * T::SQRT_2();
        let mut row: Vec<Complex<T>> = Vec::with_capacity(d);
        // ⟨0|D(β)|m⟩ = e^{-|β|²/2} (−β*)^m / √m!
        let mut c = Complex::new((-beta.norm_sqr() * T::lit(0.5)).exp(), T::zero());
        let mb = -beta.conj();
        for m in 0..d {
            row.push(c);
            c = c * mb * self.inv_sqrt[m + 1];
        }
        let mut next = vec![Complex::zero(); d];
        let mut acc = Complex::zero();
        for n in 0..d {
            let column = &self.signed_columns[n * d..(n + 1) * d];
            for (c, dnm) in column.iter().zip(&row) {
                acc += *c * *dnm;
            }
            if n + 1 < d {
                let s = self.inv_sqrt[n + 1];
                next[0] = beta * row[0] * s;
                for m in 1..d {
                    next[m] = (row[m - 1] * self.sqrt[m] + beta * row[m]) * s;
                }
                std::mem::swap(&mut row, &mut next);
            }
        }
        acc * T::FRAC_1_PI()
    }

    pub fn value(&self, x: T, p: T) -> T {
        self.symbol(x, p).re
    }
}

/// Evaluates `⟨α|ρ|α⟩` with untruncated coherent amplitudes.
#[derive(Debug, Clone)]
pub struct HusimiEvaluator<T> {
    rho: Operator<T>,
}

impl<T: Real> HusimiEvaluator<T> {
    pub fn new(rho: &Operator<T>) -> Result<Self> {
        rho.check_density(T::lit(DENSITY_TOL))?;
        Ok(Self { rho: rho.clone() })
    }

    pub fn overlap(&self, alpha: Complex<T>) -> T {
        let d = self.rho.dim();
        let c = coherent_amplitudes(alpha, d);
        let mut acc = Complex::zero();
        for n in 0..d {
            let mut row = Complex::zero();
            for m in 0..d {
                row += self.rho.get(n, m) * c[m];
            }
            acc += c[n].conj() * row;
        }
        acc.re
    }

    /// `Q(α) = ⟨α|ρ|α⟩/π`, normalised against `d²α`.
    pub fn q(&self, alpha: Complex<T>) -> T {
        self.overlap(alpha) * T::FRAC_1_PI()
    }

    /// Husimi density against `dx dp`.
    pub fn density(&self, x: T, p: T) -> T {
        let alpha = Complex::new(x, p) * T::FRAC_1_SQRT_2();
        self.overlap(alpha) * T::FRAC_1_PI() * T::lit(0.5)
    }
}

/// Wigner density of `rho` sampled on `spec`.
pub fn wigner_grid<T: Real>(rho: &Operator<T>, spec: GridSpec<T>) -> Result<Grid<T>> {
    let w = WignerEvaluator::new(rho)?;
    Grid::from_fn(spec, |x, p| w.value(x, p))
}

/// Husimi density of `rho` sampled on `spec`.
pub fn husimi_grid<T: Real>(rho: &Operator<T>, spec: GridSpec<T>) -> Result<Grid<T>> {
    let q = HusimiEvaluator::new(rho)?;
    Grid::from_fn(spec, |x, p| q.density(x, p))
}

/// Convolution with the normalised Gaussian of standard deviation `width`
/// per axis, truncated at eight standard deviations. Values outside the grid
/// are treated as zero. `width = 0` is the identity.
pub fn gaussian_coarse_grain<T: Real>(grid: &Grid<T>, width: T) -> Result<Grid<T>> {
    if width < T::zero() || !width.is_finite() {
        return Err(contract("smoothing width must be non-negative"));
    }
    let spec = grid.spec;
    let kx = kernel_weights(width, spec.dx());
    let kp = kernel_weights(width, spec.dp());
    if kx.len() > spec.nx || kp.len() > spec.np {
        return Err(contract(format!(
            "smoothing kernel spans {}×{} nodes but the grid has {}×{}",
            kx.len(),
            kp.len(),
            spec.nx,
            spec.np
        )));
    }
    let along_x = convolve_axis(&grid.values, &kx, 0);
    let values = convolve_axis(&along_x, &kp, 1);
    Ok(Grid { spec, values })
}

fn kernel_weights<T: Real>(width: T, h: T) -> Vec<T> {
    let half = (T::lit(KERNEL_TRUNCATION_SIGMAS) * width / h).ceil().to_usize().unwrap_or(0);
    if half == 0 {
        return vec![T::one()];
    }
    let two_var = T::lit(2.0) * width * width;
    let raw: Vec<T> = (0..=2 * half)
        .map(|k| {
            let d = h * (T::from_usize_lossy(k) - T::from_usize_lossy(half));
            (-d * d / two_var).exp()
        })
        .collect();
    let total: T = raw.iter().copied().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn convolve_axis<T: Real>(values: &Array2<T>, kernel: &[T], axis: usize) -> Array2<T> {
    let (nx, np) = values.dim();
    let half = (kernel.len() / 2) as isize;
    let (outer, inner) = if axis == 0 { (np, nx) } else { (nx, np) };
    let lines: Vec<Vec<T>> = (0..outer)
        .into_par_iter()
        .map(|o| {
            let at = |i: usize| if axis == 0 { values[[i, o]] } else { values[[o, i]] };
            (0..inner)
                .map(|i| {
                    let mut acc = T::zero();
                    for (k, w) in kernel.iter().enumerate() {
                        let src = i as isize + k as isize - half;
                        if src >= 0 && (src as usize) < inner {
                            acc += *w * at(src as usize);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Array2::from_shape_fn((nx, np), |(i, j)| if axis == 0 { lines[j][i] } else { lines[i][j] })
}

/// A real function on `(x, p)` phase space.
pub trait PhaseSpaceField<T: Real>: Sync {
    fn value(&self, x: T, p: T) -> T;

    /// Radius within which the field is defined, if bounded.
    fn domain_radius(&self) -> Option<T> {
        None
    }
}

impl<T: Real> PhaseSpaceField<T> for Grid<T> {
    fn value(&self, x: T, p: T) -> T {
        self.interpolate(x, p)
    }

    fn domain_radius(&self) -> Option<T> {
        Some(self.spec.inscribed_radius())
    }
}

impl<T: Real> PhaseSpaceField<T> for WignerEvaluator<T> {
    fn value(&self, x: T, p: T) -> T {
        WignerEvaluator::value(self, x, p)
    }
}

impl<T: Real> PhaseSpaceField<T> for HusimiEvaluator<T> {
    fn value(&self, x: T, p: T) -> T {
        self.density(x, p)
    }
}

/// Adapts a closure into a [`PhaseSpaceField`].
pub struct FieldFn<F>(pub F);

impl<T: Real, F: Fn(T, T) -> T + Sync> PhaseSpaceField<T> for FieldFn<F> {
    fn value(&self, x: T, p: T) -> T {
        (self.0)(x, p)
    }
}

/// Real function of the phase angle with periodic trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution<T> {
    pub thetas: Vec<T>,
    pub values: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> PhaseDistribution<T> {
    /// `thetas` must be ascending inside `[0, 2π)`.
    pub fn new(thetas: Vec<T>, values: Vec<T>) -> Self {
        assert_eq!(thetas.len(), values.len());
        let weights = periodic_weights(&thetas);
        Self {
            thetas,
            values,
            weights,
        }
    }

    /// `Σ values · weights`.
    pub fn total(&self) -> T {
        self.values.iter().zip(&self.weights).map(|(v, w)| *v * *w).sum()
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |a, &b| a.min(b))
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |a, &b| a.max(b))
    }

    /// `max |self − other|` over shared samples.
    pub fn max_abs_diff(&self, other: &PhaseDistribution<T>) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |a, (x, y)| a.max((*x - *y).abs()))
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = k;
            }
        }
        best
    }
}

fn periodic_weights<T: Real>(thetas: &[T]) -> Vec<T> {
    let n = thetas.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![T::TAU()];
    }
    let half = T::lit(0.5);
    (0..n)
        .map(|k| {
            let prev = if k == 0 { thetas[n - 1] - T::TAU() } else { thetas[k - 1] };
            let next = if k == n - 1 { thetas[0] + T::TAU() } else { thetas[k + 1] };
            (next - prev) * half
        })
        .collect()
}

/// `θ_k = 2πk/n` for `k < n`.
pub fn uniform_thetas<T: Real>(n: usize) -> Vec<T> {
    let step = T::TAU() / T::from_usize_lossy(n);
    (0..n).map(|k| step * T::from_usize_lossy(k)).collect()
}

/// `P(θ) = ∫₀^{r_max} f(r cos θ, r sin θ) r dr` for each angle.
pub fn radial_phase_distribution<T: Real, F: PhaseSpaceField<T> + ?Sized>(
    field: &F,
    thetas: &[T],
    quad: &QuadratureSpec<T>,
) -> Result<PhaseDistribution<T>> {
    if let Some(limit) = field.domain_radius() {
        if quad.r_max > limit {
            return Err(contract(format!(
                "radial cutoff {} exceeds the field's domain radius {}",
                quad.r_max, limit
            )));
        }
    }
    let (rs, ws) = quad.nodes_weights()?;
    let per_theta: Vec<(T, T)> = thetas
        .par_iter()
        .map(|&theta| {
            let (s, c) = theta.sin_cos();
            let mut acc = T::zero();
            for (r, w) in rs.iter().zip(&ws) {
                acc += *w * *r * field.value(*r * c, *r * s);
            }
            let tail = field.value(quad.r_max * c, quad.r_max * s).abs() * quad.r_max;
            (acc, tail)
        })
        .collect();
    let tail = per_theta.iter().fold(T::zero(), |a, v| a.max(v.1));
    quad.check_tail(tail)?;
    Ok(PhaseDistribution::new(
        thetas.to_vec(),
        per_theta.into_iter().map(|v| v.0).collect(),
    ))
}
