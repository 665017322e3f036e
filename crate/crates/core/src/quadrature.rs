//! Radial quadrature rules on `[0, r_max]`.

use crate::error::{contract, Error, Result};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    Trapezoid,
}

/// Rule, node count and cutoff radius for a radial integral.
///
/// `tail_tol` bounds `|f(r_max)|·r_max`, the size of the radial integrand at
/// the cutoff; callers refuse to integrate when it is exceeded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub rule: QuadratureRule,
    pub nodes: usize,
    pub r_max: T,
    pub tail_tol: T,
}

pub const DEFAULT_RADIAL_NODES: usize = 200;
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

impl<T: Real> QuadratureSpec<T> {
    pub fn gauss_legendre(nodes: usize, r_max: T) -> Self {
        Self {
            rule: QuadratureRule::GaussLegendre,
            nodes,
            r_max,
            tail_tol: T::lit(DEFAULT_TAIL_TOL),
        }
    }

    pub fn trapezoid(nodes: usize, r_max: T) -> Self {
        Self {
            rule: QuadratureRule::Trapezoid,
            nodes,
            r_max,
            tail_tol: T::lit(DEFAULT_TAIL_TOL),
        }
    }

    /// Radial rule for `(x, p)` phase-space densities of states in a
    /// `dim`-dimensional number space: `r_max = √(2·dim)`.
    pub fn phase_space(dim: usize) -> Self {
        Self::gauss_legendre(DEFAULT_RADIAL_NODES, T::from_usize_lossy(2 * dim).sqrt())
    }

    /// Radial rule for integrals of matrix-element symbols over every number
    /// state below `dim` in `(x, p)` radius, where the outermost ring sits at
    /// `√(2·dim − 1)`.
    pub fn matrix_symbol(dim: usize) -> Self {
        Self::gauss_legendre(
            DEFAULT_RADIAL_NODES,
            T::from_usize_lossy(2 * dim).sqrt() + T::lit(6.0),
        )
    }

    /// Radial rule in coherent amplitude `|α|`: `r_max = √(2·dim) + 4`.
    pub fn coherent(dim: usize) -> Self {
        Self::gauss_legendre(
            DEFAULT_RADIAL_NODES,
            T::from_usize_lossy(2 * dim).sqrt() + T::lit(4.0),
        )
    }

    pub fn with_tail_tol(mut self, tol: T) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(contract("quadrature needs at least two nodes"));
        }
        if !(self.r_max > T::zero()) || !self.r_max.is_finite() {
            return Err(contract("quadrature cutoff must be positive and finite"));
        }
        Ok(())
    }

    /// Nodes and weights on `[0, r_max]`, ascending in `r`.
    pub fn nodes_weights(&self) -> Result<(Vec<T>, Vec<T>)> {
        self.validate()?;
        Ok(match self.rule {
            QuadratureRule::GaussLegendre => gauss_legendre_on(self.nodes, T::zero(), self.r_max),
            QuadratureRule::Trapezoid => {
                let n = self.nodes;
                let h = self.r_max / T::from_usize_lossy(n - 1);
                let xs = (0..n).map(|i| h * T::from_usize_lossy(i)).collect();
                let ws = (0..n)
                    .map(|i| if i == 0 || i == n - 1 { h * T::lit(0.5) } else { h })
                    .collect();
                (xs, ws)
            }
        })
    }

    /// Checks the size of the radial integrand at the cutoff.
    pub fn check_tail(&self, tail: T) -> Result<()> {
        if tail > self.tail_tol || tail.is_nan() {
            return Err(Error::TailNotNegligible {
                tail: tail.to_f64_lossy(),
                tolerance: self.tail_tol.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Newton iteration on `P_n` from the Tricomi initial guess.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut xs = vec![T::zero(); n];
    let mut ws = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    let half = n.div_ceil(2);
    for i in 0..half {
        let guess = T::PI() * (T::from_usize_lossy(i + 1) - T::lit(0.25)) / (nf + T::lit(0.5));
        let mut x = guess.cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = T::zero();
    }
    (xs, ws)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    if n == 0 {
        (T::one(), T::zero())
    } else {
        (p1, d)
    }
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (xs, ws) = gauss_legendre::<T>(n);
    let half = (b - a) * T::lit(0.5);
    let mid = (b + a) * T::lit(0.5);
    (
        xs.into_iter().map(|x| mid + half * x).collect(),
        ws.into_iter().map(|w| w * half).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre::<f64>(10);
        // exact for degree ≤ 19
        for deg in 0..20 {
            let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn gaussian_moment_on_half_line() {
        // ∫₀^∞ r e^{-r²} dr = 1/2
        let q = QuadratureSpec::<f64>::gauss_legendre(200, 12.0);
        let (xs, ws) = q.nodes_weights().unwrap();
        let got: f64 = xs.iter().zip(&ws).map(|(r, w)| w * r * (-r * r).exp()).sum();
        assert!((got - 0.5).abs() < 1e-15);
    }

    #[test]
    fn odd_rule_has_zero_middle_node() {
        let (xs, ws) = gauss_legendre::<f64>(7);
        assert_eq!(xs[3], 0.0);
        assert!((ws.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_degenerate_specs() {
        assert!(QuadratureSpec::<f64>::gauss_legendre(1, 1.0).validate().is_err());
        assert!(QuadratureSpec::<f64>::gauss_legendre(10, 0.0).validate().is_err());
        let tight = QuadratureSpec::<f64>::trapezoid(10, 1.0).with_tail_tol(1e-3);
        assert!(tight.check_tail(1e-2).is_err());
        assert!(tight.check_tail(1e-4).is_ok());
    }
}
