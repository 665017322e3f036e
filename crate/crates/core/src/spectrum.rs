//! Dense hermitian eigen-decomposition by cyclic complex Jacobi rotations.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{Ket, Operator};
use crate::Real;

/// Ascending real eigenvalues with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Array2<Complex<T>>,
}

pub const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

impl<T: Real> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> T {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn eigenvector(&self, k: usize) -> Ket<T> {
        Ket::from_amps(self.eigenvectors.column(k).to_owned())
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Operator<T> {
        let d = self.dim();
        let v = &self.eigenvectors;
        Operator::from_fn(d, |n, m| {
            (0..d).fold(Complex::zero(), |acc, k| {
                acc + v[[n, k]] * v[[m, k]].conj() * self.eigenvalues[k]
            })
        })
    }

    /// `V f(Λ) V†` for a complex-valued spectral function.
    pub fn apply_function(&self, f: impl Fn(T) -> Complex<T>) -> Operator<T> {
        let d = self.dim();
        let fl: Vec<Complex<T>> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        Operator::from_fn(d, |n, m| {
            (0..d).fold(Complex::zero(), |acc, k| acc + v[[n, k]] * fl[k] * v[[m, k]].conj())
        })
    }
}

/// Full spectrum of a hermitian matrix. The input is symmetrised first.
pub fn hermitian_spectrum<T: Real>(op: &Operator<T>) -> Result<Spectrum<T>> {
    let scale = op.max_abs().max(T::one());
    let defect = op.hermiticity_defect(None);
    let tol = T::lit(HERMITIAN_TOL) * scale;
    if defect > tol {
        return Err(Error::NotHermitian {
            deviation: defect.to_f64_lossy(),
            tolerance: tol.to_f64_lossy(),
        });
    }
    let d = op.dim();
    let half = T::lit(0.5);
    let mut a = Array2::from_shape_fn((d, d), |(n, m)| (op.get(n, m) + op.get(m, n).conj()) * half);
    let mut v = Array2::from_shape_fn((d, d), |(n, m)| {
        if n == m {
            Complex::one()
        } else {
            Complex::zero()
        }
    });

    let frob: T = a.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    let target = T::epsilon() * frob.max(T::min_positive_value());
    for _ in 0..MAX_SWEEPS {
        let off: T = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<T> = (0..d).map(|k| a[[k, k]].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = Array2::from_shape_fn((d, d), |(n, k)| v[[n, order[k]]]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm<T: Real>(a: &Array2<Complex<T>>) -> T {
    let d = a.nrows();
    let mut s = T::zero();
    for n in 0..d {
        for m in 0..d {
            if n != m {
                s += a[[n, m]].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Annihilates a[p][q]. The pivot phase is moved onto column q, leaving a
// real symmetric 2×2 problem for an ordinary Jacobi rotation.
fn rotate<T: Real>(a: &mut Array2<Complex<T>>, v: &mut Array2<Complex<T>>, p: usize, q: usize) {
    let apq = a[[p, q]];
    let mag = apq.norm();
    if mag <= T::min_positive_value() {
        return;
    }
    let d = a.nrows();
    let phase = apq / mag; // e^{iφ}
    let phase_c = phase.conj();
    // Φ = diag(..., e^{-iφ} at q, ...): A ← Φ† A Φ, V ← V Φ
    for r in 0..d {
        a[[r, q]] *= phase_c;
    }
    for c in 0..d {
        a[[q, c]] *= phase;
    }
    for r in 0..d {
        v[[r, q]] *= phase_c;
    }

    let app = a[[p, p]].re;
    let aqq = a[[q, q]].re;
    let theta = (aqq - app) / (T::lit(2.0) * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let cs = (t * t + T::one()).sqrt().recip();
    let sn = t * cs;

    // columns: (p, q) ← (c·p − s·q, s·p + c·q)
    for r in 0..d {
        let xp = a[[r, p]];
        let xq = a[[r, q]];
        a[[r, p]] = xp * cs - xq * sn;
        a[[r, q]] = xp * sn + xq * cs;
    }
    for c in 0..d {
        let xp = a[[p, c]];
        let xq = a[[q, c]];
        a[[p, c]] = xp * cs - xq * sn;
        a[[q, c]] = xp * sn + xq * cs;
    }
    a[[p, q]] = Complex::zero();
    a[[q, p]] = Complex::zero();
    a[[p, p]] = Complex::new(a[[p, p]].re, T::zero());
    a[[q, q]] = Complex::new(a[[q, q]].re, T::zero());
    for r in 0..d {
        let xp = v[[r, p]];
        let xq = v[[r, q]];
        v[[r, p]] = xp * cs - xq * sn;
        v[[r, q]] = xp * sn + xq * cs;
    }
}
