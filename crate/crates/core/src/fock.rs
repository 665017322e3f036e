//! Truncated number-basis states and operators.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Real;

/// Pure state over `|0⟩..|dim−1⟩`. Constructors state whether they normalise.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<T> {
    amps: Array1<Complex<T>>,
}

/// Normalised state together with the squared norm lost to truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub state: Ket<T>,
    /// `1 − Σ_{n<dim} |c_n|²` of the untruncated, normalised series.
    pub tail_mass: T,
}

/// Even cat state with the squared norm of the raw sum `|γ⟩ + |−γ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatState<T> {
    pub state: Ket<T>,
    pub tail_mass: T,
    /// `‖ |γ⟩ + |−γ⟩ ‖²` within the truncation; analytically `2(1 + e^{−2|γ|²})`.
    pub raw_norm_sqr: T,
}

impl<T: Real> Ket<T> {
    pub fn from_amps(amps: Array1<Complex<T>>) -> Self {
        assert!(!amps.is_empty(), "a state needs at least one amplitude");
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<Complex<T>> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self::from_amps(self.amps.mapv(|c| c / n))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket<T>) -> Complex<T> {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator<T> {
        let d = self.dim();
        Operator::from_fn(d, |n, m| self.amps[n] * self.amps[m].conj())
    }

    pub fn expectation(&self, op: &Operator<T>) -> Complex<T> {
        self.inner(&op.apply(self))
    }
}

/// Dense complex `dim × dim` matrix in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    entries: Array2<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn from_entries(entries: Array2<Complex<T>>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operators are square");
        assert!(entries.nrows() > 0);
        Self { entries }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        Self::from_entries(Array2::from_shape_fn((dim, dim), |(n, m)| f(n, m)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_entries(Array2::from_elem((dim, dim), Complex::zero()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |n, m| if n == m { Complex::one() } else { Complex::zero() })
    }

    pub fn diagonal(values: impl IntoIterator<Item = T>) -> Self {
        let v: Vec<T> = values.into_iter().collect();
        Self::from_fn(v.len(), |n, m| {
            if n == m {
                Complex::new(v[n], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex<T>> {
        self.entries
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> Complex<T> {
        self.entries[[n, m]]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.entries.t().mapv(|c| c.conj()))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_entries(self.entries.mapv(|c| c * s))
    }

    pub fn matmul(&self, other: &Operator<T>) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::from_entries(self.entries.dot(&other.entries))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator<T>) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn apply(&self, ket: &Ket<T>) -> Ket<T> {
        Ket::from_amps(self.entries.dot(ket.amps()))
    }

    pub fn trace(&self) -> Complex<T> {
        self.entries.diag().iter().fold(Complex::zero(), |a, &b| a + b)
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Operator<T>) -> Complex<T> {
        let d = self.dim();
        let mut acc = Complex::zero();
        for n in 0..d {
            for m in 0..d {
                acc += self.entries[[n, m]] * other.entries[[m, n]];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> T {
        self.entries.iter().fold(T::zero(), |a, c| a.max(c.norm()))
    }

    /// Max-norm of the leading `block × block` corner.
    pub fn block_max_abs(&self, block: usize) -> T {
        let b = block.min(self.dim());
        let mut acc = T::zero();
        for n in 0..b {
            for m in 0..b {
                acc = acc.max(self.entries[[n, m]].norm());
            }
        }
        acc
    }

    /// `‖M − M†‖_max`, optionally over the leading `block` only.
    pub fn hermiticity_defect(&self, block: Option<usize>) -> T {
        let b = block.unwrap_or(self.dim()).min(self.dim());
        let mut acc = T::zero();
        for n in 0..b {
            for m in n..b {
                acc = acc.max((self.entries[[n, m]] - self.entries[[m, n]].conj()).norm());
            }
        }
        acc
    }

    /// `‖self − other‖_max`.
    pub fn distance(&self, other: &Operator<T>) -> T {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .fold(T::zero(), |a, (x, y)| a.max((*x - *y).norm()))
    }

    /// Errors unless hermitian within `tol` and unit trace within `tol`.
    pub fn check_density(&self, tol: T) -> Result<()> {
        let defect = self.hermiticity_defect(None);
        if defect > tol {
            return Err(Error::NotHermitian {
                deviation: defect.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        let tr = self.trace();
        if (tr - Complex::one()).norm() > tol {
            return Err(Error::ContractViolation(format!(
                "density matrix trace is {} (expected 1)",
                tr.re.to_f64_lossy()
            )));
        }
        Ok(())
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: Self) -> Operator<T> {
        Operator::from_entries(&self.entries + &rhs.entries)
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: Self) -> Operator<T> {
        Operator::from_entries(&self.entries - &rhs.entries)
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: Self) -> Operator<T> {
        self.matmul(rhs)
    }
}

/// `|n⟩` in a `dim`-dimensional space.
pub fn fock_state<T: Real>(n: usize, dim: usize) -> Result<Ket<T>> {
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    let mut amps = Array1::from_elem(dim, Complex::zero());
    amps[n] = Complex::one();
    Ok(Ket::from_amps(amps))
}

/// Untruncated coherent-state amplitudes `e^{−|α|²/2} αⁿ/√n!` for `n < dim`,
/// not renormalised.
pub fn coherent_amplitudes<T: Real>(alpha: Complex<T>, dim: usize) -> Array1<Complex<T>> {
    let mut amps = Array1::from_elem(dim, Complex::zero());
    let mut c = Complex::new((-alpha.norm_sqr() * T::lit(0.5)).exp(), T::zero());
    for (n, slot) in amps.iter_mut().enumerate() {
        *slot = c;
        c = c * alpha / T::from_usize_lossy(n + 1).sqrt();
    }
    amps
}

/// Coherent state `|α⟩`, renormalised after truncation.
pub fn coherent_state<T: Real>(alpha: Complex<T>, dim: usize) -> Truncated<T> {
    let raw = Ket::from_amps(coherent_amplitudes(alpha, dim));
    let kept = raw.norm_sqr();
    Truncated {
        state: raw.normalized(),
        tail_mass: (T::one() - kept).max(T::zero()),
    }
}

/// Even cat state `∝ |γ⟩ + |−γ⟩`, normalised from the actual inner product.
pub fn even_cat_state<T: Real>(gamma: Complex<T>, dim: usize) -> CatState<T> {
    let plus = coherent_amplitudes(gamma, dim);
    let minus = coherent_amplitudes(-gamma, dim);
    let raw = Ket::from_amps(&plus + &minus);
    let single: T = plus.iter().map(|c| c.norm_sqr()).sum();
    CatState {
        raw_norm_sqr: raw.norm_sqr(),
        state: raw.normalized(),
        tail_mass: (T::one() - single).max(T::zero()),
    }
}

/// `|z, m⟩ = exp(z a†)|m⟩`, unnormalised.
pub fn excited_coherent<T: Real>(z: Complex<T>, m: usize, dim: usize) -> Result<Ket<T>> {
    if m >= dim {
        return Err(Error::IndexOutOfRange { index: m, dim });
    }
    let mut amps = Array1::from_elem(dim, Complex::zero());
    // amp_{n+1} = amp_n · z √(n+1) / (n+1−m)
    let mut c = Complex::<T>::one();
    for n in m..dim {
        amps[n] = c;
        c = c * z * T::from_usize_lossy(n + 1).sqrt() / T::from_usize_lossy(n + 1 - m);
    }
    Ok(Ket::from_amps(amps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Lower,
    Raise,
    Number,
    Parity,
    Position,
    Momentum,
}

/// Standard truncated matrix for `kind`.
pub fn build_operator<T: Real>(kind: OperatorKind, dim: usize) -> Operator<T> {
    let zero = Complex::zero();
    let sqrt = |n: usize| T::from_usize_lossy(n).sqrt();
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    match kind {
        OperatorKind::Lower => {
            Operator::from_fn(dim, |n, m| if m == n + 1 { Complex::new(sqrt(m), T::zero()) } else { zero })
        }
        OperatorKind::Raise => {
            Operator::from_fn(dim, |n, m| if n == m + 1 { Complex::new(sqrt(n), T::zero()) } else { zero })
        }
        OperatorKind::Number => Operator::diagonal((0..dim).map(T::from_usize_lossy)),
        OperatorKind::Parity => {
            Operator::diagonal((0..dim).map(|n| if n % 2 == 0 { T::one() } else { -T::one() }))
        }
        OperatorKind::Position => Operator::from_fn(dim, |n, m| {
            if m == n + 1 {
                Complex::new(sqrt(m) * inv_sqrt2, T::zero())
            } else if n == m + 1 {
                Complex::new(sqrt(n) * inv_sqrt2, T::zero())
            } else {
                zero
            }
        }),
        // p = i(a† − a)/√2
        OperatorKind::Momentum => Operator::from_fn(dim, |n, m| {
            if m == n + 1 {
                Complex::new(T::zero(), -sqrt(m) * inv_sqrt2)
            } else if n == m + 1 {
                Complex::new(T::zero(), sqrt(n) * inv_sqrt2)
            } else {
                zero
            }
        }),
    }
}

/// `e^{iNθ} M e^{−iNθ}`, i.e. `out_{nm} = e^{i(n−m)θ} M_{nm}`.
pub fn rotate_by_number_phase<T: Real>(op: &Operator<T>, theta: T) -> Operator<T> {
    let d = op.dim();
    if d == 0 {
        return op.clone();
    }
    // indexed by n − m + d − 1, so the diagonal phase is exactly 1
    let phases: Vec<Complex<T>> = (0..2 * d - 1)
        .map(|k| {
            let diff = T::from_usize_lossy(k) - T::from_usize_lossy(d - 1);
            Complex::from_polar(T::one(), diff * theta)
        })
        .collect();
    Operator::from_fn(d, |n, m| phases[n + d - 1 - m] * op.get(n, m))
}

/// `∫₀^{2π} e^{iNθ} M e^{−iNθ} dθ` by the `nodes`-point periodic trapezoid rule.
pub fn angular_integral<T: Real>(op: &Operator<T>, nodes: usize) -> Operator<T> {
    let d = op.dim();
    let w = T::TAU() / T::from_usize_lossy(nodes);
    let mut acc = Array2::from_elem((d, d), Complex::zero());
    for k in 0..nodes {
        let theta = w * T::from_usize_lossy(k);
        let rotated = rotate_by_number_phase(op, theta);
        acc = acc + rotated.entries.mapv(|c| c * w);
    }
    Operator::from_entries(acc)
}

/// Position wavefunctions `ψ_k(x) = ⟨x|k⟩` for `k < n`, by the normalised
/// Hermite recurrence.
pub fn position_wavefunctions<T: Real>(x: T, n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n];
    if n == 0 {
        return out;
    }
    out[0] = T::PI().powf(T::lit(-0.25)) * (-x * x * T::lit(0.5)).exp();
    if n > 1 {
        out[1] = T::SQRT_2() * x * out[0];
    }
    for k in 2..n {
        let kf = T::from_usize_lossy(k);
        out[k] = (T::lit(2.0) / kf).sqrt() * x * out[k - 1] - ((kf - T::one()) / kf).sqrt() * out[k - 2];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn fock_basis_vectors() {
        let v = fock_state::<f64>(0, 4).unwrap();
        assert_eq!(v.amps().to_vec(), vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let v = fock_state::<f64>(3, 4).unwrap();
        assert_eq!(v.amps()[3], c(1., 0.));
        assert_eq!(fock_state::<f64>(4, 4), Err(Error::IndexOutOfRange { index: 4, dim: 4 }));
    }

    #[test]
    fn coherent_state_examples() {
        let vac = coherent_state(c(0., 0.), 8);
        assert_eq!(vac.state, fock_state(0, 8).unwrap());
        let one = coherent_state(c(1., 0.), 32);
        let r = one.state.amps()[1] / one.state.amps()[0];
        assert!((r - c(1., 0.)).norm() < 1e-15);
        let two = coherent_state(c(2., 0.), 64);
        let n = build_operator(OperatorKind::Number, 64);
        // oracle: Σ n |c_n|² of the raw series
        let raw = coherent_amplitudes(c(2., 0.), 64);
        let direct: f64 = raw.iter().enumerate().map(|(k, a)| k as f64 * a.norm_sqr()).sum();
        assert!((direct - 4.0).abs() < 1e-8);
        assert!((two.state.expectation(&n).re - 4.0).abs() < 1e-8);
        assert!(two.tail_mass < 1e-12);
    }

    #[test]
    fn cat_state_examples() {
        let cat = even_cat_state(c(2., 0.), 64);
        for (k, a) in cat.state.amps().iter().enumerate() {
            if k % 2 == 1 {
                assert_eq!(a.norm(), 0.0);
            }
        }
        let want = 2.0 * (1.0 + (-8.0f64).exp());
        assert!((cat.raw_norm_sqr - want).abs() < 1e-12);
        assert!((cat.state.norm_sqr() - 1.0).abs() < 1e-12);
        let tiny = even_cat_state(c(1e-9, 0.), 8);
        assert!((tiny.state.amps()[0] - c(1., 0.)).norm() < 1e-12);
    }

    #[test]
    fn excited_coherent_examples() {
        let s = excited_coherent(c(0., 0.), 2, 8).unwrap();
        assert_eq!(s, fock_state(2, 8).unwrap());
        let s = excited_coherent(c(1., 0.), 0, 32).unwrap();
        let mut fact = 1.0f64;
        for (n, a) in s.amps().iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((a.re - 1.0 / fact.sqrt()).abs() < 1e-14);
        }
        assert!(excited_coherent(c(1., 0.), 8, 8).is_err());
    }

    #[test]
    fn excited_coherent_matches_exponential_series() {
        // oracle: exp(z a†)|1⟩ = Σ_k z^k (a†)^k / k! |1⟩ by repeated application
        let dim = 32;
        let z = c(1., 1.);
        let raise = build_operator::<f64>(OperatorKind::Raise, dim);
        let mut term = fock_state::<f64>(1, dim).unwrap();
        let mut sum = term.amps().clone();
        for k in 1..dim {
            let next = raise.apply(&term);
            term = Ket::from_amps(next.amps().mapv(|a| a * z / k as f64));
            sum = &sum + term.amps();
        }
        let direct = excited_coherent(z, 1, dim).unwrap();
        for n in 0..dim {
            assert!((direct.amps()[n] - sum[n]).norm() < 1e-10 * (1.0 + sum[n].norm()));
        }
        assert!((direct.amps()[2] - z * 2f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn operator_examples() {
        let n = build_operator::<f64>(OperatorKind::Number, 3);
        assert_eq!(n, Operator::diagonal([0., 1., 2.]));
        let p = build_operator::<f64>(OperatorKind::Parity, 4);
        assert_eq!(p, Operator::diagonal([1., -1., 1., -1.]));
        let dim = 64;
        let x = build_operator::<f64>(OperatorKind::Position, dim);
        let pm = build_operator::<f64>(OperatorKind::Momentum, dim);
        let comm = x.commutator(&pm);
        for i in 0..60 {
            for j in 0..60 {
                let want = if i == j { c(0., 1.) } else { c(0., 0.) };
                assert!((comm.get(i, j) - want).norm() < 1e-13);
            }
        }
        // the truncation edge carries the defect
        assert!((comm.get(dim - 1, dim - 1) - c(0., 1.)).norm() > 1.0);
    }

    #[test]
    fn lowering_acts_on_fock_states() {
        let dim = 10;
        let a = build_operator::<f64>(OperatorKind::Lower, dim);
        for n in 1..dim {
            let out = a.apply(&fock_state(n, dim).unwrap());
            let want = fock_state::<f64>(n - 1, dim).unwrap();
            for k in 0..dim {
                assert!((out.amps()[k] - want.amps()[k] * (n as f64).sqrt()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let m = Operator::<f64>::from_fn(3, |n, k| c(n as f64 + 0.5, k as f64 - 1.0));
        assert_eq!(rotate_by_number_phase(&m, 0.0), m);
        let d = Operator::diagonal([1.0, 2.0, 3.0]);
        assert!(rotate_by_number_phase(&d, 1.234).distance(&d) < 1e-15);
        let mut e = Operator::<f64>::zeros(2);
        e = &e + &Operator::from_fn(2, |n, k| if n == 0 && k == 1 { c(1., 0.) } else { c(0., 0.) });
        let r = rotate_by_number_phase(&e, std::f64::consts::FRAC_PI_2);
        assert!((r.get(0, 1) - c(0., -1.)).norm() < 1e-15);
    }

    #[test]
    fn parity_maps_coherent_to_negated_amplitude() {
        let alpha = c(1.2, -0.7);
        let dim = 48;
        let p = build_operator::<f64>(OperatorKind::Parity, dim);
        let plus = coherent_state(alpha, dim);
        let minus = coherent_state(-alpha, dim);
        let out = p.apply(&plus.state);
        for k in 0..dim {
            assert!((out.amps()[k] - minus.state.amps()[k]).norm() <= 1e-14 + plus.tail_mass);
        }
    }

    proptest! {
        #[test]
        fn coherent_recursion_holds(re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let alpha = c(re, im);
            let raw = coherent_amplitudes(alpha, 40);
            for n in 0..39 {
                let want = raw[n] * alpha / ((n + 1) as f64).sqrt();
                prop_assert!((raw[n + 1] - want).norm() <= 1e-15 * want.norm().max(1e-300));
            }
        }

        #[test]
        fn rotations_compose(t1 in -7.0f64..7.0, t2 in -7.0f64..7.0, seed in 0u64..1000) {
            let m = Operator::<f64>::from_fn(6, |n, k| {
                let s = (seed as f64 + 1.0) * (n as f64 * 6.0 + k as f64 + 1.0);
                c(s.sin(), s.cos())
            });
            let twice = rotate_by_number_phase(&rotate_by_number_phase(&m, t1), t2);
            let once = rotate_by_number_phase(&m, t1 + t2);
            prop_assert!(twice.distance(&once) < 1e-12);
        }
    }
}
