//! Complex scalars in two arithmetic modes.
//!
//! [`GaussianRational`] (arbitrary-precision rational real and imaginary
//! parts) makes every zero test decidable; [`C64`] is ordinary binary
//! floating point and every zero test takes an explicit bound. The two modes
//! are distinct types, so an expression mixing them does not compile.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;
use crate::matrix::Matrix;

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;
pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

/// Ground field of every computation in this crate.
///
/// Besides field arithmetic the trait carries the handful of routines whose
/// algorithm genuinely differs between the modes (kernels, span bases and
/// spectrum estimation).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational_parts(re: &Rational, im: &Rational) -> Self;
    /// Exact mode takes the exact binary value of each part.
    fn from_c64(z: C64) -> Self;

    fn conj(&self) -> Self;
    /// Real part, as a scalar with zero imaginary part.
    fn re(&self) -> Self;
    /// Imaginary part, as a scalar with zero imaginary part.
    fn im(&self) -> Self;
    /// `|z|²`, a real scalar.
    fn norm_sqr(&self) -> Self;
    /// Multiplicative inverse; `None` only for exact zero.
    fn recip(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Exact mode ignores `bound`; float mode tests `|z| <= bound`.
    fn is_negligible(&self, bound: f64) -> bool;
    /// `|z|` as a float, for pivoting, scales and diagnostics.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> C64;
    /// Nonnegative square root of a nonnegative real. Exact mode succeeds only
    /// for perfect rational squares.
    fn sqrt_nonneg(&self) -> Option<Self>;
    /// Real and strictly positive (beyond `bound` in float mode).
    fn is_positive_real(&self, bound: f64) -> bool;
    fn is_real(&self, bound: f64) -> bool;
    /// Exact parts, available in exact mode only.
    fn to_rational_parts(&self) -> Option<(Rational, Rational)>;

    /// Basis of `ker m`.
    fn kernel_basis(m: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>>;
    /// Basis of the span of `vectors`: a linearly independent subset in exact
    /// mode, an orthonormal basis in float mode.
    fn span_basis(vectors: &[Vec<Self>], tol: f64) -> Vec<Vec<Self>>;
    /// Numerically computed eigenvalues (float mode only).
    fn eigenvalues(m: &Matrix<Self>) -> Option<Vec<Self>>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational_parts(
            &Rational::new(BigInt::from(num), BigInt::from(den)),
            &Rational::zero(),
        )
    }

    fn from_i128(n: i128) -> Self {
        Self::from_rational_parts(&Rational::from_integer(BigInt::from(n)), &Rational::zero())
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self.clone() * r)
    }
}

impl Scalar for GaussianRational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Complex::new(Rational::zero(), Rational::zero())
    }

    fn one() -> Self {
        Complex::new(Rational::one(), Rational::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(Rational::zero(), Rational::one())
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    fn from_rational_parts(re: &Rational, im: &Rational) -> Self {
        Complex::new(re.clone(), im.clone())
    }

    fn from_c64(z: C64) -> Self {
        Complex::new(
            Rational::from_float(z.re).unwrap_or_default(),
            Rational::from_float(z.im).unwrap_or_default(),
        )
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn re(&self) -> Self {
        Complex::new(self.re.clone(), Rational::zero())
    }

    fn im(&self) -> Self {
        Complex::new(self.im.clone(), Rational::zero())
    }

    fn norm_sqr(&self) -> Self {
        Complex::new(
            &self.re * &self.re + &self.im * &self.im,
            Rational::zero(),
        )
    }

    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let d = &self.re * &self.re + &self.im * &self.im;
        Some(Complex::new(&self.re / &d, -(&self.im / &d)))
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_negligible(&self, _bound: f64) -> bool {
        Scalar::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        let c = self.to_c64();
        c.norm()
    }

    fn to_c64(&self) -> C64 {
        Complex::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn sqrt_nonneg(&self) -> Option<Self> {
        if !self.im.is_zero() || self.re.is_negative() {
            return None;
        }
        let n = self.re.numer();
        let d = self.re.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Complex::new(Rational::new(rn, rd), Rational::zero()))
        } else {
            None
        }
    }

    fn is_positive_real(&self, _bound: f64) -> bool {
        self.im.is_zero() && self.re.is_positive()
    }

    fn is_real(&self, _bound: f64) -> bool {
        self.im.is_zero()
    }

    fn to_rational_parts(&self) -> Option<(Rational, Rational)> {
        Some((self.re.clone(), self.im.clone()))
    }

    fn kernel_basis(m: &Matrix<Self>, _tol: f64) -> Vec<Vec<Self>> {
        linalg::exact_kernel(m)
    }

    fn span_basis(vectors: &[Vec<Self>], _tol: f64) -> Vec<Vec<Self>> {
        linalg::independent_subset(vectors)
    }

    fn eigenvalues(_m: &Matrix<Self>) -> Option<Vec<Self>> {
        None
    }
}

impl Scalar for C64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }

    fn imag_unit() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn from_i64(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }

    fn from_rational_parts(re: &Rational, im: &Rational) -> Self {
        Complex::new(rational_to_f64(re), rational_to_f64(im))
    }

    fn from_c64(z: C64) -> Self {
        z
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> Self {
        Complex::new(self.re, 0.0)
    }

    fn im(&self) -> Self {
        Complex::new(self.im, 0.0)
    }

    fn norm_sqr(&self) -> Self {
        Complex::new(Complex::norm_sqr(self), 0.0)
    }

    fn recip(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(Complex::inv(self))
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_negligible(&self, bound: f64) -> bool {
        self.norm() <= bound
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn sqrt_nonneg(&self) -> Option<Self> {
        if self.re < 0.0 || self.im != 0.0 {
            return None;
        }
        Some(Complex::new(libm::sqrt(self.re), 0.0))
    }

    fn is_positive_real(&self, bound: f64) -> bool {
        self.re > bound && self.im.abs() <= bound.max(f64::EPSILON * self.re.abs())
    }

    fn is_real(&self, bound: f64) -> bool {
        self.im.abs() <= bound
    }

    fn to_rational_parts(&self) -> Option<(Rational, Rational)> {
        None
    }

    fn kernel_basis(m: &Matrix<Self>, tol: f64) -> Vec<Vec<Self>> {
        linalg::float_kernel(m, tol)
    }

    fn span_basis(vectors: &[Vec<Self>], tol: f64) -> Vec<Vec<Self>> {
        linalg::orthonormal_basis(vectors, tol)
    }

    fn eigenvalues(m: &Matrix<Self>) -> Option<Vec<Self>> {
        Some(linalg::eigenvalues(m))
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerator and denominator: scale both down by the same power of two.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = q.numer() >> shift as usize;
    let d = q.denom() >> shift as usize;
    let nf = n.to_f64().unwrap_or(0.0);
    let df = d.to_f64().unwrap_or(f64::INFINITY);
    nf / df
}

/// Dense Hermitian inner product `⟨u, v⟩ = Σ u_i · conj(v_i)`, linear in the
/// first slot. Callers guarantee equal lengths.
pub(crate) fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut acc = S::zero();
    for (a, b) in u.iter().zip(v) {
        acc = acc + a.clone() * b.conj();
    }
    acc
}

/// Bilinear sum `Σ u_i · v_i` (no conjugation).
pub(crate) fn dot_plain<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut acc = S::zero();
    for (a, b) in u.iter().zip(v) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = acc + a.clone() * b.clone();
    }
    acc
}

pub(crate) fn norm_sqr<S: Scalar>(u: &[S]) -> S {
    let mut acc = S::zero();
    for a in u {
        acc = acc + a.norm_sqr();
    }
    acc
}

pub(crate) fn axpy<S: Scalar>(alpha: &S, x: &[S], y: &[S]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(a, b)| alpha.clone() * a.clone() + b.clone())
        .collect()
}

pub(crate) fn scale<S: Scalar>(alpha: &S, x: &[S]) -> Vec<S> {
    x.iter().map(|a| alpha.clone() * a.clone()).collect()
}

pub(crate) fn max_magnitude<S: Scalar>(x: &[S]) -> f64 {
    x.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

/// Text form `a[/b][(+|-)c[/d]i]` in exact mode, `re(+|-)imi` in float mode.
pub fn format_scalar<S: Scalar>(z: &S) -> String {
    match z.to_rational_parts() {
        Some((re, im)) => {
            if im.is_zero() {
                format!("{re}")
            } else if im.is_negative() {
                format!("{re}-{}i", -im)
            } else {
                format!("{re}+{im}i")
            }
        }
        None => {
            let c = z.to_c64();
            if c.im < 0.0 {
                format!("{}-{}i", c.re, -c.im)
            } else {
                format!("{}+{}i", c.re, c.im)
            }
        }
    }
}

/// Largest `|x|²` among `x`, compared exactly when the mode allows it.
pub fn max_norm_sqr<S: Scalar>(x: &[S]) -> S {
    let mut best = S::zero();
    for v in x {
        let n = v.norm_sqr();
        let larger = match (n.to_rational_parts(), best.to_rational_parts()) {
            (Some((a, _)), Some((b, _))) => a > b,
            _ => n.magnitude() > best.magnitude(),
        };
        if larger {
            best = n;
        }
    }
    best
}
