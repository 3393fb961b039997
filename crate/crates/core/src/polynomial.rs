//! Univariate polynomials with scalar coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

/// Degree of a polynomial; the zero polynomial has its own variant so no
/// arithmetic can be done on its degree by accident.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// `coeffs[j]` multiplies `x^j`. The last stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    /// `(x)_k = x(x−1)…(x−k+1)` as a polynomial in `x`.
    pub fn falling_factorial(k: usize) -> Self {
        let mut p = Self::constant(S::one());
        for j in 0..k {
            p = p.mul(&Self::new(vec![-S::from_i64(j as i64), S::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_at(&self, n: u64) -> S {
        self.eval(&S::from_i128(n as i128))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|j| {
                    let a = self.coeffs.get(j).cloned().unwrap_or_else(S::zero);
                    let b = other.coeffs.get(j).cloned().unwrap_or_else(S::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| c.clone() * a.clone()).collect())
    }

    /// `p*`: conjugated coefficients.
    pub fn star(&self) -> Self {
        Self::new(self.coeffs.iter().map(Scalar::conj).collect())
    }

    /// Polynomial with the real parts of the coefficients.
    pub fn re_part(&self) -> Self {
        Self::new(self.coeffs.iter().map(Scalar::re).collect())
    }

    /// Polynomial with the imaginary parts of the coefficients.
    pub fn im_part(&self) -> Self {
        Self::new(self.coeffs.iter().map(Scalar::im).collect())
    }

    /// Index of the first coefficient that is not real, if any.
    pub fn first_non_real(&self, bound: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_real(bound))
    }
}
