//! Forward differences on scalar sequences, degree detection and Newton
//! interpolation on the nonnegative integers.
//!
//! A sequence `γ` is a polynomial of degree at most `m − 1` in `n` exactly
//! when `Δ^m γ = 0`, where `(Δγ)_n = γ_{n+1} − γ_n`. Every verdict here is
//! relative to the finite window of samples supplied.

use alloc::vec::Vec;

use crate::combinatorics::{binomial, factorial, int, signed_binomial};
use crate::error::Error;
use crate::polynomial::Polynomial;
use crate::scalar::{self, Scalar};

/// Default relative tolerance for float-mode zero tests on difference rows.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Number of samples used for an operator of dimension `dim`.
///
/// Strict orders of algebraic m-isometries on a `dim`-dimensional space are
/// at most `2·dim − 1`, so orbit degrees are at most `2·dim − 2`; this window
/// leaves room to certify any of them.
pub fn default_window(dim: usize) -> usize {
    2 * (2 * dim + 1) + 2
}

/// Samples `γ_n = ‖Tⁿh‖²` for `n = 0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSequence<S> {
    values: Vec<S>,
}

impl<S: Scalar> OrbitSequence<S> {
    /// Checks that there are at least two samples and that each one is a
    /// nonnegative real (to within `tol` in float mode).
    pub fn new(values: Vec<S>, tol: f64) -> Result<Self, Error> {
        if values.len() < 2 {
            return Err(Error::WindowTooShort { window: values.len(), min: 2 });
        }
        for v in &values {
            let bound = tol * v.magnitude().max(1.0);
            if !v.is_real(bound) || !(v.is_positive_real(0.0) || v.is_negligible(bound)) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "orbit sample {v:?} is not a nonnegative real"
                )));
            }
        }
        Ok(OrbitSequence { values })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn window_len(&self) -> usize {
        self.values.len()
    }
}

impl<S> AsRef<[S]> for OrbitSequence<S> {
    fn as_ref(&self) -> &[S] {
        &self.values
    }
}

/// `rows[k][n] = (Δ^k γ)_n`, with `rows[k].len() = window − k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceTable<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> DifferenceTable<S> {
    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[S] {
        &self.rows[k]
    }

    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Iterated subtraction up to `Δ^depth`; needs `depth < values.len()`.
pub fn difference_table<S: Scalar>(values: &[S], depth: usize) -> Result<DifferenceTable<S>, Error> {
    if depth >= values.len() {
        return Err(Error::DepthTooLarge { depth, window: values.len() });
    }
    let mut rows = Vec::with_capacity(depth + 1);
    rows.push(values.to_vec());
    for k in 0..depth {
        let prev: &Vec<S> = &rows[k];
        let next = prev.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
        rows.push(next);
    }
    Ok(DifferenceTable { rows })
}

/// `(Δ^m γ)_n = (−1)^m Σ_k (−1)^k C(m,k) γ_{n+k}` evaluated directly.
pub fn binomial_difference<S: Scalar>(values: &[S], m: usize, n: usize) -> Result<S, Error> {
    if n + m >= values.len() {
        return Err(Error::DepthTooLarge { depth: m, window: values.len().saturating_sub(n) });
    }
    let sum = (0..=m).fold(S::zero(), |acc, k| {
        acc + signed_binomial::<S>(m, k) * values[n + k].clone()
    });
    Ok(if m % 2 == 0 { sum } else { -sum })
}

/// `(Δ^k γ)_0` for `k = 0..values.len()`.
pub fn newton_coefficients<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut row = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while let Some(first) = row.first() {
        out.push(first.clone());
        row = row.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeKind {
    /// Every sample vanishes.
    ZeroSequence,
    Polynomial(usize),
    NotPolynomialWithinWindow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeVerdict {
    pub kind: DegreeKind,
    /// Largest modulus in the first difference row declared zero (or in the
    /// deepest row when none was).
    pub residual: f64,
}

impl DegreeVerdict {
    /// Degree as a number, with the zero sequence reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        match self.kind {
            DegreeKind::Polynomial(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        !matches!(self.kind, DegreeKind::NotPolynomialWithinWindow)
    }

    /// Degree at most `bound` (the zero sequence qualifies).
    pub fn degree_at_most(&self, bound: usize) -> bool {
        match self.kind {
            DegreeKind::ZeroSequence => true,
            DegreeKind::Polynomial(d) => d <= bound,
            DegreeKind::NotPolynomialWithinWindow => false,
        }
    }
}

/// Float-mode bound below which entries of `Δ^depth γ` count as zero:
/// `tol · max(1, max|γ|) · C(depth, ⌊depth/2⌋)`.
pub fn row_bound<S: Scalar>(values: &[S], depth: usize, tol: f64) -> f64 {
    let scale = scalar::max_magnitude(values).max(1.0);
    let amp = int::<crate::scalar::C64>(&binomial(depth as u64, (depth / 2) as u64)).re;
    tol * scale * amp
}

/// Whether `Δ^depth γ` vanishes over the window (exactly in exact mode).
pub fn row_vanishes<S: Scalar>(values: &[S], row: &[S], depth: usize, tol: f64) -> bool {
    let bound = row_bound(values, depth, tol);
    row.iter().all(|x| x.is_negligible(bound))
}

/// Smallest `d` with `Δ^{d+1} γ ≡ 0` over the window, for `d ≤ window − 2`.
pub fn detect_degree<S: Scalar>(values: &[S], tol: f64) -> Result<DegreeVerdict, Error> {
    let len = values.len();
    if len < 3 {
        return Err(Error::WindowTooShort { window: len, min: 3 });
    }
    let zero_bound = tol * scalar::max_magnitude(values).max(1.0);
    if values.iter().all(|v| v.is_negligible(zero_bound)) {
        return Ok(DegreeVerdict {
            kind: DegreeKind::ZeroSequence,
            residual: scalar::max_magnitude(values),
        });
    }
    let table = difference_table(values, len - 1)?;
    for d in 0..=len - 2 {
        let row = table.row(d + 1);
        if row_vanishes(values, row, d + 1, tol) {
            return Ok(DegreeVerdict {
                kind: DegreeKind::Polynomial(d),
                residual: scalar::max_magnitude(row),
            });
        }
    }
    Ok(DegreeVerdict {
        kind: DegreeKind::NotPolynomialWithinWindow,
        residual: scalar::max_magnitude(table.row(len - 1)),
    })
}

/// Newton's forward interpolation `p(x) = Σ_k (Δ^kγ)_0 / k! · (x)_k`,
/// truncated at the detected degree.
pub fn newton_reconstruct<S: Scalar>(values: &[S], tol: f64) -> Result<Polynomial<S>, Error> {
    let verdict = detect_degree(values, tol)?;
    let d = match verdict.kind {
        DegreeKind::ZeroSequence => return Ok(Polynomial::zero()),
        DegreeKind::Polynomial(d) => d,
        DegreeKind::NotPolynomialWithinWindow => {
            return Err(Error::NotPolynomial { window: values.len() })
        }
    };
    let coeffs = newton_coefficients(values);
    let mut p = Polynomial::zero();
    for (k, c) in coeffs.iter().enumerate().take(d + 1) {
        let kfact = int::<S>(&factorial(k as u64));
        let c = c.checked_div(&kfact).expect("k! is nonzero");
        p = p.add(&Polynomial::falling_factorial(k).scale(&c));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Degree;
    use crate::scalar::{GaussianRational as Q, C64};
    use alloc::vec;

    fn seq(f: impl Fn(i64) -> i64, len: i64) -> Vec<Q> {
        (0..len).map(|n| Q::from_i64(f(n))).collect()
    }

    #[test]
    fn constant_sequence_first_row_vanishes() {
        let t = difference_table(&seq(|_| 1, 4), 1).unwrap();
        assert_eq!(t.row(1), &[Q::zero(), Q::zero(), Q::zero()]);
        let t = difference_table(&seq(|_| 3, 4), 1).unwrap();
        assert!(t.row(1).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn squares_second_row_is_two() {
        // (n+1)² − 2n² ... by hand: Δn² = 2n+1, Δ²n² = 2, Δ³n² = 0
        let t = difference_table(&seq(|n| n * n, 5), 3).unwrap();
        assert_eq!(t.row(2), &[Q::from_i64(2), Q::from_i64(2), Q::from_i64(2)]);
        assert_eq!(t.row(3), &[Q::zero(), Q::zero()]);
    }

    #[test]
    fn depth_must_fit_window() {
        assert!(matches!(difference_table(&seq(|n| n, 3), 3), Err(Error::DepthTooLarge { .. })));
    }

    #[test]
    fn degree_examples() {
        let v = detect_degree(&seq(|n| n + 1, 8), 0.0).unwrap();
        assert_eq!(v.kind, DegreeKind::Polynomial(1));
        let v = detect_degree(&seq(|n| 1 << n, 10), 0.0).unwrap();
        assert_eq!(v.kind, DegreeKind::NotPolynomialWithinWindow);
        let v = detect_degree(&seq(|_| 5, 6), 0.0).unwrap();
        assert_eq!(v.kind, DegreeKind::Polynomial(0));
        let v = detect_degree(&seq(|_| 0, 6), 0.0).unwrap();
        assert_eq!(v.kind, DegreeKind::ZeroSequence);
        assert!(detect_degree(&seq(|_| 0, 2), 0.0).is_err());
    }

    #[test]
    fn float_degree_with_cancellation() {
        let vals: Vec<C64> = (0..14).map(|n| C64::new(1.0 + 0.1 * (n * n * n) as f64, 0.0)).collect();
        let v = detect_degree(&vals, DEFAULT_TOL).unwrap();
        assert_eq!(v.kind, DegreeKind::Polynomial(3));
        assert!(v.residual < 1e-9);
    }

    #[test]
    fn reconstruct_examples() {
        let p = newton_reconstruct(&seq(|n| n * n, 6), 0.0).unwrap();
        assert_eq!(p, Polynomial::new(vec![Q::zero(), Q::zero(), Q::one()]));
        let p = newton_reconstruct(&seq(|_| 7, 4), 0.0).unwrap();
        assert_eq!(p, Polynomial::constant(Q::from_i64(7)));
        let p = newton_reconstruct(&seq(|n| n + 1, 8), 0.0).unwrap();
        assert_eq!(p, Polynomial::new(vec![Q::one(), Q::one()]));
        assert_eq!(p.degree(), Degree::Finite(1));
        assert!(matches!(
            newton_reconstruct(&seq(|n| 1 << n, 10), 0.0),
            Err(Error::NotPolynomial { .. })
        ));
    }

    #[test]
    fn orbit_sequence_rejects_negative_samples() {
        assert!(OrbitSequence::new(seq(|n| n, 4), 0.0).is_ok());
        assert!(OrbitSequence::new(seq(|n| -n, 4), 0.0).is_err());
        assert!(OrbitSequence::new(vec![Q::imag_unit(), Q::one()], 0.0).is_err());
        assert!(OrbitSequence::new(seq(|n| n, 1), 0.0).is_err());
    }
}
