//! Unilateral weighted shifts `W e_n = λ_n e_{n+1}` on finitely supported
//! sequences.
//!
//! Only squared weights `|λ_n|²` are stored. Orbit norms use
//! `‖Wⁿf‖² = Σ_j |f_j|² ‖Wⁿe_j‖²` (the images of distinct basis vectors stay
//! orthogonal), so exact mode never needs a square root.

use alloc::vec::Vec;

use crate::difference::{self, newton_coefficients};
use crate::error::Error;
use crate::isometry::{self, OrbitSource};
use crate::matrix::Matrix;
use crate::polynomial::Polynomial;
use crate::scalar::Scalar;
use crate::vector::FiniteVector;

/// Orbit samples used by shift tests for order `m`.
pub fn default_window(m: usize) -> usize {
    2 * m + 4
}

/// Weights needed to follow `basis_count` basis orbits over the window.
pub fn default_prefix_len(m: usize, basis_count: usize) -> usize {
    default_window(m) + basis_count
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightRule<S> {
    /// `|λ_n|² = p(n+1)/p(n)`.
    Polynomial(Polynomial<S>),
    /// `|λ_n|² = table[n]` for `n < table.len()`; later weights are unknown.
    Table(Vec<S>),
    Constant(S),
}

/// How positivity of a generating polynomial on the nonnegative integers
/// was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    /// `p(0) > 0` and every forward difference `(Δ^k p)(0)` is `≥ 0`, so
    /// `p(n) = Σ_k (Δ^k p)(0) C(n,k) > 0` for every `n`.
    Certified,
    /// Checked for `n ≤ prefix_len` only.
    PrefixOnly(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedShift<S> {
    rule: WeightRule<S>,
    positivity: Option<Positivity>,
}

impl<S: Scalar> WeightedShift<S> {
    /// Shift with every weight equal to one.
    pub fn unweighted() -> Self {
        Self::constant(S::one()).expect("one is positive")
    }

    /// `|λ_n|² = c` for every `n`.
    pub fn constant(squared_weight: S) -> Result<Self, Error> {
        if !squared_weight.is_positive_real(0.0) {
            return Err(Error::NonPositive { n: 0 });
        }
        Ok(WeightedShift { rule: WeightRule::Constant(squared_weight), positivity: None })
    }

    /// Shift from an explicit prefix of squared weights.
    pub fn from_squared_weights(table: Vec<S>) -> Result<Self, Error> {
        if let Some(n) = table.iter().position(|w| !w.is_positive_real(0.0)) {
            return Err(Error::NonPositive { n });
        }
        Ok(WeightedShift { rule: WeightRule::Table(table), positivity: None })
    }

    pub fn rule(&self) -> &WeightRule<S> {
        &self.rule
    }

    /// Set for shifts built from a polynomial.
    pub fn positivity(&self) -> Option<Positivity> {
        self.positivity
    }

    /// Number of known weights, `None` when every weight is defined.
    pub fn prefix_len(&self) -> Option<usize> {
        match &self.rule {
            WeightRule::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    /// `|λ_n|²`.
    pub fn squared_weight(&self, n: usize) -> Result<S, Error> {
        match &self.rule {
            WeightRule::Constant(c) => Ok(c.clone()),
            WeightRule::Table(t) => t
                .get(n)
                .cloned()
                .ok_or(Error::WeightOutOfRange { n, prefix: t.len() }),
            WeightRule::Polynomial(p) => {
                let a = p.eval_at(n as u64);
                let b = p.eval_at(n as u64 + 1);
                for (k, v) in [(n, &a), (n + 1, &b)] {
                    if !v.is_positive_real(0.0) {
                        return Err(Error::NonPositive { n: k });
                    }
                }
                Ok(b.checked_div(&a).expect("positive"))
            }
        }
    }

    /// `λ_n = +√|λ_n|²`; exact mode fails for irrational square roots.
    pub fn weight(&self, n: usize) -> Result<S, Error> {
        self.squared_weight(n)?
            .re()
            .sqrt_nonneg()
            .ok_or(Error::IrrationalWeight { n })
    }

    pub fn apply(&self, f: &FiniteVector<S>) -> Result<FiniteVector<S>, Error> {
        let mut pairs = Vec::new();
        for (n, c) in f.iter() {
            pairs.push((n + 1, self.weight(n)? * c.clone()));
        }
        Ok(FiniteVector::from_pairs(pairs))
    }

    /// `‖Wⁿe_j‖² = Π_{i=j}^{j+n−1} |λ_i|²` for `n = 0..len`.
    pub fn basis_orbit_norms(&self, j: usize, len: usize) -> Result<Vec<S>, Error> {
        let mut out = Vec::with_capacity(len);
        let mut acc = S::one();
        for n in 0..len {
            if n > 0 {
                acc = acc * self.squared_weight(j + n - 1)?;
            }
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// Truncation to `span{e_0, …, e_{dim−1}}`, as a `dim × dim` matrix
    /// (`e_{dim−1}` is sent to zero). Needs real square roots of the weights.
    pub fn truncation(&self, dim: usize) -> Result<Matrix<S>, Error> {
        let mut m = Matrix::zeros(dim);
        for n in 0..dim.saturating_sub(1) {
            m.set(n + 1, n, self.weight(n)?);
        }
        Ok(m)
    }
}

impl<S: Scalar> OrbitSource<S> for WeightedShift<S> {
    type Vector = FiniteVector<S>;

    fn orbit_inner(&self, f: &FiniteVector<S>, g: &FiniteVector<S>, len: usize) -> Result<Vec<S>, Error> {
        let mut out: Vec<S> = (0..len).map(|_| S::zero()).collect();
        for (j, a) in f.iter() {
            let b = g.get(j);
            if b.is_zero() {
                continue;
            }
            let c = a.clone() * b.conj();
            for (slot, w) in out.iter_mut().zip(self.basis_orbit_norms(j, len)?) {
                *slot = slot.clone() + c.clone() * w;
            }
        }
        Ok(out)
    }

    fn default_window(&self) -> usize {
        match &self.rule {
            WeightRule::Polynomial(p) => match p.degree() {
                crate::polynomial::Degree::Finite(d) => default_window(d + 1),
                crate::polynomial::Degree::NegInfinity => default_window(1),
            },
            WeightRule::Constant(_) => default_window(1),
            WeightRule::Table(t) => (t.len() / 2 + 1).max(3),
        }
    }
}

/// Weighted shift with `|λ_n|² = p(n+1)/p(n)`, so that
/// `‖Wⁿe_j‖² = p(n+j)/p(j)` and `W` is a `(deg p + 1)`-isometry.
pub fn shift_from_polynomial<S: Scalar>(p: &Polynomial<S>, prefix_len: usize) -> Result<WeightedShift<S>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let bound = 1e-12 * p.coeffs().iter().map(Scalar::magnitude).fold(0.0, f64::max);
    if let Some(power) = p.first_non_real(bound) {
        return Err(Error::NonRealCoefficient { power });
    }
    let p = p.re_part();
    for n in 0..=prefix_len {
        if !p.eval_at(n as u64).is_positive_real(0.0) {
            return Err(Error::NonPositive { n });
        }
    }
    let deg = match p.degree() {
        crate::polynomial::Degree::Finite(d) => d,
        crate::polynomial::Degree::NegInfinity => unreachable!("nonzero polynomial"),
    };
    let samples: Vec<S> = (0..=deg as u64).map(|n| p.eval_at(n)).collect();
    let newton = newton_coefficients(&samples);
    let certified = newton.iter().all(|c| c.is_positive_real(0.0) || c.is_negligible(bound));
    let positivity = if certified { Positivity::Certified } else { Positivity::PrefixOnly(prefix_len) };
    Ok(WeightedShift { rule: WeightRule::Polynomial(p), positivity: Some(positivity) })
}

/// `W_{T,h}` with `|λ_n|² = ‖T^{n+1}h‖² / ‖Tⁿh‖²` for `n < prefix_len`, so that
/// `‖W_{T,h}ⁿ e_0‖² = ‖Tⁿh‖² / ‖h‖²`.
pub fn localization_shift<S: Scalar>(t: &Matrix<S>, h: &[S], prefix_len: usize) -> Result<WeightedShift<S>, Error> {
    let h = h.to_vec();
    let norms = isometry::orbit_norms(t, &h, prefix_len + 1)?;
    let scale = norms[0].magnitude();
    if norms[0].is_negligible(0.0) {
        return Err(Error::ZeroVector);
    }
    let mut table = Vec::with_capacity(prefix_len);
    for n in 0..prefix_len {
        if norms[n + 1].re().is_negligible(1e-300 * scale) {
            return Err(Error::VanishingOrbit { step: n + 1 });
        }
        table.push(norms[n + 1].re().checked_div(&norms[n].re()).expect("nonzero"));
    }
    Ok(WeightedShift { rule: WeightRule::Table(table), positivity: None })
}

/// `Δ^m γ_{W,e_j} ≡ 0` over the window for each `j < basis_count`. By the
/// orthogonal-basis formula this covers every vector supported on those
/// indices.
pub fn shift_is_m_isometry<S: Scalar>(
    w: &WeightedShift<S>,
    m: usize,
    basis_count: usize,
    window: Option<usize>,
    tol: f64,
) -> Result<bool, Error> {
    if m == 0 || basis_count == 0 {
        return Err(Error::InvalidArgument("m and basis_count must be positive".into()));
    }
    let window = window.unwrap_or_else(|| default_window(m));
    for j in 0..basis_count {
        let gamma = w.basis_orbit_norms(j, window)?;
        let table = difference::difference_table(&gamma, m)?;
        if !difference::row_vanishes(&gamma, table.row(m), m, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussianRational as Q, C64};
    use alloc::vec;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn poly(cs: &[i64]) -> Polynomial<Q> {
        Polynomial::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn linear_generator_telescopes() {
        let w = shift_from_polynomial(&poly(&[1, 1]), 20).unwrap();
        assert_eq!(w.squared_weight(0).unwrap(), q(2));
        assert_eq!(w.squared_weight(3).unwrap(), Q::from_ratio(5, 4));
        let g = w.basis_orbit_norms(0, 6).unwrap();
        assert_eq!(g, (1..=6).map(q).collect::<Vec<_>>());
        assert_eq!(w.positivity(), Some(Positivity::Certified));
        assert!(shift_is_m_isometry(&w, 2, 3, None, 0.0).unwrap());
        assert!(!shift_is_m_isometry(&w, 1, 3, None, 0.0).unwrap());
    }

    #[test]
    fn constant_generator_is_unweighted() {
        let w = shift_from_polynomial(&poly(&[1]), 10).unwrap();
        assert_eq!(w.squared_weight(7).unwrap(), q(1));
        assert!(shift_is_m_isometry(&WeightedShift::<Q>::unweighted(), 1, 4, None, 0.0).unwrap());
    }

    #[test]
    fn square_generator_has_degree_two() {
        let w = shift_from_polynomial(&poly(&[1, 2, 1]), 20).unwrap();
        let g = w.basis_orbit_norms(0, 6).unwrap();
        assert_eq!(g, (1..=6).map(|n| q(n * n)).collect::<Vec<_>>());
        assert!(shift_is_m_isometry(&w, 3, 3, None, 0.0).unwrap());
        assert!(!shift_is_m_isometry(&w, 2, 3, None, 0.0).unwrap());
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(shift_from_polynomial(&poly(&[-1, 1]), 5), Err(Error::NonPositive { n: 0 })));
        assert!(matches!(shift_from_polynomial(&poly(&[3, -1]), 5), Err(Error::NonPositive { n: 3 })));
        assert!(matches!(shift_from_polynomial(&poly(&[]), 5), Err(Error::ZeroPolynomial)));
        let c = Polynomial::new(vec![q(1), Q::imag_unit()]);
        assert!(matches!(shift_from_polynomial(&c, 5), Err(Error::NonRealCoefficient { power: 1 })));
        // (x−2)² + 1 is positive everywhere but Δp(0) = −3
        let w = shift_from_polynomial(&poly(&[5, -4, 1]), 8).unwrap();
        assert_eq!(w.positivity(), Some(Positivity::PrefixOnly(8)));
    }

    #[test]
    fn geometric_weights_are_never_isometric() {
        let w = WeightedShift::constant(q(2)).unwrap();
        for m in 1..=6 {
            assert!(!shift_is_m_isometry(&w, m, 2, None, 0.0).unwrap());
        }
        assert!(matches!(w.weight(0), Err(Error::IrrationalWeight { n: 0 })));
        let wf = WeightedShift::constant(C64::new(2.0, 0.0)).unwrap();
        assert!((wf.weight(0).unwrap().re - libm::sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn localization_examples() {
        let t = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(1)]]).unwrap();
        let w = localization_shift(&t, &[q(0), q(1)], 6).unwrap();
        for n in 0..6i64 {
            assert_eq!(w.squared_weight(n as usize).unwrap(), Q::from_ratio((n + 1) * (n + 1) + 1, n * n + 1));
        }
        let d = Matrix::diagonal(&[q(2), q(1)]);
        let w = localization_shift(&d, &[q(1), q(0)], 4).unwrap();
        assert!((0..4).all(|n| w.squared_weight(n).unwrap() == q(4)));
        assert!(matches!(w.squared_weight(4), Err(Error::WeightOutOfRange { n: 4, prefix: 4 })));

        assert!(matches!(localization_shift(&d, &[q(0), q(0)], 4), Err(Error::ZeroVector)));
        let nil = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]]).unwrap();
        assert!(matches!(localization_shift(&nil, &[q(0), q(1)], 4), Err(Error::VanishingOrbit { step: 2 })));
    }

    #[test]
    fn apply_and_orbit_inner_agree() {
        let w = shift_from_polynomial(&poly(&[1, 2, 1]), 20).unwrap();
        let f = FiniteVector::from_pairs([(0, q(1)), (1, q(2))]);
        let wf = w.apply(&f).unwrap();
        assert_eq!(wf.get(1), q(2));
        assert_eq!(wf.get(2), Q::from_ratio(3, 1));
        let g = w.orbit_inner(&f, &f, 2).unwrap();
        assert_eq!(g[1], wf.norm_sqr());
    }
}
