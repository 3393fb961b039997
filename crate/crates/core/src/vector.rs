//! Finitely supported sequences `Σ c_n e_n`, the dense subspace on which
//! weighted shifts act.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalar::{self, Scalar};

/// Sparse vector in canonical form: no stored coefficient is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteVector<S> {
    support: BTreeMap<usize, S>,
}

impl<S: Scalar> Default for FiniteVector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> FiniteVector<S> {
    pub fn zero() -> Self {
        FiniteVector { support: BTreeMap::new() }
    }

    /// Standard basis vector `e_n`.
    pub fn basis(n: usize) -> Self {
        Self::from_pairs([(n, S::one())])
    }

    /// Later pairs with a repeated index are added to earlier ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut v = Self::zero();
        for (n, c) in pairs {
            v.add_at(n, c);
        }
        v
    }

    pub fn from_dense(coeffs: &[S]) -> Self {
        Self::from_pairs(coeffs.iter().cloned().enumerate())
    }

    fn add_at(&mut self, n: usize, c: S) {
        let sum = match self.support.remove(&n) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.support.insert(n, sum);
        }
    }

    pub fn get(&self, n: usize) -> S {
        self.support.get(&n).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.support.iter().map(|(&n, c)| (n, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.support.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_at(n, c.clone());
        }
        out
    }

    pub fn scale(&self, alpha: &S) -> Self {
        Self::from_pairs(self.iter().map(|(n, c)| (n, alpha.clone() * c.clone())))
    }

    /// `⟨self, other⟩ = Σ self_n · conj(other_n)`.
    pub fn inner(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (n, a) in self.iter() {
            if let Some(b) = other.support.get(&n) {
                acc = acc + a.clone() * b.conj();
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> S {
        self.inner(self)
    }

    /// Drops coefficients of modulus at most `bound`. Never applied implicitly.
    pub fn cleanup(&self, bound: f64) -> Self {
        FiniteVector {
            support: self
                .support
                .iter()
                .filter(|(_, c)| !c.is_negligible(bound))
                .map(|(&n, c)| (n, c.clone()))
                .collect(),
        }
    }
}

/// Inner product of dense vectors, conjugate-linear in the second slot.
pub fn inner<S: Scalar>(u: &[S], v: &[S]) -> Result<S, Error> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { left: u.len(), right: v.len() });
    }
    Ok(scalar::dot(u, v))
}

/// Standard basis vector of length `dim`.
pub fn unit<S: Scalar>(dim: usize, j: usize) -> Vec<S> {
    (0..dim).map(|i| if i == j { S::one() } else { S::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    #[test]
    fn canonical_form_drops_zeros() {
        let v = FiniteVector::from_pairs([(2, Q::one()), (2, -Q::one()), (4, Q::from_i64(3))]);
        assert_eq!(v.support(), alloc::vec![4]);
    }

    #[test]
    fn disjoint_support_is_orthogonal() {
        let a = FiniteVector::<Q>::basis(2);
        let b = FiniteVector::<Q>::basis(5);
        assert_eq!(a.inner(&b), Q::zero());
        assert_eq!(a.norm_sqr(), Q::one());
    }

    #[test]
    fn dense_inner_examples() {
        let i = Q::imag_unit();
        let u = [Q::one(), Q::zero()];
        let v = [i.clone(), Q::one()];
        assert_eq!(inner(&u, &v).unwrap(), -i);
        let w = [Q::from_i64(3), Q::from_i64(4)];
        assert_eq!(inner(&w, &w).unwrap(), Q::from_i64(25));
        assert!(inner(&u, &[Q::one()]).is_err());
    }

    #[test]
    fn float_cleanup_is_explicit() {
        use crate::scalar::C64;
        let v = FiniteVector::from_pairs([(0, C64::new(1e-14, 0.0)), (1, C64::new(1.0, 0.0))]);
        assert_eq!(v.support().len(), 2);
        assert_eq!(v.cleanup(1e-12).support(), alloc::vec![1]);
    }
}
