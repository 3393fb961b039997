//! Integer sequences used by the difference calculus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Falling factorial `(n)_k = n(n−1)…(n−k+1)`, with `(n)_0 = 1`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j))
}

pub fn factorial(k: u64) -> BigInt {
    falling_factorial(k, k)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `(−1)^k C(m, k)` as a scalar.
pub(crate) fn signed_binomial<S: Scalar>(m: usize, k: usize) -> S {
    let c = int::<S>(&binomial(m as u64, k as u64));
    if k % 2 == 0 {
        c
    } else {
        -c
    }
}

pub(crate) fn int<S: Scalar>(n: &BigInt) -> S {
    S::from_rational_parts(&BigRational::from_integer(n.clone()), &BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(7, 0), BigInt::one());
    }

    #[test]
    fn falling_factorial_over_factorial_is_pascal() {
        // Pascal's triangle built by addition only.
        let mut row = alloc::vec![BigInt::one()];
        for n in 0..=20u64 {
            for k in 0..=n {
                assert_eq!(&falling_factorial(n, k) / factorial(k), row[k as usize]);
                assert_eq!(binomial(n, k), row[k as usize]);
            }
            let mut next = alloc::vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
    }
}
