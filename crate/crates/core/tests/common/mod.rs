#![allow(dead_code)]

use misolab_core::{GaussianRational as Q, Matrix, Scalar};
use proptest::prelude::*;

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

pub fn gauss(re: i64, im: i64) -> Q {
    Q::from_i64(re) + Q::from_i64(im) * Q::imag_unit()
}

pub fn small_gauss() -> impl Strategy<Value = Q> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| gauss(a, b))
}

pub fn square(dim: usize) -> impl Strategy<Value = Matrix<Q>> {
    proptest::collection::vec(small_gauss(), dim * dim)
        .prop_map(move |v| Matrix::from_fn(dim, |i, j| v[i * dim + j].clone()))
}

pub fn vector(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(small_gauss(), dim)
}

/// Unimodular Gaussian rationals with small denominators.
pub fn unimodular() -> impl Strategy<Value = Q> {
    prop_oneof![
        Just(q(1)),
        Just(q(-1)),
        Just(Q::imag_unit()),
        Just(-Q::imag_unit()),
        Just(ratio(3, 4, 5)),
        Just(ratio(-3, 4, 5)),
        Just(ratio(5, -12, 13)),
        Just(ratio(-8, -15, 17)),
    ]
}

/// `(a + bi)/c`.
pub fn ratio(a: i64, b: i64, c: i64) -> Q {
    (gauss(a, b)).checked_div(&q(c)).unwrap()
}

/// `⟨u, v⟩` written out, conjugating the second slot.
pub fn inner(u: &[Q], v: &[Q]) -> Q {
    u.iter().zip(v).fold(q(0), |acc, (a, b)| acc + a.clone() * b.conj())
}

pub fn apply(t: &Matrix<Q>, v: &[Q]) -> Vec<Q> {
    t.apply(v).unwrap()
}

/// `T^n v` by repeated application.
pub fn orbit_point(t: &Matrix<Q>, v: &[Q], n: usize) -> Vec<Q> {
    (0..n).fold(v.to_vec(), |acc, _| apply(t, &acc))
}
