mod common;

use common::*;
use misolab_core::difference::{detect_degree, DegreeKind};
use misolab_core::isometry::{orbit_norms, strict_order, OrbitSource};
use misolab_core::shift::{
    default_prefix_len, localization_shift, shift_from_polynomial, shift_is_m_isometry, Positivity,
    WeightedShift,
};
use misolab_core::spectral::{jordan_direct_sum, JordanSpec};
use misolab_core::{FiniteVector, GaussianRational as Q, Polynomial, Scalar};
use proptest::prelude::*;

/// `p(x) = Σ_k c_k C(x, k)` with `c_0 > 0` and `c_k ≥ 0`: positive on ℤ₊.
fn positive_polynomial() -> impl Strategy<Value = Polynomial<Q>> {
    (1i64..=5, proptest::collection::vec(0i64..=4, 0..=4)).prop_map(|(c0, rest)| {
        let mut p = Polynomial::constant(q(c0));
        for (k, c) in rest.into_iter().enumerate() {
            let k = k + 1;
            let kfact: i64 = (1..=k as i64).product();
            let term = Polynomial::falling_factorial(k).scale(&Q::from_ratio(c, kfact));
            p = p.add(&term);
        }
        p
    })
}

fn degree(p: &Polynomial<Q>) -> usize {
    match p.degree() {
        misolab_core::Degree::Finite(d) => d,
        misolab_core::Degree::NegInfinity => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polynomial_shift_orbits_telescope(p in positive_polynomial()) {
        let d = degree(&p);
        let w = shift_from_polynomial(&p, 30).unwrap();
        prop_assert_eq!(w.positivity(), Some(Positivity::Certified));
        for j in 0..=24usize {
            let g = w.basis_orbit_norms(j, 25 - j).unwrap();
            for (n, gn) in g.iter().enumerate() {
                prop_assert_eq!(gn.clone(), p.eval_at((n + j) as u64).checked_div(&p.eval_at(j as u64)).unwrap());
            }
        }
        let g = w.basis_orbit_norms(0, 12).unwrap();
        prop_assert_eq!(detect_degree(&g, 0.0).unwrap().kind, DegreeKind::Polynomial(d));
        prop_assert!(shift_is_m_isometry(&w, d + 1, 3, None, 0.0).unwrap());
        if d >= 1 {
            prop_assert!(!shift_is_m_isometry(&w, d, 3, None, 0.0).unwrap());
        }
        for n in 0..30 {
            prop_assert!(!w.squared_weight(n).unwrap().is_zero());
        }
    }

    #[test]
    fn orbit_norms_split_over_the_basis(coeffs in proptest::collection::vec(small_gauss(), 3)) {
        // p = (x+1)² gives rational weights (n+2)/(n+1), so W can be applied exactly.
        let w = shift_from_polynomial(&Polynomial::new(vec![q(1), q(2), q(1)]), 20).unwrap();
        let h = FiniteVector::from_dense(&coeffs);
        let mut v = h.clone();
        for n in 0..8usize {
            let formula = coeffs.iter().enumerate().fold(q(0), |acc, (j, c)| {
                acc + Scalar::norm_sqr(c) * w.basis_orbit_norms(j, n + 1).unwrap()[n].clone()
            });
            prop_assert_eq!(v.norm_sqr(), formula.clone());
            prop_assert_eq!(w.orbit_inner(&h, &h, n + 1).unwrap()[n].clone(), formula);
            v = w.apply(&v).unwrap();
        }
    }

    #[test]
    fn localization_shift_inherits_the_order(
        blocks in proptest::collection::vec((unimodular(), 1usize..=3), 1..=2),
        h in vector(6),
    ) {
        let t = jordan_direct_sum(&blocks.into_iter().map(|(z, k)| JordanSpec::new(z, k)).collect::<Vec<_>>()).unwrap();
        let dim = t.dim();
        let h = &h[..dim];
        prop_assume!(h.iter().any(|x| !x.is_zero()));
        let m = strict_order(&t, 2 * dim + 1, 0.0).order().unwrap();
        let w = localization_shift(&t, h, default_prefix_len(m, 3)).unwrap();
        prop_assert!(shift_is_m_isometry(&w, m, 3, None, 0.0).unwrap());

        let gamma = orbit_norms(&t, &h.to_vec(), 2 * m + 4).unwrap();
        let gw = w.basis_orbit_norms(0, 2 * m + 4).unwrap();
        for (a, b) in gamma.iter().zip(&gw) {
            prop_assert_eq!(a.clone().checked_div(&gamma[0]).unwrap(), b.clone());
        }
        if let Some(d) = detect_degree(&gamma, 0.0).unwrap().degree() {
            prop_assert!(shift_is_m_isometry(&w, d + 1, 1, None, 0.0).unwrap());
            if d >= 1 {
                prop_assert!(!shift_is_m_isometry(&w, d, 1, None, 0.0).unwrap());
            }
        }
    }
}

#[test]
fn listed_generators() {
    let cases: [(&[i64], usize); 5] = [(&[1], 0), (&[1, 1], 1), (&[1, 2, 1], 2), (&[1, 0, 1], 2), (&[3, 2], 1)];
    for (cs, d) in cases {
        let p = Polynomial::new(cs.iter().map(|&c| q(c)).collect());
        let w = shift_from_polynomial(&p, 40).unwrap();
        assert!(shift_is_m_isometry(&w, d + 1, 4, None, 0.0).unwrap());
        if d > 0 {
            assert!(!shift_is_m_isometry(&w, d, 4, None, 0.0).unwrap());
        }
    }
}

#[test]
fn unitary_localization_has_unit_weights() {
    let i = Q::imag_unit();
    let t = misolab_core::Matrix::diagonal(&[i, q(-1)]);
    let w = localization_shift(&t, &[q(3), q(4)], 10).unwrap();
    for n in 0..10 {
        assert_eq!(w.squared_weight(n).unwrap(), q(1));
    }
    assert!(shift_is_m_isometry(&WeightedShift::<Q>::unweighted(), 1, 5, None, 0.0).unwrap());
}
