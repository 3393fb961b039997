mod common;

use common::*;
use misolab_core::difference::{
    binomial_difference, detect_degree, difference_table, newton_reconstruct, DegreeKind,
};
use misolab_core::isometry::orbit_norms;
use misolab_core::{GaussianRational as Q, Polynomial};
use proptest::prelude::*;

fn polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial<Q>> {
    proptest::collection::vec((-9i64..=9, -9i64..=9, 1i64..=4), 0..=max_deg + 1)
        .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(a, b, c)| ratio(a, b, c)).collect()))
}

fn sample(p: &Polynomial<Q>, len: u64) -> Vec<Q> {
    (0..len).map(|n| p.eval_at(n)).collect()
}

proptest! {
    #[test]
    fn newton_roundtrip_is_exact(p in polynomial(6)) {
        let values = sample(&p, 12);
        let r = newton_reconstruct(&values, 0.0).unwrap();
        prop_assert_eq!(r, p.clone());
        let v = detect_degree(&values, 0.0).unwrap();
        match p.degree() {
            misolab_core::Degree::NegInfinity => prop_assert_eq!(v.kind, DegreeKind::ZeroSequence),
            misolab_core::Degree::Finite(d) => prop_assert_eq!(v.kind, DegreeKind::Polynomial(d)),
        }
    }

    #[test]
    fn binomial_form_matches_iterated_subtraction(values in proptest::collection::vec(small_gauss(), 3..10)) {
        let depth = values.len() - 1;
        let table = difference_table(&values, depth).unwrap();
        for m in 0..=depth {
            for n in 0..values.len() - m {
                prop_assert_eq!(&table.row(m)[n], &binomial_difference(&values, m, n).unwrap());
            }
        }
    }

    #[test]
    fn orbit_differences_shift_along_the_orbit(t in square(3), h in vector(3), m in 0usize..=4, n in 0usize..=4) {
        let g = orbit_norms(&t, &h, m + n + 1).unwrap();
        let moved = orbit_point(&t, &h, n);
        let g_moved = orbit_norms(&t, &moved, m + 1).unwrap();
        prop_assert_eq!(binomial_difference(&g, m, n).unwrap(), binomial_difference(&g_moved, m, 0).unwrap());
    }
}

#[test]
fn degree_verdict_is_window_relative() {
    // (n)_6 vanishes on 0..6, so a short window sees the zero sequence.
    let p = Polynomial::<Q>::falling_factorial(6);
    assert_eq!(detect_degree(&sample(&p, 6), 0.0).unwrap().kind, DegreeKind::ZeroSequence);
    assert_eq!(detect_degree(&sample(&p, 8), 0.0).unwrap().kind, DegreeKind::Polynomial(6));
    let powers: Vec<Q> = (0..8).map(|n| q(1 << n)).collect();
    assert_eq!(detect_degree(&powers, 0.0).unwrap().kind, DegreeKind::NotPolynomialWithinWindow);
}
