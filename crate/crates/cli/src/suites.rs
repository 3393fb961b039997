//! Named invariant suites for `misolab verify`.

use misolab_core::corpus::{self, CouplingKind, CorpusItem};
use misolab_core::difference::{self, DegreeKind};
use misolab_core::isometry::{self, default_m_max, strict_order, OrderKind};
use misolab_core::scalar::format_scalar;
use misolab_core::shift::{shift_from_polynomial, shift_is_m_isometry};
use misolab_core::spectral::{
    algebraic_decompose, jordan_matrix, jordan_pair_equivalences, perturbation_analysis, JordanSpec,
};
use misolab_core::{GaussianRational as Q, Matrix, Polynomial, Scalar, C64};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::report::SuiteReport;

pub const SUITES: [&str; 9] = [
    "jordan-orders",
    "worked-example",
    "newton-roundtrip",
    "defect-consistency",
    "shift-factory",
    "decomposition",
    "perturbation",
    "float-robustness",
    "density",
];

/// Float tolerance of the robustness suite and its residual ceiling.
pub const FLOAT_TOL: f64 = 1e-8;
pub const MAX_RESIDUAL: f64 = 1e-6;

pub fn run(name: &str, seed: u64) -> Result<Vec<SuiteReport>, CliError> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_one(s, seed)).collect());
    }
    if !SUITES.contains(&name) {
        return Err(CliError::Parse(format!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", "))));
    }
    Ok(vec![run_one(name, seed)])
}

pub fn run_one(name: &str, seed: u64) -> SuiteReport {
    let mut c = Checker::new(name, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match name {
        "jordan-orders" => jordan_orders(&mut c, &mut rng),
        "worked-example" => worked_example(&mut c),
        "newton-roundtrip" => newton_roundtrip(&mut c, &mut rng),
        "defect-consistency" => defect_consistency(&mut c, &mut rng),
        "shift-factory" => shift_factory::<Q>(&mut c),
        "decomposition" => decomposition(&mut c, &mut rng),
        "perturbation" => perturbation(&mut c, &mut rng),
        "float-robustness" => float_robustness(&mut c, &mut rng),
        "density" => density(&mut c, &mut rng),
        _ => unreachable!("checked by run"),
    };
    if let Err(e) = outcome {
        c.violations.push(format!("error: {e}"));
    }
    c.finish()
}

struct Checker {
    name: String,
    seed: u64,
    cases: usize,
    violations: Vec<String>,
    max_residual: Option<f64>,
}

impl Checker {
    fn new(name: &str, seed: u64) -> Self {
        Checker { name: name.into(), seed, cases: 0, violations: Vec::new(), max_residual: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(what());
        }
    }

    fn residual(&mut self, r: f64, what: &str) {
        let cur = self.max_residual.unwrap_or(0.0);
        self.max_residual = Some(cur.max(r));
        if !(r <= MAX_RESIDUAL) {
            self.violations.push(format!("{what}: residual {r:.3e}"));
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            seed: self.seed,
            cases: self.cases,
            violations: self.violations,
            max_residual: self.max_residual,
        }
    }
}

type Outcome = Result<(), misolab_core::Error>;

fn gauss(re: i64, im: i64, den: i64) -> Q {
    Q::from_ratio(re, den) + Q::from_ratio(im, den) * Q::imag_unit()
}

/// The five eigenvalues of the order-law table.
pub fn order_law_values() -> Vec<Q> {
    vec![gauss(1, 0, 1), gauss(-1, 0, 1), gauss(0, 1, 1), gauss(0, -1, 1), gauss(3, 4, 5)]
}

fn jordan_orders(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    let mut cases: Vec<(Q, usize)> = Vec::new();
    for z in order_law_values() {
        for k in 1..=5 {
            cases.push((z.clone(), k));
        }
    }
    let pool = corpus::unimodular_values();
    for _ in 0..10 {
        cases.push((pool[corpus::below(rng, pool.len())].clone(), 1 + corpus::below(rng, 5)));
    }
    for (z, k) in cases {
        let t = jordan_matrix(&JordanSpec::new(z.clone(), k))?;
        let v = strict_order(&t, 2 * k + 3, 0.0);
        c.check(v.kind == OrderKind::StrictOrder(2 * k - 1), || {
            format!("J({}, {k}): {:?}, expected strict order {}", format_scalar(&z), v.kind, 2 * k - 1)
        });
    }
    for z in corpus::off_circle_values() {
        for k in 1..=3 {
            let t = jordan_matrix(&JordanSpec::new(z.clone(), k))?;
            let v = strict_order(&t, 2 * k + 3, 0.0);
            c.check(v.order().is_none(), || format!("J({}, {k}) off the circle: {:?}", format_scalar(&z), v.kind));
        }
    }
    Ok(())
}

/// `T = [[i, 2], [0, −i]]`, `h₁ = (1, 0)`, `h₂ = (i, 1)`.
pub fn worked_example_operator<S: Scalar>() -> (Matrix<S>, Vec<S>, Vec<S>) {
    let i = S::imag_unit();
    let t = Matrix::from_rows(vec![vec![i.clone(), S::from_i64(2)], vec![S::zero(), -i.clone()]]).expect("square");
    (t, vec![S::one(), S::zero()], vec![i, S::one()])
}

fn worked_example(c: &mut Checker) -> Outcome {
    let (t, h1, h2) = worked_example_operator::<Q>();
    let sum: Vec<Q> = h1.iter().zip(&h2).map(|(a, b)| a.clone() + b.clone()).collect();
    let norms = isometry::orbit_norms(&t, &sum, 21)?;
    c.check(norms.iter().all(|x| *x == Q::from_i64(3)), || "orbit of h1 + h2 is not constantly 3".into());
    let mut p1 = h1.clone();
    for k in 0..=6 {
        let mut p2 = h2.clone();
        for l in 0..=6 {
            let inner = misolab_core::vector::inner(&p1, &p2)?;
            let expected = -power(&Q::imag_unit(), k + l + 1);
            c.check(inner == expected, || format!("<T^{k} h1, T^{l} h2> = {}", format_scalar(&inner)));
            p2 = t.apply(&p2)?;
        }
        p1 = t.apply(&p1)?;
    }
    let v = strict_order(&t, 9, 0.0);
    c.check(v.kind == OrderKind::NotWithinBound(9), || format!("worked example: {:?}", v.kind));
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let i = Q::imag_unit();
    let p = jordan_pair_equivalences(&t, &h1, &h2, &i, &-i.clone(), None, 0.0, &mut rng)?;
    c.check(p.conditions.iter().all(|&b| !b), || format!("pair conditions {:?}, expected all false", p.conditions));

    let j = jordan_matrix(&JordanSpec::new(i.clone(), 2))?;
    let norms = isometry::orbit_norms(&j, &vec![Q::one(), Q::zero()], 21)?;
    c.check(norms.iter().all(|x| *x == Q::one()), || "J(i,2) orbit of (1,0) is not constantly 1".into());
    Ok(())
}

fn power<S: Scalar>(z: &S, n: usize) -> S {
    (0..n).fold(S::one(), |acc, _| acc * z.clone())
}

fn small_gauss(rng: &mut impl RngCore, r: i64) -> Q {
    let span = (2 * r + 1) as u64;
    let re = (rng.next_u64() % span) as i64 - r;
    let im = (rng.next_u64() % span) as i64 - r;
    gauss(re, im, 1)
}

fn newton_roundtrip(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..200 {
        let deg = corpus::below(rng, 7);
        let mut coeffs: Vec<Q> = (0..=deg).map(|_| small_gauss(rng, 3)).collect();
        let den = 1 + corpus::below(rng, 4) as i64;
        coeffs = coeffs.into_iter().map(|x| x.checked_div(&Q::from_i64(den)).expect("nonzero")).collect();
        if coeffs[deg].is_zero() {
            coeffs[deg] = Q::one();
        }
        let p = Polynomial::new(coeffs);
        let window = deg + 4;
        let samples: Vec<Q> = (0..window as u64).map(|n| p.eval_at(n)).collect();
        let back = difference::newton_reconstruct(&samples, 0.0)?;
        c.check(back == p, || format!("case {case}: roundtrip changed a degree-{deg} polynomial"));
        let verdict = difference::detect_degree(&samples, 0.0)?;
        c.check(verdict.kind == DegreeKind::Polynomial(deg), || format!("case {case}: degree {:?}", verdict.kind));
        let table = difference::difference_table(&samples, window - 1)?;
        let mut same = true;
        for m in 0..window {
            for n in 0..window - m {
                same &= difference::binomial_difference(&samples, m, n)? == table.row(m)[n];
            }
        }
        c.check(same, || format!("case {case}: binomial form differs from the table"));
    }
    Ok(())
}

fn defect_consistency(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    for case in 0..100 {
        let t = Matrix::from_fn(4, |_, _| small_gauss(rng, 2));
        let seq = isometry::defect_sequence(&t, 6);
        for (m, beta) in seq.iter().enumerate() {
            c.check(*beta == isometry::defect_by_sum(&t, m), || format!("case {case}: recurrence differs at m = {m}"));
        }
        for _ in 0..5 {
            let h: Vec<Q> = (0..4).map(|_| small_gauss(rng, 2)).collect();
            let gamma = isometry::orbit_norms(&t, &h, 7)?;
            let table = difference::difference_table(&gamma, 6)?;
            for (m, beta) in seq.iter().enumerate() {
                let bh = beta.apply(&h)?;
                let mut q = misolab_core::vector::inner(&bh, &h)?;
                if m % 2 == 1 {
                    q = -q;
                }
                c.check(table.row(m)[0] == q, || format!("case {case}: (Δ^{m}γ)_0 differs from ±<β_m h, h>"));
            }
        }
    }
    Ok(())
}

/// `1, x + 1, (x + 1)², x² + 1, 2x + 3`.
pub fn shift_generators<S: Scalar>() -> Vec<Polynomial<S>> {
    let p = |cs: &[i64]| Polynomial::new(cs.iter().map(|&x| S::from_i64(x)).collect());
    vec![p(&[1]), p(&[1, 1]), p(&[1, 2, 1]), p(&[1, 0, 1]), p(&[3, 2])]
}

fn shift_factory<S: Scalar>(c: &mut Checker) -> Outcome {
    let tol = match S::MODE {
        misolab_core::Mode::Exact => 0.0,
        misolab_core::Mode::Float => FLOAT_TOL,
    };
    for p in shift_generators::<S>() {
        let d = match p.degree() {
            misolab_core::Degree::Finite(d) => d,
            misolab_core::Degree::NegInfinity => unreachable!("generators are nonzero"),
        };
        let w = shift_from_polynomial(&p, 32)?;
        c.check(shift_is_m_isometry(&w, d + 1, 4, None, tol)?, || format!("p of degree {d}: not a {}-isometry", d + 1));
        if d >= 1 {
            c.check(!shift_is_m_isometry(&w, d, 4, None, tol)?, || format!("p of degree {d}: already a {d}-isometry"));
        }
        for j in 0..=24usize {
            let norms = w.basis_orbit_norms(j, 25 - j)?;
            let pj = p.eval_at(j as u64);
            for (n, x) in norms.iter().enumerate() {
                let expected = p.eval_at((n + j) as u64).checked_div(&pj).expect("p(j) > 0");
                match S::MODE {
                    misolab_core::Mode::Exact => {
                        c.check(*x == expected, || format!("||W^{n} e_{j}||^2 differs from p(n+j)/p(j)"))
                    }
                    misolab_core::Mode::Float => {
                        let r = (x.clone() - expected.clone()).magnitude() / expected.magnitude();
                        c.residual(r, "shift telescoping");
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_coupling<S: Scalar>(
    c: &mut Checker,
    index: usize,
    item: &CorpusItem,
    t: &Matrix<S>,
    hints: &[S],
    tol: f64,
) -> Outcome {
    let d = algebraic_decompose(t, Some(hints), tol)?;
    let v = strict_order(t, default_m_max(t.dim()), tol);
    let kind = item.kind;
    match kind {
        CouplingKind::Orthogonal => {
            c.check(d.certified(), || format!("item {index}: orthogonal sum not certified: {:?}", d.refusals));
            c.check(v.order() == Some(d.predicted_strict_order), || {
                format!("item {index}: predicted {} but strict order {:?}", d.predicted_strict_order, v.kind)
            });
            c.check(v.order().map_or(false, |m| m % 2 == 1), || format!("item {index}: even order {:?}", v.kind));
        }
        CouplingKind::Sheared | CouplingKind::OffCircle => {
            c.check(!d.certified(), || format!("item {index}: {kind:?} operator certified"));
            c.check(v.order().is_none(), || format!("item {index}: {kind:?} operator has order {:?}", v.kind));
        }
    }
    let back = d.reassemble(t, tol)?;
    let diff = back.sub(t)?;
    match S::MODE {
        misolab_core::Mode::Exact => c.check(diff.is_zero(), || format!("item {index}: reassembly differs")),
        misolab_core::Mode::Float => {
            c.residual(diff.max_abs() / t.max_abs().max(1.0), "reassembly");
            for b in &d.blocks {
                let err = hints.iter().map(|h| (h.clone() - b.z().clone()).magnitude()).fold(f64::INFINITY, f64::min);
                c.residual(err, "eigenvalue");
            }
        }
    }
    Ok(())
}

fn decomposition(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    for (i, item) in corpus::coupling_corpus(20, rng).iter().enumerate() {
        check_coupling(c, i, item, &item.matrix, &item.hints, 0.0)?;
    }
    Ok(())
}

fn perturbation(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..30 {
        let p = corpus::perturbation_item(rng);
        let r = perturbation_analysis(&p.a, &p.n, None, 0.0)?;
        let observed = r.observed.order();
        c.check(r.bound_holds && observed.map_or(false, |m| m <= r.m_n_bound), || {
            format!("pair {i}: order {:?} above the bound {}", r.observed.kind, r.m_n_bound)
        });
        c.check((observed == Some(r.m_n_bound)) == r.strict, || {
            format!("pair {i}: strictness criterion {} but order {:?} (bound {})", r.strict, observed, r.m_n_bound)
        });
    }
    Ok(())
}

fn conjugated(t: &Matrix<Q>, rng: &mut ChaCha8Rng) -> (Matrix<C64>, Matrix<C64>) {
    let u = corpus::random_unitary(t.dim(), rng);
    (corpus::conjugate(&corpus::to_float(t), &u), u)
}

fn float_robustness(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    // order law
    for z in order_law_values() {
        for k in 1..=5 {
            let (t, _) = conjugated(&jordan_matrix(&JordanSpec::new(z.clone(), k))?, rng);
            let v = strict_order(&t, 2 * k + 3, FLOAT_TOL);
            c.check(v.kind == OrderKind::StrictOrder(2 * k - 1), || {
                format!("float J({}, {k}): {:?}", format_scalar(&z), v.kind)
            });
            if let Some(m) = v.order() {
                c.residual(sqrt_clamped(v.defect_norms[m - 1].re), "vanishing defect");
            }
        }
    }

    // worked examples
    let (t, h1, h2) = worked_example_operator::<Q>();
    let (tf, u) = conjugated(&t, rng);
    let h1 = u.apply(&corpus::vector_to_float(&h1))?;
    let h2 = u.apply(&corpus::vector_to_float(&h2))?;
    let sum: Vec<C64> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
    for x in isometry::orbit_norms(&tf, &sum, 21)? {
        c.residual((x - C64::new(3.0, 0.0)).norm() / 3.0, "float worked-example orbit");
    }
    let mut p1 = h1.clone();
    for k in 0..=6 {
        let mut p2 = h2.clone();
        for l in 0..=6 {
            let inner = misolab_core::vector::inner(&p1, &p2)?;
            let expected = -power(&C64::new(0.0, 1.0), k + l + 1);
            c.residual((inner - expected).norm(), "float worked-example inner product");
            p2 = tf.apply(&p2)?;
        }
        p1 = tf.apply(&p1)?;
    }
    let v = strict_order(&tf, 9, FLOAT_TOL);
    c.check(v.kind == OrderKind::NotWithinBound(9), || format!("float worked example: {:?}", v.kind));
    let i = C64::new(0.0, 1.0);
    let p = jordan_pair_equivalences(&tf, &h1, &h2, &i, &-i, None, FLOAT_TOL, rng)?;
    c.check(p.conditions.iter().all(|&b| !b), || format!("float pair conditions {:?}", p.conditions));
    let (jf, u) = conjugated(&jordan_matrix(&JordanSpec::new(gauss(0, 1, 1), 2))?, rng);
    let h = u.apply(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])?;
    for x in isometry::orbit_norms(&jf, &h, 21)? {
        c.residual((x - C64::new(1.0, 0.0)).norm(), "float J(i,2) orbit");
    }

    // shifts
    shift_factory::<C64>(c)?;

    // decomposition corpus
    for (idx, item) in corpus::coupling_corpus(20, rng).iter().enumerate() {
        let (t, _) = conjugated(&item.matrix, rng);
        let hints: Vec<C64> = corpus::vector_to_float(&item.hints);
        check_coupling(c, idx, item, &t, &hints, FLOAT_TOL)?;
    }
    Ok(())
}

fn sqrt_clamped(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn density(c: &mut Checker, rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..10 {
        let m = [3, 5, 7][i % 3];
        let t = corpus::strict_isometry(m, rng);
        let v = strict_order(&t, default_m_max(t.dim()), 0.0);
        c.check(v.order() == Some(m), || format!("operator {i}: order {:?}, expected {m}", v.kind));
        let window = difference::default_window(t.dim());
        let mut hits = 0;
        for _ in 0..50 {
            let h = corpus::random_vector(t.dim(), 100, rng);
            let gamma = isometry::orbit_norms(&t, &h, window)?;
            if difference::detect_degree(&gamma, 0.0)?.kind == DegreeKind::Polynomial(m - 1) {
                hits += 1;
            }
        }
        c.check(hits >= 49, || format!("operator {i}: only {hits}/50 orbits of degree {}", m - 1));
    }
    Ok(())
}
