//! Defect operators, m-isometry tests, strict orders and the sesquilinear
//! defect forms.

use alloc::vec::Vec;

use crate::combinatorics::{factorial, falling_factorial, int, signed_binomial};
use crate::difference::{self, DegreeVerdict};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar};

/// Default relative tolerance for float-mode `β_m = 0` tests.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Algebraic strict orders on a `dim`-dimensional space are at most
/// `2·dim − 1`; two more steps guard against off-by-one use.
pub fn default_m_max(dim: usize) -> usize {
    2 * dim + 1
}

/// `β_m(T) = Σ_{k=0}^{m} (−1)^k C(m,k) T*^k T^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectOperator<S> {
    pub m: usize,
    pub matrix: Matrix<S>,
}

/// `β_0, …, β_{m_max}` by the recurrence `β_{k+1} = β_k − T* β_k T`.
pub fn defect_sequence<S: Scalar>(t: &Matrix<S>, m_max: usize) -> Vec<Matrix<S>> {
    let adj = t.adjoint();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(Matrix::identity(t.dim()));
    for k in 0..m_max {
        let b = &out[k];
        let next = b.sub(&(&(&adj * b) * t)).expect("square operands");
        out.push(next);
    }
    out
}

pub fn defect<S: Scalar>(t: &Matrix<S>, m: usize) -> DefectOperator<S> {
    let matrix = defect_sequence(t, m).pop().expect("nonempty");
    DefectOperator { m, matrix }
}

/// The definitional binomial sum, used as an independent check of [`defect`].
pub fn defect_by_sum<S: Scalar>(t: &Matrix<S>, m: usize) -> Matrix<S> {
    let adj = t.adjoint();
    let mut tk = Matrix::identity(t.dim());
    let mut adjk = Matrix::identity(t.dim());
    let mut acc = Matrix::zeros(t.dim());
    for k in 0..=m {
        let term = (&adjk * &tk).scale(&signed_binomial::<S>(m, k));
        acc = acc.add(&term).expect("same dimension");
        tk = &tk * t;
        adjk = &adjk * &adj;
    }
    acc
}

/// Zero threshold for `β_m`: `tol · max(1, ‖T‖_max)^{2m}` (ignored in exact mode).
pub fn defect_bound<S: Scalar>(t: &Matrix<S>, m: usize, tol: f64) -> f64 {
    tol * libm::pow(t.max_abs().max(1.0), (2 * m) as f64)
}

pub fn is_m_isometry<S: Scalar>(t: &Matrix<S>, m: usize, tol: f64) -> bool {
    defect(t, m).matrix.is_negligible(defect_bound(t, m, tol))
}

/// A vector `h` with `⟨βh, h⟩ ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub vector: Vec<S>,
    pub value: S,
}

/// Searches `e_j`, then `e_i + e_j` and `e_i + i·e_j`. For Hermitian `β` this
/// is complete: the pair forms recover `2 Re β_ij` and `2 Im β_ij`.
pub fn quadratic_witness<S: Scalar>(beta: &Matrix<S>, bound: f64) -> Option<Witness<S>> {
    let n = beta.dim();
    let eval = |h: Vec<S>| {
        let value = scalar::dot(&beta.apply_unchecked(&h), &h);
        (!value.is_negligible(bound)).then_some(Witness { vector: h, value })
    };
    let mut best: Option<Witness<S>> = None;
    for j in 0..n {
        if let Some(w) = eval(crate::vector::unit(n, j)) {
            if best.as_ref().is_none_or(|b| w.value.magnitude() > b.value.magnitude()) {
                best = Some(w);
            }
        }
    }
    if best.is_some() {
        return best;
    }
    for i in 0..n {
        for j in i + 1..n {
            for c in [S::one(), S::imag_unit()] {
                let mut h = crate::vector::unit::<S>(n, i);
                h[j] = c;
                if let Some(w) = eval(h) {
                    return Some(w);
                }
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    StrictOrder(usize),
    NotWithinBound(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderVerdict<S> {
    pub kind: OrderKind,
    /// For `StrictOrder(m)` with `m ≥ 2`: a witness that `β_{m−1} ≠ 0`; for
    /// `NotWithinBound(m)`: a witness that `β_m ≠ 0`.
    pub witness: Option<Witness<S>>,
    /// `max |β_k|²` over entries, for `k = 1..` up to the last one computed.
    pub defect_norms: Vec<S>,
}

impl<S> OrderVerdict<S> {
    pub fn order(&self) -> Option<usize> {
        match self.kind {
            OrderKind::StrictOrder(m) => Some(m),
            OrderKind::NotWithinBound(_) => None,
        }
    }
}

/// Smallest `m ≤ m_max` with `β_m(T) = 0`. Since an m-isometry is a
/// k-isometry for every `k ≥ m`, the first success is the strict order.
pub fn strict_order<S: Scalar>(t: &Matrix<S>, m_max: usize, tol: f64) -> OrderVerdict<S> {
    let seq = defect_sequence(t, m_max.max(1));
    let mut defect_norms = Vec::new();
    for m in 1..=m_max.max(1) {
        defect_norms.push(scalar::max_norm_sqr(seq[m].entries()));
        if seq[m].is_negligible(defect_bound(t, m, tol)) {
            let witness = if m >= 2 {
                quadratic_witness(&seq[m - 1], defect_bound(t, m - 1, tol))
            } else {
                None
            };
            return OrderVerdict { kind: OrderKind::StrictOrder(m), witness, defect_norms };
        }
    }
    let top = m_max.max(1);
    let witness = quadratic_witness(&seq[top], defect_bound(t, top, tol));
    OrderVerdict { kind: OrderKind::NotWithinBound(m_max), witness, defect_norms }
}

/// Checks `T*ⁿTⁿ = Σ_{k<m} (n)_k (−1)^k/k! β_k(T)` for `n = 0..=n_max`.
pub fn newton_expansion_check<S: Scalar>(
    t: &Matrix<S>,
    m: usize,
    n_max: usize,
    tol: f64,
) -> Result<bool, Error> {
    if m == 0 || !is_m_isometry(t, m, tol) {
        return Err(Error::NotMIsometry { m });
    }
    let betas = defect_sequence(t, m - 1);
    let coeffs: Vec<S> = (0..m)
        .map(|k| {
            let sign = if k % 2 == 0 { S::one() } else { -S::one() };
            sign.checked_div(&int::<S>(&factorial(k as u64))).expect("k! is nonzero")
        })
        .collect();
    let adj = t.adjoint();
    let mut tn = Matrix::identity(t.dim());
    let mut adjn = Matrix::identity(t.dim());
    for n in 0..=n_max {
        let lhs = &adjn * &tn;
        let mut rhs = Matrix::zeros(t.dim());
        for (k, beta) in betas.iter().enumerate() {
            let c = coeffs[k].clone() * int::<S>(&falling_factorial(n as u64, k as u64));
            rhs = rhs.add(&beta.scale(&c)).expect("same dimension");
        }
        let diff = lhs.sub(&rhs).expect("same dimension");
        if !diff.is_negligible(tol * lhs.max_abs().max(1.0)) {
            return Ok(false);
        }
        tn = &tn * t;
        adjn = &adjn * &adj;
    }
    Ok(true)
}

/// An operator that can produce orbit inner products `⟨Tⁿf, Tⁿg⟩` using
/// only applications of `T`, so no adjoint is needed.
pub trait OrbitSource<S: Scalar> {
    type Vector: Clone;

    /// `⟨Tⁿf, Tⁿg⟩` for `n = 0..len`.
    fn orbit_inner(&self, f: &Self::Vector, g: &Self::Vector, len: usize) -> Result<Vec<S>, Error>;

    /// Samples used by default for orbit degree detection.
    fn default_window(&self) -> usize;

    /// The exact strict-order verdict, for operators where `β_m` is available.
    fn dense_order(&self, _m_max: Option<usize>, _tol: f64) -> Option<OrderVerdict<S>> {
        None
    }
}

impl<S: Scalar> OrbitSource<S> for Matrix<S> {
    type Vector = Vec<S>;

    fn orbit_inner(&self, f: &Vec<S>, g: &Vec<S>, len: usize) -> Result<Vec<S>, Error> {
        for v in [f, g] {
            if v.len() != self.dim() {
                return Err(Error::DimensionMismatch { left: self.dim(), right: v.len() });
            }
        }
        let same = f == g;
        let (mut a, mut b) = (f.clone(), g.clone());
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(scalar::dot(&a, &b));
            a = self.apply_unchecked(&a);
            b = if same { a.clone() } else { self.apply_unchecked(&b) };
        }
        Ok(out)
    }

    fn default_window(&self) -> usize {
        difference::default_window(self.dim())
    }

    fn dense_order(&self, m_max: Option<usize>, tol: f64) -> Option<OrderVerdict<S>> {
        Some(strict_order(self, m_max.unwrap_or(default_m_max(self.dim())), tol))
    }
}

/// `γ_n = ‖Tⁿh‖²` for `n = 0..len`.
pub fn orbit_norms<S: Scalar, T: OrbitSource<S>>(t: &T, h: &T::Vector, len: usize) -> Result<Vec<S>, Error> {
    t.orbit_inner(h, h, len)
}

/// `F_{T;k}(f,g) = Σ_j (−1)^j C(k,j) ⟨T^j f, T^j g⟩`.
///
/// For a matrix this equals `⟨β_k(T) f, g⟩`, and
/// `⟨Tⁿf, Tⁿg⟩ = Σ_k (n)_k (−1)^k/k! F_{T;k}(f,g)` on m-isometries.
pub struct DefectForm<'a, T> {
    pub source: &'a T,
    pub k: usize,
}

pub fn defect_form<T>(source: &T, k: usize) -> DefectForm<'_, T> {
    DefectForm { source, k }
}

impl<T> DefectForm<'_, T> {
    pub fn eval<S: Scalar>(&self, f: &T::Vector, g: &T::Vector) -> Result<S, Error>
    where
        T: OrbitSource<S>,
    {
        let inner = self.source.orbit_inner(f, g, self.k + 1)?;
        Ok(inner
            .into_iter()
            .enumerate()
            .fold(S::zero(), |acc, (j, x)| acc + signed_binomial::<S>(self.k, j) * x))
    }
}

/// `½ Σ_{j=0}^{2} (−1)^j C(2,j) φ(h₀ + j·h)`, which returns `φ(h)` for any
/// quadratic form `φ` coming from a sesquilinear one, whatever `h₀` is.
pub fn polarization_reconstruct<S: Scalar>(
    phi: impl Fn(&[S]) -> S,
    h: &[S],
    h0: &[S],
) -> Result<S, Error> {
    if h.len() != h0.len() {
        return Err(Error::DimensionMismatch { left: h.len(), right: h0.len() });
    }
    let mut acc = S::zero();
    for j in 0..=2 {
        let v = scalar::axpy(&S::from_i64(j as i64), h, h0);
        acc = acc + signed_binomial::<S>(2, j as usize) * phi(&v);
    }
    Ok(acc.checked_div(&S::from_i64(2)).expect("2 is invertible"))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GlobalOrder<S> {
    /// Exact strict-order verdict from `β_m`.
    Dense(OrderVerdict<S>),
    /// `max(degree + 1)` over the surveyed vectors: any m for which the
    /// operator is an m-isometry is at least this. `None` when some orbit
    /// was not polynomial within its window.
    LowerBound(Option<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Survey<S> {
    pub per_vector: Vec<DegreeVerdict>,
    pub global: GlobalOrder<S>,
}

impl<S> Survey<S> {
    /// Every sampled orbit has degree at most `m − 1`.
    pub fn consistent_with(&self, m: usize) -> bool {
        m >= 1 && self.per_vector.iter().all(|v| v.degree_at_most(m - 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurveyOptions {
    pub window: Option<usize>,
    pub m_max: Option<usize>,
    pub difference_tol: f64,
    pub defect_tol: f64,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            window: None,
            m_max: None,
            difference_tol: difference::DEFAULT_TOL,
            defect_tol: DEFAULT_TOL,
        }
    }
}

/// Degree of `‖Tⁿh‖²` for each `h`, plus a global order verdict.
pub fn local_isometry_survey<S: Scalar, T: OrbitSource<S>>(
    t: &T,
    vectors: &[T::Vector],
    options: SurveyOptions,
) -> Result<Survey<S>, Error> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument("survey needs at least one vector".into()));
    }
    let window = options.window.unwrap_or_else(|| t.default_window());
    let per_vector = vectors
        .iter()
        .map(|h| difference::detect_degree(&orbit_norms(t, h, window)?, options.difference_tol))
        .collect::<Result<Vec<_>, Error>>()?;
    let global = match t.dense_order(options.m_max, options.defect_tol) {
        Some(v) => GlobalOrder::Dense(v),
        None => {
            let mut bound = Some(0);
            for v in &per_vector {
                bound = match (bound, v.kind) {
                    (Some(b), difference::DegreeKind::ZeroSequence) => Some(b),
                    (Some(b), difference::DegreeKind::Polynomial(d)) => Some(b.max(d + 1)),
                    _ => None,
                };
            }
            GlobalOrder::LowerBound(bound)
        }
    };
    Ok(Survey { per_vector, global })
}
