//! Jordan blocks, generalized eigenspaces, orthogonal decompositions into
//! unimodular-plus-nilpotent blocks, nilpotent perturbations and the
//! orthogonality tests for generalized eigenvectors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::combinatorics::signed_binomial;
use crate::difference;
use crate::error::Error;
use crate::isometry::{self, OrbitSource, OrderVerdict};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::{self, format_scalar, Mode, Scalar, C64};
use crate::vector::unit;

#[derive(Clone, Debug, PartialEq)]
pub struct JordanSpec<S> {
    pub z: S,
    pub size: usize,
}

impl<S: Scalar> JordanSpec<S> {
    pub fn new(z: S, size: usize) -> Self {
        JordanSpec { z, size }
    }

    pub fn to_matrix(&self) -> Result<Matrix<S>, Error> {
        jordan_matrix(self)
    }
}

/// `z` on the diagonal, `1` on the superdiagonal.
pub fn jordan_matrix<S: Scalar>(spec: &JordanSpec<S>) -> Result<Matrix<S>, Error> {
    if spec.size == 0 {
        return Err(Error::InvalidArgument("Jordan block size must be positive".into()));
    }
    Ok(Matrix::from_fn(spec.size, |i, j| {
        if i == j {
            spec.z.clone()
        } else if j == i + 1 {
            S::one()
        } else {
            S::zero()
        }
    }))
}

/// Orthogonal direct sum of Jordan blocks, in order.
pub fn jordan_direct_sum<S: Scalar>(specs: &[JordanSpec<S>]) -> Result<Matrix<S>, Error> {
    let mut iter = specs.iter();
    let first = iter.next().ok_or(Error::EmptyMatrix)?;
    let mut acc = jordan_matrix(first)?;
    for s in iter {
        acc = acc.direct_sum(&jordan_matrix(s)?);
    }
    Ok(acc)
}

/// `‖z| − 1| ≤ tol` in float mode, `|z|² = 1` exactly otherwise.
pub fn is_unimodular<S: Scalar>(z: &S, tol: f64) -> bool {
    match S::MODE {
        Mode::Exact => z.norm_sqr() == S::one(),
        Mode::Float => (z.magnitude() - 1.0).abs() <= tol,
    }
}

fn power_bound<S: Scalar>(m: &Matrix<S>, k: usize, tol: f64) -> f64 {
    tol * libm::pow(m.max_abs().max(1.0), k as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentInfo<S> {
    /// Smallest `ν` with `N^ν = 0`.
    pub index: usize,
    /// A vector with `N^{ν−1} f ≠ 0`.
    pub witness: Vec<S>,
}

pub fn nilpotency_index<S: Scalar>(n: &Matrix<S>, tol: f64) -> Result<NilpotentInfo<S>, Error> {
    let dim = n.dim();
    let mut prev = Matrix::identity(dim);
    for k in 1..=dim {
        let cur = &prev * n;
        if cur.is_negligible(power_bound(n, k, tol)) {
            let j = (0..dim)
                .max_by(|&a, &b| {
                    let ma = scalar::max_magnitude(&prev.column(a));
                    let mb = scalar::max_magnitude(&prev.column(b));
                    ma.partial_cmp(&mb).expect("finite").then(b.cmp(&a))
                })
                .expect("nonempty");
            return Ok(NilpotentInfo { index: k, witness: unit(dim, j) });
        }
        prev = cur;
    }
    Err(Error::NotNilpotent)
}

/// `E_T(z) = ∪_n ker((T − zI)ⁿ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedEigenspace<S> {
    pub z: S,
    /// Orthonormal in float mode, linearly independent in exact mode.
    pub basis: Vec<Vec<S>>,
    /// Smallest `k` with `ker((T − zI)^k) = E_T(z)`.
    pub chain_depth: usize,
}

impl<S> GeneralizedEigenspace<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspaces<S> {
    pub spaces: Vec<GeneralizedEigenspace<S>>,
    /// Clustering or rank decisions that were close to their thresholds.
    pub warnings: Vec<String>,
}

/// Radius under which float eigenvalues are merged. A Jordan block of size
/// `k` splits under rounding into eigenvalues about `(ε‖T‖)^{1/k}` apart, so
/// a fixed small radius would break defective eigenvalues apart.
pub fn cluster_radius(dim: usize, scale: f64) -> f64 {
    let scale = scale.max(1.0);
    let spread = 4.0 * libm::pow(f64::EPSILON * dim as f64, 1.0 / dim.max(1) as f64);
    (1e-6f64).max(spread) * scale
}

/// One space per distinct eigenvalue. Exact mode needs `hints` (candidate
/// eigenvalues with rational parts) and checks each one by kernel rank; float
/// mode computes and clusters the spectrum, and checks `hints` against it.
pub fn generalized_eigenspaces<S: Scalar>(
    t: &Matrix<S>,
    hints: Option<&[S]>,
    tol: f64,
) -> Result<Eigenspaces<S>, Error> {
    match S::eigenvalues(t) {
        None => exact_eigenspaces(t, hints.ok_or(Error::MissingHints)?, tol),
        Some(eigs) => float_eigenspaces(t, &eigs, hints, tol),
    }
}

fn exact_eigenspaces<S: Scalar>(t: &Matrix<S>, hints: &[S], tol: f64) -> Result<Eigenspaces<S>, Error> {
    let dim = t.dim();
    let mut distinct: Vec<S> = Vec::new();
    for h in hints {
        if !distinct.contains(h) {
            distinct.push(h.clone());
        }
    }
    let mut spaces = Vec::new();
    for z in distinct {
        let shifted = t.shifted(&z);
        let mut power = shifted.clone();
        let mut kernel = S::kernel_basis(&power, tol);
        if kernel.is_empty() {
            return Err(Error::HintNotEigenvalue { hint: format_scalar(&z) });
        }
        let mut depth = 1;
        while depth < dim {
            let next = &power * &shifted;
            let next_kernel = S::kernel_basis(&next, tol);
            if next_kernel.len() == kernel.len() {
                break;
            }
            power = next;
            kernel = next_kernel;
            depth += 1;
        }
        spaces.push(GeneralizedEigenspace { z, basis: kernel, chain_depth: depth });
    }
    let found: usize = spaces.iter().map(GeneralizedEigenspace::dim).sum();
    if found < dim {
        return Err(Error::MissingEigenvalues { found, dim });
    }
    Ok(Eigenspaces { spaces, warnings: Vec::new() })
}

/// Single-linkage clusters of `eigs` at `radius`: (mean, multiplicity).
fn cluster<S: Scalar>(eigs: &[S], radius: f64) -> (Vec<(S, usize)>, Vec<String>) {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    let dist = |a: usize, b: usize| (eigs[a].clone() - eigs[b].clone()).magnitude();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if label[a] != label[b] && dist(a, b) <= radius {
                    let (lo, hi) = (label[a].min(label[b]), label[a].max(label[b]));
                    for l in label.iter_mut() {
                        if *l == hi {
                            *l = lo;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut ids: Vec<usize> = label.clone();
    ids.sort_unstable();
    ids.dedup();
    let clusters: Vec<(S, usize)> = ids
        .iter()
        .map(|&id| {
            let members: Vec<&S> = (0..n).filter(|&i| label[i] == id).map(|i| &eigs[i]).collect();
            let sum = members.iter().fold(S::zero(), |acc, z| acc + (*z).clone());
            let mean = sum.checked_div(&S::from_i64(members.len() as i64)).expect("nonempty");
            (mean, members.len())
        })
        .collect();
    let mut warnings = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let d = dist(a, b);
            if label[a] != label[b] && d <= 10.0 * radius {
                warnings.push(format!(
                    "eigenvalues {} and {} are {d:e} apart, within ten times the cluster radius {radius:e}",
                    format_scalar(&eigs[a]),
                    format_scalar(&eigs[b]),
                ));
            }
        }
    }
    (clusters, warnings)
}

fn float_eigenspaces<S: Scalar>(
    t: &Matrix<S>,
    eigs: &[S],
    hints: Option<&[S]>,
    tol: f64,
) -> Result<Eigenspaces<S>, Error> {
    let dim = t.dim();
    let scale = scalar::max_magnitude(eigs).max(t.max_abs());
    let radius = cluster_radius(dim, scale);
    let (clusters, mut warnings) = cluster(eigs, radius);
    for h in hints.unwrap_or(&[]) {
        if !clusters.iter().any(|(z, _)| (z.clone() - h.clone()).magnitude() <= 10.0 * radius) {
            return Err(Error::HintNotEigenvalue { hint: format_scalar(h) });
        }
    }
    let mut spaces = Vec::new();
    for (z, mu) in clusters {
        let shifted = t.shifted(&z);
        let power = shifted.pow(mu);
        let (sigma, v) = linalg::jacobi_svd(&Matrix::from_fn(dim, |i, j| power.get(i, j).to_c64()));
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| sigma[a].partial_cmp(&sigma[b]).expect("finite"));
        let threshold = power_bound(&shifted, mu, tol) * dim as f64;
        if sigma[order[mu - 1]] > threshold {
            warnings.push(format!(
                "kernel of (T - zI)^{mu} at z = {} is smaller than the multiplicity {mu}",
                format_scalar(&z)
            ));
        }
        if mu < dim && sigma[order[mu]] <= threshold {
            warnings.push(format!(
                "kernel of (T - zI)^{mu} at z = {} is larger than the multiplicity {mu}",
                format_scalar(&z)
            ));
        }
        let basis: Vec<Vec<S>> = order[..mu]
            .iter()
            .map(|&k| v[k].iter().map(|&c: &C64| S::from_c64(c)).collect())
            .collect();
        let n = restriction(t, &basis)?.shifted(&z);
        let chain_depth = match nilpotency_index(&n, tol) {
            Ok(info) => info.index,
            Err(_) => {
                warnings.push(format!(
                    "restriction at z = {} is not nilpotent within tolerance",
                    format_scalar(&z)
                ));
                mu
            }
        };
        spaces.push(GeneralizedEigenspace { z, basis, chain_depth });
    }
    Ok(Eigenspaces { spaces, warnings })
}

/// Matrix of `T` restricted to the invariant subspace spanned by `basis`.
/// Float bases are orthonormal, so this is `Q*TQ`; exact bases are solved for.
pub fn restriction<S: Scalar>(t: &Matrix<S>, basis: &[Vec<S>]) -> Result<Matrix<S>, Error> {
    let d = basis.len();
    if d == 0 {
        return Err(Error::EmptyMatrix);
    }
    let images: Vec<Vec<S>> = basis.iter().map(|b| t.apply(b)).collect::<Result<_, _>>()?;
    match S::MODE {
        Mode::Float => Ok(Matrix::from_fn(d, |i, j| scalar::dot(&images[j], &basis[i]))),
        Mode::Exact => {
            let columns = images
                .iter()
                .map(|img| linalg::coordinates(basis, img, 0.0))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidArgument("subspace is not invariant".into()))?;
            Matrix::from_columns(&columns)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionBlock<S> {
    pub space: GeneralizedEigenspace<S>,
    /// For `N = (T − zI)` restricted to the block; the witness is in ambient
    /// coordinates.
    pub nilpotent: NilpotentInfo<S>,
}

impl<S> DecompositionBlock<S> {
    pub fn z(&self) -> &S {
        &self.space.z
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Refusal<S> {
    OffCircle { z: S },
    NotOrthogonal { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicDecomposition<S> {
    pub blocks: Vec<DecompositionBlock<S>>,
    /// Largest `|⟨u, v⟩|²` between basis vectors of distinct blocks.
    pub pairwise_gram: S,
    /// `max_j (2ν(N_j) − 1)`, the strict order when the decomposition certifies.
    pub predicted_strict_order: usize,
    pub refusals: Vec<Refusal<S>>,
    pub warnings: Vec<String>,
}

impl<S: Scalar> AlgebraicDecomposition<S> {
    /// All eigenvalues unimodular and all blocks mutually orthogonal.
    pub fn certified(&self) -> bool {
        self.refusals.is_empty()
    }

    /// Spectral projections `P_j` onto each block along the others.
    pub fn projections(&self, tol: f64) -> Result<Vec<Matrix<S>>, Error> {
        let columns: Vec<Vec<S>> = self.blocks.iter().flat_map(|b| b.space.basis.iter().cloned()).collect();
        let b = Matrix::from_columns(&columns)?;
        let inv = linalg::inverse(&b, tol)?;
        let mut out = Vec::new();
        let mut offset = 0;
        for block in &self.blocks {
            let d = block.space.dim();
            let mask: Vec<S> = (0..b.dim())
                .map(|i| if (offset..offset + d).contains(&i) { S::one() } else { S::zero() })
                .collect();
            out.push(&(&b * &Matrix::diagonal(&mask)) * &inv);
            offset += d;
        }
        Ok(out)
    }

    /// `Σ_j P_j T P_j`, which equals `T` because `T` commutes with every `P_j`.
    pub fn reassemble(&self, t: &Matrix<S>, tol: f64) -> Result<Matrix<S>, Error> {
        let mut acc = Matrix::zeros(t.dim());
        for p in self.projections(tol)? {
            acc = acc.add(&(&(&p * t) * &p))?;
        }
        Ok(acc)
    }
}

/// Splits `T` into blocks `z_j I + N_j` on its generalized eigenspaces and
/// certifies m-isometricity when every `z_j` is unimodular and the blocks are
/// mutually orthogonal.
pub fn algebraic_decompose<S: Scalar>(
    t: &Matrix<S>,
    hints: Option<&[S]>,
    tol: f64,
) -> Result<AlgebraicDecomposition<S>, Error> {
    let Eigenspaces { spaces, warnings } = generalized_eigenspaces(t, hints, tol)?;
    let mut blocks = Vec::new();
    let mut refusals = Vec::new();
    for space in spaces {
        let n = restriction(t, &space.basis)?.shifted(&space.z);
        let info = nilpotency_index(&n, tol)?;
        let witness = space.basis[info.witness.iter().position(|c| !c.is_zero()).expect("unit vector")].clone();
        if !is_unimodular(&space.z, tol) {
            refusals.push(Refusal::OffCircle { z: space.z.clone() });
        }
        blocks.push(DecompositionBlock { nilpotent: NilpotentInfo { index: info.index, witness }, space });
    }
    let mut cross = Vec::new();
    for a in 0..blocks.len() {
        for b in a + 1..blocks.len() {
            let gram: Vec<S> = blocks[a]
                .space
                .basis
                .iter()
                .flat_map(|u| blocks[b].space.basis.iter().map(move |v| scalar::dot(u, v)))
                .collect();
            if !gram.iter().all(|g| g.is_negligible(tol)) {
                refusals.push(Refusal::NotOrthogonal { first: a, second: b });
            }
            cross.extend(gram);
        }
    }
    let predicted_strict_order = blocks.iter().map(|b| 2 * b.nilpotent.index - 1).max().unwrap_or(1);
    Ok(AlgebraicDecomposition {
        blocks,
        pairwise_gram: scalar::max_norm_sqr(&cross),
        predicted_strict_order,
        refusals,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationReport<S> {
    /// The m for which `A` is an m-isometry (its strict order unless given).
    pub m_a: usize,
    pub nu: usize,
    /// `m_A + 2(ν − 1)`.
    pub m_n_bound: usize,
    /// `β_{m_N}(A + N) = 0`.
    pub bound_holds: bool,
    /// Some `f₀` has `Σ_l (−1)^l C(m_A−1, l) ‖A^l N^{ν−1} f₀‖² ≠ 0`.
    pub strict: bool,
    pub witness: Option<Vec<S>>,
    pub observed: OrderVerdict<S>,
}

/// Analysis of `A + N` for an m-isometry `A` and a commuting nilpotent `N`.
/// `m` defaults to the strict order of `A`.
pub fn perturbation_analysis<S: Scalar>(
    a: &Matrix<S>,
    n: &Matrix<S>,
    m: Option<usize>,
    tol: f64,
) -> Result<PerturbationReport<S>, Error> {
    let dim = a.dim();
    if n.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: n.dim() });
    }
    let comm = a.commutator(n)?;
    if !comm.is_negligible(tol * a.max_abs().max(1.0) * n.max_abs().max(1.0)) {
        return Err(Error::NonCommuting);
    }
    let m_max = isometry::default_m_max(dim);
    let m_a = match m {
        Some(m) if m >= 1 && isometry::is_m_isometry(a, m, tol) => m,
        Some(m) => return Err(Error::NotMIsometry { m }),
        None => isometry::strict_order(a, m_max, tol).order().ok_or(Error::NotIsometricWithinBound { m_max })?,
    };
    let nu = nilpotency_index(n, tol)?.index;
    let m_n_bound = m_a + 2 * (nu - 1);
    let sum = a.add(n)?;
    let bound_holds = isometry::is_m_isometry(&sum, m_n_bound, tol);

    let top = n.pow(nu - 1);
    let criterion = |f: &Vec<S>| -> Result<Option<S>, Error> {
        let g = top.apply(f)?;
        let norms = a.orbit_inner(&g, &g, m_a)?;
        let mut acc = S::zero();
        let mut scale = 0.0;
        for (l, x) in norms.into_iter().enumerate() {
            scale += libm::fabs(signed_binomial::<C64>(m_a - 1, l).re) * x.magnitude();
            acc = acc + signed_binomial::<S>(m_a - 1, l) * x;
        }
        Ok((!acc.is_negligible(tol * scale.max(1.0))).then_some(acc))
    };
    let mut witness = None;
    'search: for f in hermitian_probes::<S>(dim) {
        if criterion(&f)?.is_some() {
            witness = Some(f);
            break 'search;
        }
    }
    let observed = isometry::strict_order(&sum, m_n_bound.max(m_max), tol);
    Ok(PerturbationReport { m_a, nu, m_n_bound, bound_holds, strict: witness.is_some(), witness, observed })
}

/// `e_j`, `e_i + e_j` and `e_i + i·e_j`: a Hermitian form vanishing on all of
/// these vanishes identically.
fn hermitian_probes<S: Scalar>(dim: usize) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = (0..dim).map(|j| unit(dim, j)).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            for c in [S::one(), S::imag_unit()] {
                let mut h = unit::<S>(dim, i);
                h[j] = c;
                out.push(h);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    /// `z₁ = −z₂`.
    Opposite,
    Generic,
}

/// Degree of `‖Tⁿv‖²` at most `2·dim − 2` over the window, which is the
/// largest degree a polynomial orbit of a matrix can have.
fn polynomial_orbit<S: Scalar>(t: &Matrix<S>, v: &[S], window: usize, tol: f64) -> Result<bool, Error> {
    let gamma = isometry::orbit_norms(t, &v.to_vec(), window)?;
    Ok(difference::detect_degree(&gamma, tol)?.degree_at_most(2 * t.dim() - 2))
}

fn check_pair<S: Scalar>(t: &Matrix<S>, hs: [&[S]; 2], zs: [&S; 2], tol: f64) -> Result<PairCase, Error> {
    for h in hs {
        if h.len() != t.dim() {
            return Err(Error::DimensionMismatch { left: t.dim(), right: h.len() });
        }
    }
    if (zs[0].clone() - zs[1].clone()).is_negligible(tol) {
        return Err(Error::EqualEigenvalues);
    }
    for z in zs {
        if !is_unimodular(z, tol) {
            return Err(Error::NotUnimodular { z: format_scalar(z) });
        }
    }
    for (h, z) in hs.into_iter().zip(zs) {
        let shifted = t.shifted(z);
        let r = shifted.pow(t.dim()).apply(h)?;
        let bound = power_bound(&shifted, t.dim(), tol) * scalar::max_magnitude(h).max(1.0) * t.dim() as f64;
        if !r.iter().all(|x| x.is_negligible(bound)) {
            return Err(Error::NotInGeneralizedEigenspace { z: format_scalar(z) });
        }
    }
    Ok(if (zs[0].clone() + zs[1].clone()).is_negligible(tol) { PairCase::Opposite } else { PairCase::Generic })
}

/// Members of `{−1, 1} × {−i, i}`.
pub fn unimodular_pairs<S: Scalar>() -> [(S, S); 4] {
    let i = S::imag_unit();
    [
        (S::one(), i.clone()),
        (S::one(), -i.clone()),
        (-S::one(), i.clone()),
        (-S::one(), -i),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoReport<S> {
    pub case: PairCase,
    /// `‖Tⁿ(h₁ + h₂)‖²` is polynomial over the window.
    pub sum_orbit_polynomial: bool,
    pub eps_pair: Option<(S, S)>,
    /// `‖Tⁿ(ε_k h₁ + h₂)‖²` is polynomial for `k = 1, 2` (opposite case only).
    pub eps_orbits_polynomial: Option<bool>,
    /// `⟨Tⁿh₁, Tⁿh₂⟩ = 0` at every `n` in the window.
    pub mixed_inner_vanishes: bool,
    pub re_inner_vanishes: bool,
    /// Largest `|⟨Tⁿh₁, Tⁿh₂⟩|²` over the window.
    pub max_inner_sq: S,
    /// Every conclusion whose hypotheses hold was observed.
    pub consistent: bool,
    pub window: usize,
}

/// Evaluates the hypotheses and conclusions of the orthogonality theorem for
/// `h_j ∈ E_T(z_j)` with distinct unimodular `z_1`, `z_2`.
#[allow(clippy::too_many_arguments)]
pub fn ortho_test_generalized<S: Scalar>(
    t: &Matrix<S>,
    h1: &[S],
    h2: &[S],
    z1: &S,
    z2: &S,
    eps: Option<(S, S)>,
    window: Option<usize>,
    tol: f64,
) -> Result<OrthoReport<S>, Error> {
    let case = check_pair(t, [h1, h2], [z1, z2], tol)?;
    let window = window.unwrap_or_else(|| difference::default_window(t.dim()));
    let sum = scalar::axpy(&S::one(), h1, h2);
    let sum_orbit_polynomial = polynomial_orbit(t, &sum, window, tol)?;
    let (eps_pair, eps_orbits_polynomial) = match case {
        PairCase::Generic => (None, None),
        PairCase::Opposite => {
            let pair = eps.unwrap_or_else(|| unimodular_pairs::<S>()[0].clone());
            if !unimodular_pairs::<S>().contains(&pair) {
                return Err(Error::InvalidArgument("epsilon pair must lie in {-1,1} x {-i,i}".into()));
            }
            let mut ok = true;
            for e in [&pair.0, &pair.1] {
                ok &= polynomial_orbit(t, &scalar::axpy(e, h1, h2), window, tol)?;
            }
            (Some(pair), Some(ok))
        }
    };
    let (v1, v2) = (h1.to_vec(), h2.to_vec());
    let inner = t.orbit_inner(&v1, &v2, window)?;
    let n1 = t.orbit_inner(&v1, &v1, window)?;
    let n2 = t.orbit_inner(&v2, &v2, window)?;
    let scale = n1.iter().zip(&n2).map(|(a, b)| libm::sqrt(a.magnitude() * b.magnitude())).fold(1.0, f64::max);
    let bound = tol * scale;
    let mixed_inner_vanishes = inner.iter().all(|x| x.is_negligible(bound));
    let re_inner_vanishes = inner.iter().all(|x| x.re().is_negligible(bound));
    let consistent = match case {
        PairCase::Opposite => {
            (!sum_orbit_polynomial || re_inner_vanishes)
                && (eps_orbits_polynomial != Some(true) || mixed_inner_vanishes)
        }
        PairCase::Generic => !sum_orbit_polynomial || mixed_inner_vanishes,
    };
    Ok(OrthoReport {
        case,
        sum_orbit_polynomial,
        eps_pair,
        eps_orbits_polynomial,
        mixed_inner_vanishes,
        re_inner_vanishes,
        max_inner_sq: scalar::max_norm_sqr(&inner),
        consistent,
        window,
    })
}

/// Basis `h, Th, …, T^{d−1}h` of `C_T(h)`, stopping at the first linear
/// dependence.
pub fn cyclic_subspace<S: Scalar>(t: &Matrix<S>, h: &[S], tol: f64) -> Result<Vec<Vec<S>>, Error> {
    if h.len() != t.dim() {
        return Err(Error::DimensionMismatch { left: t.dim(), right: h.len() });
    }
    if h.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut vecs = alloc::vec![h.to_vec()];
    while vecs.len() < t.dim() {
        let next = t.apply(vecs.last().expect("nonempty"))?;
        let mut candidate = vecs.clone();
        candidate.push(next.clone());
        let scale = candidate.iter().map(|v| scalar::max_magnitude(v)).fold(1.0, f64::max);
        if linalg::rank(&candidate, tol * scale) == vecs.len() {
            break;
        }
        vecs.push(next);
    }
    Ok(vecs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport<S> {
    pub case: PairCase,
    /// Conditions (i)–(v) of the Jordan-pair equivalence, in order:
    /// orthogonal cyclic subspaces; polynomial orbits of `ε T^j h₁ + h₂`
    /// (or `T^j h₁ + h₂`); of `g₁ + h₂`; of sampled `g₁ + g₂`; and the
    /// restriction to `C_T(h₁) + C_T(h₂)` being an m-isometry.
    pub conditions: [bool; 5],
    pub restricted_order: Option<usize>,
    /// Largest `|⟨u, v⟩|²` between the cyclic bases.
    pub cross_gram_sq: S,
    pub cyclic_dims: (usize, usize),
    pub samples: usize,
}

impl<S> PairReport<S> {
    pub fn all_agree(&self) -> bool {
        self.conditions.iter().all(|&c| c == self.conditions[0])
    }
}

/// Number of random `(g₁, g₂)` pairs drawn for condition (iv).
pub const PAIR_SAMPLES: usize = 16;

fn small_gaussian<S: Scalar>(rng: &mut impl RngCore) -> S {
    let re = (rng.next_u32() % 7) as i64 - 3;
    let im = (rng.next_u32() % 7) as i64 - 3;
    S::from_i64(re) + S::from_i64(im) * S::imag_unit()
}

fn combination<S: Scalar>(basis: &[Vec<S>], coeffs: &[S]) -> Vec<S> {
    let mut acc: Vec<S> = (0..basis[0].len()).map(|_| S::zero()).collect();
    for (c, b) in coeffs.iter().zip(basis) {
        acc = scalar::axpy(c, b, &acc);
    }
    acc
}

/// Evaluates the five equivalent conditions for the Jordan blocks of `T` at
/// `h₁` and `h₂` at finite scale.
#[allow(clippy::too_many_arguments)]
pub fn jordan_pair_equivalences<S: Scalar>(
    t: &Matrix<S>,
    h1: &[S],
    h2: &[S],
    z1: &S,
    z2: &S,
    window: Option<usize>,
    tol: f64,
    rng: &mut impl RngCore,
) -> Result<PairReport<S>, Error> {
    let case = check_pair(t, [h1, h2], [z1, z2], tol)?;
    let window = window.unwrap_or_else(|| difference::default_window(t.dim()));
    let c1 = cyclic_subspace(t, h1, tol)?;
    let c2 = cyclic_subspace(t, h2, tol)?;

    // (i)
    let cross: Vec<S> = c1.iter().flat_map(|u| c2.iter().map(move |v| scalar::dot(u, v))).collect();
    let gram_scale = c1.iter().chain(&c2).map(|v| scalar::norm_sqr(v).magnitude()).fold(1.0, f64::max);
    let cond1 = cross.iter().all(|g| g.is_negligible(tol * gram_scale));

    // (ii)
    let translates: Vec<Vec<S>> = (0..=c1.len())
        .scan(h1.to_vec(), |v, _| {
            let cur = v.clone();
            *v = t.apply_unchecked(v);
            Some(cur)
        })
        .collect();
    let all_translates = |e: &S| -> Result<bool, Error> {
        for g in &translates {
            if !polynomial_orbit(t, &scalar::axpy(e, g, h2), window, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let cond2 = match case {
        PairCase::Generic => all_translates(&S::one())?,
        PairCase::Opposite => {
            let mut any = false;
            for (e1, e2) in unimodular_pairs::<S>() {
                if all_translates(&e1)? && all_translates(&e2)? {
                    any = true;
                    break;
                }
            }
            any
        }
    };

    // (iii): the orbit of g₁ + h₂ is polynomial iff Re⟨Tⁿg₁, Tⁿh₂⟩ is, which
    // is real-linear in g₁, so a real basis of C_T(h₁) plus one sum suffices.
    let mut probes: Vec<Vec<S>> = Vec::new();
    for u in &c1 {
        probes.push(u.clone());
        probes.push(scalar::scale(&S::imag_unit(), u));
    }
    probes.push(combination(&c1, &(0..c1.len()).map(|_| S::one()).collect::<Vec<_>>()));
    let mut cond3 = true;
    for g in &probes {
        if !polynomial_orbit(t, &scalar::axpy(&S::one(), g, h2), window, tol)? {
            cond3 = false;
            break;
        }
    }

    // (iv)
    let mut cond4 = true;
    for _ in 0..PAIR_SAMPLES {
        let a: Vec<S> = (0..c1.len()).map(|_| small_gaussian(rng)).collect();
        let b: Vec<S> = (0..c2.len()).map(|_| small_gaussian(rng)).collect();
        let v = scalar::axpy(&S::one(), &combination(&c1, &a), &combination(&c2, &b));
        if cond4 && !polynomial_orbit(t, &v, window, tol)? {
            cond4 = false;
        }
    }

    // (v): with B a basis of the invariant subspace, the restriction is an
    // m-isometry iff B* β_m(T) B = 0.
    let joint: Vec<Vec<S>> = c1.iter().chain(&c2).cloned().collect();
    let basis = S::span_basis(&joint, tol);
    let m_max = isometry::default_m_max(basis.len());
    let betas = isometry::defect_sequence(t, m_max);
    let vec_scale = basis.iter().map(|v| scalar::norm_sqr(v).magnitude()).fold(1.0, f64::max);
    let restricted_order = (1..=m_max).find(|&m| {
        let bound = isometry::defect_bound(t, m, tol) * vec_scale * basis.len() as f64;
        basis.iter().all(|u| {
            let bu = betas[m].apply_unchecked(u);
            basis.iter().all(|v| scalar::dot(&bu, v).is_negligible(bound))
        })
    });

    Ok(PairReport {
        case,
        conditions: [cond1, cond2, cond3, cond4, restricted_order.is_some()],
        restricted_order,
        cross_gram_sq: scalar::max_norm_sqr(&cross),
        cyclic_dims: (c1.len(), c2.len()),
        samples: PAIR_SAMPLES,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumCheck<S> {
    pub spectrum: Vec<S>,
    pub all_on_circle: bool,
}

/// Necessary condition for a matrix to be an m-isometry: its spectrum lies
/// on the unit circle.
pub fn unimodular_spectrum_check<S: Scalar>(
    t: &Matrix<S>,
    hints: Option<&[S]>,
    tol: f64,
) -> Result<SpectrumCheck<S>, Error> {
    let spaces = generalized_eigenspaces(t, hints, tol)?.spaces;
    let spectrum: Vec<S> = spaces.into_iter().map(|s| s.z).collect();
    let all_on_circle = spectrum.iter().all(|z| is_unimodular(z, tol));
    Ok(SpectrumCheck { spectrum, all_on_circle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::OrderKind;
    use crate::scalar::GaussianRational as Q;
    use alloc::vec;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn i() -> Q {
        Q::imag_unit()
    }

    fn mat(rows: &[&[Q]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn worked() -> Matrix<Q> {
        mat(&[&[i(), q(2)], &[q(0), -i()]])
    }

    #[test]
    fn jordan_matrices() {
        assert_eq!(jordan_matrix(&JordanSpec::new(q(1), 1)).unwrap(), mat(&[&[q(1)]]));
        assert_eq!(
            jordan_matrix(&JordanSpec::new(i(), 2)).unwrap(),
            mat(&[&[i(), q(1)], &[q(0), i()]])
        );
        let j = jordan_matrix(&JordanSpec::new(q(-1), 3)).unwrap();
        assert_eq!(*j.get(2, 2), q(-1));
        assert_eq!(*j.get(1, 2), q(1));
        assert_eq!(*j.get(0, 2), q(0));
        assert!(jordan_matrix(&JordanSpec::new(q(1), 0)).is_err());
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_index(&Matrix::<Q>::zeros(2), 0.0).unwrap().index, 1);
        let n = jordan_matrix(&JordanSpec::new(q(0), 3)).unwrap();
        let info = nilpotency_index(&n, 0.0).unwrap();
        assert_eq!(info.index, 3);
        assert_eq!(info.witness, vec![q(0), q(0), q(1)]);
        assert_eq!(nilpotency_index(&Matrix::<Q>::identity(2), 0.0), Err(Error::NotNilpotent));
    }

    #[test]
    fn eigenspaces_of_worked_example() {
        let e = generalized_eigenspaces(&worked(), Some(&[i(), -i()]), 0.0).unwrap();
        assert_eq!(e.spaces.len(), 2);
        let at = |z: Q| e.spaces.iter().find(|s| s.z == z).unwrap().clone();
        let s1 = at(i());
        let s2 = at(-i());
        assert_eq!(s1.dim(), 1);
        // spans: compare up to scaling
        assert!(s1.basis[0][1].is_zero());
        let b = &s2.basis[0];
        assert_eq!(b[0].clone(), i() * b[1].clone());
        assert!(matches!(
            generalized_eigenspaces(&worked(), Some(&[i()]), 0.0),
            Err(Error::MissingEigenvalues { found: 1, dim: 2 })
        ));
        assert!(matches!(
            generalized_eigenspaces(&worked(), Some(&[i(), -i(), q(1)]), 0.0),
            Err(Error::HintNotEigenvalue { .. })
        ));
        assert!(matches!(generalized_eigenspaces(&worked(), None, 0.0), Err(Error::MissingHints)));
    }

    #[test]
    fn jordan_block_has_one_deep_space() {
        let j = jordan_matrix(&JordanSpec::new(i(), 2)).unwrap();
        let e = generalized_eigenspaces(&j, Some(&[i()]), 0.0).unwrap();
        assert_eq!(e.spaces[0].dim(), 2);
        assert_eq!(e.spaces[0].chain_depth, 2);
    }

    #[test]
    fn decomposition_examples() {
        let t = jordan_direct_sum(&[JordanSpec::new(q(1), 2), JordanSpec::new(q(-1), 1)]).unwrap();
        let d = algebraic_decompose(&t, Some(&[q(1), q(-1)]), 0.0).unwrap();
        assert!(d.certified());
        assert_eq!(d.predicted_strict_order, 3);
        assert_eq!(d.reassemble(&t, 0.0).unwrap(), t);

        let d = algebraic_decompose(&worked(), Some(&[i(), -i()]), 0.0).unwrap();
        assert_eq!(d.refusals, vec![Refusal::NotOrthogonal { first: 0, second: 1 }]);
        assert_eq!(d.reassemble(&worked(), 0.0).unwrap(), worked());

        let d = algebraic_decompose(&mat(&[&[q(2)]]), Some(&[q(2)]), 0.0).unwrap();
        assert_eq!(d.refusals, vec![Refusal::OffCircle { z: q(2) }]);
    }

    #[test]
    fn float_decomposition_of_defective_block() {
        let c = |re: f64, im: f64| C64::new(re, im);
        let t = jordan_direct_sum(&[JordanSpec::new(c(0.0, 1.0), 3), JordanSpec::new(c(-1.0, 0.0), 1)]).unwrap();
        let d = algebraic_decompose(&t, None, 1e-8).unwrap();
        assert!(d.warnings.is_empty(), "{:?}", d.warnings);
        assert!(d.certified());
        assert_eq!(d.predicted_strict_order, 5);
        assert!(d.reassemble(&t, 1e-12).unwrap().sub(&t).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn perturbation_examples() {
        let n = jordan_matrix(&JordanSpec::new(q(0), 2)).unwrap();
        let r = perturbation_analysis(&Matrix::identity(2), &n, None, 0.0).unwrap();
        assert_eq!((r.m_a, r.nu, r.m_n_bound), (1, 2, 3));
        assert!(r.strict && r.bound_holds);
        assert_eq!(r.observed.kind, OrderKind::StrictOrder(3));

        let a = Matrix::diagonal(&[i(), -i()]);
        let r = perturbation_analysis(&a, &Matrix::zeros(2), None, 0.0).unwrap();
        assert_eq!(r.m_n_bound, 1);
        assert_eq!(r.observed.kind, OrderKind::StrictOrder(1));

        // A as a 2-isometry while its strict order is 1: never strict.
        let r = perturbation_analysis(&Matrix::identity(2), &n, Some(2), 0.0).unwrap();
        assert_eq!(r.m_n_bound, 4);
        assert!(!r.strict);
        assert_eq!(r.observed.kind, OrderKind::StrictOrder(3));

        let b = mat(&[&[q(1), q(0)], &[q(0), q(-1)]]);
        assert_eq!(perturbation_analysis(&b, &n, None, 0.0).unwrap_err(), Error::NonCommuting);
        assert_eq!(
            perturbation_analysis(&Matrix::<Q>::identity(2), &Matrix::identity(2), None, 0.0).unwrap_err(),
            Error::NotNilpotent
        );
    }

    #[test]
    fn ortho_worked_example_is_tight() {
        let r = ortho_test_generalized(&worked(), &[q(1), q(0)], &[i(), q(1)], &i(), &-i(), None, None, 0.0).unwrap();
        assert_eq!(r.case, PairCase::Opposite);
        assert!(r.sum_orbit_polynomial);
        assert!(r.re_inner_vanishes);
        assert!(!r.mixed_inner_vanishes);
        assert_eq!(r.eps_orbits_polynomial, Some(false));
        assert!(r.consistent);
    }

    #[test]
    fn ortho_diagonal_generic_case() {
        let t = Matrix::diagonal(&[q(1), i()]);
        let r = ortho_test_generalized(&t, &[q(1), q(0)], &[q(0), q(1)], &q(1), &i(), None, None, 0.0).unwrap();
        assert_eq!(r.case, PairCase::Generic);
        assert!(r.sum_orbit_polynomial && r.mixed_inner_vanishes && r.consistent);

        let t = Matrix::diagonal(&[q(1), q(-1)]);
        let err = ortho_test_generalized(&t, &[q(1), q(0)], &[q(1), q(1)], &q(1), &q(-1), None, None, 0.0);
        assert!(matches!(err, Err(Error::NotInGeneralizedEigenspace { .. })));
        let err = ortho_test_generalized(&t, &[q(1), q(0)], &[q(0), q(1)], &q(1), &q(1), None, None, 0.0);
        assert_eq!(err.unwrap_err(), Error::EqualEigenvalues);
    }

    #[test]
    fn cyclic_subspace_examples() {
        let j = jordan_matrix(&JordanSpec::new(q(1), 2)).unwrap();
        assert_eq!(cyclic_subspace(&j, &[q(0), q(1)], 0.0).unwrap().len(), 2);
        assert_eq!(cyclic_subspace(&j, &[q(1), q(0)], 0.0).unwrap().len(), 1);
        let d = Matrix::diagonal(&[q(1), q(-1)]);
        assert_eq!(cyclic_subspace(&d, &[q(1), q(1)], 0.0).unwrap().len(), 2);
        assert_eq!(cyclic_subspace(&d, &[q(0), q(0)], 0.0).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn pair_equivalences_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = jordan_pair_equivalences(&worked(), &[q(1), q(0)], &[i(), q(1)], &i(), &-i(), None, 0.0, &mut rng)
            .unwrap();
        assert_eq!(r.conditions, [false; 5]);

        let t = jordan_direct_sum(&[JordanSpec::new(q(1), 2), JordanSpec::new(q(-1), 2)]).unwrap();
        let h1 = [q(0), q(1), q(0), q(0)];
        let h2 = [q(0), q(0), q(0), q(1)];
        let r = jordan_pair_equivalences(&t, &h1, &h2, &q(1), &q(-1), None, 0.0, &mut rng).unwrap();
        assert_eq!(r.conditions, [true; 5]);
        assert_eq!(r.restricted_order, Some(3));
        assert_eq!(r.cyclic_dims, (2, 2));
    }

    #[test]
    fn spectrum_check_examples() {
        let u = Matrix::diagonal(&[i(), q(-1)]);
        assert!(unimodular_spectrum_check(&u, Some(&[i(), q(-1)]), 0.0).unwrap().all_on_circle);
        let h = Matrix::diagonal(&[Q::from_ratio(1, 2)]);
        assert!(!unimodular_spectrum_check(&h, Some(&[Q::from_ratio(1, 2)]), 0.0).unwrap().all_on_circle);
        let j = jordan_matrix(&JordanSpec::new(C64::new(0.0, 1.0), 3)).unwrap();
        let s = unimodular_spectrum_check(&j, None, 1e-8).unwrap();
        assert_eq!(s.spectrum.len(), 1);
        assert!(s.all_on_circle);
    }
}
