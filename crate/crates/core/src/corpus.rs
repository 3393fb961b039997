//! Seeded generators of test operators: orthogonal sums of Jordan blocks,
//! their sheared (non-orthogonal) couplings, off-circle variants, commuting
//! nilpotent perturbations and random unitary conjugations.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::{GaussianRational, Scalar, C64};
use crate::spectral::{jordan_direct_sum, JordanSpec};

type Q = GaussianRational;

fn gauss(re: i64, im: i64, den: i64) -> Q {
    Q::from_ratio(re, den) + Q::from_ratio(im, den) * Q::imag_unit()
}

/// Unimodular eigenvalues with rational parts.
pub fn unimodular_values() -> Vec<Q> {
    vec![
        gauss(1, 0, 1),
        gauss(-1, 0, 1),
        gauss(0, 1, 1),
        gauss(0, -1, 1),
        gauss(3, 4, 5),
        gauss(-3, -4, 5),
        gauss(5, -12, 13),
    ]
}

/// Eigenvalues with `|z|² ≥ 2`, so `β_m` grows instead of decaying.
pub fn off_circle_values() -> Vec<Q> {
    vec![gauss(2, 0, 1), gauss(-2, 0, 1), gauss(0, 2, 1), gauss(1, 1, 1)]
}

pub fn below(rng: &mut impl RngCore, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn int_in(rng: &mut impl RngCore, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Up to `count` distinct unimodular values, pairwise at least `1.2` apart.
pub fn separated_unimodular(rng: &mut impl RngCore, count: usize) -> Vec<Q> {
    let pool = unimodular_values();
    let mut out: Vec<Q> = Vec::new();
    for _ in 0..64 {
        if out.len() == count {
            break;
        }
        let z = pool[below(rng, pool.len())].clone();
        if out.iter().all(|w| (w.clone() - z.clone()).magnitude() >= 1.2) {
            out.push(z);
        }
    }
    for z in pool {
        if out.len() < count && out.iter().all(|w| (w.clone() - z.clone()).magnitude() >= 1.2) {
            out.push(z);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingKind {
    /// Orthogonal sum of unimodular Jordan blocks.
    Orthogonal,
    /// The same blocks conjugated by a shear mixing two of them.
    Sheared,
    /// An orthogonal sum in which one eigenvalue is off the unit circle.
    OffCircle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusItem {
    pub kind: CouplingKind,
    pub blocks: Vec<JordanSpec<Q>>,
    pub matrix: Matrix<Q>,
    /// The distinct eigenvalues.
    pub hints: Vec<Q>,
    /// Basis change applied to the block sum (`matrix = S J S⁻¹`).
    pub basis_change: Matrix<Q>,
}

impl CorpusItem {
    /// First index of each block in the block sum.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let o = *acc;
                *acc += b.size;
                Some(o)
            })
            .collect()
    }

    /// Cyclic generator of block `j` (the last vector of its chain), carried
    /// through the basis change.
    pub fn chain_top(&self, j: usize) -> Vec<Q> {
        let idx = self.offsets()[j] + self.blocks[j].size - 1;
        self.basis_change.column(idx)
    }
}

/// `I + c·E_{ab}` and its inverse `I − c·E_{ab}` (`a ≠ b`).
pub fn shear(dim: usize, a: usize, b: usize, c: Q) -> (Matrix<Q>, Matrix<Q>) {
    let mut s = Matrix::identity(dim);
    let mut inv = Matrix::identity(dim);
    s.set(a, b, c.clone());
    inv.set(a, b, -c);
    (s, inv)
}

/// Two or three blocks of sizes `1..=3` (total at most six) with distinct,
/// well separated eigenvalues.
pub fn coupling_item(kind: CouplingKind, rng: &mut impl RngCore) -> CorpusItem {
    let count = 2 + below(rng, 2);
    let mut zs = separated_unimodular(rng, count);
    let mut sizes: Vec<usize> = zs.iter().map(|_| 1 + below(rng, 3)).collect();
    while sizes.iter().sum::<usize>() > 6 {
        let j = sizes.iter().enumerate().max_by_key(|(_, s)| **s).map(|(j, _)| j).expect("nonempty");
        sizes[j] -= 1;
    }
    if kind == CouplingKind::OffCircle {
        let pool = off_circle_values();
        let j = below(rng, zs.len());
        zs[j] = pool[below(rng, pool.len())].clone();
    }
    let blocks: Vec<JordanSpec<Q>> = zs.iter().cloned().zip(sizes.iter().copied()).map(|(z, k)| JordanSpec::new(z, k)).collect();
    let j = jordan_direct_sum(&blocks).expect("nonempty");
    let dim = j.dim();
    let (matrix, basis_change) = match kind {
        CouplingKind::Sheared => {
            let offsets: Vec<usize> = blocks.iter().scan(0, |acc, b| { let o = *acc; *acc += b.size; Some(o) }).collect();
            // couple the top of block 1's chain into the bottom of block 0's
            let a = offsets[0];
            let b = offsets[1] + blocks[1].size - 1;
            let c = gauss(1 + below(rng, 2) as i64, int_in(rng, -1, 1), 1);
            let (s, inv) = shear(dim, a, b, c);
            (&(&s * &j) * &inv, s)
        }
        _ => (j, Matrix::identity(dim)),
    };
    CorpusItem { kind, blocks, matrix, hints: zs, basis_change }
}

/// `per_kind` items of each kind, in the order orthogonal, sheared, off-circle.
pub fn coupling_corpus(per_kind: usize, rng: &mut impl RngCore) -> Vec<CorpusItem> {
    let mut out = Vec::new();
    for kind in [CouplingKind::Orthogonal, CouplingKind::Sheared, CouplingKind::OffCircle] {
        for _ in 0..per_kind {
            out.push(coupling_item(kind, rng));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationItem {
    pub a: Matrix<Q>,
    pub n: Matrix<Q>,
}

/// An orthogonal sum `A` of unimodular Jordan blocks and a nilpotent `N`
/// commuting with it: either a combination of powers of the block nilpotents,
/// or (for two equal blocks) a map of one chain onto the other.
pub fn perturbation_item(rng: &mut impl RngCore) -> PerturbationItem {
    if below(rng, 3) == 0 {
        let z = unimodular_values()[below(rng, 7)].clone();
        let k = 1 + below(rng, 3);
        let block = crate::spectral::jordan_matrix(&JordanSpec::new(z, k)).expect("k >= 1");
        let a = block.direct_sum(&block);
        let nil = block.shifted(&block.get(0, 0).clone());
        let c = Q::from_i64(1 + below(rng, 2) as i64);
        let d = Q::from_i64(int_in(rng, -1, 1));
        let inner = Matrix::identity(k).scale(&c).add(&nil.scale(&d)).expect("same size");
        let mut n = Matrix::zeros(2 * k);
        for i in 0..k {
            for j in 0..k {
                n.set(i, k + j, inner.get(i, j).clone());
            }
        }
        return PerturbationItem { a, n };
    }
    let count = 1 + below(rng, 2);
    let zs = separated_unimodular(rng, count);
    let blocks: Vec<JordanSpec<Q>> = zs.into_iter().map(|z| JordanSpec::new(z, 1 + below(rng, 3))).collect();
    let a = jordan_direct_sum(&blocks).expect("nonempty");
    let mut n: Option<Matrix<Q>> = None;
    for b in &blocks {
        let nil = crate::spectral::jordan_matrix(&JordanSpec::new(Q::zero(), b.size)).expect("size >= 1");
        let p = below(rng, b.size + 1);
        let c = Q::from_i64(int_in(rng, -2, 2));
        let piece = if p == 0 { Matrix::zeros(b.size) } else { nil.pow(p).scale(&c) };
        n = Some(match n {
            None => piece,
            Some(acc) => acc.direct_sum(&piece),
        });
    }
    PerturbationItem { a, n: n.expect("nonempty") }
}

/// A pair of Jordan blocks probed at their cyclic generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PairItem {
    pub matrix: Matrix<Q>,
    pub h1: Vec<Q>,
    pub h2: Vec<Q>,
    pub z1: Q,
    pub z2: Q,
    /// Whether the blocks are orthogonal by construction.
    pub orthogonal: bool,
}

pub fn pair_item(sheared: bool, rng: &mut impl RngCore) -> PairItem {
    let kind = if sheared { CouplingKind::Sheared } else { CouplingKind::Orthogonal };
    let item = coupling_item(kind, rng);
    PairItem {
        h1: item.chain_top(0),
        h2: item.chain_top(1),
        z1: item.blocks[0].z.clone(),
        z2: item.blocks[1].z.clone(),
        matrix: item.matrix,
        orthogonal: !sheared,
    }
}

/// Orthogonal sum whose largest block has size `(m + 1)/2`, so that the
/// strict order is `m` (odd).
pub fn strict_isometry(m: usize, rng: &mut impl RngCore) -> Matrix<Q> {
    let top = m.div_ceil(2);
    let count = 1 + below(rng, 2);
    let zs = separated_unimodular(rng, count);
    let mut blocks = vec![JordanSpec::new(zs[0].clone(), top)];
    if let Some(z) = zs.get(1) {
        blocks.push(JordanSpec::new(z.clone(), 1 + below(rng, top)));
    }
    jordan_direct_sum(&blocks).expect("nonempty")
}

/// Vector with Gaussian-integer coordinates in `[−r, r] + i[−r, r]`.
pub fn random_vector(dim: usize, r: i64, rng: &mut impl RngCore) -> Vec<Q> {
    (0..dim).map(|_| gauss(int_in(rng, -r, r), int_in(rng, -r, r), 1)).collect()
}

fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

/// Unitary matrix from Gram–Schmidt on random complex vectors.
pub fn random_unitary(dim: usize, rng: &mut impl RngCore) -> Matrix<C64> {
    loop {
        let vectors: Vec<Vec<C64>> = (0..dim)
            .map(|_| (0..dim).map(|_| C64::new(uniform(rng), uniform(rng))).collect())
            .collect();
        let basis = linalg::orthonormal_basis(&vectors, 1e-6);
        if basis.len() == dim {
            return Matrix::from_columns(&basis).expect("square");
        }
    }
}

pub fn to_float<S: Scalar>(m: &Matrix<S>) -> Matrix<C64> {
    Matrix::from_fn(m.dim(), |i, j| m.get(i, j).to_c64())
}

pub fn vector_to_float<S: Scalar>(v: &[S]) -> Vec<C64> {
    v.iter().map(Scalar::to_c64).collect()
}

/// `U T U*`.
pub fn conjugate(t: &Matrix<C64>, u: &Matrix<C64>) -> Matrix<C64> {
    &(u * t) * &u.adjoint()
}
