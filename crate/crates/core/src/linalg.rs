//! Elimination, kernels, span bases and eigenvalues.
//!
//! Exact mode uses Gauss–Jordan elimination over the rationals, which never
//! rounds. Float mode uses a one-sided Jacobi SVD for kernels, modified
//! Gram–Schmidt for spans, and a shifted Hessenberg QR iteration for
//! eigenvalues.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar, C64};

/// Reduced row echelon form in place. Entries with modulus `<= bound` count
/// as zero (exact mode ignores `bound`). Returns the pivot columns.
pub(crate) fn rref<S: Scalar>(rows: &mut [Vec<S>], ncols: usize, bound: f64) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if row[c].is_negligible(bound) {
                continue;
            }
            let mag = row[c].magnitude();
            if best.map_or(true, |(_, m)| mag > m) {
                best = Some((i, mag));
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
            row[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn exact_kernel<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let n = m.dim();
    let mut rows = m.rows();
    let pivots = rref(&mut rows, n, 0.0);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); n];
        v[free] = S::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Maximal linearly independent subset, in the given order.
pub(crate) fn independent_subset<S: Scalar>(vectors: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut kept: Vec<Vec<S>> = Vec::new();
    for v in vectors {
        let mut candidate = kept.clone();
        candidate.push(v.clone());
        if rank(&candidate, 0.0) == candidate.len() {
            kept.push(v.clone());
        }
    }
    kept
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank<S: Scalar>(vectors: &[Vec<S>], bound: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let ncols = vectors[0].len();
    let mut rows = vectors.to_vec();
    rref(&mut rows, ncols, bound).len()
}

/// Inverse by Gauss–Jordan elimination with largest-modulus pivoting.
pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: f64) -> Result<Matrix<S>, Error> {
    let n = m.dim();
    let bound = tol * m.max_abs().max(1.0);
    let mut rows: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut rows, n, bound);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, |i, j| rows[i][n + j].clone()))
}

/// Coordinates `x` with `Σ x_j basis[j] = v`, or `None` when `v` is not in
/// the span (residual above `bound`). The basis must be linearly independent.
pub fn coordinates<S: Scalar>(basis: &[Vec<S>], v: &[S], bound: f64) -> Option<Vec<S>> {
    let r = basis.len();
    if r == 0 {
        return if v.iter().all(|x| x.is_negligible(bound)) { Some(Vec::new()) } else { None };
    }
    // Normal equations: G x = B^H v with G the Gram matrix of the basis.
    let mut rows: Vec<Vec<S>> = (0..r)
        .map(|a| {
            let mut row: Vec<S> = (0..r).map(|b| scalar::dot(&basis[b], &basis[a])).collect();
            row.push(scalar::dot(v, &basis[a]));
            row
        })
        .collect();
    let pivots = rref(&mut rows, r, bound * 1e-3);
    if pivots.len() < r {
        return None;
    }
    let x: Vec<S> = rows.iter().map(|row| row[r].clone()).collect();
    let mut residual = v.to_vec();
    for (coef, b) in x.iter().zip(basis) {
        residual = scalar::axpy(&-coef.clone(), b, &residual);
    }
    if residual.iter().all(|e| e.is_negligible(bound)) {
        Some(x)
    } else {
        None
    }
}

/// Orthonormal basis of the span of `vectors` by modified Gram–Schmidt with
/// one reorthogonalization pass. A vector whose residual norm is at most
/// `tol` times its original norm is treated as dependent.
pub(crate) fn orthonormal_basis<S: Scalar>(vectors: &[Vec<S>], tol: f64) -> Vec<Vec<S>> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    for v in vectors {
        let original = libm::sqrt(scalar::norm_sqr(v).to_c64().re);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = scalar::dot(&w, q);
                w = scalar::axpy(&-c, q, &w);
            }
        }
        let n = libm::sqrt(scalar::norm_sqr(&w).to_c64().re);
        if n <= tol * original {
            continue;
        }
        let inv = S::from_c64(C64::new(1.0 / n, 0.0));
        basis.push(scalar::scale(&inv, &w));
    }
    basis
}

/// Singular values (unordered) and right singular vectors, as columns of `V`
/// listed vector by vector, from a one-sided Jacobi iteration on the columns.
pub fn jacobi_svd(m: &Matrix<C64>) -> (Vec<f64>, Vec<Vec<C64>>) {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + libm::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + libm::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_pair(&mut cols, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = cols.iter().map(|c| libm::sqrt(c.iter().map(|x| x.norm_sqr()).sum())).collect();
    (sigma, v)
}

// a_p <- c a_p - s conj(phase) a_q ; a_q <- s phase a_p + c a_q
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let n = cols[p].len();
    for i in 0..n {
        let a = cols[p][i];
        let b = cols[q][i];
        cols[p][i] = a * c - phase.conj() * b * s;
        cols[q][i] = phase * a * s + b * c;
    }
}

/// Right singular vectors whose singular value is at most `tol · max(1, σ_max)`.
pub(crate) fn float_kernel<S: Scalar>(m: &Matrix<S>, tol: f64) -> Vec<Vec<S>> {
    let mc = Matrix::from_fn(m.dim(), |i, j| m.get(i, j).to_c64());
    let (sigma, v) = jacobi_svd(&mc);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let threshold = tol * smax.max(1.0);
    let mut out: Vec<Vec<S>> = Vec::new();
    for (s, vec) in sigma.iter().zip(v) {
        if *s <= threshold {
            out.push(vec.into_iter().map(S::from_c64).collect());
        }
    }
    out
}

/// Eigenvalues of a general complex matrix: Householder reduction to upper
/// Hessenberg form followed by Wilkinson-shifted QR steps with deflation.
pub(crate) fn eigenvalues<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    let n = m.dim();
    let mut h: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).to_c64()).collect()).collect();
    hessenberg(&mut h);
    let norm: f64 = libm::sqrt(h.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>());
    let mut eig = vec![C64::new(0.0, 0.0); n];
    let mut hi = n;
    let mut iter = 0usize;
    while hi > 0 {
        let top = hi - 1;
        if top == 0 {
            eig[0] = h[0][0];
            break;
        }
        // Find the start of the unreduced block ending at `top`.
        let mut l = top;
        while l > 0 {
            let sub = h[l][l - 1].norm();
            let diag = h[l][l].norm() + h[l - 1][l - 1].norm();
            if sub <= f64::EPSILON * diag.max(norm * 1e-3) {
                h[l][l - 1] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == top {
            eig[top] = h[top][top];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 300 {
            // Give up on convergence of this block; report its diagonal.
            for (k, e) in eig.iter_mut().enumerate().take(hi).skip(l) {
                *e = h[k][k];
            }
            hi = l;
            iter = 0;
            continue;
        }
        let mu = if iter % 11 == 10 {
            h[top][top] + C64::new(h[top][top - 1].norm(), 0.0)
        } else {
            wilkinson_shift(h[top - 1][top - 1], h[top - 1][top], h[top][top - 1], h[top][top])
        };
        qr_step(&mut h, l, top, mu);
    }
    eig.into_iter().map(S::from_c64).collect()
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() < (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_step(h: &mut [Vec<C64>], lo: usize, hi: usize, mu: C64) {
    for k in lo..=hi {
        h[k][k] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[k][k];
        let b = h[k + 1][k];
        let r = libm::sqrt(a.norm_sqr() + b.norm_sqr());
        let (c, s) = if r == 0.0 {
            (1.0, C64::new(0.0, 0.0))
        } else if a.norm() == 0.0 {
            (0.0, C64::new(1.0, 0.0))
        } else {
            let an = a.norm();
            (an / r, (a / an) * b.conj() / r)
        };
        for j in k..=hi {
            let x = h[k][j];
            let y = h[k + 1][j];
            h[k][j] = x * c + s * y;
            h[k + 1][j] = -s.conj() * x + y * c;
        }
        rotations.push((c, s));
    }
    for (idx, k) in (lo..hi).enumerate() {
        let (c, s) = rotations[idx];
        for row in h.iter_mut().take(hi + 1).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = x * c + y * s.conj();
            row[k + 1] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += mu;
    }
}

fn hessenberg(h: &mut [Vec<C64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[i][k]).collect();
        let xnorm = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H with P = I - 2 v v^H acting on rows k+1..n
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|t| v[t].conj() * h[k + 1 + t][j]).sum();
            for t in 0..v.len() {
                h[k + 1 + t][j] -= v[t] * s * 2.0;
            }
        }
        // H <- H P acting on columns k+1..n
        for row in h.iter_mut() {
            let s: C64 = (0..v.len()).map(|t| row[k + 1 + t] * v[t]).sum();
            for t in 0..v.len() {
                row[k + 1 + t] -= s * v[t].conj() * 2.0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exact_kernel_of_jordan_power() {
        let j = Matrix::from_rows(vec![
            vec![Q::zero(), Q::one(), Q::zero()],
            vec![Q::zero(), Q::zero(), Q::one()],
            vec![Q::zero(), Q::zero(), Q::zero()],
        ])
        .unwrap();
        assert_eq!(exact_kernel(&j).len(), 1);
        assert_eq!(exact_kernel(&j.pow(2)).len(), 2);
        assert_eq!(exact_kernel(&j.pow(3)).len(), 3);
        for v in exact_kernel(&j.pow(2)) {
            assert!(j.pow(2).apply(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn exact_inverse_roundtrip() {
        let a = Matrix::from_rows(vec![
            vec![Q::from_i64(2), Q::imag_unit()],
            vec![Q::from_i64(1), Q::from_i64(3)],
        ])
        .unwrap();
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(a.matmul(&inv).unwrap(), Matrix::identity(2));
        let singular = Matrix::from_rows(vec![vec![Q::one(), Q::one()], vec![Q::one(), Q::one()]]).unwrap();
        assert!(matches!(inverse(&singular, 0.0), Err(Error::Singular)));
    }

    #[test]
    fn coordinates_in_a_skew_basis() {
        let basis = vec![vec![Q::one(), Q::one()], vec![Q::zero(), Q::one()]];
        let x = coordinates(&basis, &[Q::from_i64(2), Q::from_i64(5)], 0.0).unwrap();
        assert_eq!(x, vec![Q::from_i64(2), Q::from_i64(3)]);
        let line = vec![vec![Q::one(), Q::one()]];
        assert!(coordinates(&line, &[Q::one(), Q::zero()], 0.0).is_none());
    }

    #[test]
    fn jacobi_svd_reconstructs_singular_values() {
        let m = Matrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, -2.0)],
        ])
        .unwrap();
        let (mut s, _) = jacobi_svd(&m);
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((s[0] - 2.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);

        let rank1 = Matrix::from_rows(vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 2.0), c(2.0, 2.0)],
        ])
        .unwrap();
        let k = float_kernel::<C64>(&rank1, 1e-10);
        assert_eq!(k.len(), 1);
        let r = rank1.apply(&k[0]).unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn qr_eigenvalues_of_triangular_and_rotation() {
        let t = Matrix::from_rows(vec![
            vec![c(0.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, -1.0)],
        ])
        .unwrap();
        let mut e = eigenvalues::<C64>(&t);
        e.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((e[1] - c(0.0, 1.0)).norm() < 1e-12);

        // real rotation by 90 degrees has eigenvalues ±i
        let rot = Matrix::from_rows(vec![
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let mut e = eigenvalues::<C64>(&rot);
        e.sort_by(|a, b| (a.im, a.re).partial_cmp(&(b.im, b.re)).unwrap());
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((e[1] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((e[2] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn orthonormal_basis_drops_dependent_vectors() {
        let vs = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ];
        let b = orthonormal_basis(&vs, 1e-10);
        assert_eq!(b.len(), 2);
        assert!(scalar::dot(&b[0], &b[1]).norm() < 1e-14);
    }
}
