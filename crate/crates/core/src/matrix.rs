//! Dense square matrices over a [`Scalar`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, Mul};

use crate::error::Error;
use crate::scalar::{self, Mode, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![S::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    pub fn diagonal(entries: &[S]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i].clone() } else { S::zero() })
    }

    /// Builds from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, Error> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: dim });
            }
            data.extend(row);
        }
        Ok(Matrix { dim, data })
    }

    /// Matrix whose j-th column is `columns[j]`; `columns` must be square.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self, Error> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::NotSquare { row: j, len: c.len(), expected: dim });
            }
        }
        Ok(Self::from_fn(dim, |i, j| columns[j][i].clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    /// Matrix product; fails on a dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Result<Self, Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, Error> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, alpha: &S) -> Self {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| alpha.clone() * a.clone()).collect(),
        }
    }

    /// `self − z·I`.
    pub fn shifted(&self, z: &S) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            let v = out.get(i, i).clone() - z.clone();
            out.set(i, i, v);
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        out
    }

    /// Matrix–vector product; fails on a length mismatch.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>, Error> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.len() });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[S]) -> Vec<S> {
        (0..self.dim).map(|i| scalar::dot_plain(self.row(i), v)).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        scalar::max_magnitude(&self.data)
    }

    /// Every entry is zero (exactly, or with modulus at most `bound`).
    pub fn is_negligible(&self, bound: f64) -> bool {
        self.data.iter().all(|a| a.is_negligible(bound))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_hermitian(&self, bound: f64) -> bool {
        (0..self.dim).all(|i| {
            (i..self.dim).all(|j| (self.get(i, j).clone() - self.get(j, i).conj()).is_negligible(bound))
        })
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a + b, |i, j| {
            if i < a && j < a {
                self.get(i, j).clone()
            } else if i >= a && j >= a {
                other.get(i - a, j - a).clone()
            } else {
                S::zero()
            }
        })
    }

    /// `self · other − other · self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, Error> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }
}

impl<S: Scalar> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        self.get(i, j)
    }
}

/// Panics on a dimension mismatch; use [`Matrix::matmul`] for a checked product.
impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        self.mul_unchecked(rhs)
    }
}
