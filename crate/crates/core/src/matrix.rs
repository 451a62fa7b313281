//! A small dense row-major matrix container shared by the integer and
//! group-ring layers.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bsgroup::GroupParam;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no
    /// rows at all.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Builds a square matrix from rows.
    pub fn square(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        Self::from_rows(rows, n)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn try_map<U: Clone>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Block-diagonal sum; off-diagonal blocks are filled with `zero`.
    pub fn block_diag(&self, other: &Matrix<T>, zero: &T) -> Matrix<T> {
        let (r1, c1) = (self.rows, self.cols);
        Matrix::from_fn(r1 + other.rows, c1 + other.cols, |i, j| {
            if i < r1 && j < c1 {
                self[(i, j)].clone()
            } else if i >= r1 && j >= c1 {
                other[(i - r1, j - c1)].clone()
            } else {
                zero.clone()
            }
        })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

pub type IntMatrix = Matrix<BigInt>;

impl Matrix<BigInt> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| BigInt::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(), cols)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| (0..self.cols).map(|l| &self[(i, l)] * &other[(l, j)]).sum()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }
}

/// Square and rectangular matrices over `Z[B(k)]`.
pub type RingMatrix = Matrix<GroupRingElt>;

impl Matrix<GroupRingElt> {
    pub fn zeros_over(rows: usize, cols: usize, k: GroupParam) -> Self {
        Matrix::from_fn(rows, cols, |_, _| GroupRingElt::zero(k))
    }

    pub fn identity_over(n: usize, k: GroupParam) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { GroupRingElt::one(k) } else { GroupRingElt::zero(k) })
    }

    /// Lifts an integer matrix along `Z → Z[B(k)]`.
    pub fn from_integers(m: &IntMatrix, k: GroupParam) -> Self {
        m.map(|v| GroupRingElt::from_int(v.clone(), k))
    }

    /// Checks that every entry lives over `k`.
    pub fn check_param(&self, k: GroupParam) -> Result<()> {
        for e in &self.data {
            if e.param() != k {
                return Err(Error::ParamMismatch { left: k.k(), right: e.param().k() });
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self, k: GroupParam) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = GroupRingElt::zero(k);
                for l in 0..self.cols {
                    let a = &self[(i, l)];
                    let b = &other[(l, j)];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                data.push(acc);
            }
        }
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    /// Entrywise involution (no transpose).
    pub fn involute_entries(&self) -> Self {
        self.map(GroupRingElt::involute)
    }

    /// Conjugate transpose `A*`, with `(A*)_{ij} = involute(A_{ji})`.
    pub fn conjugate_transpose(&self) -> Self {
        self.transpose().involute_entries()
    }

    /// Entrywise augmentation.
    pub fn augment(&self) -> IntMatrix {
        self.map(GroupRingElt::augment)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() }))
    }

    pub fn to_human_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(GroupRingElt::to_human).collect()).collect()
    }
}
