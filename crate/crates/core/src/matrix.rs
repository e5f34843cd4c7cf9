//! Dense matrices of exact scalars, row-major.
//!
//! A linear map `V -> W` with `dim V = m`, `dim W = n` is represented by the
//! m x n matrix of its coefficient rows, acting on row vectors: the i-th row
//! holds the coordinates of the image of the i-th basis vector. Composition
//! of maps is then the ordinary matrix product in the same order.

use alloc::vec::Vec;
use core::fmt;

use crate::comb::Combination;
use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, entries: alloc::vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension(alloc::format!("ragged rows")));
        }
        Ok(DenseMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Integer literal rows, for tests and fixtures.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix::from_fn(r, c, |i, j| ExactScalar::from_int(rows[i][j]))
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

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(alloc::format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(DenseMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = ExactScalar::zero_like_of(self, rhs);
            for k in 0..self.cols {
                let p = self.get(i, k) * rhs.get(k, j);
                acc = &acc + &p;
            }
            acc
        }))
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(alloc::format!("sum of unequal shapes")));
        }
        Ok(DenseMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(alloc::format!("difference of unequal shapes")));
        }
        Ok(DenseMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    pub fn scale(&self, c: &ExactScalar) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    pub fn neg(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    /// Submatrix selected by 1-based row and column combinations.
    pub fn submatrix(&self, rows: &Combination, cols: &Combination) -> Result<DenseMatrix> {
        if rows.indices().last().is_some_and(|&r| r > self.rows)
            || cols.indices().last().is_some_and(|&c| c > self.cols)
        {
            return Err(Error::Dimension(alloc::format!("submatrix indices out of range")));
        }
        Ok(DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows.indices()[i] - 1, cols.indices()[j] - 1).clone()
        }))
    }

    /// Stacks `rhs` below `self`.
    pub fn vstack(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.cols {
            return Err(Error::Dimension(alloc::format!("vstack with unequal widths")));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Ok(DenseMatrix { rows: self.rows + rhs.rows, cols: self.cols, entries })
    }
}

impl ExactScalar {
    /// Zero in the scalar domain shared by two matrices (rational if empty).
    fn zero_like_of(a: &DenseMatrix, b: &DenseMatrix) -> ExactScalar {
        a.entries
            .first()
            .or_else(|| b.entries.first())
            .map_or_else(ExactScalar::zero, ExactScalar::zero_like)
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::Combination;

    #[test]
    fn product_and_identity() {
        let a = DenseMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let id = DenseMatrix::identity(2);
        assert_eq!(a.matmul(&id).unwrap(), a);
        let b = DenseMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab, DenseMatrix::from_int_rows(&[&[2, 1], &[4, 3]]));
        assert!(a.matmul(&DenseMatrix::zero(3, 2)).is_err());
    }

    #[test]
    fn submatrix_selects_1_based() {
        let a = DenseMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let r = Combination::new(vec![1, 3], 3).unwrap();
        let c = Combination::new(vec![2, 3], 3).unwrap();
        let s = a.submatrix(&r, &c).unwrap();
        assert_eq!(s, DenseMatrix::from_int_rows(&[&[2, 3], &[8, 9]]));
    }

    #[test]
    fn transpose_involution() {
        let a = DenseMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(a.transpose().transpose(), a);
    }
}
