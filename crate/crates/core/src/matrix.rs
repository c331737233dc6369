//! Dense integer matrices and the sparse coboundary operator.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cochain::Coefficient;

/// Row-major dense matrix over an integer type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix<T = BigInt> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        IntMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self
    where
        T: num_traits::One,
    {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> IntMatrix<U> {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Sub-matrix made of the given rows, in order.
    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut data = Vec::new();
        let mut n = 0;
        for r in rows {
            data.extend_from_slice(self.row(r));
            n += 1;
        }
        IntMatrix { rows: n, cols: self.cols, data }
    }

    /// Sub-matrix made of the given columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.data[r * cols.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
}

impl IntMatrix<BigInt> {
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |r, c| ToPrimitive::to_f64(self.get(r, c)).unwrap_or(f64::NAN))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|v| if v < &BigInt::zero() { -v } else { v.clone() }).max().unwrap_or_default()
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::from_rows(rows, cols, data.iter().map(|&v| BigInt::from(v)).collect())
    }
}

/// Sparse coboundary `d_k : C^k -> C^{k+1}`. Row `r` lists the `k`-faces of the
/// `r`-th `(k+1)`-simplex with their incidence signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coboundary {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    signs: Vec<i8>,
}

impl Coboundary {
    pub(crate) fn from_rows(cols: usize, rows: Vec<Vec<(usize, i8)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut signs = Vec::new();
        row_ptr.push(0);
        for row in &rows {
            for &(c, s) in row {
                col_idx.push(c);
                signs.push(s);
            }
            row_ptr.push(col_idx.len());
        }
        Coboundary { rows: rows.len(), cols, row_ptr, col_idx, signs }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Nonzero entries of row `r` as `(column, sign)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.signs[range].iter().copied())
    }

    pub fn apply<R: Coefficient>(&self, x: &[R]) -> Vec<R> {
        assert_eq!(x.len(), self.cols, "coboundary applied to a cochain of the wrong length");
        (0..self.rows)
            .map(|r| {
                let mut acc = R::zero();
                for (c, s) in self.row(r) {
                    acc.add_signed(s, &x[c]);
                }
                acc
            })
            .collect()
    }

    pub fn apply_transpose<R: Coefficient>(&self, y: &[R]) -> Vec<R> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![R::zero(); self.cols];
        for (r, yr) in y.iter().enumerate() {
            for (c, s) in self.row(r) {
                out[c].add_signed(s, yr);
            }
        }
        out
    }

    pub fn to_dense_int(&self) -> IntMatrix<BigInt> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, s) in self.row(r) {
                m.set(r, c, BigInt::from(s));
            }
        }
        m
    }

    pub fn to_dense_i64(&self) -> IntMatrix<i64> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, s) in self.row(r) {
                m.set(r, c, i64::from(s));
            }
        }
        m
    }

    pub fn to_dense_f64(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, s) in self.row(r) {
                m[(r, c)] = f64::from(s);
            }
        }
        m
    }
}

impl<T: Debug> std::fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> =
                self.data[r * self.cols..(r + 1) * self.cols].iter().map(|v| format!("{v:?}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
