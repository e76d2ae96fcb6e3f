//! Small dense matrices.
//!
//! Every matrix in this crate is at most 6x6, so a row-major `Vec` with
//! straightforward loops is all that is needed.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
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

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// `selfᵀ v`
    pub fn tr_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o = *o + self[(i, j)] * vi;
            }
        }
        out
    }

    /// `xᵀ self x`
    pub fn quadratic_form(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows {
            let mut row = T::zero();
            for j in 0..self.cols {
                row = row + self[(i, j)] * x[j];
            }
            acc = acc + x[i] * row;
        }
        acc
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    /// Rows `ri` and columns `ci` of `self`, in the given order.
    pub fn select(&self, ri: &[usize], ci: &[usize]) -> Self {
        let mut out = Self::zeros(ri.len(), ci.len());
        for (a, &i) in ri.iter().enumerate() {
            for (b, &j) in ci.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, rhs: &Matrix<T>) -> T {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), |m, d| if d > m { d } else { m })
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.transpose()) <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting. Exact for
    /// rational scalars.
    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .abs()
                        .partial_cmp(&m[(b, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if m[(pivot, col)] == T::zero() {
                return T::zero();
            }
            if pivot != col {
                m.swap_rows(pivot, col);
                det = -det;
            }
            let p = m[(col, col)];
            det = det * p;
            for r in col + 1..n {
                let f = m[(r, col)] / p;
                if f == T::zero() {
                    continue;
                }
                for c in col..n {
                    m[(r, c)] = m[(r, c)] - f * m[(col, c)];
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse. Fails on an exactly zero pivot.
    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    m[(a, col)]
                        .abs()
                        .partial_cmp(&m[(b, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if m[(pivot, col)] == T::zero() {
                return Err(Error::Singular);
            }
            m.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = m[(col, col)];
            for c in 0..n {
                m[(col, c)] = m[(col, c)] / p;
                inv[(col, c)] = inv[(col, c)] / p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m[(r, col)];
                if f == T::zero() {
                    continue;
                }
                for c in 0..n {
                    m[(r, c)] = m[(r, c)] - f * m[(col, c)];
                    inv[(r, c)] = inv[(r, c)] - f * inv[(col, c)];
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl<T: Real> Matrix<T> {
    /// Lower Cholesky factor, or `None` when the matrix is not positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d = d - l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) {
                return None;
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s = s - l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Some(l)
    }

    /// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let mut off = T::zero();
            let mut diag = T::zero();
            for i in 0..n {
                diag = diag + a[(i, i)] * a[(i, i)];
                for j in 0..n {
                    if i != j {
                        off = off + a[(i, j)] * a[(i, j)];
                    }
                }
            }
            if off <= eps * eps * diag {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// Spectral condition number of a symmetric positive-definite matrix.
    pub fn spd_condition(&self) -> T {
        let ev = self.symmetric_eigenvalues();
        match (ev.first(), ev.last()) {
            (Some(&lo), Some(&hi)) if lo > T::zero() => hi / lo,
            (Some(_), Some(_)) => T::infinity(),
            _ => T::one(),
        }
    }

    /// `ln det` of a symmetric positive-definite matrix via Cholesky.
    pub fn spd_log_det(&self) -> Option<T> {
        let l = self.cholesky()?;
        Some((0..self.rows).map(|i| l[(i, i)].ln()).sum::<T>() * T::lit(2.0))
    }

    pub fn symmetrize(&self) -> Self {
        self.add(&self.transpose()).scale(T::lit(0.5))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.matmul(rhs)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
