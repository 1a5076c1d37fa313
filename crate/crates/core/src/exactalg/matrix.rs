use std::fmt;

use super::Scalar;
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn new(rows: usize, cols: usize, data: Vec<K>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    /// Builds a matrix from rows of length `cols`; `rows` may be empty.
    pub fn from_rows(cols: usize, rows: &[Vec<K>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<K>]) -> Self {
        Self::from_rows(rows, cols).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<K>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out: Matrix<K> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    /// Kronecker product; row `(i, k)` of the result is `i * rhs.rows + k`.
    pub fn kron(&self, rhs: &Matrix<K>) -> Matrix<K> {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self.get(r / rhs.rows, c / rhs.cols).clone() * rhs.get(r % rhs.rows, c % rhs.cols).clone()
        })
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, below.cols);
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl<K: fmt::Debug> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cols == 0 {
            return write!(f, "[{} x 0]", self.rows);
        }
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

pub fn dot<K: Scalar>(a: &[K], b: &[K]) -> K {
    a.iter()
        .zip(b)
        .fold(K::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `a + lambda * b`, componentwise.
pub fn axpy<K: Scalar>(a: &[K], lambda: &K, b: &[K]) -> Vec<K> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + lambda.clone() * y.clone())
        .collect()
}

pub fn scale<K: Scalar>(lambda: &K, v: &[K]) -> Vec<K> {
    v.iter().map(|x| lambda.clone() * x.clone()).collect()
}

pub fn unit_vector<K: Scalar>(n: usize, i: usize) -> Vec<K> {
    let mut v = vec![K::zero(); n];
    v[i] = K::one();
    v
}

pub fn is_zero_vec<K: Scalar>(v: &[K]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Kronecker product of two coordinate vectors.
pub fn kron_vec<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y.clone());
        }
    }
    out
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref<K> {
    pub rank: usize,
    /// The nonzero rows of the reduced row-echelon form.
    pub reduced: Matrix<K>,
    /// Pivot column of each row of `reduced`.
    pub pivots: Vec<usize>,
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
pub fn rref<K: Scalar>(m: &Matrix<K>) -> Rref<K> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("pivot is nonzero");
        for j in c..cols {
            let v = a.get(r, j).clone() * inv.clone();
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = a.get(i, j).clone() - factor.clone() * a.get(r, j).clone();
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.data.truncate(r * cols);
    a.rows = r;
    Rref {
        rank: r,
        reduced: a,
        pivots,
    }
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column.
pub fn nullspace<K: Scalar>(m: &Matrix<K>) -> Vec<Vec<K>> {
    let red = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.reduced.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// All solutions of `a x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution<K> {
    /// The solution with every free variable set to zero.
    pub particular: Vec<K>,
    pub nullspace: Vec<Vec<K>>,
}

pub fn solve<K: Scalar>(a: &Matrix<K>, b: &[K]) -> Result<Solution<K>> {
    if a.rows != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows,
            b.len()
        )));
    }
    let cols = a.cols;
    let aug = Matrix::from_fn(a.rows, cols + 1, |r, c| {
        if c < cols {
            a.get(r, c).clone()
        } else {
            b[r].clone()
        }
    });
    let red = rref(&aug);
    if red.pivots.last() == Some(&cols) {
        return Err(Error::Inconsistent);
    }
    let mut particular = vec![K::zero(); cols];
    for (i, &p) in red.pivots.iter().enumerate() {
        particular[p] = red.reduced.get(i, cols).clone();
    }
    Ok(Solution {
        particular,
        nullspace: nullspace(a),
    })
}

/// Inverse of a square matrix, if it exists.
pub fn invert<K: Scalar>(m: &Matrix<K>) -> Option<Matrix<K>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |r, c| {
        if c < n {
            m.get(r, c).clone()
        } else if c - n == r {
            K::one()
        } else {
            K::zero()
        }
    });
    let red = rref(&aug);
    if (0..n).any(|i| red.pivots.get(i) != Some(&i)) {
        return None;
    }
    Some(Matrix::from_fn(n, n, |r, c| red.reduced.get(r, n + c).clone()))
}
