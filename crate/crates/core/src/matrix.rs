//! Small dense matrices over a [`Scalar`] backend.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use std::fmt;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diag(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { S::zero() })
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

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    fn check_same(&self, o: &Self) {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix shape mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same(o);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check_same(o);
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                if !self[(i, k)].is_zero() {
                    acc = acc + self[(i, k)].clone() * o[(k, j)].clone();
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = acc + self[(i, k)].clone() * vk.clone();
                }
                acc
            })
            .collect()
    }

    /// Commutator `self*o - o*self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Frobenius norm in `f64`.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in from..self.rows {
            let v = &self[(r, col)];
            if v.is_zero() {
                continue;
            }
            let m = v.to_f64().abs();
            if S::EXACT {
                return Some(r);
            }
            if best.map_or(true, |(_, b)| m > b) {
                best = Some((r, m));
            }
        }
        best.map(|(r, _)| r)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = m.pivot_row(c, c) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone() / piv.clone();
                for j in c..n {
                    let v = m[(r, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = m.pivot_row(c, c).ok_or(Error::Singular)?;
            m.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = m[(c, c)].clone();
            if !S::EXACT && piv.to_f64().abs() < 1e-300 {
                return Err(Error::Singular);
            }
            for j in 0..n {
                m[(c, j)] = m[(c, j)].clone() / piv.clone();
                inv[(c, j)] = inv[(c, j)].clone() / piv.clone();
            }
            for r in 0..n {
                if r == c || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for j in 0..n {
                    let a = m[(r, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(r, j)] = a;
                    let b = inv[(r, j)].clone() - f.clone() * inv[(c, j)].clone();
                    inv[(r, j)] = b;
                }
            }
        }
        Ok(inv)
    }
}

impl Mat<Q> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat<Q>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pivot_row(c, r) else { continue };
            m.swap_rows(p, r);
            let piv = m[(r, c)].clone();
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].clone() / piv.clone();
            }
            for i in 0..m.rows {
                if i == r || Scalar::is_zero(&m[(i, c)]) {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact null-space basis; each vector has a unit entry at its free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![<Q as Scalar>::zero(); self.cols];
                v[f] = <Q as Scalar>::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }
}

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Numerical rank with cutoff `rel_tol * sigma_max`.
    pub fn rank_tol(&self, rel_tol: f64) -> usize {
        let s = self.to_nalgebra().singular_values();
        let smax = s.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        s.iter().filter(|&&v| v > rel_tol * smax).count()
    }

    /// Orthonormal null-space basis from the SVD with cutoff `rel_tol * sigma_max`.
    pub fn nullspace_tol(&self, rel_tol: f64) -> Vec<Vec<f64>> {
        let n = self.cols;
        let mut a = self.to_nalgebra();
        if a.nrows() < n {
            a = a.resize_vertically(n, 0.0);
        }
        let svd = a.svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cut = if smax == 0.0 { f64::INFINITY } else { rel_tol * smax };
        (0..n)
            .filter(|&k| svd.singular_values[k] <= cut || smax == 0.0)
            .map(|k| (0..n).map(|j| vt[(k, j)]).collect())
            .collect()
    }
}
