//! Small dense linear algebra.
//!
//! Every matrix in this crate is tiny (the dimension of a chart, at most a
//! handful), so a row-major `Vec` with straightforward O(n^3) kernels is all
//! that is needed. The symmetric eigensolver is cyclic Jacobi, which stays
//! accurate for clustered and repeated eigenvalues.

use std::ops::{Index, IndexMut};

use crate::error::{Error, GeoResult};
use crate::scalar::Real;

const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i])
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { T::zero() })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn set_column(&mut self, j: usize, v: &[T]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * rhs[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scaled(-T::one()))
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> T {
        dot(u, &self.mul_vec(v))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Lower Cholesky factor `L` with `M = L L^T`.
    pub fn cholesky(&self) -> GeoResult<Self> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite);
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(l)
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn spd_inverse(&self) -> GeoResult<Self> {
        let l = self.cholesky()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let y = forward_substitute(&l, &e);
            let x = backward_substitute_transposed(&l, &y);
            inv.set_column(j, &x);
        }
        Ok(inv)
    }

    /// Determinant via partial-pivoting LU.
    pub fn determinant(&self) -> T {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut a = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())
                .unwrap_or(k);
            if a[(p, k)] == T::zero() {
                return T::zero();
            }
            if p != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        det
    }

    /// Inverse of a general square matrix by Gauss-Jordan elimination.
    pub fn inverse(&self) -> GeoResult<Self> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())
                .unwrap_or(k);
            if a[(p, k)] == T::zero() || !a[(p, k)].is_finite() {
                return Err(Error::Singular);
            }
            for j in 0..n {
                let (x, y) = (a[(k, j)], a[(p, j)]);
                a[(k, j)] = y;
                a[(p, j)] = x;
                let (x, y) = (inv[(k, j)], inv[(p, j)]);
                inv[(k, j)] = y;
                inv[(p, j)] = x;
            }
            let pivot = a[(k, k)];
            for j in 0..n {
                a[(k, j)] /= pivot;
                inv[(k, j)] /= pivot;
            }
            for i in 0..n {
                if i != k {
                    let factor = a[(i, k)];
                    if factor != T::zero() {
                        for j in 0..n {
                            let (akj, ikj) = (a[(k, j)], inv[(k, j)]);
                            a[(i, j)] -= factor * akj;
                            inv[(i, j)] -= factor * ikj;
                        }
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order and the orthonormal eigenvectors
    /// as the columns of the second matrix.
    pub fn symmetric_eigen(&self) -> GeoResult<(Vec<T>, Self)> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let scale: T = a.data.iter().map(|&x| x * x).sum::<T>().sqrt();
        let mut converged = n < 2 || scale == T::zero();
        let mut sweep = 0;
        while !converged {
            let off: T = (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            if off.sqrt() <= T::epsilon() * scale {
                converged = true;
                break;
            }
            if sweep == MAX_JACOBI_SWEEPS {
                break;
            }
            sweep += 1;
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
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        if !converged {
            return Err(Error::EigenNonConvergence(MAX_JACOBI_SWEEPS));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
        let values = order.iter().map(|&i| a[(i, i)]).collect();
        let vectors = Self::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok((values, vectors))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `L y = b` for lower-triangular `L`.
pub fn forward_substitute<T: Real>(l: &Mat<T>, b: &[T]) -> Vec<T> {
    let n = b.len();
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Solves `L^T x = y` for lower-triangular `L`.
pub fn backward_substitute_transposed<T: Real>(l: &Mat<T>, y: &[T]) -> Vec<T> {
    let n = y.len();
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Generalized symmetric-definite eigenproblem `A v = mu B v`.
///
/// `B` must be symmetric positive definite. Eigenvalues are returned in
/// ascending order; eigenvectors are the columns of the returned matrix and
/// are `B`-orthonormal (`V^T B V = I`).
pub fn generalized_symmetric_eigen<T: Real>(a: &Mat<T>, b: &Mat<T>) -> GeoResult<(Vec<T>, Mat<T>)> {
    let n = a.rows();
    let l = b.cholesky()?;
    // C = L^{-1} A L^{-T}
    let mut linv_a = Mat::zeros(n, n);
    for j in 0..n {
        linv_a.set_column(j, &forward_substitute(&l, &a.column(j)));
    }
    let mut c = Mat::zeros(n, n);
    let linv_a_t = linv_a.transpose();
    for j in 0..n {
        c.set_column(j, &forward_substitute(&l, &linv_a_t.column(j)));
    }
    // symmetrize rounding
    let c = Mat::from_fn(n, n, |i, j| (c[(i, j)] + c[(j, i)]) * T::lit(0.5));
    let (values, y) = c.symmetric_eigen()?;
    let mut v = Mat::zeros(n, n);
    for j in 0..n {
        v.set_column(j, &backward_substitute_transposed(&l, &y.column(j)));
    }
    Ok((values, v))
}

#[inline]
pub fn dot<T: Real>(u: &[T], v: &[T]) -> T {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(&a, &b)| a * b).sum()
}

pub fn add<T: Real>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(&a, &b)| a + b).collect()
}

pub fn sub<T: Real>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(&a, &b)| a - b).collect()
}

pub fn scale<T: Real>(s: T, u: &[T]) -> Vec<T> {
    u.iter().map(|&a| s * a).collect()
}

/// `u + s v`
pub fn axpy<T: Real>(u: &[T], s: T, v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(&a, &b)| a + s * b).collect()
}

pub fn max_abs<T: Real>(u: &[T]) -> T {
    u.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// Orthonormalizes `vectors` for the inner product `metric` (modified
/// Gram-Schmidt, two passes). Fails on linear dependence.
pub fn orthonormalize<T: Real>(metric: &Mat<T>, vectors: &[Vec<T>]) -> GeoResult<Vec<Vec<T>>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let norm0 = metric.bilinear(v, v).sqrt();
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &out {
                let c = metric.bilinear(e, &w);
                w = axpy(&w, -c, e);
            }
        }
        let norm = metric.bilinear(&w, &w).sqrt();
        if !(norm > T::lit(1e-10) * norm0.max(T::min_positive_value())) {
            return Err(Error::Singular);
        }
        out.push(scale(T::one() / norm, &w));
    }
    Ok(out)
}

/// Extends the `metric`-orthonormal family `basis` to a full basis of
/// `R^dim`, taking at each step the coordinate direction with the largest
/// residual after projection.
pub fn complete_orthonormal<T: Real>(metric: &Mat<T>, mut basis: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let dim = metric.rows();
    while basis.len() < dim {
        let mut best: Option<(T, Vec<T>)> = None;
        for j in 0..dim {
            let mut w = vec![T::zero(); dim];
            w[j] = T::one();
            for _ in 0..2 {
                for e in &basis {
                    let c = metric.bilinear(e, &w);
                    w = axpy(&w, -c, e);
                }
            }
            let norm = metric.bilinear(&w, &w).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("dim > 0");
        basis.push(scale(T::one() / norm, &w));
    }
    basis
}
