//! Symmetric tridiagonal eigenvalue tools: Sturm counts, bisection and
//! inverse iteration.

use crate::error::{Error, GeoResult};
use crate::scalar::Real;

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off.len() == diag.len() - 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> GeoResult<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal sizes {} and {} do not match",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the
    /// `LDL^T` pivots of `A - x I`.
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0.. {
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
            if i + 1 == self.len() {
                break;
            }
            q = self.diag[i + 1] - x - self.off[i] * self.off[i] / q;
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { T::zero() }
                + if i + 1 < n { self.off[i].abs() } else { T::zero() };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to machine
    /// precision.
    pub fn eigenvalue(&self, k: usize) -> GeoResult<T> {
        if k >= self.len() {
            return Err(Error::InvalidArgument(format!("eigenvalue index {k} out of range")));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let two = T::lit(2.0);
        for _ in 0..400 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::EigenNonConvergence(400))
    }

    /// Solves `(A - shift I) x = rhs` by the Thomas algorithm.
    pub fn solve_shifted(&self, shift: T, rhs: &[T]) -> GeoResult<Vec<T>> {
        let n = self.len();
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let tiny = T::epsilon() * self.gershgorin().1.abs().max(T::one());
        let mut denom = self.diag[0] - shift;
        for i in 0..n {
            if i > 0 {
                denom = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            }
            if denom.abs() < tiny {
                denom = if denom < T::zero() { -tiny } else { tiny };
            }
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            let prev = if i > 0 { self.off[i - 1] * d[i - 1] } else { T::zero() };
            d[i] = (rhs[i] - prev) / denom;
        }
        for i in (0..n - 1).rev() {
            let next = c[i] * d[i + 1];
            d[i] -= next;
        }
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular);
        }
        Ok(d)
    }

    /// Unit eigenvector for the eigenvalue `lambda` by shifted inverse
    /// iteration.
    pub fn eigenvector(&self, lambda: T) -> GeoResult<Vec<T>> {
        let n = self.len();
        let shift = lambda - T::lit(1e-10) * lambda.abs().max(T::one());
        let mut v = vec![T::one() / T::from_usize_lossy(n).sqrt(); n];
        for _ in 0..4 {
            let w = self.solve_shifted(shift, &v)?;
            let norm = w.iter().map(|&x| x * x).sum::<T>().sqrt();
            if !(norm > T::zero()) || !norm.is_finite() {
                return Err(Error::EigenNonConvergence(4));
            }
            v = w.into_iter().map(|x| x / norm).collect();
        }
        Ok(v)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

/// The pencil `A u = lambda W u` of a weighted path Laplacian with a
/// Dirichlet node after the last unknown: `(A u)_j = f_{j-1} (u_j - u_{j-1})
/// + f_j (u_j - u_{j+1})` with `f_{-1} = 0`, `u_n = 0`, and `W = diag(w)`.
///
/// Sturm counts use the differential recurrence `s_j = f_{j-1} s_{j-1} /
/// (s_{j-1} + f_{j-1}) - sigma w_j` for the shifted pivots `d_j = s_j + f_j`,
/// which never forms the large diagonal `f_{j-1} + f_j` and so resolves small
/// eigenvalues to high relative accuracy.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacePencil<T> {
    pub faces: Vec<T>,
    pub mass: Vec<T>,
}

impl<T: Real> LaplacePencil<T> {
    pub fn new(faces: Vec<T>, mass: Vec<T>) -> GeoResult<Self> {
        if faces.is_empty() || faces.len() != mass.len() {
            return Err(Error::InvalidArgument(format!(
                "pencil sizes {} and {} do not match",
                faces.len(),
                mass.len()
            )));
        }
        if faces.iter().chain(&mass).any(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { faces, mass })
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: T) -> usize {
        let mut count = 0;
        let mut s = -sigma * self.mass[0];
        for j in 0..self.len() {
            if j > 0 {
                let f = self.faces[j - 1];
                // a vanishing pivot is nudged below zero, relative to its face
                let floor = T::epsilon() * f;
                let mut d = s + f;
                if d.abs() < floor {
                    d = -floor;
                }
                s = f * (s / d) - sigma * self.mass[j];
            }
            if s + self.faces[j] < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Upper bound on the spectrum.
    pub fn upper_bound(&self) -> T {
        (0..self.len())
            .map(|j| {
                let left = if j > 0 { self.faces[j - 1] } else { T::zero() };
                T::lit(2.0) * (left + self.faces[j]) / self.mass[j]
            })
            .fold(T::zero(), T::max)
    }

    /// Smallest eigenvalue by bisection down to adjacent floats.
    pub fn lowest_eigenvalue(&self) -> GeoResult<T> {
        let (mut lo, mut hi) = (T::zero(), self.upper_bound());
        for _ in 0..2200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.count_below(mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::EigenNonConvergence(2200))
    }

    /// `W^{-1/2} A W^{-1/2}`.
    pub fn symmetrized(&self) -> SymTridiagonal<T> {
        let n = self.len();
        let diag = (0..n)
            .map(|j| {
                let left = if j > 0 { self.faces[j - 1] } else { T::zero() };
                (left + self.faces[j]) / self.mass[j]
            })
            .collect();
        let off = (0..n - 1)
            .map(|j| -self.faces[j] / (self.mass[j] * self.mass[j + 1]).sqrt())
            .collect();
        SymTridiagonal { diag, off }
    }

    /// `u^T A u = sum f_j (u_j - u_{j+1})^2`.
    pub fn energy(&self, u: &[T]) -> T {
        (0..self.len())
            .map(|j| {
                let next = if j + 1 < self.len() { u[j + 1] } else { T::zero() };
                self.faces[j] * (u[j] - next) * (u[j] - next)
            })
            .sum()
    }

    /// `u^T W u`.
    pub fn mass_norm_sq(&self, u: &[T]) -> T {
        u.iter().zip(&self.mass).map(|(&a, &w)| a * a * w).sum()
    }
}
