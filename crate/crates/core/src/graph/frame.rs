use crate::error::GeoResult;
use crate::linalg::{self, Mat};
use crate::scalar::Real;

/// Relative threshold below which an eigenvalue `lambda_i^2` counts as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Simultaneous diagonalization of `g` and the pulled-back fiber metric at a
/// graph point.
///
/// `x` holds `g`-orthonormal columns with
/// `h~(df X_i, df X_j) = lambda_i^2 delta_ij`, `lambdas_sq` descending.
/// `x_star = X_i / sqrt(1 + lambda_i^2)` is `g*`-orthonormal, and `u` is an
/// `h~`-orthonormal basis of the fiber whose first `rank` columns are
/// `df(X_i) / lambda_i`. The columns of `x` are positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphPointFrame<T> {
    pub g: Mat<T>,
    pub h_tilde: Mat<T>,
    pub jacobian: Mat<T>,
    pub g_star: Mat<T>,
    pub lambdas_sq: Vec<T>,
    pub rank: usize,
    pub x: Mat<T>,
    pub x_star: Mat<T>,
    pub u: Mat<T>,
    g_star_inv: Mat<T>,
}

impl<T: Real> GraphPointFrame<T> {
    /// Builds the frame from `g` (`m x m`), `h~` (`n x n`) and the Jacobian
    /// (`n x m`).
    pub fn new(g: Mat<T>, h_tilde: Mat<T>, jacobian: Mat<T>) -> GeoResult<Self> {
        let m = g.rows();
        let pull = jacobian.transpose().matmul(&h_tilde).matmul(&jacobian);
        let pull = Mat::from_fn(m, m, |i, j| (pull[(i, j)] + pull[(j, i)]) * T::lit(0.5));
        let (vals, vecs) = linalg::generalized_symmetric_eigen(&pull, &g)?;
        let mut lambdas_sq: Vec<T> = vals.iter().rev().map(|&v| v.max(T::zero())).collect();
        let mut x = Mat::from_fn(m, m, |i, j| vecs[(i, m - 1 - j)]);
        let top = lambdas_sq.first().copied().unwrap_or_else(T::zero);
        let cut = T::lit(RANK_THRESHOLD) * top;
        let rank = lambdas_sq.iter().filter(|&&l| l > cut && l > T::zero()).count();
        for l in lambdas_sq.iter_mut().skip(rank) {
            *l = T::zero();
        }
        orient(&mut x);
        let g_star = g.add(&pull);
        let g_star_inv = g_star.spd_inverse()?;
        let mut frame = Self {
            g,
            h_tilde,
            jacobian,
            g_star,
            lambdas_sq,
            rank,
            x_star: Mat::zeros(m, m),
            u: Mat::zeros(0, 0),
            x,
            g_star_inv,
        };
        frame.rebuild(None);
        Ok(frame)
    }

    /// Recomputes `x_star` and `u` from `x`; `completion` overrides the
    /// columns of `u` beyond the rank.
    fn rebuild(&mut self, completion: Option<Vec<Vec<T>>>) {
        let m = self.m();
        self.x_star = Mat::from_fn(m, m, |i, j| self.x[(i, j)] / (T::one() + self.lambdas_sq[j]).sqrt());
        let mut cols: Vec<Vec<T>> = (0..self.rank)
            .map(|i| {
                let v = self.jacobian.mul_vec(&self.x.column(i));
                linalg::scale(T::one() / self.lambdas_sq[i].sqrt(), &v)
            })
            .collect();
        match completion {
            Some(rest) => cols.extend(rest),
            None => cols = linalg::complete_orthonormal(&self.h_tilde, cols),
        }
        self.u = Mat::from_columns(&cols);
    }

    pub fn m(&self) -> usize {
        self.g.rows()
    }

    pub fn n(&self) -> usize {
        self.h_tilde.rows()
    }

    /// `lambda_i`, zero past the base dimension.
    pub fn lambda(&self, i: usize) -> T {
        self.lambdas_sq.get(i).map_or(T::zero(), |l| l.sqrt())
    }

    pub fn g_star_inverse(&self) -> &Mat<T> {
        &self.g_star_inv
    }

    /// `df(X) = J X`.
    pub fn df(&self, v: &[T]) -> Vec<T> {
        self.jacobian.mul_vec(v)
    }

    /// The `g*`/`h~` adjoint `df^*(U) = g*^{-1} J^T h~ U`.
    pub fn df_adjoint(&self, u: &[T]) -> Vec<T> {
        let w = self.h_tilde.mul_vec(u);
        self.g_star_inv.mul_vec(&self.jacobian.transpose().mul_vec(&w))
    }

    /// `||df||^2_{g*} = sum lambda_i^2 / (1 + lambda_i^2)`.
    pub fn df_norm_sq_star(&self) -> T {
        self.lambdas_sq.iter().map(|&l| l / (T::one() + l)).sum()
    }

    /// `prod (1 + lambda_i^2)^{-1/2}`.
    pub fn cos_theta_from_spectrum(&self) -> T {
        self.lambdas_sq
            .iter()
            .fold(T::one(), |acc, &l| acc / (T::one() + l).sqrt())
    }

    /// Maximum residual of each of the six eigen-relations, in order:
    /// `df(X*_i) = l_i/sqrt(1+l_i^2) U_i`, `df* df X_i = l_i^2/(1+l_i^2) X_i`,
    /// `(Id - df* df) X_i = X_i/(1+l_i^2)`, `df*(U_i) = l_i/sqrt(1+l_i^2) X*_i`,
    /// `df df* U_i = l_i^2/(1+l_i^2) U_i`, `(Id - df df*) U_i = U_i/(1+l_i^2)`.
    pub fn eigen_relation_residuals(&self) -> [T; 6] {
        let (m, n) = (self.m(), self.n());
        let mut out = [T::zero(); 6];
        let upd = |slot: &mut T, v: Vec<T>| *slot = slot.max(linalg::max_abs(&v));
        for i in 0..m {
            let l2 = self.lambdas_sq[i];
            let (a, b) = (l2.sqrt() / (T::one() + l2).sqrt(), l2 / (T::one() + l2));
            let xi = self.x.column(i);
            let xs = self.x_star.column(i);
            let ui = if i < n { self.u.column(i) } else { vec![T::zero(); n] };
            upd(&mut out[0], linalg::axpy(&self.df(&xs), -a, &ui));
            let dd = self.df_adjoint(&self.df(&xi));
            upd(&mut out[1], linalg::axpy(&dd, -b, &xi));
            let id = linalg::sub(&xi, &dd);
            upd(&mut out[2], linalg::axpy(&id, -T::one() / (T::one() + l2), &xi));
        }
        for i in 0..n {
            let l2 = if i < m { self.lambdas_sq[i] } else { T::zero() };
            let (a, b) = (l2.sqrt() / (T::one() + l2).sqrt(), l2 / (T::one() + l2));
            let ui = self.u.column(i);
            let xs = if i < m {
                self.x_star.column(i)
            } else {
                vec![T::zero(); m]
            };
            let adj = self.df_adjoint(&ui);
            upd(&mut out[3], linalg::axpy(&adj, -a, &xs));
            let dd = self.df(&adj);
            upd(&mut out[4], linalg::axpy(&dd, -b, &ui));
            let id = linalg::sub(&ui, &dd);
            upd(&mut out[5], linalg::axpy(&id, -T::one() / (T::one() + l2), &ui));
        }
        out
    }

    /// `g~` on the ambient tangent space at the graph point.
    pub fn ambient_metric(&self) -> Mat<T> {
        let (m, n) = (self.m(), self.n());
        Mat::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
            (true, true) => self.g[(i, j)],
            (false, false) => self.h_tilde[(i - m, j - m)],
            _ => T::zero(),
        })
    }

    /// `dGamma_f(X*_i) = (X*_i, df X*_i)`, a positively oriented
    /// `g~`-orthonormal basis of the tangent plane.
    pub fn tangent_frame(&self) -> Vec<Vec<T>> {
        (0..self.m())
            .map(|i| {
                let xs = self.x_star.column(i);
                let mut v = xs.clone();
                v.extend(self.df(&xs));
                v
            })
            .collect()
    }

    /// Orthogonal projection onto the normal space.
    pub fn normal_projection(&self, v: &[T]) -> Vec<T> {
        let gt = self.ambient_metric();
        let mut out = v.to_vec();
        for t in self.tangent_frame() {
            let c = gt.bilinear(&t, v);
            out = linalg::axpy(&out, -c, &t);
        }
        out
    }

    /// A `g~`-orthonormal basis of the normal space: projections of the
    /// fiber vectors `(0, U_alpha)`, orthonormalized.
    pub fn normal_frame(&self) -> GeoResult<Vec<Vec<T>>> {
        let m = self.m();
        let candidates: Vec<Vec<T>> = (0..self.n())
            .map(|a| {
                let mut v = vec![T::zero(); m];
                v.extend(self.u.column(a));
                self.normal_projection(&v)
            })
            .collect();
        linalg::orthonormalize(&self.ambient_metric(), &candidates)
    }

    /// Re-mixes the frame inside every cluster of equal `lambda_i^2`, and the
    /// completion of `u` beyond the rank, by random rotations built from the
    /// samples of `sample` (e.g. uniform on `[-1, 1]`). Frame-independent
    /// quantities must not change.
    pub fn mix_degenerate(&self, mut sample: impl FnMut() -> T) -> Self {
        let (m, n) = (self.m(), self.n());
        let mut out = self.clone();
        let scale = T::one().max(self.lambdas_sq.first().copied().unwrap_or_else(T::zero));
        let tol = T::lit(RANK_THRESHOLD) * scale;
        let mut start = 0;
        while start < m {
            let mut end = start + 1;
            while end < m && (self.lambdas_sq[start] - self.lambdas_sq[end]).abs() <= tol {
                end += 1;
            }
            if end - start > 1 {
                let q = random_rotation(end - start, &mut sample);
                for i in 0..m {
                    let row: Vec<T> = (start..end).map(|j| self.x[(i, j)]).collect();
                    for (c, j) in (start..end).enumerate() {
                        out.x[(i, j)] = (0..row.len()).map(|r| row[r] * q[(r, c)]).sum();
                    }
                }
            }
            start = end;
        }
        orient(&mut out.x);
        let extra = n - self.rank;
        let completion = if extra > 1 {
            let q = random_rotation(extra, &mut sample);
            (0..extra)
                .map(|c| {
                    (0..n)
                        .map(|i| (0..extra).map(|r| self.u[(i, self.rank + r)] * q[(r, c)]).sum())
                        .collect()
                })
                .collect()
        } else {
            (self.rank..n).map(|j| self.u.column(j)).collect()
        };
        out.rebuild(Some(completion));
        out
    }
}

fn orient<T: Real>(x: &mut Mat<T>) {
    let m = x.rows();
    if m > 0 && x.determinant() < T::zero() {
        for i in 0..m {
            x[(i, m - 1)] = -x[(i, m - 1)];
        }
    }
}

fn random_rotation<T: Real>(s: usize, sample: &mut impl FnMut() -> T) -> Mat<T> {
    let id = Mat::identity(s);
    loop {
        let cols: Vec<Vec<T>> = (0..s).map(|_| (0..s).map(|_| sample()).collect()).collect();
        if let Ok(q) = linalg::orthonormalize(&id, &cols) {
            return Mat::from_columns(&q);
        }
    }
}
