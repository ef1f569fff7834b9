use std::fmt;
use std::sync::Arc;

use super::chart::Chart;
use super::fd::{central_diff, FdConfig};
use crate::error::GeoResult;
use crate::linalg::Mat;
use crate::scalar::Real;

type EvalFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
type JacobianFn<T> = Arc<dyn Fn(&[T]) -> Mat<T> + Send + Sync>;
type SecondFn<T> = Arc<dyn Fn(&[T]) -> Vec<Mat<T>> + Send + Sync>;

/// A smooth map between charts together with its differential.
///
/// The Jacobian (`n x m`, rows indexed by target coordinates) and the
/// coordinate second derivatives (one `m x m` matrix per target coordinate)
/// default to central differences; analytic versions may be attached.
#[derive(Clone)]
pub struct GraphMap<T> {
    source: Arc<Chart<T>>,
    target: Arc<Chart<T>>,
    eval: EvalFn<T>,
    jacobian: Option<JacobianFn<T>>,
    second: Option<SecondFn<T>>,
}

impl<T: Real> GraphMap<T> {
    pub fn new(
        source: Arc<Chart<T>>,
        target: Arc<Chart<T>>,
        eval: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            source,
            target,
            eval: Arc::new(eval),
            jacobian: None,
            second: None,
        }
    }

    pub fn with_jacobian(mut self, jac: impl Fn(&[T]) -> Mat<T> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn with_second_derivatives(mut self, second: impl Fn(&[T]) -> Vec<Mat<T>> + Send + Sync + 'static) -> Self {
        self.second = Some(Arc::new(second));
        self
    }

    /// The constant map `x -> value`.
    pub fn constant(source: Arc<Chart<T>>, target: Arc<Chart<T>>, value: Vec<T>) -> Self {
        let (m, n) = (source.dim(), target.dim());
        Self::new(source, target, move |_| value.clone())
            .with_jacobian(move |_| Mat::zeros(n, m))
            .with_second_derivatives(move |_| vec![Mat::zeros(m, m); n])
    }

    /// The affine map `x -> A x + b` (in coordinates).
    pub fn affine(source: Arc<Chart<T>>, target: Arc<Chart<T>>, a: Mat<T>, b: Vec<T>) -> Self {
        let (m, n) = (source.dim(), target.dim());
        assert_eq!((a.rows(), a.cols()), (n, m), "affine matrix must be n x m");
        let a_eval = a.clone();
        Self::new(source, target, move |x| {
            a_eval.mul_vec(x).iter().zip(&b).map(|(&u, &v)| u + v).collect()
        })
        .with_jacobian(move |_| a.clone())
        .with_second_derivatives(move |_| vec![Mat::zeros(m, m); n])
    }

    pub fn source(&self) -> &Arc<Chart<T>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart<T>> {
        &self.target
    }

    #[inline]
    pub fn eval(&self, x: &[T]) -> Vec<T> {
        (self.eval)(x)
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn jacobian_at(&self, x: &[T], fd: &FdConfig<T>) -> GeoResult<Mat<T>> {
        if let Some(j) = &self.jacobian {
            return Ok(j(x));
        }
        self.fd_jacobian(x, fd)
    }

    /// Central-difference Jacobian, ignoring any analytic override.
    pub fn fd_jacobian(&self, x: &[T], fd: &FdConfig<T>) -> GeoResult<Mat<T>> {
        let (m, n) = (self.source.dim(), self.target.dim());
        let mut jac = Mat::zeros(n, m);
        for i in 0..m {
            let col = central_diff(|p| Ok(self.eval(p)), x, i, fd.first_step(x[i]))?;
            jac.set_column(i, &col);
        }
        Ok(jac)
    }

    /// Coordinate second derivatives `d_i d_j f^alpha`, one matrix per alpha.
    pub fn second_derivatives_at(&self, x: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<Mat<T>>> {
        if let Some(s) = &self.second {
            return Ok(s(x));
        }
        let (m, n) = (self.source.dim(), self.target.dim());
        let mut out = vec![Mat::zeros(m, m); n];
        if self.jacobian.is_some() {
            // differentiate the analytic Jacobian once
            for i in 0..m {
                let col = central_diff(
                    |p| Ok(self.jacobian_at(p, fd)?.as_slice().to_vec()),
                    x,
                    i,
                    fd.first_step(x[i]),
                )?;
                // col holds d_i J flattened (n x m row-major)
                for (alpha, mat) in out.iter_mut().enumerate() {
                    for j in 0..m {
                        mat[(i, j)] = col[alpha * m + j];
                    }
                }
            }
            for mat in &mut out {
                let sym = Mat::from_fn(m, m, |i, j| (mat[(i, j)] + mat[(j, i)]) * T::lit(0.5));
                *mat = sym;
            }
        } else {
            let steps = fd.second_steps(x);
            for (alpha, mat) in out.iter_mut().enumerate() {
                *mat = super::fd::second_partials(|p| self.eval(p)[alpha], x, &steps);
            }
        }
        Ok(out)
    }
}

impl<T> fmt::Debug for GraphMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphMap")
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("analytic_second", &self.second.is_some())
            .finish_non_exhaustive()
    }
}
