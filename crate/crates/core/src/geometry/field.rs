//! Pure pointwise evaluators on a chart.

use std::fmt;
use std::sync::Arc;

use super::chart::Chart;
use crate::linalg::Mat;
use crate::scalar::Real;

pub type ScalarFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
pub type VectorFn<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;
pub type MatrixFn<T> = Arc<dyn Fn(&[T]) -> Mat<T> + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField<T> {
    chart: Arc<Chart<T>>,
    eval: ScalarFn<T>,
    gradient: Option<VectorFn<T>>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(chart: Arc<Chart<T>>, eval: impl Fn(&[T]) -> T + Send + Sync + 'static) -> Self {
        Self {
            chart,
            eval: Arc::new(eval),
            gradient: None,
        }
    }

    pub fn constant(chart: Arc<Chart<T>>, value: T) -> Self {
        let dim = chart.dim();
        Self::new(chart, move |_| value).with_gradient(move |_| vec![T::zero(); dim])
    }

    /// Attaches the coordinate differential `(d_1 s, ..., d_dim s)`.
    pub fn with_gradient(mut self, grad: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(grad));
        self
    }

    pub fn chart(&self) -> &Arc<Chart<T>> {
        &self.chart
    }

    #[inline]
    pub fn eval(&self, p: &[T]) -> T {
        (self.eval)(p)
    }

    pub fn analytic_differential(&self, p: &[T]) -> Option<Vec<T>> {
        self.gradient.as_ref().map(|g| g(p))
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }
}

impl<T> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("analytic_gradient", &self.gradient.is_some())
            .finish_non_exhaustive()
    }
}

#[derive(Clone)]
pub struct VectorField<T> {
    chart: Arc<Chart<T>>,
    components: VectorFn<T>,
}

impl<T: Real> VectorField<T> {
    pub fn new(chart: Arc<Chart<T>>, components: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        Self {
            chart,
            components: Arc::new(components),
        }
    }

    pub fn zero(chart: Arc<Chart<T>>) -> Self {
        let dim = chart.dim();
        Self::new(chart, move |_| vec![T::zero(); dim])
    }

    /// The coordinate field `d/dx_axis`.
    pub fn coordinate(chart: Arc<Chart<T>>, axis: usize) -> Self {
        let dim = chart.dim();
        Self::new(chart, move |_| {
            let mut v = vec![T::zero(); dim];
            v[axis] = T::one();
            v
        })
    }

    pub fn chart(&self) -> &Arc<Chart<T>> {
        &self.chart
    }

    #[inline]
    pub fn eval(&self, p: &[T]) -> Vec<T> {
        (self.components)(p)
    }

    /// Pointwise product `s * V`.
    pub fn scaled_by(&self, s: &ScalarField<T>) -> Self {
        let (v, s) = (self.components.clone(), s.eval.clone());
        Self {
            chart: self.chart.clone(),
            components: Arc::new(move |p| {
                let k = s(p);
                v(p).into_iter().map(|x| x * k).collect()
            }),
        }
    }
}

impl<T> fmt::Debug for VectorField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField").finish_non_exhaustive()
    }
}

/// A symmetric positive definite matrix field.
#[derive(Clone)]
pub struct MetricField<T> {
    chart: Arc<Chart<T>>,
    matrix: MatrixFn<T>,
}

impl<T: Real> MetricField<T> {
    pub fn new(chart: Arc<Chart<T>>, matrix: impl Fn(&[T]) -> Mat<T> + Send + Sync + 'static) -> Self {
        Self {
            chart,
            matrix: Arc::new(matrix),
        }
    }

    /// Constant identity metric.
    pub fn euclidean(chart: Arc<Chart<T>>) -> Self {
        let dim = chart.dim();
        Self::new(chart, move |_| Mat::identity(dim))
    }

    /// Diagonal metric from a closure returning the diagonal.
    pub fn diagonal(chart: Arc<Chart<T>>, diag: impl Fn(&[T]) -> Vec<T> + Send + Sync + 'static) -> Self {
        Self::new(chart, move |p| Mat::diag(&diag(p)))
    }

    pub fn chart(&self) -> &Arc<Chart<T>> {
        &self.chart
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    #[inline]
    pub fn eval(&self, p: &[T]) -> Mat<T> {
        (self.matrix)(p)
    }

    /// Checks symmetry (relative `1e-12`) and positivity of the smallest
    /// eigenvalue at `p`.
    pub fn is_valid_at(&self, p: &[T]) -> bool {
        let g = self.eval(p);
        let scale = g.max_abs().max(T::min_positive_value());
        if g.asymmetry() > T::lit(1e-12) * scale {
            return false;
        }
        match g.symmetric_eigen() {
            Ok((vals, _)) => vals[0] > T::zero(),
            Err(_) => false,
        }
    }
}

impl<T> fmt::Debug for MetricField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField").finish_non_exhaustive()
    }
}
