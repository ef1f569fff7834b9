//! Central finite-difference stencils.

use crate::error::GeoResult;
use crate::linalg::Mat;
use crate::scalar::Real;

/// Relative step sizes for first and second derivatives.
///
/// The actual step on an axis is `base * max(1, |x|)`. Defaults balance
/// truncation against round-off: `eps^(1/3)` for first derivatives and
/// `eps^(1/4)` for second derivatives (and for derivatives of quantities that
/// already carry a finite-difference error).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig<T> {
    pub first: T,
    pub second: T,
}

impl<T: Real> Default for FdConfig<T> {
    fn default() -> Self {
        Self {
            first: T::epsilon().cbrt(),
            second: T::epsilon().sqrt().sqrt(),
        }
    }
}

impl<T: Real> FdConfig<T> {
    #[inline]
    pub fn first_step(&self, x: T) -> T {
        self.first * x.abs().max(T::one())
    }

    #[inline]
    pub fn second_step(&self, x: T) -> T {
        self.second * x.abs().max(T::one())
    }

    pub fn first_steps(&self, p: &[T]) -> Vec<T> {
        p.iter().map(|&x| self.first_step(x)).collect()
    }

    pub fn second_steps(&self, p: &[T]) -> Vec<T> {
        p.iter().map(|&x| self.second_step(x)).collect()
    }

    /// Per-axis margin `k * first_step`.
    pub fn first_margin(&self, p: &[T], k: f64) -> Vec<T> {
        p.iter().map(|&x| T::lit(k) * self.first_step(x)).collect()
    }

    pub fn second_margin(&self, p: &[T], k: f64) -> Vec<T> {
        p.iter().map(|&x| T::lit(k) * self.second_step(x)).collect()
    }
}

pub(crate) fn shifted<T: Real>(p: &[T], axis: usize, h: T) -> Vec<T> {
    let mut q = p.to_vec();
    q[axis] += h;
    q
}

/// `(f(p + h e_axis) - f(p - h e_axis)) / (2h)` for vector-valued `f`, using
/// the exactly representable step.
pub(crate) fn central_diff<T, F>(f: F, p: &[T], axis: usize, h: T) -> GeoResult<Vec<T>>
where
    T: Real,
    F: Fn(&[T]) -> GeoResult<Vec<T>>,
{
    let plus = shifted(p, axis, h);
    let minus = shifted(p, axis, -h);
    let width = plus[axis] - minus[axis];
    let (fp, fm) = (f(&plus)?, f(&minus)?);
    Ok(fp.iter().zip(&fm).map(|(&a, &b)| (a - b) / width).collect())
}

pub(crate) fn central_diff_scalar<T: Real>(f: impl Fn(&[T]) -> T, p: &[T], axis: usize, h: T) -> T {
    let plus = shifted(p, axis, h);
    let minus = shifted(p, axis, -h);
    (f(&plus) - f(&minus)) / (plus[axis] - minus[axis])
}

/// FD coordinate differential of a scalar function.
pub(crate) fn differential<T: Real>(f: impl Fn(&[T]) -> T, p: &[T], steps: &[T]) -> Vec<T> {
    (0..p.len()).map(|i| central_diff_scalar(&f, p, i, steps[i])).collect()
}

/// Symmetric matrix of second partials by second differences (diagonal) and
/// the four-point stencil (mixed), mirrored so the result is exactly
/// symmetric.
pub(crate) fn second_partials<T: Real>(f: impl Fn(&[T]) -> T, p: &[T], steps: &[T]) -> Mat<T> {
    let n = p.len();
    let f0 = f(p);
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        let plus = shifted(p, i, steps[i]);
        let minus = shifted(p, i, -steps[i]);
        let hp = plus[i] - p[i];
        let hm = p[i] - minus[i];
        // three-point formula on a possibly uneven representable stencil
        let d2 = T::lit(2.0) * (hm * f(&plus) - (hp + hm) * f0 + hp * f(&minus)) / (hp * hm * (hp + hm));
        out[(i, i)] = d2;
        for j in 0..i {
            let pp = shifted(&plus, j, steps[j]);
            let pm = shifted(&plus, j, -steps[j]);
            let mp = shifted(&minus, j, steps[j]);
            let mm = shifted(&minus, j, -steps[j]);
            let wi = plus[i] - minus[i];
            let wj = pp[j] - pm[j];
            let v = (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (wi * wj);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}
