//! Ready-made charts and metric fields.

use std::sync::Arc;

use super::chart::Chart;
use super::field::MetricField;
use crate::linalg::Mat;
use crate::scalar::Real;

/// Polar-angle margin for spherical coordinates.
pub const POLAR_ANGLE_MARGIN: f64 = 0.1;

pub fn euclidean<T: Real>(dim: usize, half_width: T) -> MetricField<T> {
    let chart = Chart::cube("euclidean", dim, half_width).expect("positive half width");
    MetricField::euclidean(Arc::new(chart))
}

/// Chart `(t, a_1, ..., a_{m-1})` for a rotationally symmetric space of
/// dimension `m`: `t` in `[0, t_max]`, polar angles in `[0, pi]` and the
/// last angle in `[-pi, pi]`.
pub fn radial_chart<T: Real>(label: &str, m: usize, t_max: T, origin_margin: T) -> Chart<T> {
    assert!(m >= 1);
    let mut lower = vec![T::zero()];
    let mut upper = vec![t_max];
    let mut exclusion = vec![origin_margin];
    for a in 1..m {
        if a + 1 < m {
            lower.push(T::zero());
            upper.push(T::PI());
            exclusion.push(T::lit(POLAR_ANGLE_MARGIN));
        } else {
            lower.push(-T::PI());
            upper.push(T::PI());
            exclusion.push(T::zero());
        }
    }
    Chart::new(label, lower, upper)
        .expect("valid radial chart")
        .with_exclusion(exclusion)
}

/// Diagonal of the round metric of the unit `k`-sphere in hyperspherical
/// coordinates `(a_1, ..., a_k)`.
pub fn sphere_diagonal<T: Real>(angles: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(angles.len());
    let mut factor = T::one();
    for &a in angles {
        out.push(factor);
        factor *= a.sin() * a.sin();
    }
    out
}

/// `dt^2 + tau(t)^2 dsigma^2` on [`radial_chart`].
pub fn radial<T: Real>(m: usize, tau: Arc<dyn Fn(T) -> T + Send + Sync>, t_max: T, origin_margin: T) -> MetricField<T> {
    let chart = Arc::new(radial_chart("radial", m, t_max, origin_margin));
    MetricField::diagonal(chart, move |p| {
        let tt = tau(p[0]);
        let mut d = vec![T::one()];
        d.extend(sphere_diagonal(&p[1..]).into_iter().map(|s| s * tt * tt));
        d
    })
}

/// `dt^2 + t^2 dtheta^2`.
pub fn polar<T: Real>(t_max: T) -> MetricField<T> {
    radial(2, Arc::new(|t| t), t_max, T::zero())
}

/// `dt^2 + sinh^2(t) dtheta^2`, the hyperbolic plane.
pub fn hyperbolic_polar<T: Real>(t_max: T) -> MetricField<T> {
    radial(2, Arc::new(T::sinh), t_max, T::zero())
}

/// Round unit `n`-sphere in hyperspherical coordinates; for `n = 1` this is
/// the flat circle.
pub fn round_sphere<T: Real>(n: usize) -> MetricField<T> {
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut exclusion = Vec::with_capacity(n);
    for a in 0..n {
        if a + 1 < n {
            lower.push(T::zero());
            upper.push(T::PI());
            exclusion.push(T::lit(POLAR_ANGLE_MARGIN));
        } else {
            lower.push(-T::PI());
            upper.push(T::PI());
            exclusion.push(T::zero());
        }
    }
    let chart = Chart::new("sphere", lower, upper)
        .expect("valid sphere chart")
        .with_exclusion(exclusion);
    MetricField::diagonal(Arc::new(chart), |p| sphere_diagonal(p))
}

/// Constant metric `s * I`.
pub fn scaled_euclidean<T: Real>(dim: usize, half_width: T, s: T) -> MetricField<T> {
    let chart = Chart::cube("scaled", dim, half_width).expect("positive half width");
    MetricField::new(Arc::new(chart), move |_| Mat::identity(dim).scaled(s))
}
