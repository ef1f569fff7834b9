//! Chart-based Riemannian calculus by central differences.
//!
//! All operators act at an explicit point and read fields only through their
//! evaluators. Each operator checks that the point keeps enough distance from
//! the chart boundary for its stencil.

use super::fd::{central_diff, differential, second_partials, shifted, FdConfig};
use super::field::{MetricField, ScalarField, VectorField};
use super::map::GraphMap;
use crate::error::GeoResult;
use crate::linalg::Mat;
use crate::scalar::Real;

/// Christoffel symbols of the second kind, `get(k, i, j) = Gamma^k_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> Christoffel<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize, usize) -> T) -> Self {
        let mut out = Self::zeros(dim);
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    out.data[(k * dim + i) * dim + j] = f(k, i, j);
                }
            }
        }
        out
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.data[(k * self.dim + i) * self.dim + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// `Gamma(u, v)^k = Gamma^k_ij u^i v^j`.
    pub fn contract(&self, u: &[T], v: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d)
            .map(|k| {
                let mut s = T::zero();
                for i in 0..d {
                    for j in 0..d {
                        s += self.get(k, i, j) * u[i] * v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }
}

fn metric_derivatives<T: Real>(metric: &MetricField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<Mat<T>>> {
    let d = metric.dim();
    (0..d)
        .map(|i| {
            let col = central_diff(|q| Ok(metric.eval(q).as_slice().to_vec()), p, i, fd.first_step(p[i]))?;
            Ok(Mat::from_vec(d, d, col))
        })
        .collect()
}

/// Christoffel symbols of `metric` at `p` from central differences of the
/// metric components.
pub fn christoffel<T: Real>(metric: &MetricField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Christoffel<T>> {
    metric.chart().require_interior(p, &fd.first_margin(p, 2.0))?;
    let d = metric.dim();
    let g_inv = metric.eval(p).spd_inverse()?;
    let dg = metric_derivatives(metric, p, fd)?;
    let mut out = Christoffel::zeros(d);
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut s = T::zero();
                for l in 0..d {
                    s += g_inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                let v = s * T::lit(0.5);
                out.data[(k * d + i) * d + j] = v;
                out.data[(k * d + j) * d + i] = v;
            }
        }
    }
    Ok(out)
}

fn scalar_differential<T: Real>(s: &ScalarField<T>, p: &[T], fd: &FdConfig<T>) -> Vec<T> {
    s.analytic_differential(p)
        .unwrap_or_else(|| differential(|q| s.eval(q), p, &fd.first_steps(p)))
}

/// Coordinate differential `d_i s`, analytic when available.
pub fn differential_at<T: Real>(s: &ScalarField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<T>> {
    if !s.has_analytic_gradient() {
        s.chart().require_interior(p, &fd.first_margin(p, 2.0))?;
    } else {
        s.chart().check_dim(p)?;
    }
    Ok(scalar_differential(s, p, fd))
}

/// Riemannian gradient `g^{ij} d_j s`.
pub fn gradient<T: Real>(metric: &MetricField<T>, s: &ScalarField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<T>> {
    metric.chart().require_interior(p, &fd.first_margin(p, 2.0))?;
    let ds = differential_at(s, p, fd)?;
    Ok(metric.eval(p).spd_inverse()?.mul_vec(&ds))
}

/// `(1/rho) d_i(rho V^i)` by central differences with per-axis `steps`.
///
/// Both the density and the field are fallible evaluators so that derived
/// fields (which may themselves hit chart margins) can be differentiated.
pub fn density_divergence<T, D, V>(p: &[T], steps: &[T], density: D, field: V) -> GeoResult<T>
where
    T: Real,
    D: Fn(&[T]) -> GeoResult<T>,
    V: Fn(&[T]) -> GeoResult<Vec<T>>,
{
    let mut total = T::zero();
    for i in 0..p.len() {
        let d = central_diff(
            |q| {
                let rho = density(q)?;
                Ok(vec![rho * field(q)?[i]])
            },
            p,
            i,
            steps[i],
        )?;
        total += d[0];
    }
    Ok(total / density(p)?)
}

/// `div_g V = (1/sqrt(det g)) d_i(sqrt(det g) V^i)`.
pub fn divergence<T: Real>(metric: &MetricField<T>, v: &VectorField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    metric.chart().require_interior(p, &fd.first_margin(p, 2.0))?;
    density_divergence(
        p,
        &fd.first_steps(p),
        |q| Ok(metric.eval(q).determinant().sqrt()),
        |q| Ok(v.eval(q)),
    )
}

/// `div_g V + d psi(V)`.
pub fn weighted_divergence<T: Real>(
    metric: &MetricField<T>,
    psi: &ScalarField<T>,
    v: &VectorField<T>,
    p: &[T],
    fd: &FdConfig<T>,
) -> GeoResult<T> {
    let div = divergence(metric, v, p, fd)?;
    let dpsi = differential_at(psi, p, fd)?;
    Ok(div + crate::linalg::dot(&dpsi, &v.eval(p)))
}

/// `e^{-psi} div_g(e^psi V)`, the conjugated form of [`weighted_divergence`].
pub fn weighted_divergence_conjugated<T: Real>(
    metric: &MetricField<T>,
    psi: &ScalarField<T>,
    v: &VectorField<T>,
    p: &[T],
    fd: &FdConfig<T>,
) -> GeoResult<T> {
    metric.chart().require_interior(p, &fd.first_margin(p, 2.0))?;
    let psi0 = psi.eval(p);
    density_divergence(
        p,
        &fd.first_steps(p),
        |q| Ok(metric.eval(q).determinant().sqrt() * (psi.eval(q) - psi0).exp()),
        |q| Ok(v.eval(q)),
    )
}

/// Covariant Hessian `d_i d_j s - Gamma^k_ij d_k s`.
pub fn hessian_scalar<T: Real>(
    metric: &MetricField<T>,
    s: &ScalarField<T>,
    p: &[T],
    fd: &FdConfig<T>,
) -> GeoResult<Mat<T>> {
    metric.chart().require_interior(p, &fd.second_margin(p, 2.0))?;
    let d = metric.dim();
    let gamma = christoffel(metric, p, fd)?;
    let ds = scalar_differential(s, p, fd);
    let dd = if s.has_analytic_gradient() {
        let mut m = Mat::zeros(d, d);
        for i in 0..d {
            let col = central_diff(|q| Ok(scalar_differential(s, q, fd)), p, i, fd.first_step(p[i]))?;
            m.set_column(i, &col);
        }
        Mat::from_fn(d, d, |i, j| (m[(i, j)] + m[(j, i)]) * T::lit(0.5))
    } else {
        second_partials(|q| s.eval(q), p, &fd.second_steps(p))
    };
    Ok(Mat::from_fn(d, d, |i, j| {
        dd[(i, j)] - (0..d).map(|k| gamma.get(k, i, j) * ds[k]).sum::<T>()
    }))
}

/// Ricci tensor `R_ij = d_k G^k_ij - d_i d_j log sqrt(det g) + G^k_kl G^l_ij - G^k_jl G^l_ik`.
///
/// The trace term `d_j G^k_ik` is taken as the Hessian of `log sqrt(det g)`,
/// which keeps the stencil symmetric in `(i, j)`.
pub fn ricci<T: Real>(metric: &MetricField<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Mat<T>> {
    metric.chart().require_interior(p, &fd.second_margin(p, 3.0))?;
    let d = metric.dim();
    let gamma = christoffel(metric, p, fd)?;
    // d_l Gamma, by differencing FD Christoffels with the coarser step
    let mut dgamma = Vec::with_capacity(d);
    for l in 0..d {
        let h = fd.second_step(p[l]);
        let plus = shifted(p, l, h);
        let minus = shifted(p, l, -h);
        let gp = christoffel(metric, &plus, fd)?;
        let gm = christoffel(metric, &minus, fd)?;
        let width = plus[l] - minus[l];
        dgamma.push(Christoffel::from_fn(d, |k, i, j| {
            (gp.get(k, i, j) - gm.get(k, i, j)) / width
        }));
    }
    let log_vol = |q: &[T]| metric.eval(q).determinant().abs().ln() * T::lit(0.5);
    let hess_log_vol = second_partials(log_vol, p, &fd.second_steps(p));
    let mut ric = Mat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut r = -hess_log_vol[(i, j)];
            for k in 0..d {
                r += dgamma[k].get(k, i, j);
                for l in 0..d {
                    r += gamma.get(k, k, l) * gamma.get(l, i, j) - gamma.get(k, j, l) * gamma.get(l, i, k);
                }
            }
            ric[(i, j)] = r;
            ric[(j, i)] = r;
        }
    }
    Ok(ric)
}

/// `Ricci - Hess(psi)`.
pub fn bakry_emery_ricci<T: Real>(
    metric: &MetricField<T>,
    psi: &ScalarField<T>,
    p: &[T],
    fd: &FdConfig<T>,
) -> GeoResult<Mat<T>> {
    let ric = ricci(metric, p, fd)?;
    let hess = hessian_scalar(metric, psi, p, fd)?;
    Ok(ric.sub(&hess))
}

/// Hessian of a map between Riemannian charts, one `m x m` matrix per target
/// coordinate:
/// `d_i d_j f^a + G^a_bc(f) d_i f^b d_j f^c - G^k_ij d_k f^a`.
pub fn map_hessian<T: Real>(
    g_source: &MetricField<T>,
    h_target: &MetricField<T>,
    f: &GraphMap<T>,
    p: &[T],
    fd: &FdConfig<T>,
) -> GeoResult<Vec<Mat<T>>> {
    g_source.chart().require_interior(p, &fd.second_margin(p, 2.0))?;
    let q = f.eval(p);
    h_target.chart().require_image(&q, &fd.first_margin(&q, 2.0))?;
    let (m, n) = (g_source.dim(), h_target.dim());
    let jac = f.jacobian_at(p, fd)?;
    let second = f.second_derivatives_at(p, fd)?;
    let gamma_m = christoffel(g_source, p, fd)?;
    let gamma_n = christoffel(h_target, &q, fd)?;
    let mut out = Vec::with_capacity(n);
    for (alpha, dd) in second.iter().enumerate() {
        out.push(Mat::from_fn(m, m, |i, j| {
            let mut v = dd[(i, j)];
            for b in 0..n {
                for c in 0..n {
                    v += gamma_n.get(alpha, b, c) * jac[(b, i)] * jac[(c, j)];
                }
            }
            for k in 0..m {
                v -= gamma_m.get(k, i, j) * jac[(alpha, k)];
            }
            v
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::metrics;
    use crate::geometry::Chart;

    fn fd() -> FdConfig<f64> {
        FdConfig::default()
    }

    fn flat(dim: usize) -> MetricField<f64> {
        metrics::euclidean(dim, 10.0)
    }

    #[test]
    fn christoffel_of_constant_metric_vanishes() {
        let g = metrics::scaled_euclidean(3, 5.0, 2.5);
        let gamma = christoffel(&g, &[0.3, -1.0, 2.0], &fd()).unwrap();
        assert_eq!(gamma.max_abs(), 0.0);
    }

    #[test]
    fn christoffel_polar() {
        let g = metrics::polar(5.0);
        let gamma = christoffel(&g, &[2.0, 0.4], &fd()).unwrap();
        let expected = Christoffel::from_fn(2, |k, i, j| match (k, i, j) {
            (0, 1, 1) => -2.0,
            (1, 0, 1) | (1, 1, 0) => 0.5,
            _ => 0.0,
        });
        assert!(gamma.max_abs_diff(&expected) < 1e-8, "{gamma:?}");
    }

    #[test]
    fn christoffel_hyperbolic_polar() {
        let g = metrics::hyperbolic_polar(5.0);
        let gamma = christoffel(&g, &[1.0, 0.0], &fd()).unwrap();
        let expected = -(1f64.sinh() * 1f64.cosh());
        assert!((gamma.get(0, 1, 1) - expected).abs() < 1e-8);
        assert!((gamma.get(1, 0, 1) - 1f64.cosh() / 1f64.sinh()).abs() < 1e-8);
    }

    #[test]
    fn christoffel_rejects_boundary_points() {
        let g = metrics::polar(5.0);
        assert!(matches!(
            christoffel(&g, &[1e-7, 0.0], &fd()),
            Err(crate::error::Error::BoundaryMargin { axis: 0, .. })
        ));
    }

    #[test]
    fn christoffel_rejects_degenerate_metric() {
        let chart = Arc::new(Chart::cube("bad", 2, 1.0).unwrap());
        let g = MetricField::new(chart, |_| Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]));
        assert!(christoffel(&g, &[0.0, 0.0], &fd()).is_err());
    }

    #[test]
    fn gradient_examples() {
        let g = flat(3);
        let s = ScalarField::new(g.chart().clone(), |p| p[0]);
        let grad = gradient(&g, &s, &[0.5, 0.2, -0.1], &fd()).unwrap();
        assert!((grad[0] - 1.0).abs() < 1e-9 && grad[1].abs() < 1e-9 && grad[2].abs() < 1e-9);

        let g4 = metrics::scaled_euclidean(2, 5.0, 4.0);
        let s = ScalarField::new(g4.chart().clone(), |p| p[0] + p[1]);
        let grad = gradient(&g4, &s, &[1.0, 1.0], &fd()).unwrap();
        assert!((grad[0] - 0.25).abs() < 1e-9 && (grad[1] - 0.25).abs() < 1e-9);

        let h = metrics::hyperbolic_polar(5.0);
        let t = ScalarField::new(h.chart().clone(), |p| p[0]);
        let grad = gradient(&h, &t, &[1.0, 0.3], &fd()).unwrap();
        assert!((grad[0] - 1.0).abs() < 1e-9 && grad[1].abs() < 1e-9);
    }

    #[test]
    fn divergence_examples() {
        let g = flat(3);
        let id = VectorField::new(g.chart().clone(), |p| p.to_vec());
        assert!((divergence(&g, &id, &[0.1, 0.2, 0.3], &fd()).unwrap() - 3.0).abs() < 1e-8);

        let polar = metrics::polar(5.0);
        let dt = VectorField::coordinate(polar.chart().clone(), 0);
        assert!((divergence(&polar, &dt, &[3.0, 0.0], &fd()).unwrap() - 1.0 / 3.0).abs() < 1e-8);

        let zero = VectorField::zero(polar.chart().clone());
        assert_eq!(divergence(&polar, &zero, &[3.0, 0.0], &fd()).unwrap(), 0.0);
    }

    #[test]
    fn weighted_divergence_examples() {
        let g1 = flat(1);
        let psi = ScalarField::new(g1.chart().clone(), |p| p[0]);
        let v = VectorField::coordinate(g1.chart().clone(), 0);
        assert!((weighted_divergence(&g1, &psi, &v, &[0.3], &fd()).unwrap() - 1.0).abs() < 1e-8);

        let g2 = flat(2);
        let psi = ScalarField::new(g2.chart().clone(), |p| p[0] * p[0]);
        let v = VectorField::coordinate(g2.chart().clone(), 0);
        assert!((weighted_divergence(&g2, &psi, &v, &[1.0, 0.5], &fd()).unwrap() - 2.0).abs() < 1e-8);

        let h = metrics::hyperbolic_polar(5.0);
        let c = ScalarField::constant(h.chart().clone(), 3.0);
        let w = VectorField::new(h.chart().clone(), |p: &[f64]| vec![p[0].sin(), p[1].cos()]);
        let p = [1.2, 0.4];
        let a = weighted_divergence(&h, &c, &w, &p, &fd()).unwrap();
        let b = divergence(&h, &w, &p, &fd()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn hessian_examples() {
        let g = flat(3);
        let s = ScalarField::new(g.chart().clone(), |p| p[0] * p[0]);
        let hess = hessian_scalar(&g, &s, &[0.4, 0.1, 0.2], &fd()).unwrap();
        assert!(hess.sub(&Mat::diag(&[2.0, 0.0, 0.0])).max_abs() < 1e-6);

        let h = metrics::hyperbolic_polar(5.0);
        let c = ScalarField::constant(h.chart().clone(), 1.0);
        assert!(hessian_scalar(&h, &c, &[1.0, 0.0], &fd()).unwrap().max_abs() < 1e-12);

        let t = ScalarField::new(h.chart().clone(), |p| p[0]);
        let hess = hessian_scalar(&h, &t, &[1.0, 0.0], &fd()).unwrap();
        assert!((hess[(1, 1)] - 1f64.sinh() * 1f64.cosh()).abs() < 1e-6);
        assert!(hess[(0, 0)].abs() < 1e-6 && hess[(0, 1)].abs() < 1e-6);
    }

    #[test]
    fn ricci_examples() {
        let g = flat(3);
        assert!(ricci(&g, &[0.1, 0.2, 0.3], &fd()).unwrap().max_abs() < 1e-12);

        let sphere = metrics::round_sphere::<f64>(2);
        for p in [[0.7, 0.3], [1.5, -2.0], [2.2, 1.0]] {
            let ric = ricci(&sphere, &p, &fd()).unwrap();
            assert!(ric.sub(&sphere.eval(&p)).max_abs() < 1e-6, "{ric:?}");
        }

        let h = metrics::hyperbolic_polar(5.0);
        for p in [[0.5, 0.0], [1.0, 1.0], [2.0, -1.0]] {
            let ric = ricci(&h, &p, &fd()).unwrap();
            let scale = h.eval(&p).max_abs();
            assert!(ric.add(&h.eval(&p)).max_abs() < 1e-6 * scale, "{ric:?}");
        }
    }

    #[test]
    fn bakry_emery_examples() {
        let g = flat(2);
        let gauss = ScalarField::new(g.chart().clone(), |p| -(p[0] * p[0] + p[1] * p[1]) / 2.0);
        let be = bakry_emery_ricci(&g, &gauss, &[0.3, -0.2], &fd()).unwrap();
        assert!(be.sub(&Mat::identity(2)).max_abs() < 1e-6);

        let lin = ScalarField::new(g.chart().clone(), |p| 2.0 * p[0] - p[1]);
        assert!(bakry_emery_ricci(&g, &lin, &[0.3, -0.2], &fd()).unwrap().max_abs() < 1e-6);

        let sphere = metrics::round_sphere::<f64>(2);
        let c = ScalarField::constant(sphere.chart().clone(), -4.0);
        let p = [1.0, 0.5];
        let be = bakry_emery_ricci(&sphere, &c, &p, &fd()).unwrap();
        assert!(be.sub(&ricci(&sphere, &p, &fd()).unwrap()).max_abs() < 1e-12);
    }

    #[test]
    fn map_hessian_examples() {
        let f1 = Arc::new(Chart::cube("x", 1, 10.0).unwrap());
        let src = MetricField::euclidean(f1.clone());
        let tgt = MetricField::euclidean(f1.clone());
        let lin = GraphMap::new(f1.clone(), f1.clone(), |x| vec![3.0 * x[0] + 1.0]);
        assert!(map_hessian(&src, &tgt, &lin, &[0.5], &fd()).unwrap()[0].max_abs() < 1e-6);

        let sq = GraphMap::new(f1.clone(), f1.clone(), |x| vec![x[0] * x[0]]);
        let b = map_hessian(&src, &tgt, &sq, &[1.0], &fd()).unwrap();
        assert!((b[0][(0, 0)] - 2.0).abs() < 1e-6);

        let c2 = Arc::new(Chart::cube("x2", 2, 10.0).unwrap());
        let src2 = MetricField::euclidean(c2.clone());
        let prod = GraphMap::new(c2, f1, |x| vec![x[0] * x[1]]);
        let b = map_hessian(&src2, &tgt, &prod, &[0.3, 0.7], &fd()).unwrap();
        assert!((b[0][(0, 1)] - 1.0).abs() < 1e-6 && (b[0][(1, 0)] - 1.0).abs() < 1e-6);
        assert!(b[0][(0, 0)].abs() < 1e-6 && b[0][(1, 1)].abs() < 1e-6);
    }

    #[test]
    fn map_hessian_rejects_escaping_image() {
        let c = Arc::new(Chart::cube("x", 1, 1.0).unwrap());
        let g = MetricField::euclidean(c.clone());
        let f = GraphMap::new(c.clone(), c, |x| vec![x[0] + 5.0]);
        assert!(matches!(
            map_hessian(&g, &g, &f, &[0.0], &fd()),
            Err(crate::error::Error::TargetOutsideChart { .. })
        ));
    }

    #[test]
    fn single_precision_christoffel() {
        let g = metrics::polar::<f32>(5.0);
        let gamma = christoffel(&g, &[2.0, 0.4], &FdConfig::default()).unwrap();
        assert!((gamma.get(0, 1, 1) + 2.0).abs() < 1e-2);
    }
}
