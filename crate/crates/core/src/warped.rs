//! Warped products `M x_{e^psi} N` with metric `g + e^{2 psi} h`, the
//! connection of the warped metric and the base volume form `Omega` pulled
//! back to the product.

use std::sync::Arc;

use crate::error::{Error, GeoResult};
use crate::geometry::{christoffel, differential_at, Chart, Christoffel, FdConfig, MetricField, ScalarField};
use crate::linalg::{self, Mat};
use crate::scalar::Real;

/// Base metric `g` (dimension `m`), fiber metric `h` (dimension `n`) and the
/// warping exponent `psi` on the base chart.
#[derive(Clone, Debug)]
pub struct WarpedSpace<T> {
    base: MetricField<T>,
    fiber: MetricField<T>,
    weight: ScalarField<T>,
    product: Arc<Chart<T>>,
}

impl<T: Real> WarpedSpace<T> {
    pub fn new(base: MetricField<T>, fiber: MetricField<T>, weight: ScalarField<T>) -> GeoResult<Self> {
        if weight.chart().dim() != base.dim() {
            return Err(Error::DimensionMismatch {
                chart: weight.chart().label().to_string(),
                expected: base.dim(),
                got: weight.chart().dim(),
            });
        }
        let product = Arc::new(base.chart().product(fiber.chart()));
        Ok(Self {
            base,
            fiber,
            weight,
            product,
        })
    }

    /// Riemannian product: `psi = 0`.
    pub fn product(base: MetricField<T>, fiber: MetricField<T>) -> Self {
        let weight = ScalarField::constant(base.chart().clone(), T::zero());
        Self::new(base, fiber, weight).expect("weight lives on the base chart")
    }

    pub fn base(&self) -> &MetricField<T> {
        &self.base
    }

    pub fn fiber(&self) -> &MetricField<T> {
        &self.fiber
    }

    pub fn weight(&self) -> &ScalarField<T> {
        &self.weight
    }

    pub fn product_chart(&self) -> &Arc<Chart<T>> {
        &self.product
    }

    /// Base dimension `m`.
    pub fn m(&self) -> usize {
        self.base.dim()
    }

    /// Fiber dimension `n`.
    pub fn n(&self) -> usize {
        self.fiber.dim()
    }

    pub fn split<'a>(&self, p: &'a [T]) -> (&'a [T], &'a [T]) {
        p.split_at(self.m())
    }

    /// `e^{2 psi(x)}`.
    pub fn warp_factor(&self, x: &[T]) -> T {
        (self.weight.eval(x) * T::lit(2.0)).exp()
    }

    /// `h~ = e^{2 psi(x)} h(q)`.
    pub fn fiber_metric_at(&self, x: &[T], q: &[T]) -> Mat<T> {
        self.fiber.eval(q).scaled(self.warp_factor(x))
    }

    /// Coordinate differential `d psi` at `x`.
    pub fn weight_differential(&self, x: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<T>> {
        differential_at(&self.weight, x, fd)
    }

    /// `grad^M psi` with respect to `g`.
    pub fn weight_gradient(&self, x: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<T>> {
        let dpsi = self.weight_differential(x, fd)?;
        Ok(self.base.eval(x).spd_inverse()?.mul_vec(&dpsi))
    }

    /// The warped metric at a product point.
    pub fn metric_at(&self, p: &[T]) -> Mat<T> {
        let (x, q) = self.split(p);
        block_diag(&self.base.eval(x), &self.fiber_metric_at(x, q))
    }

    /// `g~((X, U), (Y, V)) = g(X, Y) + h~(U, V)` at a product point.
    pub fn inner(&self, p: &[T], a: &[T], b: &[T]) -> T {
        self.metric_at(p).bilinear(a, b)
    }
}

fn block_diag<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let (m, n) = (a.rows(), b.rows());
    Mat::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - m, j - m)],
        _ => T::zero(),
    })
}

/// `g~ = g + e^{2 psi} h` as a metric field on the product chart.
pub fn warped_metric<T: Real>(ws: &WarpedSpace<T>) -> MetricField<T> {
    let ws2 = ws.clone();
    MetricField::new(ws.product.clone(), move |p| ws2.metric_at(p))
}

/// Christoffel symbols of the warped metric assembled from the product
/// rules: base and fiber symbols on their blocks,
/// `G^beta_{a alpha} = d_a psi delta^beta_alpha` and
/// `G^c_{alpha beta} = -e^{2 psi} h_{alpha beta} (grad psi)^c`; all others vanish.
pub fn warped_christoffel_rules<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Christoffel<T>> {
    let (m, n) = (ws.m(), ws.n());
    let (x, q) = ws.split(p);
    let gm = christoffel(&ws.base, x, fd)?;
    let gn = christoffel(&ws.fiber, q, fd)?;
    let dpsi = ws.weight_differential(x, fd)?;
    let grad = ws.base.eval(x).spd_inverse()?.mul_vec(&dpsi);
    let h_tilde = ws.fiber_metric_at(x, q);
    Ok(Christoffel::from_fn(m + n, |k, i, j| {
        let (kb, ib, jb) = (k < m, i < m, j < m);
        match (kb, ib, jb) {
            (true, true, true) => gm.get(k, i, j),
            (false, false, false) => gn.get(k - m, i - m, j - m),
            (false, true, false) if k == j => dpsi[i],
            (false, false, true) if k == i => dpsi[j],
            (true, false, false) => -h_tilde[(i - m, j - m)] * grad[k],
            _ => T::zero(),
        }
    }))
}

/// Largest deviation between finite-difference Christoffel symbols of the
/// warped metric and [`warped_christoffel_rules`].
pub fn warped_connection_residual<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    let direct = christoffel(&warped_metric(ws), p, fd)?;
    let rules = warped_christoffel_rules(ws, p, fd)?;
    Ok(direct.max_abs_diff(&rules))
}

/// `Omega(V_1, ..., V_m) = sqrt(det g) det[base components of V_i]`.
pub fn omega_eval<T: Real>(ws: &WarpedSpace<T>, p: &[T], vectors: &[Vec<T>]) -> T {
    let m = ws.m();
    assert_eq!(vectors.len(), m, "Omega takes m arguments");
    let (x, _) = ws.split(p);
    let base = Mat::from_fn(m, m, |i, j| vectors[j][i]);
    ws.base.eval(x).determinant().sqrt() * base.determinant()
}

/// Component `Omega_{i_1 ... i_m}` on product coordinate vectors.
pub fn omega_component<T: Real>(ws: &WarpedSpace<T>, p: &[T], indices: &[usize]) -> T {
    let d = ws.m() + ws.n();
    let vectors: Vec<Vec<T>> = indices
        .iter()
        .map(|&i| {
            let mut e = vec![T::zero(); d];
            e[i] = T::one();
            e
        })
        .collect();
    omega_eval(ws, p, &vectors)
}

fn increasing_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

fn without(tuple: &[usize], skip: usize) -> Vec<usize> {
    tuple
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .collect()
}

/// `max |dOmega_{i_0 ... i_m}|` over increasing coordinate tuples, with the
/// exterior derivative taken by central differences of the components.
pub fn omega_closedness_residual<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    ws.product.require_interior(p, &fd.first_margin(p, 2.0))?;
    let d = ws.m() + ws.n();
    let mut worst = T::zero();
    for tuple in increasing_tuples(d, ws.m() + 1) {
        let mut total = T::zero();
        for (k, &axis) in tuple.iter().enumerate() {
            let rest = without(&tuple, k);
            let h = fd.first_step(p[axis]);
            let plus = crate::geometry::shifted(p, axis, h);
            let minus = crate::geometry::shifted(p, axis, -h);
            let deriv =
                (omega_component(ws, &plus, &rest) - omega_component(ws, &minus, &rest)) / (plus[axis] - minus[axis]);
            total += if k % 2 == 0 { deriv } else { -deriv };
        }
        worst = worst.max(total.abs());
    }
    Ok(worst)
}

/// Components `(nabla_A Omega)_{B_1 ... B_m}` for every coordinate `A` and
/// every increasing `m`-tuple `B`, using finite-difference Christoffel symbols
/// of the warped metric. Indexed as `[A][tuple index]`, tuples in
/// lexicographic order.
pub fn omega_covariant_derivative<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<Vec<Vec<T>>> {
    let d = ws.m() + ws.n();
    let gamma = christoffel(&warped_metric(ws), p, fd)?;
    let tuples = increasing_tuples(d, ws.m());
    let mut out = Vec::with_capacity(d);
    for a in 0..d {
        let h = fd.first_step(p[a]);
        let plus = crate::geometry::shifted(p, a, h);
        let minus = crate::geometry::shifted(p, a, -h);
        let width = plus[a] - minus[a];
        let row = tuples
            .iter()
            .map(|b| {
                let mut v = (omega_component(ws, &plus, b) - omega_component(ws, &minus, b)) / width;
                for slot in 0..b.len() {
                    for c in 0..d {
                        let g = gamma.get(c, a, b[slot]);
                        if g != T::zero() {
                            let mut idx = b.clone();
                            idx[slot] = c;
                            v -= g * omega_component(ws, p, &idx);
                        }
                    }
                }
                v
            })
            .collect();
        out.push(row);
    }
    Ok(out)
}

/// `max |nabla Omega|` over all components.
pub fn omega_covariant_derivative_norm<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    let cov = omega_covariant_derivative(ws, p, fd)?;
    Ok(cov.iter().flatten().fold(T::zero(), |acc, v| acc.max(v.abs())))
}

/// `dOmega` rebuilt as the alternation of `nabla Omega` (torsion-free
/// connection); returns the largest component. Cross-checks
/// [`omega_closedness_residual`] through an independent route.
pub fn omega_exterior_from_covariant<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    let d = ws.m() + ws.n();
    let cov = omega_covariant_derivative(ws, p, fd)?;
    let tuples = increasing_tuples(d, ws.m());
    let position = |t: &[usize]| tuples.iter().position(|u| u.as_slice() == t).expect("increasing tuple");
    let mut worst = T::zero();
    for tuple in increasing_tuples(d, ws.m() + 1) {
        let mut total = T::zero();
        for (k, &a) in tuple.iter().enumerate() {
            let v = cov[a][position(&without(&tuple, k))];
            total += if k % 2 == 0 { v } else { -v };
        }
        worst = worst.max(total.abs());
    }
    Ok(worst)
}

/// Compares the mixed components of `nabla Omega` with the closed form
/// `(nabla_{d_alpha} Omega)(d_1, ..., d_beta (slot i), ..., d_m)
///  = e^{2 psi} h_{alpha beta} (grad psi)^i sqrt(det g)`;
/// every other component must vanish. Returns the largest deviation.
pub fn omega_fiber_derivative_residual<T: Real>(ws: &WarpedSpace<T>, p: &[T], fd: &FdConfig<T>) -> GeoResult<T> {
    let (m, n) = (ws.m(), ws.n());
    let d = m + n;
    let (x, q) = ws.split(p);
    let cov = omega_covariant_derivative(ws, p, fd)?;
    let grad = ws.weight_gradient(x, fd)?;
    let h_tilde = ws.fiber_metric_at(x, q);
    let vol = ws.base.eval(x).determinant().sqrt();
    let tuples = increasing_tuples(d, m);
    let mut worst = T::zero();
    for (a, row) in cov.iter().enumerate() {
        for (b, value) in tuples.iter().zip(row) {
            let fiber_slots: Vec<usize> = (0..m).filter(|&s| b[s] >= m).collect();
            let expected = if a >= m && fiber_slots.len() == 1 {
                // b is increasing, so the single fiber index sits in the last
                // slot; the missing base index i is moved there by (m-1-i)
                // transpositions.
                let beta = b[m - 1];
                let missing = (0..m).find(|i| !b.contains(i)).expect("one base index missing");
                let sign = if (m - 1 - missing) % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                };
                sign * h_tilde[(a - m, beta - m)] * grad[missing] * vol
            } else {
                T::zero()
            };
            worst = worst.max((*value - expected).abs());
        }
    }
    Ok(worst)
}

/// A `g~`-orthonormal frame of the slice through `p`, positively oriented:
/// the columns of `L^{-T}` for `g = L L^T`, padded with zero fiber parts.
pub fn slice_frame<T: Real>(ws: &WarpedSpace<T>, p: &[T]) -> GeoResult<Vec<Vec<T>>> {
    let (m, n) = (ws.m(), ws.n());
    let (x, _) = ws.split(p);
    let l = ws.base.eval(x).cholesky()?;
    Ok((0..m)
        .map(|i| {
            let mut e = vec![T::zero(); m];
            e[i] = T::one();
            let mut v = linalg::backward_substitute_transposed(&l, &e);
            v.extend(std::iter::repeat_n(T::zero(), n));
            v
        })
        .collect())
}

/// `Phi(X) = sum_alpha Omega(N_alpha, *X) N_alpha` for a graph through `p`.
///
/// `frame` is a positively oriented `g~`-orthonormal basis `T_1, ..., T_m` of
/// the tangent plane, `normals` a `g~`-orthonormal basis of its normal space
/// and `x` the coefficients of `X` in `frame`. `*T_i` is
/// `(-1)^{i-1} T_1 ^ ... ^ T_{i-1} ^ T_{i+1} ^ ... ^ T_m`. Returns the
/// coefficients of `Phi(X)` in `normals`.
pub fn phi_morphism<T: Real>(
    ws: &WarpedSpace<T>,
    p: &[T],
    frame: &[Vec<T>],
    x: &[T],
    normals: &[Vec<T>],
) -> GeoResult<Vec<T>> {
    let m = ws.m();
    let gt = ws.metric_at(p);
    let mut all: Vec<&Vec<T>> = frame.iter().collect();
    all.extend(normals.iter());
    let mut worst = T::zero();
    for (i, u) in all.iter().enumerate() {
        for (j, v) in all.iter().enumerate() {
            let want = if i == j { T::one() } else { T::zero() };
            worst = worst.max((gt.bilinear(u, v) - want).abs());
        }
    }
    if worst > T::lit(1e-8) {
        return Err(Error::FrameNotOrthonormal(worst.as_f64()));
    }
    Ok(normals
        .iter()
        .map(|nu| {
            let mut c = T::zero();
            for i in 0..m {
                if x[i] == T::zero() {
                    continue;
                }
                let mut args = Vec::with_capacity(m);
                args.push(nu.clone());
                args.extend(
                    frame
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, v)| v.clone()),
                );
                let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                c += sign * x[i] * omega_eval(ws, p, &args);
            }
            c
        })
        .collect())
}
