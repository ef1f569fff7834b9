//! Weighted ball measures, Cheeger quotients of centered balls and the first
//! Dirichlet eigenvalue of the drift Laplacian `-Delta u - g(grad psi, grad u)`
//! on radial balls.
//!
//! Radial eigenfunctions solve `-(X u')' = lambda X u` on `(0, r)` with
//! `u'(0) = 0` and `u(r) = 0`. The solver uses a cell-centred finite volume
//! scheme on the uniform grid `t_j = j h`: fluxes are weighted by `X` at the
//! cell faces and masses are exact cell integrals of `X`, so the degenerate
//! weight `X(0) = 0` never enters a denominator. Cell 0 is the half cell
//! `[0, h/2]`, which encodes the regularity condition at the origin.

use std::io::{self, Write};

use crate::error::{Error, GeoResult};
use crate::geometry::{bakry_emery_ricci, FdConfig};
use crate::linalg::generalized_symmetric_eigen;
use crate::quadrature::GaussLegendre;
use crate::radial::{Density, RadialSpace, Warping};
use crate::scalar::Real;
use crate::tridiag::LaplacePencil;

/// Smallest grid accepted by [`drift_eigenvalue`].
pub const MIN_GRID: usize = 64;
/// Allowed relative gap between the eigenvalue and the Rayleigh quotient of
/// the computed eigenfunction.
pub const RAYLEIGH_TOL: f64 = 1e-10;
/// Slack on the sampled Bakry-Emery lower bound.
pub const HYPOTHESIS_SLACK: f64 = 1e-5;

/// `Gamma(x)` for positive integers and half-integers.
fn gamma_half_integer(twice: usize) -> f64 {
    assert!(twice > 0);
    let (mut value, mut x) = if twice.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while 2.0 * x < twice as f64 {
        value *= x;
        x += 1.0;
    }
    value
}

/// Area of the unit `k`-sphere, `2 pi^{(k+1)/2} / Gamma((k+1)/2)`.
pub fn unit_sphere_area<T: Real>(k: usize) -> T {
    let n = k + 1;
    T::lit(2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half_integer(n))
}

/// `(V_psi(B_r), A_psi(dB_r)) = (w int_0^r X, w X(r))` with `w` the area of
/// the unit `(m-1)`-sphere.
pub fn weighted_ball_measures<T: Real>(rs: &RadialSpace<T>, r: T) -> GeoResult<(T, T)> {
    if !(r > T::zero()) {
        return Err(Error::OutOfRange {
            t: r.as_f64(),
            t_max: rs.t_max().as_f64(),
        });
    }
    let w = unit_sphere_area::<T>(rs.m() - 1);
    Ok((w * rs.mass(r)?, w * rs.big_x(r)?))
}

/// Cheeger quotients `A_psi / V_psi` of centered balls. These bound the
/// weighted Cheeger constant from above.
#[derive(Clone, Debug, PartialEq)]
pub struct CheegerScan<T> {
    pub radii: Vec<T>,
    pub quotients: Vec<T>,
    /// `(r*, q*)` with the smallest quotient.
    pub best: (T, T),
}

impl<T: Real> CheegerScan<T> {
    /// `sup_r r * quotient(r)`, the empirical constant `C` in `h(B_r) <= C / r`.
    pub fn rate_constant(&self) -> T {
        self.radii
            .iter()
            .zip(&self.quotients)
            .fold(T::zero(), |acc, (&r, &q)| acc.max(r * q))
    }
}

pub fn cheeger_scan<T: Real>(rs: &RadialSpace<T>, radii: &[T]) -> GeoResult<CheegerScan<T>> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no radii to scan".into()));
    }
    let mut quotients = Vec::with_capacity(radii.len());
    for &r in radii {
        let (v, a) = weighted_ball_measures(rs, r)?;
        quotients.push(a / v);
    }
    let best = radii.iter().zip(&quotients).fold(
        (radii[0], quotients[0]),
        |acc, (&r, &q)| if q < acc.1 { (r, q) } else { acc },
    );
    Ok(CheegerScan {
        radii: radii.to_vec(),
        quotients,
        best,
    })
}

/// First Dirichlet eigenvalue of the drift Laplacian on `B_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResult<T> {
    pub lambda1: T,
    pub radius: T,
    pub grid_size: usize,
    /// Values at `t_j = j r / grid_size`, positive inside and zero at `t = r`.
    pub eigenfunction: Vec<T>,
    /// Richardson estimate `|lambda(N) - lambda(N/2)| / 3`.
    pub discretization_estimate: T,
    pub rayleigh_quotient: T,
}

fn assemble<T: Real>(rs: &RadialSpace<T>, r: T, n: usize) -> GeoResult<LaplacePencil<T>> {
    let h = r / T::from_usize_lossy(n);
    let half = T::lit(0.5);
    let gl = GaussLegendre::new(8);
    let node = |j: usize| h * T::from_usize_lossy(j);
    // unknowns u_0 .. u_{n-1}; u_n = 0
    let mut faces = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for j in 0..n {
        let b = (node(j) + half * h).min(r);
        let a = if j == 0 { T::zero() } else { node(j) - half * h };
        faces.push(rs.big_x(b)? / h);
        // cell endpoints lie in [0, r], so every node below is in range
        mass.push(gl.integrate(|t| rs.big_x(t).unwrap_or_else(|_| T::nan()), a, b));
    }
    LaplacePencil::new(faces, mass)
        .map_err(|_| Error::Spectral(format!("pencil on [0, {}] is not positive definite", r.as_f64())))
}

/// Smallest eigenvalue of `-(X u')' = lambda X u`, `u'(0) = 0`, `u(r) = 0`.
pub fn drift_eigenvalue<T: Real>(rs: &RadialSpace<T>, r: T, grid_size: usize) -> GeoResult<SpectralResult<T>> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid_size {grid_size} is below {MIN_GRID}"
        )));
    }
    if !(r > T::zero()) || r > rs.t_max() {
        return Err(Error::OutOfRange {
            t: r.as_f64(),
            t_max: rs.t_max().as_f64(),
        });
    }
    let pencil = assemble(rs, r, grid_size)?;
    let lambda = pencil.lowest_eigenvalue()?;
    let coarse = assemble(rs, r, grid_size / 2)?.lowest_eigenvalue()?;
    let y = pencil.symmetrized().eigenvector(lambda)?;
    let mut u: Vec<T> = y.iter().zip(&pencil.mass).map(|(&v, &w)| v / w.sqrt()).collect();
    if u.iter().copied().sum::<T>() < T::zero() {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    let peak = u.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    u.iter_mut().for_each(|v| *v /= peak);
    let rayleigh = pencil.energy(&u) / pencil.mass_norm_sq(&u);
    if !((rayleigh - lambda).abs() <= T::lit(RAYLEIGH_TOL) * lambda.abs()) {
        return Err(Error::EigenNonConvergence(grid_size));
    }
    if !(lambda > T::zero()) {
        return Err(Error::Spectral(format!(
            "first eigenvalue {} is not positive",
            lambda.as_f64()
        )));
    }
    u.push(T::zero());
    Ok(SpectralResult {
        lambda1: lambda,
        radius: r,
        grid_size,
        eigenfunction: u,
        discretization_estimate: (lambda - coarse).abs() / T::lit(3.0),
        rayleigh_quotient: rayleigh,
    })
}

/// `lambda_1(B_r) - C_0^2 / 4`.
pub fn cheeger_inequality_margin<T: Real>(rs: &RadialSpace<T>, r: T, grid_size: usize) -> GeoResult<T> {
    let lambda = drift_eigenvalue(rs, r, grid_size)?.lambda1;
    let c0 = rs.c_zero()?.value;
    Ok(lambda - c0 * c0 / T::lit(4.0))
}

/// Outcome of the hypothesis sampling behind the Setti comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum SettiStatus<T> {
    Certified,
    /// The sampled Bakry-Emery Ricci lower bound fell below `alpha`.
    RicciBelowAlpha {
        t: T,
        min_eigenvalue: T,
    },
    /// `|grad psi|^2` exceeded `delta`.
    GradientAboveDelta {
        t: T,
        norm_sq: T,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SettiReport<T> {
    pub status: SettiStatus<T>,
    /// `lambda_1` of the ball in the `(m+1)`-dimensional model space form.
    pub model_lambda: T,
    pub lambda: T,
    /// `model_lambda - lambda`.
    pub margin: T,
    /// Curvature `(alpha - delta) / m` of the model.
    pub kappa: T,
}

impl<T: Real> SettiReport<T> {
    pub fn certified(&self) -> bool {
        self.status == SettiStatus::Certified
    }
}

/// Samples `Ricci_psi >= alpha` on the lifted chart and `Psi'^2 <= delta` on
/// `(0, r]`.
pub fn check_setti_hypotheses<T: Real>(rs: &RadialSpace<T>, r: T, alpha: T, delta: T) -> GeoResult<SettiStatus<T>> {
    let m = rs.m();
    let samples = 12;
    for k in 1..=samples {
        let t = r * T::from_usize_lossy(k) / T::from_usize_lossy(samples);
        let d = rs.psi_prime(t);
        if d * d > delta + T::lit(HYPOTHESIS_SLACK) {
            return Ok(SettiStatus::GradientAboveDelta { t, norm_sq: d * d });
        }
    }
    let g = rs.base_metric();
    let psi = rs.weight_field(g.chart().clone());
    let fd = FdConfig::default();
    let lo = T::lit(0.2).min(r * T::lit(0.5));
    let hi = r * T::lit(0.9);
    for k in 0..samples {
        let t = lo + (hi - lo) * T::from_usize_lossy(k) / T::from_usize_lossy(samples - 1);
        let mut p = vec![t];
        for a in 1..m {
            p.push(if a + 1 < m { T::lit(1.2) } else { T::lit(0.4) });
        }
        let be = bakry_emery_ricci(&g, &psi, &p, &fd)?;
        let (eigs, _) = generalized_symmetric_eigen(&be, &g.eval(&p))?;
        let min = eigs.iter().fold(T::infinity(), |a, &v| a.min(v));
        if min < alpha - T::lit(HYPOTHESIS_SLACK) {
            return Ok(SettiStatus::RicciBelowAlpha { t, min_eigenvalue: min });
        }
    }
    Ok(SettiStatus::Certified)
}

/// Compares `lambda_psi,1(B_r)` with the first eigenvalue of a geodesic ball
/// of radius `r` in the `(m+1)`-dimensional space form of curvature
/// `(alpha - delta) / m`.
pub fn setti_margin<T: Real>(
    rs: &RadialSpace<T>,
    r: T,
    alpha: T,
    delta: T,
    grid_size: usize,
) -> GeoResult<SettiReport<T>> {
    if !(alpha >= delta && delta >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "comparison needs alpha >= delta >= 0, got alpha = {alpha}, delta = {delta}"
        )));
    }
    let status = check_setti_hypotheses(rs, r, alpha, delta)?;
    let kappa = (alpha - delta) / T::from_usize_lossy(rs.m());
    let model = RadialSpace::new(rs.m() + 1, Warping::SpaceForm(kappa), Density::Zero, r)?;
    let model_lambda = drift_eigenvalue(&model, r, grid_size)?.lambda1;
    let lambda = drift_eigenvalue(rs, r, grid_size)?.lambda1;
    Ok(SettiReport {
        status,
        model_lambda,
        lambda,
        margin: model_lambda - lambda,
        kappa,
    })
}

/// `quotient(r) - |c|` per radius: how far the CMC graph with parameter `c`
/// sits below the ball bound.
pub fn heinz_margin<T: Real>(rs: &RadialSpace<T>, c: T, radii: &[T]) -> GeoResult<Vec<T>> {
    let c0 = rs.c_zero()?.value;
    if c.abs() >= c0 {
        return Err(Error::InadmissibleC {
            c: c.as_f64(),
            c_zero: c0.as_f64(),
        });
    }
    Ok(cheeger_scan(rs, radii)?
        .quotients
        .into_iter()
        .map(|q| q - c.abs())
        .collect())
}

/// One row of the scan export.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow<T> {
    pub r: T,
    pub v_psi: T,
    pub a_psi: T,
    pub quotient: T,
    pub lambda1: T,
    pub cheeger_margin: T,
    pub heinz_margin: T,
}

pub fn scan_rows<T: Real>(rs: &RadialSpace<T>, radii: &[T], c: T, grid_size: usize) -> GeoResult<Vec<ScanRow<T>>> {
    let c0 = rs.c_zero()?.value;
    let heinz = heinz_margin(rs, c, radii)?;
    radii
        .iter()
        .zip(heinz)
        .map(|(&r, heinz_margin)| {
            let (v_psi, a_psi) = weighted_ball_measures(rs, r)?;
            let lambda1 = drift_eigenvalue(rs, r, grid_size)?.lambda1;
            Ok(ScanRow {
                r,
                v_psi,
                a_psi,
                quotient: a_psi / v_psi,
                lambda1,
                cheeger_margin: lambda1 - c0 * c0 / T::lit(4.0),
                heinz_margin,
            })
        })
        .collect()
}

pub fn write_scan_csv<T: Real, W: Write>(rows: &[ScanRow<T>], mut out: W) -> io::Result<()> {
    writeln!(out, "r,V_psi,A_psi,quotient,lambda1,cheeger_margin,heinz_margin")?;
    for row in rows {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            row.r.as_f64(),
            row.v_psi.as_f64(),
            row.a_psi.as_f64(),
            row.quotient.as_f64(),
            row.lambda1.as_f64(),
            row.cheeger_margin.as_f64(),
            row.heinz_margin.as_f64()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type RadialSpace = crate::radial::RadialSpace<f64>;

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area::<f64>(0) - 2.0).abs() < 1e-15);
        assert!((unit_sphere_area::<f64>(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area::<f64>(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area::<f64>(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn ball_measures() {
        let e = RadialSpace::euclidean(2, 5.0).unwrap();
        let (v, a) = weighted_ball_measures(&e, 1.0).unwrap();
        assert!((v - PI).abs() < 1e-12 && (a - 2.0 * PI).abs() < 1e-12);
        let h = RadialSpace::hyperbolic(2, 5.0).unwrap();
        let (v, a) = weighted_ball_measures(&h, 1.0).unwrap();
        assert!((v - 2.0 * PI * (1f64.cosh() - 1.0)).abs() < 1e-12);
        assert!((a - 2.0 * PI * 1f64.sinh()).abs() < 1e-12);
        assert!((a / v - 1.0 / h.phi_at(1.0).unwrap()).abs() < 1e-12);
        assert!(weighted_ball_measures(&h, 6.0).is_err());
        assert!(weighted_ball_measures(&h, 0.0).is_err());
    }

    #[test]
    fn scan_closed_forms() {
        let radii: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        let e = RadialSpace::euclidean(3, 10.0).unwrap();
        let s = cheeger_scan(&e, &radii).unwrap();
        for (r, q) in radii.iter().zip(&s.quotients) {
            assert!((q - 3.0 / r).abs() < 1e-12);
        }
        assert!(s.quotients.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(s.best.0, 10.0);
        assert!((s.rate_constant() - 3.0).abs() < 1e-12);

        let h = RadialSpace::hyperbolic(2, 10.0).unwrap();
        let s = cheeger_scan(&h, &radii).unwrap();
        let c0 = h.c_zero().unwrap().value;
        for (r, q) in radii.iter().zip(&s.quotients) {
            assert!((q - 1.0 / (r / 2.0).tanh()).abs() < 1e-10);
            assert!(*q >= c0);
        }
    }

    #[test]
    fn euclidean_disc_eigenvalue() {
        let e = RadialSpace::euclidean(2, 2.0).unwrap();
        let fine = drift_eigenvalue(&e, 1.0, 4096).unwrap().lambda1;
        let res = drift_eigenvalue(&e, 1.0, 512).unwrap();
        assert!((res.lambda1 - fine).abs() < 1e-3);
        assert!((res.lambda1 - 2.404825557695773f64.powi(2)).abs() < 1e-3);
        assert!((res.rayleigh_quotient - res.lambda1).abs() <= 1e-10 * res.lambda1);
        assert_eq!(res.eigenfunction.len(), 513);
        assert_eq!(*res.eigenfunction.last().unwrap(), 0.0);
        assert!(res.eigenfunction[..512].iter().all(|&u| u > 0.0));
        let doubled = drift_eigenvalue(&e, 1.0, 1024).unwrap().lambda1;
        assert!((doubled - res.lambda1).abs() < 4.0 * res.discretization_estimate);
    }

    #[test]
    fn flat_three_ball() {
        let e = RadialSpace::euclidean(3, 2.0).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let l = drift_eigenvalue(&e, r, 1024).unwrap().lambda1;
            assert!((l - PI * PI / (r * r)).abs() < 1e-4 * PI * PI / (r * r));
        }
    }

    #[test]
    fn second_order_convergence() {
        let h = RadialSpace::hyperbolic(3, 5.0).unwrap();
        let l: Vec<f64> = [64, 128, 256, 512]
            .iter()
            .map(|&n| drift_eigenvalue(&h, 3.0, n).unwrap().lambda1)
            .collect();
        for w in l.windows(3) {
            assert!((w[0] - w[1]).abs() / (w[1] - w[2]).abs() >= 3.5);
        }
    }

    #[test]
    fn constant_density_shift_is_invisible() {
        let h = RadialSpace::hyperbolic(2, 5.0).unwrap();
        let shifted = h.with_density(Density::Constant(2.5)).unwrap();
        let a = drift_eigenvalue(&h, 3.0, 256).unwrap().lambda1;
        let b = drift_eigenvalue(&shifted, 3.0, 256).unwrap().lambda1;
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn eigenvalues_decrease_with_radius() {
        let h = RadialSpace::hyperbolic(2, 20.0).unwrap();
        let ls: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&r| drift_eigenvalue(&h, r, 512).unwrap().lambda1)
            .collect();
        assert!(ls.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn hyperbolic_large_ball() {
        // bottom of the spectrum is 1/4; the ball of radius 20 still sits
        // about pi^2/r^2 above it
        let h = RadialSpace::hyperbolic(2, 20.0).unwrap();
        let l20 = drift_eigenvalue(&h, 20.0, 2048).unwrap().lambda1;
        assert!(l20 > 0.25 && l20 < 0.28, "{l20}");
        assert!((l20 - 0.25 - PI * PI / 400.0).abs() < 5e-3);
        let l40 = {
            let h = RadialSpace::hyperbolic(2, 40.0).unwrap();
            drift_eigenvalue(&h, 40.0, 4096).unwrap().lambda1
        };
        assert!((l40 - 0.25) < (l20 - 0.25) / 3.0);
    }

    #[test]
    fn cheeger_margins() {
        let h = RadialSpace::hyperbolic(2, 20.0).unwrap();
        let mut prev = f64::INFINITY;
        for r in [2.0, 5.0, 10.0, 20.0] {
            let m = cheeger_inequality_margin(&h, r, 1024).unwrap();
            assert!(m >= 0.0 && m < prev);
            prev = m;
        }
        let h3 = RadialSpace::hyperbolic(3, 20.0).unwrap();
        assert!(drift_eigenvalue(&h3, 10.0, 1024).unwrap().lambda1 >= 1.0);
        assert!(cheeger_inequality_margin(&h3, 10.0, 1024).unwrap() >= 0.0);
        let e = RadialSpace::euclidean(2, 2.0).unwrap();
        let l = drift_eigenvalue(&e, 1.0, 256).unwrap().lambda1;
        let m = cheeger_inequality_margin(&e, 1.0, 256).unwrap();
        // on [0, 2] the Euclidean infimum is m / t_max = 1
        assert!((m - (l - 0.25)).abs() < 1e-9);
    }

    #[test]
    fn setti_flat_and_spherical() {
        let e = RadialSpace::euclidean(2, 2.0).unwrap();
        let rep = setti_margin(&e, 1.0, 0.0, 0.0, 1024).unwrap();
        assert!(rep.certified());
        assert!((rep.model_lambda - PI * PI).abs() < 1e-3);
        assert!(rep.margin > 4.0);

        let s = RadialSpace::new(2, Warping::Spherical, Density::Zero, 2.5).unwrap();
        let rep = setti_margin(&s, 2.0, 1.0, 0.0, 1024).unwrap();
        assert!(rep.certified(), "{:?}", rep.status);
        assert!(rep.margin >= 0.0);
        assert!((rep.kappa - 0.5).abs() < 1e-15);
    }

    #[test]
    fn setti_failures_are_reported() {
        let e = RadialSpace::euclidean(2, 2.0).unwrap();
        assert!(setti_margin(&e, 1.0, 0.0, 1.0, 256).is_err());
        let h = RadialSpace::hyperbolic(2, 5.0).unwrap();
        let rep = setti_margin(&h, 2.0, 0.0, 0.0, 256).unwrap();
        assert!(matches!(rep.status, SettiStatus::RicciBelowAlpha { .. }));
        let q = e.with_density(Density::Quadratic(1.0)).unwrap();
        let rep = setti_margin(&q, 1.0, 0.0, 0.0, 256).unwrap();
        assert!(matches!(rep.status, SettiStatus::GradientAboveDelta { .. }));
    }

    #[test]
    fn flat_model_rate() {
        let e = RadialSpace::euclidean(3, 4.0).unwrap();
        let l: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&r| drift_eigenvalue(&e, r, 1024).unwrap().lambda1)
            .collect();
        assert!(l.windows(2).all(|w| w[1] < w[0]));
        assert!((l[0] / l[1] - 4.0).abs() < 1e-3);
    }

    #[test]
    fn heinz_margins() {
        let h = RadialSpace::hyperbolic(2, 20.0).unwrap();
        let radii: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        assert!(heinz_margin(&h, 0.5, &radii).unwrap().iter().all(|&m| m >= 0.5));
        let q = cheeger_scan(&h, &radii).unwrap().quotients;
        assert_eq!(heinz_margin(&h, 0.0, &radii).unwrap(), q);
        let sharp = heinz_margin(&h, 0.99, &radii).unwrap();
        let min = sharp.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        assert!(min > 0.0 && min < 0.02);
        assert!(matches!(
            heinz_margin(&h, 1.5, &radii),
            Err(Error::InadmissibleC { .. })
        ));
    }

    #[test]
    fn scan_csv() {
        let h = RadialSpace::hyperbolic(2, 5.0).unwrap();
        let rows = scan_rows(&h, &[1.0, 2.0], 0.5, 128).unwrap();
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,V_psi,A_psi,quotient,lambda1,cheeger_margin,heinz_margin\n"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = RadialSpace::hyperbolic(2, 5.0).unwrap();
        assert!(drift_eigenvalue(&h, 1.0, 32).is_err());
        assert!(drift_eigenvalue(&h, 6.0, 128).is_err());
    }
}
