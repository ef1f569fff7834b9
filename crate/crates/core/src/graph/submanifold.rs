use crate::error::{Error, GeoResult};
use crate::geometry::{christoffel, density_divergence, map_hessian, FdConfig, GraphMap};
use crate::linalg::{self, Mat};
use crate::scalar::Real;
use crate::warped::{omega_eval, phi_morphism, warped_metric, WarpedSpace};

use super::frame::GraphPointFrame;

/// Pointwise curvature data of a graph.
///
/// `m H = (-z1, w1) = (0, w_star)^perp`, with `w_star = w + psi_star`.
#[derive(Clone, Debug)]
pub struct CurvatureBundle<T> {
    /// Ambient point `(x, f(x))`.
    pub point: Vec<T>,
    pub frame: GraphPointFrame<T>,
    /// `g*`-trace of the Hessian of `f`.
    pub w: Vec<T>,
    /// `df(||df||^2_* grad psi + 2 grad* psi)`.
    pub psi_star: Vec<T>,
    pub w_star: Vec<T>,
    pub z1: Vec<T>,
    pub w1: Vec<T>,
    pub h_base: Vec<T>,
    pub h_fiber: Vec<T>,
    pub cos_theta: T,
    pub norm_h: T,
    /// `grad^M psi`.
    pub grad_psi: Vec<T>,
    /// `grad^* psi`, the gradient for the graph metric.
    pub grad_star_psi: Vec<T>,
}

impl<T: Real> CurvatureBundle<T> {
    pub fn m(&self) -> usize {
        self.frame.m()
    }

    /// `H` as an ambient vector.
    pub fn h(&self) -> Vec<T> {
        let mut v = self.h_base.clone();
        v.extend_from_slice(&self.h_fiber);
        v
    }

    pub fn norm_z1(&self) -> T {
        self.frame.g.bilinear(&self.z1, &self.z1).sqrt()
    }

    /// `||W + Psi*||` for `h~`.
    pub fn norm_w_star(&self) -> T {
        self.frame.h_tilde.bilinear(&self.w_star, &self.w_star).sqrt()
    }

    /// `Q_psi(U) = h~(U, df(grad* psi))`.
    pub fn q_psi(&self, u: &[T]) -> T {
        let v = self.frame.df(&self.grad_star_psi);
        self.frame.h_tilde.bilinear(u, &v)
    }

    /// `max_i |g~(H, dGamma_f(X*_i))|`.
    pub fn tangential_leak(&self) -> T {
        let gt = self.frame.ambient_metric();
        let h = self.h();
        self.frame
            .tangent_frame()
            .iter()
            .fold(T::zero(), |acc, t| acc.max(gt.bilinear(&h, t).abs()))
    }

    /// `|cos theta sqrt(det g* / det g) - 1|`.
    pub fn calibration_angle_residual(&self) -> T {
        let ratio = self.frame.g_star.determinant() / self.frame.g.determinant();
        (self.cos_theta * ratio.sqrt() - T::one()).abs()
    }
}

/// The three quantities tied together by `Q_psi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QPsiCheck<T> {
    /// `Q_psi(W*)`.
    pub q_w_star: T,
    /// `|Q_psi(W*) - g(Z_1, grad psi)|`.
    pub base_residual: T,
    /// `|Q_psi(W*) - h~(W_1, df(grad psi))|`.
    pub fiber_residual: T,
    /// `Q_psi(Psi*)`, nonnegative.
    pub q_psi_star: T,
}

/// Sign of `g(H_M, grad psi)` and its consistency with the fiber pairing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MMinus<T> {
    pub sign: i8,
    pub base_pairing: T,
    pub fiber_pairing: T,
    /// `|g(H_M, grad psi) + h~(H_N, df(grad psi))|`.
    pub two_angles_residual: T,
}

/// Terms of `m^2 ||H||^2 = div_g Z_1 + g(Z_1, grad psi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeinzCheck<T> {
    pub divergence: T,
    pub drift: T,
    pub m2_norm_h_sq: T,
    pub residual: T,
}

/// Terms of `div_{g*}(cos theta H_M) + g*(cos theta H_M, grad* psi) = -m cos theta ||H||^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationCheck<T> {
    pub divergence: T,
    pub drift: T,
    pub rhs: T,
    pub residual: T,
    /// Largest component of `Z - cos theta H_M`, where
    /// `g*(Z, X) = g~(Phi(X), H)`.
    pub z_residual: T,
}

/// A graph `x -> (x, f(x))` in a warped product.
#[derive(Clone, Debug)]
pub struct GraphSubmanifold<T> {
    space: WarpedSpace<T>,
    map: GraphMap<T>,
    fd: FdConfig<T>,
}

impl<T: Real> GraphSubmanifold<T> {
    pub fn new(space: WarpedSpace<T>, map: GraphMap<T>, fd: FdConfig<T>) -> GeoResult<Self> {
        for (chart, expected) in [(map.source(), space.m()), (map.target(), space.n())] {
            if chart.dim() != expected {
                return Err(Error::DimensionMismatch {
                    chart: chart.label().to_string(),
                    expected,
                    got: chart.dim(),
                });
            }
        }
        Ok(Self { space, map, fd })
    }

    pub fn space(&self) -> &WarpedSpace<T> {
        &self.space
    }

    pub fn map(&self) -> &GraphMap<T> {
        &self.map
    }

    pub fn fd(&self) -> &FdConfig<T> {
        &self.fd
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    /// `(x, f(x))`.
    pub fn ambient_point(&self, x: &[T]) -> Vec<T> {
        let mut p = x.to_vec();
        p.extend(self.map.eval(x));
        p
    }

    fn checked_image(&self, x: &[T]) -> GeoResult<Vec<T>> {
        self.space
            .base()
            .chart()
            .require_interior(x, &self.fd.first_margin(x, 2.0))?;
        let q = self.map.eval(x);
        self.space
            .fiber()
            .chart()
            .require_image(&q, &self.fd.first_margin(&q, 2.0))?;
        Ok(q)
    }

    /// `g* = g + e^{2 psi} J^T h J`.
    pub fn graph_metric(&self, x: &[T]) -> GeoResult<Mat<T>> {
        let q = self.checked_image(x)?;
        let j = self.map.jacobian_at(x, &self.fd)?;
        let ht = self.space.fiber_metric_at(x, &q);
        Ok(self.space.base().eval(x).add(&j.transpose().matmul(&ht).matmul(&j)))
    }

    pub fn eigenframe(&self, x: &[T]) -> GeoResult<GraphPointFrame<T>> {
        let q = self.checked_image(x)?;
        let j = self.map.jacobian_at(x, &self.fd)?;
        GraphPointFrame::new(self.space.base().eval(x), self.space.fiber_metric_at(x, &q), j)
    }

    /// Curvature fields at `x` from a freshly computed eigenframe.
    pub fn curvature_bundle(&self, x: &[T]) -> GeoResult<CurvatureBundle<T>> {
        let frame = self.eigenframe(x)?;
        self.curvature_bundle_with_frame(x, frame)
    }

    /// Curvature fields at `x` using a caller-supplied frame (for instance a
    /// re-mixed one).
    pub fn curvature_bundle_with_frame(&self, x: &[T], frame: GraphPointFrame<T>) -> GeoResult<CurvatureBundle<T>> {
        let (m, n) = (self.m(), self.space.n());
        let hess = map_hessian(self.space.base(), self.space.fiber(), &self.map, x, &self.fd)?;
        let w: Vec<T> = (0..n)
            .map(|a| {
                (0..m)
                    .map(|i| hess[a].bilinear(&frame.x_star.column(i), &frame.x_star.column(i)))
                    .sum()
            })
            .collect();
        let dpsi = self.space.weight_differential(x, &self.fd)?;
        let grad_psi = frame.g.spd_inverse()?.mul_vec(&dpsi);
        let grad_star_psi = frame.g_star_inverse().mul_vec(&dpsi);
        let xi_star = linalg::axpy(
            &linalg::scale(frame.df_norm_sq_star(), &grad_psi),
            T::lit(2.0),
            &grad_star_psi,
        );
        let psi_star = frame.df(&xi_star);
        let w_star = linalg::add(&w, &psi_star);
        let z1 = frame.df_adjoint(&w_star);
        let w1 = linalg::sub(&w_star, &frame.df(&z1));
        let inv_m = T::one() / T::from_usize_lossy(m);
        let h_base = linalg::scale(-inv_m, &z1);
        let h_fiber = linalg::scale(inv_m, &w1);
        let norm_h = (frame.g.bilinear(&h_base, &h_base) + frame.h_tilde.bilinear(&h_fiber, &h_fiber)).sqrt();
        let point = self.ambient_point(x);
        let cos_theta = omega_eval(&self.space, &point, &frame.tangent_frame());
        Ok(CurvatureBundle {
            point,
            frame,
            w,
            psi_star,
            w_star,
            z1,
            w1,
            h_base,
            h_fiber,
            cos_theta,
            norm_h,
            grad_psi,
            grad_star_psi,
        })
    }

    /// Second fundamental form
    /// `(0, Hess f(X, Y) + df(Xi(X, Y)))^perp` with
    /// `Xi(X, Y) = h~(df X, df Y) grad psi + g(grad psi, X) Y + g(grad psi, Y) X`.
    pub fn second_fundamental_form(&self, x: &[T], u: &[T], v: &[T]) -> GeoResult<Vec<T>> {
        let frame = self.eigenframe(x)?;
        let hess = map_hessian(self.space.base(), self.space.fiber(), &self.map, x, &self.fd)?;
        let dpsi = self.space.weight_differential(x, &self.fd)?;
        let grad = frame.g.spd_inverse()?.mul_vec(&dpsi);
        let (du, dv) = (frame.df(u), frame.df(v));
        let mut xi = linalg::scale(frame.h_tilde.bilinear(&du, &dv), &grad);
        xi = linalg::axpy(&xi, frame.g.bilinear(&grad, u), v);
        xi = linalg::axpy(&xi, frame.g.bilinear(&grad, v), u);
        let fiber = linalg::add(
            &hess.iter().map(|b| b.bilinear(u, v)).collect::<Vec<_>>(),
            &frame.df(&xi),
        );
        let mut amb = vec![T::zero(); self.m()];
        amb.extend(fiber);
        Ok(frame.normal_projection(&amb))
    }

    pub fn q_psi_residuals(&self, x: &[T]) -> GeoResult<QPsiCheck<T>> {
        let b = self.curvature_bundle(x)?;
        let q_w_star = b.q_psi(&b.w_star);
        let base = b.frame.g.bilinear(&b.z1, &b.grad_psi);
        let fiber = b.frame.h_tilde.bilinear(&b.w1, &b.frame.df(&b.grad_psi));
        Ok(QPsiCheck {
            q_w_star,
            base_residual: (q_w_star - base).abs(),
            fiber_residual: (q_w_star - fiber).abs(),
            q_psi_star: b.q_psi(&b.psi_star),
        })
    }

    /// Sign of `g(H_M, grad psi)`; pairings below `1e-10` (relative to
    /// `||H|| ||grad psi||`) count as zero.
    pub fn m_minus_indicator(&self, x: &[T]) -> GeoResult<MMinus<T>> {
        let b = self.curvature_bundle(x)?;
        let base_pairing = b.frame.g.bilinear(&b.h_base, &b.grad_psi);
        let fiber_pairing = b.frame.h_tilde.bilinear(&b.h_fiber, &b.frame.df(&b.grad_psi));
        let scale = b.norm_h * b.frame.g.bilinear(&b.grad_psi, &b.grad_psi).sqrt();
        let band = T::lit(1e-10) * scale.max(T::min_positive_value());
        let sign = if base_pairing > band {
            1
        } else if base_pairing < -band {
            -1
        } else {
            0
        };
        Ok(MMinus {
            sign,
            base_pairing,
            fiber_pairing,
            two_angles_residual: (base_pairing + fiber_pairing).abs(),
        })
    }

    /// Checks `m^2 ||H||^2 = div_g Z_1 + g(Z_1, grad psi)`, differentiating
    /// `Z_1` re-evaluated on the stencil with the second-derivative step.
    /// Holds for graphs with parallel mean curvature.
    pub fn heinz_divergence_residual(&self, x: &[T]) -> GeoResult<HeinzCheck<T>> {
        let b = self.curvature_bundle(x)?;
        let divergence = density_divergence(
            x,
            &self.fd.second_steps(x),
            |q| Ok(self.space.base().eval(q).determinant().sqrt()),
            |q| Ok(self.curvature_bundle(q)?.z1),
        )?;
        let drift = b.frame.g.bilinear(&b.z1, &b.grad_psi);
        let m = T::from_usize_lossy(self.m());
        let m2_norm_h_sq = m * m * b.norm_h * b.norm_h;
        Ok(HeinzCheck {
            divergence,
            drift,
            m2_norm_h_sq,
            residual: (divergence + drift - m2_norm_h_sq).abs(),
        })
    }

    /// Checks the calibration identity
    /// `div_{g*}(cos theta H_M) + g*(cos theta H_M, grad* psi) + m cos theta ||H||^2 = 0`
    /// (parallel mean curvature), and that `Z` defined by
    /// `g*(Z, X) = g~(Phi(X), H)` equals `cos theta H_M`.
    pub fn calibration_divergence_residual(&self, x: &[T]) -> GeoResult<CalibrationCheck<T>> {
        let b = self.curvature_bundle(x)?;
        let field = |q: &[T]| -> GeoResult<Vec<T>> {
            let bq = self.curvature_bundle(q)?;
            Ok(linalg::scale(bq.cos_theta, &bq.h_base))
        };
        let divergence = density_divergence(
            x,
            &self.fd.second_steps(x),
            |q| Ok(self.graph_metric(q)?.determinant().sqrt()),
            field,
        )?;
        let v = linalg::scale(b.cos_theta, &b.h_base);
        let dpsi = self.space.weight_differential(x, &self.fd)?;
        let drift = linalg::dot(&dpsi, &v);
        let m = T::from_usize_lossy(self.m());
        let rhs = -m * b.cos_theta * b.norm_h * b.norm_h;

        let tangents = b.frame.tangent_frame();
        let normals = b.frame.normal_frame()?;
        let gt = b.frame.ambient_metric();
        let h = b.h();
        let h_coeffs: Vec<T> = normals.iter().map(|nu| gt.bilinear(nu, &h)).collect();
        let mut z = vec![T::zero(); self.m()];
        for i in 0..self.m() {
            let mut e = vec![T::zero(); self.m()];
            e[i] = T::one();
            let phi = phi_morphism(&self.space, &b.point, &tangents, &e, &normals)?;
            let pairing = linalg::dot(&phi, &h_coeffs);
            z = linalg::axpy(&z, pairing, &b.frame.x_star.column(i));
        }
        let z_residual = linalg::max_abs(&linalg::sub(&z, &v));
        Ok(CalibrationCheck {
            divergence,
            drift,
            rhs,
            residual: (divergence + drift - rhs).abs(),
            z_residual,
        })
    }

    /// `|sum_i g~(dGamma_f(X*_i), nabla~_{X*_i} H) + m ||H||^2|`, with the
    /// covariant derivative of `H` along the graph built from central
    /// differences of its components and the warped Christoffel symbols.
    pub fn key_pairing_residual(&self, x: &[T]) -> GeoResult<T> {
        let b = self.curvature_bundle(x)?;
        let m = self.m();
        let gamma = christoffel(&warped_metric(&self.space), &b.point, &self.fd)?;
        let gt = b.frame.ambient_metric();
        let h = b.h();
        let scale = x.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
        let mut total = T::zero();
        for (i, t) in b.frame.tangent_frame().iter().enumerate() {
            let dir = b.frame.x_star.column(i);
            let s = self.fd.second * scale / linalg::max_abs(&dir);
            let plus = linalg::axpy(x, s, &dir);
            let minus = linalg::axpy(x, -s, &dir);
            let hp = self.curvature_bundle(&plus)?.h();
            let hm = self.curvature_bundle(&minus)?.h();
            let deriv = linalg::scale(T::one() / (s + s), &linalg::sub(&hp, &hm));
            let cov = linalg::add(&deriv, &gamma.contract(t, &h));
            total += gt.bilinear(t, &cov);
        }
        Ok((total + T::from_usize_lossy(m) * b.norm_h * b.norm_h).abs())
    }
}
