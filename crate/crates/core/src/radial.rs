//! Rotationally symmetric spaces `dt^2 + tau(t)^2 dsigma^2` with radial
//! density `e^{Psi(t)}`, and the constant-mean-curvature graphs built over
//! them.
//!
//! With `X(t) = e^Psi tau^{m-1}` and `phi(t) = int_0^t X / X(t)`, the
//! profile `phi_c = c phi` solves `xi' = c - (ln X)' xi`, and
//! `F(t) = d + int_0^t e^{-Psi} phi_c / sqrt(1 - phi_c^2)` defines a graph
//! of constant mean curvature `c / m` in `M x_{e^Psi} R` whenever
//! `|c| < C_0 = inf 1/phi`.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use crate::error::{Error, GeoResult};
use crate::geometry::{metrics, Chart, GraphMap, MetricField, ScalarField};
use crate::linalg::Mat;
use crate::quadrature::{adaptive, GaussLegendre, QuadratureOptions};
use crate::scalar::Real;
use crate::warped::WarpedSpace;

/// Below this radius `phi(t)` is replaced by its leading term `t / m`.
pub const SERIES_THRESHOLD: f64 = 1e-3;
/// Distance kept from the origin by lifted charts.
pub const LIFT_ORIGIN_MARGIN: f64 = 0.05;
/// Half-width of the fiber chart `R` used by lifted graphs.
pub const FIBER_HALF_WIDTH: f64 = 1e6;

const GL_NODES: usize = 10;
const C_ZERO_GRID: usize = 2048;
const C_ZERO_START: f64 = 1e-3;

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// The warping function `tau`.
#[derive(Clone)]
pub enum Warping<T> {
    /// `tau = t`.
    Euclidean,
    /// `tau = sinh t`.
    Hyperbolic,
    /// `tau = sin t`.
    Spherical,
    /// Constant curvature `kappa`: `sin(sqrt(k) t)/sqrt(k)`, `t` or `sinh(sqrt(-k) t)/sqrt(-k)`.
    SpaceForm(T),
    /// `tau = sum a_k t^k`; requires `a_0 = a_2 = 0`, `a_1 = 1`.
    Series(Vec<T>),
    /// Arbitrary `tau` with its derivative.
    Custom {
        label: String,
        tau: RealFn<T>,
        tau_prime: RealFn<T>,
    },
}

/// The radial density exponent `Psi`.
#[derive(Clone)]
pub enum Density<T> {
    Zero,
    Constant(T),
    /// `Psi = a t^2`.
    Quadratic(T),
    /// `Psi = ln cosh t`.
    LogCosh,
    /// `Psi = sum b_k t^k`; requires `b_1 = 0`.
    Series(Vec<T>),
    Custom {
        label: String,
        psi: RealFn<T>,
        psi_prime: RealFn<T>,
    },
}

fn poly<T: Real>(c: &[T], t: T) -> T {
    c.iter().rev().fold(T::zero(), |acc, &a| acc * t + a)
}

fn poly_prime<T: Real>(c: &[T], t: T) -> T {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(T::zero(), |acc, (k, &a)| acc * t + a * T::from_usize_lossy(k))
}

impl<T: Real> Warping<T> {
    pub fn tau(&self, t: T) -> T {
        match self {
            Self::Euclidean => t,
            Self::Hyperbolic => t.sinh(),
            Self::Spherical => t.sin(),
            Self::SpaceForm(k) => {
                let k = *k;
                if k > T::zero() {
                    (k.sqrt() * t).sin() / k.sqrt()
                } else if k < T::zero() {
                    ((-k).sqrt() * t).sinh() / (-k).sqrt()
                } else {
                    t
                }
            }
            Self::Series(c) => poly(c, t),
            Self::Custom { tau, .. } => tau(t),
        }
    }

    pub fn tau_prime(&self, t: T) -> T {
        match self {
            Self::Euclidean => T::one(),
            Self::Hyperbolic => t.cosh(),
            Self::Spherical => t.cos(),
            Self::SpaceForm(k) => {
                let k = *k;
                if k > T::zero() {
                    (k.sqrt() * t).cos()
                } else if k < T::zero() {
                    ((-k).sqrt() * t).cosh()
                } else {
                    T::one()
                }
            }
            Self::Series(c) => poly_prime(c, t),
            Self::Custom { tau_prime, .. } => tau_prime(t),
        }
    }

    /// First zero of `tau` on `(0, inf)`, when known in closed form.
    fn first_zero(&self) -> Option<T> {
        match self {
            Self::Spherical => Some(T::PI()),
            Self::SpaceForm(k) if *k > T::zero() => Some(T::PI() / k.sqrt()),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Euclidean => "euclidean".into(),
            Self::Hyperbolic => "hyperbolic".into(),
            Self::Spherical => "sphere".into(),
            Self::SpaceForm(k) => format!("space-form({k})"),
            Self::Series(c) => format!("series{c:?}"),
            Self::Custom { label, .. } => label.clone(),
        }
    }
}

impl<T: Real> Density<T> {
    pub fn psi(&self, t: T) -> T {
        match self {
            Self::Zero => T::zero(),
            Self::Constant(c) => *c,
            Self::Quadratic(a) => *a * t * t,
            Self::LogCosh => t.cosh().ln(),
            Self::Series(c) => poly(c, t),
            Self::Custom { psi, .. } => psi(t),
        }
    }

    pub fn psi_prime(&self, t: T) -> T {
        match self {
            Self::Zero | Self::Constant(_) => T::zero(),
            Self::Quadratic(a) => T::lit(2.0) * *a * t,
            Self::LogCosh => t.tanh(),
            Self::Series(c) => poly_prime(c, t),
            Self::Custom { psi_prime, .. } => psi_prime(t),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Zero => "zero".into(),
            Self::Constant(c) => format!("constant({c})"),
            Self::Quadratic(a) => format!("quadratic({a})"),
            Self::LogCosh => "log-cosh".into(),
            Self::Series(c) => format!("series{c:?}"),
            Self::Custom { label, .. } => label.clone(),
        }
    }
}

impl<T: Real> fmt::Debug for Warping<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl<T: Real> fmt::Debug for Density<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `(M_tau, dt^2 + tau^2 dsigma^2, e^Psi)` of dimension `m` on `[0, t_max]`.
#[derive(Clone)]
pub struct RadialSpace<T> {
    m: usize,
    warping: Warping<T>,
    density: Density<T>,
    t_max: T,
    panel_width: T,
    /// `int_0^{k w} X` at the panel breakpoints.
    cumulative: Vec<T>,
    gl: GaussLegendre<T>,
}

impl<T: Real> fmt::Debug for RadialSpace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSpace")
            .field("m", &self.m)
            .field("warping", &self.warping)
            .field("density", &self.density)
            .field("t_max", &self.t_max)
            .finish()
    }
}

/// Result of the `C_0 = inf 1/phi` search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CZero<T> {
    pub value: T,
    pub argmin: T,
    /// The minimizer sits at `t_max` (up to rounding): the infimum over the
    /// ray may be lower.
    pub boundary: bool,
}

impl<T: Real> RadialSpace<T> {
    /// Validates `tau(0) = tau''(0) = 0`, `tau'(0) = 1`, `Psi'(0) = 0`,
    /// `tau > 0` on `(0, t_max]` and, for custom functions, that the supplied
    /// derivatives agree with central differences to `1e-7`.
    pub fn new(m: usize, warping: Warping<T>, density: Density<T>, t_max: T) -> GeoResult<Self> {
        if m < 2 {
            return Err(Error::InvalidSpace(format!("dimension m = {m} must be at least 2")));
        }
        if !(t_max > T::zero()) || !t_max.is_finite() {
            return Err(Error::InvalidSpace(format!("t_max = {t_max} must be positive")));
        }
        if let Some(z) = warping.first_zero() {
            if t_max >= z {
                return Err(Error::InvalidSpace(format!(
                    "t_max = {t_max} reaches the zero of tau at {z}"
                )));
            }
        }
        let tol = T::lit(1e-7);
        if let Warping::Series(c) = &warping {
            let get = |k: usize| c.get(k).copied().unwrap_or_else(T::zero);
            if get(0) != T::zero() || get(1) != T::one() || get(2) != T::zero() {
                return Err(Error::InvalidSpace("tau series needs a_0 = 0, a_1 = 1, a_2 = 0".into()));
            }
        }
        if let Density::Series(c) = &density {
            if c.get(1).copied().unwrap_or_else(T::zero) != T::zero() {
                return Err(Error::InvalidSpace("Psi series needs b_1 = 0".into()));
            }
        }
        let h = T::epsilon().cbrt();
        let h2 = T::epsilon().sqrt().sqrt();
        let tau0 = warping.tau(T::zero());
        let tau_pp0 = (warping.tau(h2) - T::lit(2.0) * tau0 + warping.tau(-h2)) / (h2 * h2);
        if tau0.abs() > tol || (warping.tau_prime(T::zero()) - T::one()).abs() > tol || tau_pp0.abs() > T::lit(1e-5) {
            return Err(Error::InvalidSpace(format!(
                "tau must satisfy tau(0) = tau''(0) = 0 and tau'(0) = 1 ({})",
                warping.name()
            )));
        }
        if density.psi_prime(T::zero()).abs() > tol {
            return Err(Error::InvalidSpace(format!("Psi'(0) must vanish ({})", density.name())));
        }
        let samples = 256;
        for k in 1..=samples {
            let t = t_max * T::from_usize_lossy(k) / T::from_usize_lossy(samples);
            let tau = warping.tau(t);
            if !(tau > T::zero()) || !tau.is_finite() {
                return Err(Error::InvalidSpace(format!("tau({t}) = {tau} is not positive")));
            }
            let scale = T::one().max(t.abs());
            let fd_tau = (warping.tau(t + h * scale) - warping.tau(t - h * scale)) / (T::lit(2.0) * h * scale);
            let fd_psi = (density.psi(t + h * scale) - density.psi(t - h * scale)) / (T::lit(2.0) * h * scale);
            let rel = |a: T, b: T| (a - b).abs() / T::one().max(b.abs());
            if rel(fd_tau, warping.tau_prime(t)) > tol || rel(fd_psi, density.psi_prime(t)) > tol {
                return Err(Error::InvalidSpace(format!(
                    "supplied derivative disagrees with finite differences at t = {t}"
                )));
            }
        }
        let panels = ((t_max.as_f64() * 4.0).ceil() as usize).clamp(16, 512);
        let mut space = Self {
            m,
            warping,
            density,
            t_max,
            panel_width: t_max / T::from_usize_lossy(panels),
            cumulative: Vec::new(),
            gl: GaussLegendre::new(GL_NODES),
        };
        let mut cumulative = vec![T::zero(); panels + 1];
        for k in 0..panels {
            let (a, b) = (space.breakpoint(k), space.breakpoint(k + 1));
            cumulative[k + 1] = cumulative[k] + space.gl.integrate(|s| space.x_unchecked(s), a, b);
        }
        space.cumulative = cumulative;
        Ok(space)
    }

    pub fn hyperbolic(m: usize, t_max: T) -> GeoResult<Self> {
        Self::new(m, Warping::Hyperbolic, Density::Zero, t_max)
    }

    pub fn euclidean(m: usize, t_max: T) -> GeoResult<Self> {
        Self::new(m, Warping::Euclidean, Density::Zero, t_max)
    }

    /// The same space with density `Psi + shift`.
    pub fn with_density(&self, density: Density<T>) -> GeoResult<Self> {
        Self::new(self.m, self.warping.clone(), density, self.t_max)
    }

    fn breakpoint(&self, k: usize) -> T {
        self.panel_width * T::from_usize_lossy(k)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn warping(&self) -> &Warping<T> {
        &self.warping
    }

    pub fn density(&self) -> &Density<T> {
        &self.density
    }

    pub fn tau(&self, t: T) -> T {
        self.warping.tau(t)
    }

    pub fn tau_prime(&self, t: T) -> T {
        self.warping.tau_prime(t)
    }

    pub fn psi(&self, t: T) -> T {
        self.density.psi(t)
    }

    pub fn psi_prime(&self, t: T) -> T {
        self.density.psi_prime(t)
    }

    fn check_range(&self, t: T) -> GeoResult<()> {
        if t < T::zero() || t > self.t_max || !t.is_finite() {
            return Err(Error::OutOfRange {
                t: t.as_f64(),
                t_max: self.t_max.as_f64(),
            });
        }
        Ok(())
    }

    fn x_unchecked(&self, t: T) -> T {
        self.psi(t).exp() * self.tau(t).powi(self.m as i32 - 1)
    }

    /// `X(t) = e^{Psi(t)} tau(t)^{m-1}`.
    pub fn big_x(&self, t: T) -> GeoResult<T> {
        self.check_range(t)?;
        Ok(self.x_unchecked(t))
    }

    /// `(ln X)' = Psi' + (m - 1) tau'/tau`, for `t > 0`.
    pub fn log_derivative_x(&self, t: T) -> T {
        self.psi_prime(t) + T::from_usize_lossy(self.m - 1) * self.tau_prime(t) / self.tau(t)
    }

    /// `int_0^t X`, smooth in `t`: exact panel sums plus a fixed
    /// Gauss-Legendre rule on the last partial panel.
    pub fn mass(&self, t: T) -> GeoResult<T> {
        self.check_range(t)?;
        Ok(self.mass_unchecked(t))
    }

    fn mass_unchecked(&self, t: T) -> T {
        let k = ((t / self.panel_width).floor().as_f64() as usize).min(self.cumulative.len() - 1);
        let a = self.breakpoint(k);
        self.cumulative[k] + self.gl.integrate(|s| self.x_unchecked(s), a, t)
    }

    /// `phi(t) = int_0^t X / X(t)`, with `t / m` below [`SERIES_THRESHOLD`].
    pub fn phi_at(&self, t: T) -> GeoResult<T> {
        self.check_range(t)?;
        Ok(self.phi_unchecked(t))
    }

    fn phi_unchecked(&self, t: T) -> T {
        if t < T::lit(SERIES_THRESHOLD) {
            t / T::from_usize_lossy(self.m)
        } else {
            self.mass_unchecked(t) / self.x_unchecked(t)
        }
    }

    /// `phi` on `grid` by cumulative adaptive quadrature of `X`.
    pub fn phi_profile(&self, grid: &[T]) -> GeoResult<Vec<T>> {
        check_grid(grid)?;
        let opts = QuadratureOptions::default();
        let mut acc = T::zero();
        let mut prev = T::zero();
        let mut out = Vec::with_capacity(grid.len());
        for &t in grid {
            self.check_range(t)?;
            acc += adaptive(|s| self.x_unchecked(s), prev, t, &opts)?.value;
            prev = t;
            out.push(if t < T::lit(SERIES_THRESHOLD) {
                t / T::from_usize_lossy(self.m)
            } else {
                acc / self.x_unchecked(t)
            });
        }
        Ok(out)
    }

    /// Largest `|phi' - 1 + (ln X)' phi|` over grid points above the series
    /// threshold, with `phi'` by central differences.
    pub fn phi_ode_residual(&self, grid: &[T]) -> GeoResult<T> {
        let mut worst = T::zero();
        let h = T::epsilon().cbrt();
        for &t in grid {
            self.check_range(t)?;
            let step = h * T::one().max(t);
            if t - step < T::lit(SERIES_THRESHOLD) || t + step > self.t_max {
                continue;
            }
            let d = (self.phi_unchecked(t + step) - self.phi_unchecked(t - step)) / ((t + step) - (t - step));
            let r = d - T::one() + self.log_derivative_x(t) * self.phi_unchecked(t);
            worst = worst.max(r.abs());
        }
        Ok(worst)
    }

    /// `C_0 = inf_{(0, t_max]} 1/phi`: discrete minimum on a log-uniform grid
    /// followed by golden-section refinement.
    pub fn c_zero(&self) -> GeoResult<CZero<T>> {
        let lo = T::lit(C_ZERO_START).min(self.t_max * T::lit(0.5)).ln();
        let hi = self.t_max.ln();
        let n = C_ZERO_GRID;
        let ts: Vec<T> = (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.t_max
                } else {
                    (lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)).exp()
                }
            })
            .collect();
        let inv = |t: T| -> GeoResult<T> {
            let p = self.phi_unchecked(t);
            if !(p > T::zero()) || !p.is_finite() {
                return Err(Error::InvalidSpace(format!("phi({t}) = {p} is not positive")));
            }
            Ok(T::one() / p)
        };
        let mut best = (0, T::infinity());
        for (i, &t) in ts.iter().enumerate() {
            let v = inv(t)?;
            if v < best.1 {
                best = (i, v);
            }
        }
        let (j, _) = best;
        // 1/phi flat to rounding out to t_max counts as an endpoint minimum
        let at_end = inv(self.t_max)?;
        if j + 1 == n || at_end - best.1 <= T::lit(64.0) * T::epsilon() * best.1 {
            return Ok(CZero {
                value: best.1.min(at_end),
                argmin: self.t_max,
                boundary: true,
            });
        }
        let (mut a, mut b) = (ts[j.saturating_sub(1)], ts[j + 1]);
        let g = T::lit(0.5 * (5f64.sqrt() - 1.0));
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (inv(c)?, inv(d)?);
        for _ in 0..100 {
            if (b - a).abs() <= T::epsilon().sqrt() * T::one().max(c.abs()) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = inv(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = inv(d)?;
            }
        }
        let (argmin, value) = if fc < fd { (c, fc) } else { (d, fd) };
        let (argmin, value) = if best.1 < value {
            (ts[j], best.1)
        } else {
            (argmin, value)
        };
        Ok(CZero {
            value,
            argmin,
            boundary: false,
        })
    }

    /// The CMC profile `F_{c,d}` sampled on `grid`.
    pub fn cmc_profile(&self, c: T, d: T, grid: &[T]) -> GeoResult<CmcProfile<T>> {
        check_grid(grid)?;
        let c0 = self.c_zero()?;
        if c.abs() >= c0.value {
            return Err(Error::InadmissibleC {
                c: c.as_f64(),
                c_zero: c0.value.as_f64(),
            });
        }
        let phi = self.phi_profile(grid)?;
        let phi_c: Vec<T> = phi.iter().map(|&p| c * p).collect();
        for (&t, &v) in grid.iter().zip(&phi_c) {
            if !(v.abs() < T::one()) {
                return Err(Error::ProfileOutOfRange {
                    t: t.as_f64(),
                    value: v.as_f64(),
                });
            }
        }
        let opts = QuadratureOptions::default();
        let mut acc = d;
        let mut prev = T::zero();
        let mut f_values = Vec::with_capacity(grid.len());
        for &t in grid {
            acc += adaptive(|s| self.slope_integrand(c, s), prev, t, &opts)?.value;
            prev = t;
            f_values.push(acc);
        }
        Ok(CmcProfile {
            c,
            d,
            grid: grid.to_vec(),
            phi_values: phi,
            phi_c_values: phi_c,
            f_values,
            c_zero: c0.value,
        })
    }

    /// `F' = e^{-Psi} phi_c / sqrt(1 - phi_c^2)`.
    fn slope_integrand(&self, c: T, s: T) -> T {
        let xi = c * self.phi_unchecked(s);
        (-self.psi(s)).exp() * xi / (T::one() - xi * xi).sqrt()
    }

    /// `|xi' - c + (ln X)' xi|` at interior grid points of `profile`, where
    /// `xi = F' / sqrt(e^{-2 Psi} + F'^2)` and both derivatives are taken by
    /// finite differences on the grid. Returns the maximum and the per-point
    /// values (`None` where the stencil does not fit).
    pub fn xi_ode_residual(&self, profile: &CmcProfile<T>) -> (T, Vec<Option<T>>) {
        let (xi, res) = self.xi_recovery(profile);
        let _ = xi;
        let worst = res.iter().flatten().fold(T::zero(), |acc, r| acc.max(r.abs()));
        (worst, res)
    }

    fn xi_recovery(&self, profile: &CmcProfile<T>) -> (Vec<Option<T>>, Vec<Option<T>>) {
        let t = &profile.grid;
        let fp = grid_derivative(t, &profile.f_values.iter().map(|&v| Some(v)).collect::<Vec<_>>());
        let xi: Vec<Option<T>> = t
            .iter()
            .zip(&fp)
            .map(|(&s, d)| d.map(|d| d / ((T::lit(-2.0) * self.psi(s)).exp() + d * d).sqrt()))
            .collect();
        let dxi = grid_derivative(t, &xi);
        let res = t
            .iter()
            .zip(xi.iter().zip(&dxi))
            .map(|(&s, (x, dx))| match (x, dx) {
                (Some(x), Some(dx)) if s >= T::lit(SERIES_THRESHOLD) => {
                    Some(*dx - profile.c + self.log_derivative_x(s) * *x)
                }
                _ => None,
            })
            .collect();
        (xi, res)
    }

    /// Writes `t, phi, phi_c, F, xi, residual`; `xi` and `residual` come from
    /// the grid finite differences and are empty where undefined.
    pub fn write_profile_csv<W: Write>(&self, profile: &CmcProfile<T>, mut out: W) -> io::Result<()> {
        let (xi, res) = self.xi_recovery(profile);
        writeln!(out, "t,phi,phi_c,F,xi,residual")?;
        let opt = |v: &Option<T>| v.map_or(String::new(), |v| format!("{:e}", v.as_f64()));
        for i in 0..profile.grid.len() {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e},{},{}",
                profile.grid[i].as_f64(),
                profile.phi_values[i].as_f64(),
                profile.phi_c_values[i].as_f64(),
                profile.f_values[i].as_f64(),
                opt(&xi[i]),
                opt(&res[i])
            )?;
        }
        Ok(())
    }

    /// Base metric `dt^2 + tau^2 dsigma^2` on the lifted chart (origin
    /// excluded by [`LIFT_ORIGIN_MARGIN`]).
    pub fn base_metric(&self) -> MetricField<T> {
        let w = self.warping.clone();
        metrics::radial(
            self.m,
            Arc::new(move |t| w.tau(t)),
            self.t_max,
            T::lit(LIFT_ORIGIN_MARGIN),
        )
    }

    /// `psi(x) = Psi(t)` on the lifted chart, with its analytic differential.
    pub fn weight_field(&self, chart: Arc<Chart<T>>) -> ScalarField<T> {
        let (d1, d2) = (self.density.clone(), self.density.clone());
        let m = self.m;
        ScalarField::new(chart, move |x| d1.psi(x[0])).with_gradient(move |x| {
            let mut g = vec![T::zero(); m];
            g[0] = d2.psi_prime(x[0]);
            g
        })
    }

    /// The warped product `M_tau x_{e^Psi} R` and the graph `f(t, .) = F(t)`.
    pub fn lift_to_graph(&self, profile: &CmcProfile<T>) -> GeoResult<(WarpedSpace<T>, GraphMap<T>)> {
        if !(2..=3).contains(&self.m) {
            return Err(Error::Unsupported(format!(
                "lifting needs m in {{2, 3}}, got {}",
                self.m
            )));
        }
        let g = self.base_metric();
        let chart = g.chart().clone();
        let fiber_chart = Arc::new(Chart::cube("fiber", 1, T::lit(FIBER_HALF_WIDTH))?);
        let fiber = MetricField::euclidean(fiber_chart.clone());
        let weight = self.weight_field(chart.clone());
        let ws = WarpedSpace::new(g, fiber, weight)?;
        let rg = Arc::new(RadialGraph::new(self.clone(), profile.c, profile.d));
        let m = self.m;
        let (r1, r2, r3) = (rg.clone(), rg.clone(), rg);
        let map = GraphMap::new(chart, fiber_chart, move |x| vec![r1.f(x[0])])
            .with_jacobian(move |x| {
                let mut j = Mat::zeros(1, m);
                j[(0, 0)] = r2.f_prime(x[0]);
                j
            })
            .with_second_derivatives(move |x| {
                let mut s = Mat::zeros(m, m);
                s[(0, 0)] = r3.f_second(x[0]);
                vec![s]
            });
        Ok((ws, map))
    }
}

/// Pointwise evaluator of `F_{c,d}` and its first two derivatives, smooth in
/// `t` (fixed panels plus a Gauss-Legendre rule on the last partial panel).
#[derive(Clone)]
pub struct RadialGraph<T> {
    space: RadialSpace<T>,
    c: T,
    d: T,
    cumulative: Vec<T>,
}

impl<T: Real> RadialGraph<T> {
    pub fn new(space: RadialSpace<T>, c: T, d: T) -> Self {
        let mut cumulative = vec![d; space.cumulative.len()];
        for k in 0..cumulative.len() - 1 {
            let (a, b) = (space.breakpoint(k), space.breakpoint(k + 1));
            cumulative[k + 1] = cumulative[k] + space.gl.integrate(|s| space.slope_integrand(c, s), a, b);
        }
        Self {
            space,
            c,
            d,
            cumulative,
        }
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn d(&self) -> T {
        self.d
    }

    pub fn f(&self, t: T) -> T {
        let s = &self.space;
        let k = ((t / s.panel_width).floor().as_f64().max(0.0) as usize).min(self.cumulative.len() - 1);
        let a = s.breakpoint(k);
        self.cumulative[k] + s.gl.integrate(|u| s.slope_integrand(self.c, u), a, t)
    }

    /// `xi = c phi`.
    pub fn xi(&self, t: T) -> T {
        self.c * self.space.phi_unchecked(t)
    }

    pub fn f_prime(&self, t: T) -> T {
        self.space.slope_integrand(self.c, t)
    }

    /// `F'' = e^{-Psi} (-Psi' xi / sqrt(1 - xi^2) + xi' / (1 - xi^2)^{3/2})`
    /// with `xi' = c (1 - (ln X)' phi)`.
    pub fn f_second(&self, t: T) -> T {
        let s = &self.space;
        let phi = s.phi_unchecked(t);
        let xi = self.c * phi;
        let dphi = if t < T::lit(SERIES_THRESHOLD) {
            T::one() / T::from_usize_lossy(s.m)
        } else {
            T::one() - s.log_derivative_x(t) * phi
        };
        let one_minus = T::one() - xi * xi;
        (-s.psi(t)).exp() * (-s.psi_prime(t) * xi / one_minus.sqrt() + self.c * dphi / (one_minus * one_minus.sqrt()))
    }
}

impl<T: Real> fmt::Debug for RadialGraph<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialGraph")
            .field("space", &self.space)
            .field("c", &self.c)
            .field("d", &self.d)
            .finish()
    }
}

/// Sampled CMC profile.
#[derive(Clone, Debug, PartialEq)]
pub struct CmcProfile<T> {
    pub c: T,
    pub d: T,
    pub grid: Vec<T>,
    pub phi_values: Vec<T>,
    pub phi_c_values: Vec<T>,
    pub f_values: Vec<T>,
    pub c_zero: T,
}

fn check_grid<T: Real>(grid: &[T]) -> GeoResult<()> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn uniform_grid<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    assert!(n >= 2);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                b
            } else {
                a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)
            }
        })
        .collect()
}

/// Derivative on a grid: five-point central differences where the spacing
/// is uniform, three-point where it is not; `None` where the stencil does not
/// fit or an input is missing. Uniform stretches never fall back to the
/// lower order rule, so repeated differentiation keeps a consistent order.
fn grid_derivative<T: Real>(t: &[T], v: &[Option<T>]) -> Vec<Option<T>> {
    let n = t.len();
    let mut out = vec![None; n];
    let uniform = |a: T, b: T| (a - b).abs() <= T::lit(1e-9) * a.abs().max(b.abs());
    for i in 1..n.saturating_sub(1) {
        let h1 = t[i] - t[i - 1];
        let h2 = t[i + 1] - t[i];
        if uniform(h1, h2) {
            if i < 2 || i + 2 >= n || !uniform(t[i - 1] - t[i - 2], h1) || !uniform(t[i + 2] - t[i + 1], h2) {
                continue;
            }
            if let (Some(a), Some(b), Some(c), Some(d)) = (v[i - 2], v[i - 1], v[i + 1], v[i + 2]) {
                let h = (t[i + 2] - t[i - 2]) / T::lit(4.0);
                out[i] = Some((a - T::lit(8.0) * b + T::lit(8.0) * c - d) / (T::lit(12.0) * h));
            }
            continue;
        }
        if let (Some(a), Some(b), Some(c)) = (v[i - 1], v[i], v[i + 1]) {
            out[i] = Some(-h2 / (h1 * (h1 + h2)) * a + (h2 - h1) / (h1 * h2) * b + h1 / (h2 * (h1 + h2)) * c);
        }
    }
    out
}
