//! One-dimensional quadrature.
//!
//! Two rules are provided. [`adaptive`] is globally adaptive bisection with the
//! embedded Gauss-Kronrod 7/15 pair and is the accurate general-purpose
//! integrator. [`GaussLegendre`] is a fixed composite rule: its result is a
//! smooth function of the interval endpoints, which matters whenever the
//! integral is itself differentiated numerically.

use crate::error::{Error, GeoResult};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss 7-point weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    /// Relative tolerance; the accepted error is `max(abs_tol, rel_tol * |I|)`.
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_evaluations: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureEstimate<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

fn kronrod_panel<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (i, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * T::lit(x);
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += T::lit(w) * (f1 + f2);
        if i % 2 == 1 {
            gauss += T::lit(WG[i / 2]) * (f1 + f2);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn adaptive<T: Real>(
    mut f: impl FnMut(T) -> T,
    a: T,
    b: T,
    opts: &QuadratureOptions,
) -> GeoResult<QuadratureEstimate<T>> {
    if a == b {
        return Ok(QuadratureEstimate {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    let abs_tol = T::lit(opts.abs_tol);
    let rel_tol = T::lit(opts.rel_tol);
    let mut evaluations = 15;
    let (first, first_err) = kronrod_panel(&mut f, a, b);
    // Intervals pending refinement: (a, b, estimate, error).
    let mut pending = vec![(a, b, first, first_err)];
    let mut total = first;
    let mut total_err = first_err;
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                evaluations,
            });
        }
        let target = abs_tol.max(rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        // bisect the worst interval
        let worst = pending
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, est, err) = pending.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo.min(hi) || mid >= lo.max(hi) || evaluations + 30 > opts.max_evaluations {
            return Err(Error::Quadrature {
                a: a.as_f64(),
                b: b.as_f64(),
                evaluations,
            });
        }
        let (left, left_err) = kronrod_panel(&mut f, lo, mid);
        let (right, right_err) = kronrod_panel(&mut f, mid, hi);
        evaluations += 30;
        total = total - est + left + right;
        total_err = total_err - err + left_err + right_err;
        pending.push((lo, mid, left, left_err));
        pending.push((mid, hi, right, right_err));
        // running sums drift; resum occasionally
        if pending.len() % 64 == 0 {
            total = pending.iter().map(|p| p.2).sum();
            total_err = pending.iter().map(|p| p.3).sum();
        }
    }
    let value = pending.iter().map(|p| p.2).sum();
    let error = pending.iter().map(|p| p.3).sum();
    Ok(QuadratureEstimate {
        value,
        error,
        evaluations,
    })
}

/// Fixed `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes are computed in `f64` by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pn1 = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes.push(T::lit(x));
            weights.push(T::lit(2.0 / ((1.0 - x * x) * dp * dp)));
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T, a: T, b: T) -> T {
        let half = (b - a) * T::lit(0.5);
        let center = (a + b) * T::lit(0.5);
        let s: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(center + half * x))
            .sum();
        s * half
    }

    /// Composite rule on `panels` equal sub-intervals of `[a, b]`.
    pub fn composite(&self, mut f: impl FnMut(T) -> T, a: T, b: T, panels: usize) -> T {
        let width = (b - a) / T::from_usize_lossy(panels);
        (0..panels)
            .map(|p| {
                let lo = a + width * T::from_usize_lossy(p);
                self.integrate(&mut f, lo, lo + width)
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_integrates_polynomials_exactly() {
        let est = adaptive(|x: f64| x.powi(10), 0.0, 1.0, &QuadratureOptions::default()).unwrap();
        assert!((est.value - 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(est.evaluations, 15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let est = adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &QuadratureOptions::default()).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((est.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadratureOptions {
            max_evaluations: 100,
            ..Default::default()
        };
        let err = adaptive(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &opts).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn gauss_legendre_exact_to_degree_2n_minus_1() {
        let gl = GaussLegendre::<f64>::new(5);
        let v = gl.integrate(|x| x.powi(9) + x.powi(8), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        let w: f64 = gl.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-15);
    }

    #[test]
    fn composite_matches_closed_form() {
        let gl = GaussLegendre::<f64>::new(10);
        let v = gl.composite(f64::sinh, 0.0, 20.0, 40);
        assert!((v - (20f64.cosh() - 1.0)).abs() < 1e-13 * v);
    }
}
