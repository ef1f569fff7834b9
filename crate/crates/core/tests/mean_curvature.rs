//! Mean curvature of lifted radial graphs against an ambient oracle: the
//! divergence of the unit normal of the level set `s - F(t) = 0`, computed by
//! central differences in the ambient chart with closed-form profiles.

mod common;

use common::Kind;
use warpgraph::radial::{Density, Warping};

/// Closed-form `phi` for the three profiles under test.
fn phi(label: &str, t: f64) -> f64 {
    match label {
        "h2" => (t / 2.0).tanh(),
        "h3" => (t.sinh() * t.cosh() - t) / (2.0 * t.sinh().powi(2)),
        "h2-logcosh" => t.tanh() / 2.0,
        _ => unreachable!(),
    }
}

/// `|div nu| / m` for the diagonal ambient metric
/// `dt^2 + sinh^2 t dsigma^2 + e^{2 Psi} ds^2`.
fn oracle_norm_h(label: &str, m: usize, c: f64, x: &[f64]) -> f64 {
    let big_psi = |t: f64| if label == "h2-logcosh" { t.cosh().ln() } else { 0.0 };
    let slope = |t: f64| {
        let xi = c * phi(label, t);
        (-big_psi(t)).exp() * xi / (1.0 - xi * xi).sqrt()
    };
    // ambient coordinates (t, angles..., s)
    let diag = |p: &[f64]| -> Vec<f64> {
        let t = p[0];
        let mut d = vec![1.0];
        if m == 2 {
            d.push(t.sinh().powi(2));
        } else {
            d.push(t.sinh().powi(2));
            d.push((t.sinh() * p[1].sin()).powi(2));
        }
        d.push((2.0 * big_psi(t)).exp());
        d
    };
    let density_times_nu = |p: &[f64], i: usize| -> f64 {
        let d = diag(p);
        let mut dg = vec![0.0; m + 1];
        dg[0] = -slope(p[0]);
        dg[m] = 1.0;
        let norm = dg.iter().zip(&d).map(|(g, di)| g * g / di).sum::<f64>().sqrt();
        let vol = d.iter().product::<f64>().sqrt();
        vol * dg[i] / d[i] / norm
    };
    let mut p = x.to_vec();
    p.push(0.0);
    let h = 1e-5;
    let mut div = 0.0;
    for i in 0..=m {
        let mut a = p.clone();
        let mut b = p.clone();
        a[i] += h;
        b[i] -= h;
        div += (density_times_nu(&a, i) - density_times_nu(&b, i)) / (2.0 * h);
    }
    let vol = diag(&p).iter().product::<f64>().sqrt();
    (div / vol).abs() / m as f64
}

#[test]
fn lifted_graphs_match_ambient_oracle() {
    let cases = [
        ("h2", 2, 0.5, Warping::Hyperbolic, Density::Zero),
        ("h3", 3, 1.0, Warping::Hyperbolic, Density::Zero),
        ("h2-logcosh", 2, 1.0, Warping::Hyperbolic, Density::LogCosh),
    ];
    for (label, m, c, warping, density) in cases {
        let gr = common::lifted_cmc(m, warping, density, c);
        for x in common::radial_probes(m) {
            let pipeline = gr.curvature_bundle(&x).unwrap().norm_h;
            let oracle = oracle_norm_h(label, m, c, &x);
            assert!((oracle - c / m as f64).abs() < 1e-6, "{label} {x:?}: oracle {oracle}");
            assert!(
                (pipeline - oracle).abs() < 1e-6,
                "{label} {x:?}: {pipeline} vs {oracle}"
            );
        }
    }
}

#[test]
fn identity_residuals_on_parallel_suites() {
    for case in common::all_cases() {
        if case.kind == Kind::Generic {
            continue;
        }
        let tol = if matches!(case.kind, Kind::Cmc { .. }) {
            1e-4
        } else {
            1e-8
        };
        for x in &case.probes {
            let heinz = case.graph.heinz_divergence_residual(x).unwrap();
            let cal = case.graph.calibration_divergence_residual(x).unwrap();
            assert!(heinz.residual <= tol, "{} {x:?}: {heinz:?}", case.name);
            assert!(cal.residual <= tol, "{} {x:?}: {cal:?}", case.name);
            assert!(cal.z_residual <= 1e-6, "{} {x:?}: {cal:?}", case.name);
        }
    }
}

#[test]
fn pointwise_invariants_on_every_suite() {
    for case in common::all_cases() {
        for x in &case.probes {
            let b = case.graph.curvature_bundle(x).unwrap();
            let name = case.name;
            if let Kind::Cmc { norm_h } = case.kind {
                assert!((b.norm_h - norm_h).abs() < 1e-4, "{name}");
            }
            assert!(b.tangential_leak() <= 1e-8, "{name}");
            assert!(b.calibration_angle_residual() <= 1e-10, "{name}");
            assert!(b.m() as f64 * b.norm_h + 1e-12 >= b.norm_z1(), "{name}");
            assert!(b.frame.eigen_relation_residuals().iter().all(|&r| r <= 1e-8), "{name}");
            assert_eq!(b.norm_h <= 1e-8, b.norm_w_star() <= 1e-7, "{name}");
            assert!(case.graph.key_pairing_residual(x).unwrap() <= 1e-3, "{name}");
            let q = case.graph.q_psi_residuals(x).unwrap();
            assert!(q.base_residual <= 1e-6 && q.fiber_residual <= 1e-6, "{name}");
        }
    }
}

#[test]
fn m_minus_sign_agrees_with_angle_identity() {
    let gr = common::lifted_cmc(2, Warping::Hyperbolic, Density::LogCosh, 1.0);
    for x in common::radial_probes(2) {
        let mm = gr.m_minus_indicator(&x).unwrap();
        assert!(mm.two_angles_residual <= 1e-8, "{mm:?}");
        assert_ne!(mm.sign, 0);
    }
}
