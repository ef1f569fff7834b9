use std::sync::Arc;

use super::*;
use crate::geometry::{metrics, Chart, FdConfig, GraphMap, MetricField, ScalarField};
use crate::linalg::{self, Mat};
use crate::warped::WarpedSpace;

fn fd() -> FdConfig<f64> {
    FdConfig::default()
}

fn cube(dim: usize) -> Arc<Chart<f64>> {
    Arc::new(Chart::cube("cube", dim, 5.0).unwrap())
}

fn flat_product(m: usize, n: usize) -> WarpedSpace<f64> {
    WarpedSpace::product(MetricField::euclidean(cube(m)), MetricField::euclidean(cube(n)))
}

fn graph(ws: WarpedSpace<f64>, f: GraphMap<f64>) -> GraphSubmanifold<f64> {
    GraphSubmanifold::new(ws, f, fd()).unwrap()
}

#[test]
fn graph_metric_examples() {
    let ws = flat_product(2, 1);
    let c = GraphMap::constant(cube(2), cube(1), vec![0.5]);
    let gr = graph(ws, c);
    assert_eq!(gr.graph_metric(&[0.1, 0.2]).unwrap(), Mat::identity(2));

    let ws = flat_product(2, 2);
    let id = GraphMap::affine(cube(2), cube(2), Mat::identity(2), vec![0.0, 0.0]);
    assert_eq!(graph(ws, id).graph_metric(&[0.1, 0.2]).unwrap(), Mat::diag(&[2.0, 2.0]));

    let g = MetricField::euclidean(cube(1));
    let psi = ScalarField::new(cube(1), |x| x[0]);
    let ws = WarpedSpace::new(g, MetricField::euclidean(cube(1)), psi).unwrap();
    let lin = GraphMap::new(cube(1), cube(1), |x| vec![x[0]]);
    let gs = graph(ws, lin).graph_metric(&[0.3]).unwrap();
    assert!((gs[(0, 0)] - (1.0 + 0.6f64.exp())).abs() < 1e-9);
}

#[test]
fn eigenframe_from_graph() {
    let gr = graph(
        flat_product(1, 1),
        GraphMap::affine(cube(1), cube(1), Mat::diag(&[2.0]), vec![0.0]),
    );
    let f = gr.eigenframe(&[0.0]).unwrap();
    assert_eq!(f.rank, 1);
    assert!((f.lambdas_sq[0] - 4.0).abs() < 1e-14);
}

#[test]
fn constant_graph_is_totally_geodesic() {
    let g = metrics::hyperbolic_polar(4.0);
    let psi = ScalarField::new(g.chart().clone(), |x| x[0] * x[0] / 2.0);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(1)), psi).unwrap();
    let gr = graph(ws, GraphMap::constant(g.chart().clone(), cube(1), vec![0.3]));
    let x = [1.0, 0.5];
    let b = gr.curvature_bundle(&x).unwrap();
    assert_eq!(b.norm_h, 0.0);
    assert_eq!(b.w, vec![0.0]);
    assert_eq!(b.psi_star, vec![0.0]);
    assert!((b.cos_theta - 1.0).abs() < 1e-14);
    assert!(gr.heinz_divergence_residual(&x).unwrap().residual <= 1e-8);
    assert!(gr.calibration_divergence_residual(&x).unwrap().residual <= 1e-8);
    assert_eq!(gr.m_minus_indicator(&x).unwrap().sign, 0);
    let q = gr.q_psi_residuals(&x).unwrap();
    assert_eq!((q.q_w_star, q.q_psi_star), (0.0, 0.0));
    let sff = gr.second_fundamental_form(&x, &[1.0, 0.0], &[0.3, 1.0]).unwrap();
    assert!(linalg::max_abs(&sff) < 1e-12);
}

#[test]
fn affine_graph_in_flat_product_is_minimal() {
    let a = Mat::from_rows(&[vec![1.0, -0.5], vec![0.3, 2.0], vec![0.0, 1.0]]);
    let gr = graph(
        flat_product(2, 3),
        GraphMap::affine(cube(2), cube(3), a, vec![0.1, 0.0, -0.2]),
    );
    let x = [0.2, -0.4];
    let b = gr.curvature_bundle(&x).unwrap();
    assert!(b.norm_h < 1e-12);
    assert!((b.cos_theta - b.frame.cos_theta_from_spectrum()).abs() < 1e-14);
    assert!(b.calibration_angle_residual() < 1e-12);
    assert!(gr.heinz_divergence_residual(&x).unwrap().residual <= 1e-8);
    assert!(gr.calibration_divergence_residual(&x).unwrap().residual <= 1e-8);
}

#[test]
fn parabola_curvature_at_vertex() {
    let f = GraphMap::new(cube(1), cube(1), |x| vec![x[0] * x[0] / 2.0]);
    let gr = graph(flat_product(1, 1), f);
    let sff = gr.second_fundamental_form(&[0.0], &[1.0], &[1.0]).unwrap();
    assert!((sff[0]).abs() < 1e-6 && (sff[1] - 1.0).abs() < 1e-6);
    let b = gr.curvature_bundle(&[0.0]).unwrap();
    assert!((b.norm_h - 1.0).abs() < 1e-6);
}

#[test]
fn second_fundamental_form_traces_to_mean_curvature() {
    let g = metrics::hyperbolic_polar(4.0);
    let psi = ScalarField::new(g.chart().clone(), |x| 0.3 * x[0] * x[0]);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(2)), psi).unwrap();
    let f = GraphMap::new(g.chart().clone(), cube(2), |x| {
        vec![x[0].sin() * x[1], 0.5 * x[0] * x[0]]
    });
    let gr = graph(ws, f);
    let x = [1.1, 0.4];
    let b = gr.curvature_bundle(&x).unwrap();
    let mut trace = vec![0.0; 4];
    for i in 0..2 {
        let xs = b.frame.x_star.column(i);
        trace = linalg::add(&trace, &gr.second_fundamental_form(&x, &xs, &xs).unwrap());
    }
    let mh = linalg::scale(2.0, &b.h());
    assert!(linalg::max_abs(&linalg::sub(&trace, &mh)) < 1e-6);
    let sym = linalg::sub(
        &gr.second_fundamental_form(&x, &[1.0, 0.2], &[0.0, 1.0]).unwrap(),
        &gr.second_fundamental_form(&x, &[0.0, 1.0], &[1.0, 0.2]).unwrap(),
    );
    assert!(linalg::max_abs(&sym) < 1e-12);
    assert!(b.tangential_leak() < 1e-8);
    let proj = b.frame.normal_projection(&{
        let mut v = vec![0.0; 2];
        v.extend(b.w_star.clone());
        v
    });
    assert!(linalg::max_abs(&linalg::sub(&proj, &linalg::scale(2.0, &b.h()))) < 1e-9);
}

#[test]
fn q_psi_identities_on_a_curved_graph() {
    let g = metrics::polar(4.0);
    let psi = ScalarField::new(g.chart().clone(), |x: &[f64]| x[0].cosh().ln() + 0.1 * x[1]);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(1)), psi).unwrap();
    let f = GraphMap::new(g.chart().clone(), cube(1), |x| vec![x[0] * x[1].cos()]);
    let gr = graph(ws, f);
    let q = gr.q_psi_residuals(&[1.2, 0.7]).unwrap();
    assert!(q.base_residual < 1e-10 && q.fiber_residual < 1e-10);
    assert!(q.q_psi_star >= 0.0);
    let mm = gr.m_minus_indicator(&[1.2, 0.7]).unwrap();
    assert!(mm.two_angles_residual < 1e-10);
    assert_ne!(mm.sign, 0);
}

#[test]
fn q_psi_vanishes_when_f_is_constant_along_grad_psi() {
    let g = metrics::polar(4.0);
    let psi = ScalarField::new(g.chart().clone(), |x| x[0] * x[0]);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(1)), psi).unwrap();
    let f = GraphMap::new(g.chart().clone(), cube(1), |x| vec![x[1].sin()]);
    let b = graph(ws, f).curvature_bundle(&[1.5, 0.3]).unwrap();
    for u in [[1.0], [-2.5]] {
        assert!(b.q_psi(&u).abs() < 1e-10);
    }
}

#[test]
fn weight_constant_gives_no_m_minus() {
    let g = metrics::polar(4.0);
    let c = ScalarField::constant(g.chart().clone(), 2.0);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(1)), c).unwrap();
    let f = GraphMap::new(g.chart().clone(), cube(1), |x| vec![x[0] * x[0] * x[1]]);
    let gr = graph(ws, f);
    let x = [1.0, 0.5];
    assert_eq!(gr.m_minus_indicator(&x).unwrap().sign, 0);
    let q = gr.q_psi_residuals(&x).unwrap();
    assert_eq!((q.q_w_star, q.q_psi_star), (0.0, 0.0));
}

#[test]
fn key_pairing_on_a_curved_graph() {
    let g = metrics::hyperbolic_polar(4.0);
    let psi = ScalarField::new(g.chart().clone(), |x| 0.2 * x[0] * x[0]);
    let ws = WarpedSpace::new(g.clone(), MetricField::euclidean(cube(1)), psi).unwrap();
    let f = GraphMap::new(g.chart().clone(), cube(1), |x| vec![0.3 * x[0] * x[0] + 0.1 * x[1]]);
    let gr = graph(ws, f);
    let r = gr.key_pairing_residual(&[1.0, 0.2]).unwrap();
    assert!(r <= 1e-3, "{r}");
}

#[test]
fn frame_mixing_keeps_invariants() {
    let a = Mat::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
    let ws = WarpedSpace::product(MetricField::euclidean(cube(3)), MetricField::euclidean(cube(2)));
    let f = GraphMap::new(cube(3), cube(2), move |x| {
        let l = a.mul_vec(x);
        vec![l[0] + 0.1 * x[2] * x[2], l[1]]
    });
    let gr = graph(ws, f);
    let x = [0.1, 0.2, 0.3];
    let base = gr.curvature_bundle(&x).unwrap();
    let mut state = 12345u64;
    let mut sample = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let mixed_frame = base.frame.mix_degenerate(&mut sample);
    for r in mixed_frame.eigen_relation_residuals() {
        assert!(r < 1e-10);
    }
    let mixed = gr.curvature_bundle_with_frame(&x, mixed_frame).unwrap();
    assert!((mixed.norm_h - base.norm_h).abs() < 1e-8);
    assert!((mixed.cos_theta - base.cos_theta).abs() < 1e-8);
    assert!((mixed.norm_z1() - base.norm_z1()).abs() < 1e-8);
    assert!((mixed.q_psi(&mixed.w_star) - base.q_psi(&base.w_star)).abs() < 1e-8);
}
