//! Eigenframe relations and frame independence over randomized warped
//! products and affine graphs.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn eigen_relations_hold_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..100 {
        let (gr, x) = common::random_graph(&mut rng);
        let frame = gr.eigenframe(&x).unwrap();
        let worst = frame.eigen_relation_residuals().iter().cloned().fold(0.0, f64::max);
        assert!(worst <= 1e-8, "graph {k}: {worst}");
        let b = gr.curvature_bundle_with_frame(&x, frame).unwrap();
        assert!(b.calibration_angle_residual() <= 1e-10, "graph {k}");
        assert!(b.tangential_leak() <= 1e-8, "graph {k}");
    }
}

#[test]
fn frame_independent_outputs_survive_degenerate_mixing() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (gr, x) = common::random_graph(&mut rng);
        let frame = gr.eigenframe(&x).unwrap();
        let base = gr.curvature_bundle_with_frame(&x, frame.clone()).unwrap();
        for _ in 0..3 {
            let mixed = frame.mix_degenerate(|| rng.gen_range(-1.0..1.0));
            let b = gr.curvature_bundle_with_frame(&x, mixed).unwrap();
            assert!((b.norm_h - base.norm_h).abs() <= 1e-8);
            assert!((b.cos_theta - base.cos_theta).abs() <= 1e-8);
            assert!((b.norm_z1() - base.norm_z1()).abs() <= 1e-8);
            assert!((b.q_psi(&b.w_star) - base.q_psi(&base.w_star)).abs() <= 1e-8);
        }
    }
}
