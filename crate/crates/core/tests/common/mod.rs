#![allow(dead_code)]

use std::sync::Arc;

use warpgraph::geometry::{metrics, Chart, FdConfig, GraphMap, MetricField, ScalarField};
use warpgraph::graph::GraphSubmanifold;
use warpgraph::linalg::Mat;
use warpgraph::radial::{uniform_grid, Density, RadialSpace, Warping};
use warpgraph::warped::WarpedSpace;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kind {
    /// Lifted radial graph with `|H| = |c| / m`.
    Cmc {
        norm_h: f64,
    },
    TotallyGeodesic,
    /// Affine graph between flat factors with constant weight.
    Minimal,
    /// No closed-form mean curvature.
    Generic,
}

pub struct Case {
    pub name: &'static str,
    pub graph: GraphSubmanifold<f64>,
    pub probes: Vec<Vec<f64>>,
    pub kind: Kind,
}

pub fn cube(dim: usize, half: f64) -> Arc<Chart<f64>> {
    Arc::new(Chart::cube("cube", dim, half).unwrap())
}

/// Probe points at radii `0.5, 1, 2` with fixed angles.
pub fn radial_probes(m: usize) -> Vec<Vec<f64>> {
    [(0.5, 0.3, 1.0), (1.0, -1.0, 0.7), (2.0, 2.5, 2.0)]
        .iter()
        .map(|&(t, last, polar)| if m == 2 { vec![t, last] } else { vec![t, polar, last] })
        .collect()
}

pub fn lifted_cmc(m: usize, warping: Warping<f64>, density: Density<f64>, c: f64) -> GraphSubmanifold<f64> {
    let rs = RadialSpace::new(m, warping, density, 20.0).unwrap();
    let profile = rs.cmc_profile(c, 0.0, &uniform_grid(0.0, 3.0, 31)).unwrap();
    let (ws, f) = rs.lift_to_graph(&profile).unwrap();
    GraphSubmanifold::new(ws, f, FdConfig::default()).unwrap()
}

pub fn cmc_cases() -> Vec<Case> {
    vec![
        Case {
            name: "cmc hyperbolic m=2 c=0.5",
            graph: lifted_cmc(2, Warping::Hyperbolic, Density::Zero, 0.5),
            probes: radial_probes(2),
            kind: Kind::Cmc { norm_h: 0.25 },
        },
        Case {
            name: "cmc hyperbolic m=3 c=1",
            graph: lifted_cmc(3, Warping::Hyperbolic, Density::Zero, 1.0),
            probes: radial_probes(3),
            kind: Kind::Cmc { norm_h: 1.0 / 3.0 },
        },
        Case {
            name: "cmc hyperbolic log-cosh m=2 c=1",
            graph: lifted_cmc(2, Warping::Hyperbolic, Density::LogCosh, 1.0),
            probes: radial_probes(2),
            kind: Kind::Cmc { norm_h: 0.5 },
        },
    ]
}

pub fn totally_geodesic_cases() -> Vec<Case> {
    let g = metrics::hyperbolic_polar(4.0);
    let chart = g.chart().clone();
    let psi = ScalarField::new(chart.clone(), |x: &[f64]| x[0] * x[0] / 2.0);
    let ws = WarpedSpace::new(g, MetricField::euclidean(cube(1, 5.0)), psi).unwrap();
    let hyp = GraphSubmanifold::new(
        ws,
        GraphMap::constant(chart, cube(1, 5.0), vec![0.3]),
        FdConfig::default(),
    )
    .unwrap();

    let base = MetricField::euclidean(cube(2, 5.0));
    let psi = ScalarField::new(cube(2, 5.0), |x: &[f64]| 0.4 * x[0] - 0.2 * x[1]);
    let ws = WarpedSpace::new(base, metrics::round_sphere(2), psi).unwrap();
    let sphere_fiber = GraphSubmanifold::new(
        ws,
        GraphMap::constant(cube(2, 5.0), cube(2, 5.0), vec![1.2, 0.4]),
        FdConfig::default(),
    )
    .unwrap();
    vec![
        Case {
            name: "constant over hyperbolic plane",
            graph: hyp,
            probes: vec![vec![1.0, 0.5], vec![2.0, -1.5]],
            kind: Kind::TotallyGeodesic,
        },
        Case {
            name: "constant into round sphere fiber",
            graph: sphere_fiber,
            probes: vec![vec![0.2, -0.4], vec![1.0, 1.0]],
            kind: Kind::TotallyGeodesic,
        },
    ]
}

pub fn minimal_cases() -> Vec<Case> {
    let a = Mat::from_rows(&[vec![1.0, -0.5], vec![0.3, 2.0], vec![0.0, 1.0]]);
    let ws = WarpedSpace::product(
        MetricField::euclidean(cube(2, 5.0)),
        MetricField::euclidean(cube(3, 5.0)),
    );
    let plane = GraphSubmanifold::new(
        ws,
        GraphMap::affine(cube(2, 5.0), cube(3, 5.0), a, vec![0.1, 0.0, -0.2]),
        FdConfig::default(),
    )
    .unwrap();
    vec![Case {
        name: "affine plane in flat product",
        graph: plane,
        probes: vec![vec![0.2, -0.4], vec![-1.0, 0.5]],
        kind: Kind::Minimal,
    }]
}

pub fn generic_cases() -> Vec<Case> {
    let base = MetricField::euclidean(cube(2, 5.0));
    let psi = ScalarField::new(cube(2, 5.0), |x: &[f64]| 0.3 * x[0] + 0.1 * x[1] * x[1]);
    let ws = WarpedSpace::new(base, MetricField::euclidean(cube(1, 50.0)), psi).unwrap();
    let tilted = GraphSubmanifold::new(
        ws,
        GraphMap::new(cube(2, 5.0), cube(1, 50.0), |x: &[f64]| {
            vec![x[0] * x[0] / 2.0 + 0.5 * x[1]]
        }),
        FdConfig::default(),
    )
    .unwrap();
    vec![Case {
        name: "parabolic graph over weighted plane",
        graph: tilted,
        probes: vec![vec![0.3, 0.1], vec![-0.5, 0.8]],
        kind: Kind::Generic,
    }]
}

pub fn all_cases() -> Vec<Case> {
    let mut v = cmc_cases();
    v.extend(totally_geodesic_cases());
    v.extend(minimal_cases());
    v.extend(generic_cases());
    v
}

/// A random warped product, affine graph and interior point.
pub fn random_graph<R: rand::Rng>(rng: &mut R) -> (GraphSubmanifold<f64>, Vec<f64>) {
    let m = rng.gen_range(1..=3);
    let (base, x): (MetricField<f64>, Vec<f64>) = match rng.gen_range(0..3) {
        0 => (
            metrics::euclidean(m, 5.0),
            (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        ),
        1 if m == 2 => (
            metrics::hyperbolic_polar(4.0),
            vec![rng.gen_range(0.3..3.0), rng.gen_range(-3.0..3.0)],
        ),
        _ => {
            let b = Mat::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
            let spd = b.matmul(&b.transpose()).add(&Mat::identity(m));
            (
                MetricField::new(cube(m, 5.0), move |_| spd.clone()),
                (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            )
        }
    };
    let chart = base.chart().clone();
    let lin: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let quad = rng.gen_range(-0.2..0.2);
    let psi = ScalarField::new(chart.clone(), move |p: &[f64]| {
        lin.iter().zip(p).map(|(a, x)| a * x).sum::<f64>() + quad * p.iter().map(|x| x * x).sum::<f64>()
    });
    let n = rng.gen_range(1..=3);
    let sphere = n == 2 && rng.gen_bool(0.5);
    let (fiber, offset) = if sphere {
        (metrics::round_sphere(2), vec![std::f64::consts::FRAC_PI_2, 0.0])
    } else if rng.gen_bool(0.5) {
        (
            metrics::scaled_euclidean(n, 100.0, rng.gen_range(0.5..2.0)),
            vec![0.0; n],
        )
    } else {
        (metrics::euclidean(n, 100.0), vec![0.0; n])
    };
    let spread = if sphere { 0.1 } else { 2.0 };
    let a = Mat::from_fn(n, m, |_, _| rng.gen_range(-spread..spread));
    let fiber_chart = fiber.chart().clone();
    // centre the image so that f(x) = offset
    let b: Vec<f64> = (0..n)
        .map(|i| offset[i] - (0..m).map(|j| a[(i, j)] * x[j]).sum::<f64>())
        .collect();
    let ws = WarpedSpace::new(base, fiber, psi).unwrap();
    let f = GraphMap::affine(chart, fiber_chart, a, b);
    (GraphSubmanifold::new(ws, f, FdConfig::default()).unwrap(), x)
}
