//! Builds the graph described by a scenario and evaluates every check.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use warpgraph::geometry::{metrics, Chart, FdConfig, GraphMap, MetricField};
use warpgraph::graph::GraphSubmanifold;
use warpgraph::linalg::Mat;
use warpgraph::radial::{uniform_grid, CmcProfile, RadialSpace, FIBER_HALF_WIDTH};
use warpgraph::spectral::{
    drift_eigenvalue, setti_margin, weighted_ball_measures, write_scan_csv, ScanRow, SettiStatus,
};
use warpgraph::warped::{omega_closedness_residual, omega_eval, slice_frame, WarpedSpace};

use crate::config::{GraphConfig, ScenarioConfig};
use crate::report::{CheckRecord, Provenance, ReportBundle};

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Overrides `probes.grid_size`.
    pub grid: Option<usize>,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub serial: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            grid: None,
            tol_scale: 1.0,
            serial: false,
        }
    }
}

pub struct Outcome {
    pub bundle: ReportBundle,
    pub profile_csv: Option<Vec<u8>>,
    pub scan_csv: Vec<u8>,
}

/// Shape of the graph, which decides which identities apply.
#[derive(Clone, Copy, PartialEq)]
enum Shape {
    Cmc {
        c: f64,
    },
    Constant,
    /// No parallel mean curvature in general.
    Affine,
}

pub fn config_hash(cfg: &ScenarioConfig) -> Result<String> {
    let bytes = serde_json::to_vec(cfg)?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Interior point at radius `r`: polar angles 1.2, last angle 0.4.
fn probe_point(m: usize, r: f64) -> Vec<f64> {
    let mut x = vec![r];
    x.extend((1..m).map(|a| if a + 1 < m { 1.2 } else { 0.4 }));
    x
}

fn fiber_metric(cfg: &ScenarioConfig) -> Result<MetricField<f64>> {
    let n = cfg.fiber.dim;
    Ok(match cfg.fiber.metric.as_str() {
        "round-sphere" => metrics::round_sphere(n),
        _ => MetricField::euclidean(Arc::new(Chart::cube("fiber", n, FIBER_HALF_WIDTH)?)),
    })
}

/// Default image point: the origin of a flat fiber, the centre of the sphere chart.
fn fiber_centre(cfg: &ScenarioConfig) -> Vec<f64> {
    let n = cfg.fiber.dim;
    if cfg.fiber.metric == "round-sphere" {
        (0..n)
            .map(|a| if a + 1 < n { std::f64::consts::FRAC_PI_2 } else { 0.0 })
            .collect()
    } else {
        vec![0.0; n]
    }
}

fn build_graph(
    cfg: &ScenarioConfig,
    rs: &RadialSpace<f64>,
    fd: FdConfig<f64>,
) -> Result<(GraphSubmanifold<f64>, Shape, Option<CmcProfile<f64>>)> {
    let m = cfg.space.m;
    match &cfg.graph {
        GraphConfig::CmcRadial { c, d } => {
            let grid = uniform_grid(0.0, cfg.space.t_max, cfg.probes.profile_points);
            let profile = rs.cmc_profile(*c, *d, &grid)?;
            let (ws, f) = rs.lift_to_graph(&profile)?;
            let gr = GraphSubmanifold::new(ws, f, fd)?;
            Ok((gr, Shape::Cmc { c: *c }, Some(profile)))
        }
        GraphConfig::Affine { matrix, offset } => {
            let base = rs.base_metric();
            let chart = base.chart().clone();
            let fiber = fiber_metric(cfg)?;
            let fiber_chart = fiber.chart().clone();
            let b = if offset.is_empty() {
                fiber_centre(cfg)
            } else {
                offset.clone()
            };
            let ws = WarpedSpace::new(base, fiber, rs.weight_field(chart.clone()))?;
            let f = GraphMap::affine(chart, fiber_chart, Mat::from_rows(matrix), b);
            Ok((GraphSubmanifold::new(ws, f, fd)?, Shape::Affine, None))
        }
        GraphConfig::Constant { value } => {
            let base = rs.base_metric();
            let chart = base.chart().clone();
            let fiber = fiber_metric(cfg)?;
            let fiber_chart = fiber.chart().clone();
            let v = if value.is_empty() {
                fiber_centre(cfg)
            } else {
                value.clone()
            };
            let ws = WarpedSpace::new(base, fiber, rs.weight_field(chart.clone()))?;
            debug_assert_eq!(ws.m(), m);
            let f = GraphMap::constant(chart, fiber_chart, v);
            Ok((GraphSubmanifold::new(ws, f, fd)?, Shape::Constant, None))
        }
    }
}

fn probe_records(gr: &GraphSubmanifold<f64>, shape: Shape, r: f64, tol: f64) -> Vec<CheckRecord> {
    let x = probe_point(gr.m(), r);
    let label = |what: &str| format!("probe r={r}: {what}");
    match probe_records_inner(gr, shape, &x, tol, &label) {
        Ok(v) => v,
        Err(e) => vec![CheckRecord::error(
            label("evaluation"),
            "curvature bundle at probe",
            format!("{e:#}"),
        )],
    }
}

fn probe_records_inner(
    gr: &GraphSubmanifold<f64>,
    shape: Shape,
    x: &[f64],
    tol: f64,
    label: &dyn Fn(&str) -> String,
) -> Result<Vec<CheckRecord>> {
    let b = gr.curvature_bundle(x)?;
    let m = b.m() as f64;
    let mut out = Vec::new();

    let eig = b.frame.eigen_relation_residuals().iter().fold(0.0f64, |a, &r| a.max(r));
    out.push(CheckRecord::at_most(
        label("eigenframe relations"),
        "max residual of the six eigenframe relations",
        eig,
        1e-8 * tol,
    ));
    out.push(CheckRecord::at_most(
        label("calibration angle"),
        "|cos theta sqrt(det g*) - 1|",
        b.calibration_angle_residual(),
        1e-10 * tol,
    ));
    out.push(CheckRecord::at_most(
        label("tangential leak"),
        "|tangential part of H|",
        b.tangential_leak(),
        1e-8 * tol,
    ));
    out.push(CheckRecord::at_least(
        label("Z1 bound"),
        "m |H| - |Z1| >= 0",
        m * b.norm_h - b.norm_z1(),
        -1e-12 * tol,
    ));

    let (h_zero, w_zero) = (b.norm_h <= 1e-8, b.norm_w_star() <= 1e-7);
    out.push(
        CheckRecord::at_most(
            label("minimality equivalence"),
            "|H| = 0 iff W* = 0",
            if h_zero == w_zero { 0.0 } else { 1.0 },
            0.0,
        )
        .with_note(format!("|H| = {:.3e}, |W*| = {:.3e}", b.norm_h, b.norm_w_star())),
    );

    let q = gr.q_psi_residuals(x)?;
    out.push(CheckRecord::at_most(
        label("Q_psi pairings"),
        "Q_psi(W*) = g(Z1, grad psi) = h(W1, df grad psi)",
        q.base_residual.max(q.fiber_residual),
        1e-6 * tol,
    ));
    out.push(CheckRecord::at_most(
        label("key pairing"),
        "|sum h(dGamma X*_i, D_{X*_i} H) + m |H|^2|",
        gr.key_pairing_residual(x)?,
        1e-3 * tol,
    ));
    let mm = gr.m_minus_indicator(x)?;
    out.push(
        CheckRecord::at_most(
            label("two angles"),
            "g(H_M, grad psi) + h(H_N, df grad psi) = 0",
            mm.two_angles_residual,
            1e-8 * tol,
        )
        .with_note(format!("sign of g(H_M, grad psi): {}", mm.sign)),
    );

    let p = gr.ambient_point(x);
    let ws = gr.space();
    out.push(CheckRecord::at_most(
        label("Omega closed"),
        "|d Omega|",
        omega_closedness_residual(ws, &p, gr.fd())?,
        1e-5 * tol,
    ));
    let frame = slice_frame(ws, &p)?;
    out.push(CheckRecord::at_most(
        label("Omega on slice"),
        "|Omega(slice frame) - 1|",
        (omega_eval(ws, &p, &frame) - 1.0).abs(),
        1e-10 * tol,
    ));

    if let Shape::Cmc { c } = shape {
        out.push(CheckRecord::within(
            label("|H|"),
            "|H| = |c| / m",
            b.norm_h,
            c.abs() / m,
            1e-4 * tol,
        ));
    }
    if shape != Shape::Affine {
        let div_tol = if shape == Shape::Constant { 1e-8 } else { 1e-4 };
        let heinz = gr.heinz_divergence_residual(x)?;
        out.push(CheckRecord::at_most(
            label("Heinz divergence"),
            "div Z1 + g(Z1, grad psi) = m^2 |H|^2",
            heinz.residual,
            div_tol * tol,
        ));
        let cal = gr.calibration_divergence_residual(x)?;
        out.push(CheckRecord::at_most(
            label("calibration divergence"),
            "div*(cos theta H_M) + g*(cos theta H_M, grad* psi) + m cos theta |H|^2 = 0",
            cal.residual,
            div_tol * tol,
        ));
        out.push(CheckRecord::at_most(
            label("calibration field"),
            "Z = cos theta H_M",
            cal.z_residual,
            1e-6 * tol,
        ));
    }
    Ok(out)
}

struct RadiusData {
    r: f64,
    v_psi: f64,
    a_psi: f64,
    phi: f64,
    lambda1: f64,
    estimate: f64,
    grid: usize,
}

fn radius_data(rs: &RadialSpace<f64>, r: f64, grid: usize) -> Result<RadiusData> {
    let (v_psi, a_psi) = weighted_ball_measures(rs, r)?;
    let sol = drift_eigenvalue(rs, r, grid)?;
    Ok(RadiusData {
        r,
        v_psi,
        a_psi,
        phi: rs.phi_at(r)?,
        lambda1: sol.lambda1,
        estimate: sol.discretization_estimate,
        grid: sol.grid_size,
    })
}

fn map_maybe_parallel<I: Sync, O: Send>(items: &[I], serial: bool, f: impl Fn(&I) -> O + Sync + Send) -> Vec<O> {
    if serial {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

pub fn run(cfg: &ScenarioConfig, opts: RunOptions) -> Result<Outcome> {
    let tol = opts.tol_scale;
    let grid = opts.grid.unwrap_or(cfg.probes.grid_size);
    let defaults = FdConfig::<f64>::default();
    let fd = FdConfig {
        first: cfg.probes.fd_first.unwrap_or(defaults.first),
        second: cfg.probes.fd_second.unwrap_or(defaults.second),
    };
    let rs = cfg.radial_space()?;
    let (gr, shape, profile) = build_graph(cfg, &rs, fd).context("building the graph")?;
    let c_abs = match shape {
        Shape::Cmc { c } => c.abs(),
        _ => 0.0,
    };

    let mut records: Vec<CheckRecord> =
        map_maybe_parallel(&cfg.probes.radii, opts.serial, |&r| probe_records(&gr, shape, r, tol))
            .into_iter()
            .flatten()
            .collect();

    // Cheeger constant and ball quotients
    let c0 = rs.c_zero()?;
    let mut c0_record = CheckRecord::at_least("C0", "C0 = inf 1/phi > |c|", c0.value, c_abs)
        .with_note(format!("argmin t = {:.6}", c0.argmin));
    if c_abs > 0.0 && c0.value <= c_abs {
        c0_record.status = crate::report::Status::Fail;
    }
    if c0.boundary {
        c0_record = c0_record.flagged(format!(
            "infimum attained at t_max = {}; the bound holds on [0, t_max] only",
            cfg.space.t_max
        ));
    }
    records.push(c0_record);

    let data: Vec<Result<RadiusData>> =
        map_maybe_parallel(&cfg.probes.radii, opts.serial, |&r| radius_data(&rs, r, grid));
    let mut rows = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (r, d) in cfg.probes.radii.iter().zip(data) {
        let label = |what: &str| format!("radius r={r}: {what}");
        let d = match d {
            Ok(d) => d,
            Err(e) => {
                records.push(CheckRecord::error(
                    label("evaluation"),
                    "ball measures and spectrum",
                    format!("{e:#}"),
                ));
                continue;
            }
        };
        let quotient = d.a_psi / d.v_psi;
        records.push(CheckRecord::at_least(
            label("ball quotient"),
            "A_psi / V_psi >= C0",
            quotient,
            c0.value * (1.0 - 1e-9 * tol),
        ));
        records.push(CheckRecord::within(
            label("quotient times phi"),
            "(A_psi / V_psi) phi(r) = 1",
            quotient * d.phi,
            1.0,
            1e-9 * tol,
        ));
        if c_abs > 0.0 {
            records.push(CheckRecord::at_least(
                label("Heinz margin"),
                "A_psi / V_psi - |c| > 0",
                quotient - c_abs,
                0.0,
            ));
        }
        let cheeger_margin = d.lambda1 - c0.value * c0.value / 4.0;
        records.push(
            CheckRecord::at_least(
                label("Cheeger inequality"),
                "lambda1 - C0^2 / 4 >= 0",
                cheeger_margin,
                -1e-6 * tol,
            )
            .with_note(format!(
                "lambda1 = {:.8}, discretization estimate {:.2e} at N = {}",
                d.lambda1, d.estimate, d.grid
            )),
        );
        if let Some((pr, pl)) = prev {
            if pr < d.r {
                records.push(CheckRecord::at_most(
                    label("lambda1 monotone"),
                    "lambda1(r) - lambda1(r_prev) <= 0 for r > r_prev",
                    d.lambda1 - pl,
                    1e-9 * tol * pl.abs().max(1.0),
                ));
            }
        }
        prev = Some((d.r, d.lambda1));
        rows.push(ScanRow {
            r: d.r,
            v_psi: d.v_psi,
            a_psi: d.a_psi,
            quotient,
            lambda1: d.lambda1,
            cheeger_margin,
            heinz_margin: quotient - c_abs,
        });
    }

    if let Some(cmp) = cfg.comparison {
        let reports: Vec<_> = map_maybe_parallel(&cfg.probes.radii, opts.serial, |&r| {
            setti_margin(&rs, r, cmp.alpha, cmp.delta, grid)
        });
        for (r, rep) in cfg.probes.radii.iter().zip(reports) {
            let name = format!("radius r={r}: space-form comparison");
            let identity = "lambda1(model ball) - lambda1(B_r) >= 0";
            records.push(match rep {
                Err(e) => CheckRecord::error(name, identity, format!("{e:#}")),
                Ok(rep) => {
                    let rec = CheckRecord::at_least(name, identity, rep.margin, -1e-6 * tol);
                    let base = format!(
                        "model lambda1 {:.8}, lambda1 {:.8}, kappa {}",
                        rep.model_lambda, rep.lambda, rep.kappa
                    );
                    match rep.status {
                        SettiStatus::Certified => rec.with_note(base),
                        other => {
                            let mut rec = rec.with_note(format!("hypotheses not met: {other:?}; {base}"));
                            rec.status = crate::report::Status::Fail;
                            rec
                        }
                    }
                }
            });
        }
    }

    if shape != Shape::Affine {
        if let Some(p) = &profile {
            let (worst, _) = rs.xi_ode_residual(p);
            records.push(CheckRecord::at_most(
                "profile xi residual",
                "max |xi' + (log X)' xi - c| on the profile grid",
                worst,
                1e-5 * tol,
            ));
        }
    }

    let mut scan_csv = Vec::new();
    write_scan_csv(&rows, &mut scan_csv)?;
    let profile_csv = match &profile {
        Some(p) => {
            let mut buf = Vec::new();
            rs.write_profile_csv(p, &mut buf)?;
            Some(buf)
        }
        None => None,
    };

    let provenance = Provenance {
        config_hash: config_hash(cfg)?,
        tolerance_scale: tol,
        grid_size: grid,
        fd_first: fd.first,
        fd_second: fd.second,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    Ok(Outcome {
        bundle: ReportBundle::new(cfg.name.clone(), records, provenance),
        profile_csv,
        scan_csv,
    })
}
