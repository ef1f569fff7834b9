//! Riemannian calculus on coordinate charts.

mod chart;
mod fd;
mod field;
mod map;
pub mod metrics;
mod ops;

pub use chart::Chart;
pub use fd::FdConfig;
#[allow(unused_imports)]
pub(crate) use fd::{central_diff, differential, shifted};
pub use field::{MetricField, ScalarField, VectorField};
pub use map::GraphMap;
pub use ops::{
    bakry_emery_ricci, christoffel, density_divergence, differential_at, divergence, gradient, hessian_scalar,
    map_hessian, ricci, weighted_divergence, weighted_divergence_conjugated, Christoffel,
};
