//! Numerical geometry of graph submanifolds in warped products
//! `M x_{e^psi} N` with metric `g + e^{2 psi} h`.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: charts, fields and finite-difference Riemannian calculus.
//! * [`warped`]: the warped metric, its connection and the volume form `Omega`
//!   of the base pulled back to the product.
//! * [`graph`]: eigenframes, mean curvature fields and the divergence
//!   identities of graph submanifolds.
//! * [`radial`]: rotationally symmetric bases with radial densities and the
//!   constant-mean-curvature profiles built over them.
//! * [`spectral`]: weighted ball measures, Cheeger quotients and the first
//!   Dirichlet eigenvalue of the drift Laplacian.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`, which is what the documented tolerances
//! assume.

// NaN-rejecting guards are written as negated comparisons, tabulated
// quadrature nodes keep their published digits, and index loops mirror the
// tensor formulas.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod error;
pub mod geometry;
pub mod graph;
pub mod linalg;
pub mod quadrature;
pub mod radial;
pub mod scalar;
pub mod spectral;
pub mod tridiag;
pub mod warped;

pub use error::{Error, GeoResult};
pub use scalar::Real;

pub type Chart64 = geometry::Chart<f64>;
pub type MetricField64 = geometry::MetricField<f64>;
pub type ScalarField64 = geometry::ScalarField<f64>;
pub type VectorField64 = geometry::VectorField<f64>;
pub type GraphMap64 = geometry::GraphMap<f64>;
pub type FdConfig64 = geometry::FdConfig<f64>;
pub type Mat64 = linalg::Mat<f64>;
pub type WarpedSpace64 = warped::WarpedSpace<f64>;
pub type RadialSpace64 = radial::RadialSpace<f64>;
pub type CmcProfile64 = radial::CmcProfile<f64>;
pub type CurvatureBundle64 = graph::CurvatureBundle<f64>;
pub type SpectralResult64 = spectral::SpectralResult<f64>;

pub type Chart32 = geometry::Chart<f32>;
pub type MetricField32 = geometry::MetricField<f32>;
pub type RadialSpace32 = radial::RadialSpace<f32>;
