//! Graph submanifolds `x -> (x, f(x))` of a warped product: eigenframes of
//! the graph metric, mean curvature and the divergence identities it obeys.

mod frame;
mod submanifold;

pub use frame::{GraphPointFrame, RANK_THRESHOLD};
pub use submanifold::{CalibrationCheck, CurvatureBundle, GraphSubmanifold, HeinzCheck, MMinus, QPsiCheck};

#[cfg(test)]
mod tests;
