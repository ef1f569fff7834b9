use thiserror::Error;

/// Errors raised by the geometric, quadrature and spectral routines.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type used
/// for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "point too close to the boundary of chart `{chart}` on axis {axis}: margin {margin:e} < required {required:e}"
    )]
    BoundaryMargin {
        chart: String,
        axis: usize,
        margin: f64,
        required: f64,
    },
    #[error("point has dimension {got}, chart `{chart}` has dimension {expected}")]
    DimensionMismatch { chart: String, expected: usize, got: usize },
    #[error("image point leaves target chart `{chart}` on axis {axis} (coordinate {value})")]
    TargetOutsideChart { chart: String, axis: usize, value: f64 },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is singular")]
    Singular,
    #[error("symmetric eigensolver did not converge after {0} sweeps")]
    EigenNonConvergence(usize),
    #[error("frame is not orthonormal (deviation {0:e})")]
    FrameNotOrthonormal(f64),
    #[error("t = {t} lies outside [0, {t_max}]")]
    OutOfRange { t: f64, t_max: f64 },
    #[error("quadrature on [{a}, {b}] did not reach tolerance after {evaluations} evaluations")]
    Quadrature { a: f64, b: f64, evaluations: usize },
    #[error("|c| = {c} is not admissible: it must be below C0 = {c_zero}")]
    InadmissibleC { c: f64, c_zero: f64 },
    #[error("profile leaves (-1, 1): |phi_c({t})| = {value}")]
    ProfileOutOfRange { t: f64, value: f64 },
    #[error("invalid radial space: {0}")]
    InvalidSpace(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("spectral solver: {0}")]
    Spectral(String),
}

pub type GeoResult<V> = std::result::Result<V, Error>;
