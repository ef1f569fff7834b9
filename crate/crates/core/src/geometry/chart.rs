use crate::error::{Error, GeoResult};
use crate::scalar::Real;

/// An axis-aligned coordinate box hosting local coordinates.
///
/// `exclusion` adds a per-axis margin on top of whatever a differential
/// operator needs, used to keep probes away from coordinate singularities
/// (polar origin, sphere poles).
#[derive(Clone, Debug, PartialEq)]
pub struct Chart<T> {
    label: String,
    lower: Vec<T>,
    upper: Vec<T>,
    exclusion: Vec<T>,
}

impl<T: Real> Chart<T> {
    pub fn new(label: impl Into<String>, lower: Vec<T>, upper: Vec<T>) -> GeoResult<Self> {
        let label = label.into();
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument(format!(
                "chart `{label}` needs matching non-empty bounds"
            )));
        }
        if let Some(axis) = lower.iter().zip(&upper).position(|(l, u)| !(u > l)) {
            return Err(Error::InvalidArgument(format!(
                "chart `{label}` has empty extent on axis {axis}"
            )));
        }
        let exclusion = vec![T::zero(); lower.len()];
        Ok(Self {
            label,
            lower,
            upper,
            exclusion,
        })
    }

    /// The box `[-half_width, half_width]^dim`.
    pub fn cube(label: impl Into<String>, dim: usize, half_width: T) -> GeoResult<Self> {
        Self::new(label, vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn with_exclusion(mut self, exclusion: Vec<T>) -> Self {
        assert_eq!(exclusion.len(), self.dim());
        self.exclusion = exclusion;
        self
    }

    /// Cartesian product chart, axes of `self` first.
    pub fn product(&self, other: &Self) -> Self {
        let cat = |a: &[T], b: &[T]| a.iter().chain(b).copied().collect::<Vec<_>>();
        Self {
            label: format!("{}x{}", self.label, other.label),
            lower: cat(&self.lower, &other.lower),
            upper: cat(&self.upper, &other.upper),
            exclusion: cat(&self.exclusion, &other.exclusion),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    pub fn check_dim(&self, p: &[T]) -> GeoResult<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                chart: self.label.clone(),
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(())
    }

    /// Requires `p` to sit at least `required[i]` (plus the exclusion margin)
    /// inside the box on every axis.
    pub fn require_interior(&self, p: &[T], required: &[T]) -> GeoResult<()> {
        self.check_dim(p)?;
        for axis in 0..self.dim() {
            let margin = (p[axis] - self.lower[axis]).min(self.upper[axis] - p[axis]);
            let need = required[axis] + self.exclusion[axis];
            if !(margin >= need) {
                return Err(Error::BoundaryMargin {
                    chart: self.label.clone(),
                    axis,
                    margin: margin.as_f64(),
                    required: need.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Like [`Chart::require_interior`] but reported as a map image leaving
    /// the target chart.
    pub fn require_image(&self, q: &[T], required: &[T]) -> GeoResult<()> {
        self.require_interior(q, required).map_err(|e| match e {
            Error::BoundaryMargin { chart, axis, .. } => Error::TargetOutsideChart {
                chart,
                axis,
                value: q[axis].as_f64(),
            },
            other => other,
        })
    }
}
