//! Conformally flat model charts and constant-curvature ambient spaces.

mod chart;
mod spaceform;

pub use chart::{Chart, ChartDescriptor, ChartKind, Tensor3, SAFE_MARGIN};
pub use spaceform::{spaceform_curvature, AmbientModel, AmbientSpaceform};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
