//! Cubic Bézier and bezigon primitives.

mod bezier;
mod bezigon;
mod intersect;
mod point;
pub mod quadrature;
pub mod shapes;

pub use bezier::{bernstein, bernstein_deriv, BezierSegment};
pub use bezigon::{Bezigon, Polyline, ARC_LENGTH_TOL};
pub use intersect::{IntersectionPair, INTERSECTION_TOL};
pub use point::Point;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("a bezigon needs at least 2 segments, got {0}")]
    TooFewSegments(usize),
    #[error("control point count {0} is not a multiple of 3")]
    PointCount(usize),
    #[error("segment {0} does not end where the next one starts")]
    Discontinuous(usize),
    #[error("non-finite control point")]
    NonFinite,
    #[error("parameter {t} outside [0, {n}]")]
    ParamOutOfRange { t: f64, n: usize },
}
