//! Planar primitives: points, lines, circles, generalized circles and conics,
//! together with inversion, pole/polar duality and conic fitting.

mod circle;
mod conic;
mod line;
mod point;
mod polygon;

pub use circle::{invert_gcircle, invert_gcircle_with, invert_point, polar_line, pole_point, Circle, GCircle};
pub use conic::{
    conic_from_points, conic_from_points_with, conic_from_tangent_lines, Conic, ConicFit, ConicKind, FocalData,
    PrincipalForm,
};
pub use line::Line;
pub use point::Point;
pub use polygon::{point_in_polygon, Polygon};
