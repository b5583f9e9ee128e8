//! Polytope machinery: convex projection, 2D/3D hulls, enclosing balls, and
//! facet-offset erosion.

pub mod enclosing;
pub mod halfspace;
pub mod planar;
pub mod projection;
pub mod spatial;

pub use enclosing::{min_enclosing_ball, EnclosingBall};
pub use halfspace::erode_polytope;
pub use planar::{convex_hull_2d, polygon_area, polygon_perimeter};
pub use projection::{project_onto_hull, HullProjection, HullSolver};
pub use spatial::Hull3;
