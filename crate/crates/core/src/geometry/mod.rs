//! Vector, plane and facet primitives, occlusion queries and coplanar facet
//! merging.

mod accel;
mod facet;
mod merge;
mod scene;
mod vector;

pub use accel::Bvh;
pub use facet::{
    mirror_point, ray_facet_intersection, Boundary, Facet, Hit, Plane, COPLANAR_TOLERANCE, EDGE_TOLERANCE,
    EPSILON, MIN_FACET_AREA,
};
pub use merge::{check_manifold, merge_coplanar_facets};
pub use scene::{segment_occluded, segment_occluded_brute_force, Scene};
pub use vector::{Aabb, Vec3};
