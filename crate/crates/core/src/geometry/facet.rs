use super::vector::{Aabb, Vec3};
use crate::error::{Error, Result};

/// Minimum hit distance along a ray and the clearance kept at both ends of an
/// occlusion segment, in meters.
pub const EPSILON: f64 = 1e-6;

/// Tolerance of the point-in-polygon edge test, in meters.
pub const EDGE_TOLERANCE: f64 = 1e-9;

/// Maximum distance of a facet vertex from the facet plane, in meters.
pub const COPLANAR_TOLERANCE: f64 = 1e-6;

/// Smallest accepted facet area, in square meters.
pub const MIN_FACET_AREA: f64 = 1e-9;

/// An oriented plane `{p : normal · p = offset}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    /// Builds a plane from a (not necessarily unit) normal and a point on it.
    pub fn from_point_normal(point: Vec3, normal: Vec3) -> Option<Plane> {
        let normal = normal.normalized()?;
        Some(Plane { normal, offset: normal.dot(point) })
    }

    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Reflects `p` across `plane` (image method).
pub fn mirror_point(p: Vec3, plane: &Plane) -> Vec3 {
    p - plane.normal * (2.0 * plane.signed_distance(p))
}

/// Which points on the polygon boundary count as inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Points within [`EDGE_TOLERANCE`] of an edge are inside.
    Inclusive,
    /// Points must be farther than [`EDGE_TOLERANCE`] from every edge.
    Strict,
}

/// A planar convex polygon with three or four vertices.
///
/// Vertices wind counter-clockwise when seen from the side the plane normal
/// points to.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub id: usize,
    pub vertices: Vec<Vec3>,
    pub plane: Plane,
    /// Only the front side (the side `plane.normal` points to) reflects.
    pub one_sided: bool,
    edge_normals: Vec<Vec3>,
    edge_offsets: Vec<f64>,
    bounds: Aabb,
    area: f64,
}

impl Facet {
    pub fn new(id: usize, vertices: Vec<Vec3>, one_sided: bool) -> Result<Facet> {
        let invalid = |reason: String| Error::InvalidFacet { facet: id, reason };
        if !(3..=4).contains(&vertices.len()) {
            return Err(invalid(format!(
                "expected 3 or 4 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite vertex {v}")));
        }

        let newell = newell_normal(&vertices);
        let area = 0.5 * newell.norm();
        if area <= MIN_FACET_AREA {
            return Err(invalid(format!("degenerate polygon (area {area:e} m²)")));
        }
        let normal = newell / newell.norm();
        let centroid = vertices.iter().fold(Vec3::ZERO, |acc, v| acc + *v) / vertices.len() as f64;
        let plane = Plane { normal, offset: normal.dot(centroid) };

        for v in &vertices {
            let d = plane.signed_distance(*v).abs();
            if d > COPLANAR_TOLERANCE {
                return Err(invalid(format!("vertex {v} is {d:e} m off the facet plane")));
            }
        }

        let n = vertices.len();
        let mut edge_normals = Vec::with_capacity(n);
        let mut edge_offsets = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = (b - a).cross(c - b).dot(normal);
            let scale = (b - a).norm() * (c - b).norm();
            if turn <= 1e-12 * scale {
                return Err(invalid(format!("polygon is not strictly convex at vertex {}", (i + 1) % n)));
            }
            let inward = normal
                .cross(b - a)
                .normalized()
                .ok_or_else(|| invalid(format!("zero-length edge {i}")))?;
            edge_normals.push(inward);
            edge_offsets.push(inward.dot(a));
        }

        let bounds = Aabb::from_points(&vertices);
        Ok(Facet { id, vertices, plane, one_sided, edge_normals, edge_offsets, bounds, area })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn bounds(&self) -> Aabb {
        self.bounds
    }

    /// Same polygon under a new id.
    pub fn with_id(&self, id: usize) -> Facet {
        Facet { id, ..self.clone() }
    }

    /// Point-in-polygon test for a point assumed to lie on the facet plane.
    pub fn contains(&self, p: Vec3, boundary: Boundary) -> bool {
        self.edge_normals.iter().zip(&self.edge_offsets).all(|(n, off)| {
            let d = n.dot(p) - off;
            match boundary {
                Boundary::Inclusive => d >= -EDGE_TOLERANCE,
                Boundary::Strict => d > EDGE_TOLERANCE,
            }
        })
    }

    /// Distance along `dir` from `origin` to the facet plane, if the ray is
    /// not parallel to it. May be negative.
    fn plane_hit(&self, origin: Vec3, dir: Vec3) -> Option<f64> {
        let denom = self.plane.normal.dot(dir);
        if denom.abs() < 1e-12 {
            return None;
        }
        Some((self.plane.offset - self.plane.normal.dot(origin)) / denom)
    }

    /// Whether the open segment `origin + t * dir`, `t` in `(EPSILON, length - EPSILON)`,
    /// crosses the facet (edges inclusive). `dir` must be unit length.
    pub fn blocks_segment(&self, origin: Vec3, dir: Vec3, length: f64) -> bool {
        match self.plane_hit(origin, dir) {
            Some(t) if t > EPSILON && t < length - EPSILON => {
                self.contains(origin + dir * t, Boundary::Inclusive)
            }
            _ => false,
        }
    }
}

/// Newell's method: twice the vector area of a planar polygon.
fn newell_normal(vertices: &[Vec3]) -> Vec3 {
    let n = vertices.len();
    let mut acc = Vec3::ZERO;
    for i in 0..n {
        acc += vertices[i].cross(vertices[(i + 1) % n]);
    }
    acc
}

/// A ray hit on a facet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub t: f64,
    pub point: Vec3,
}

/// Intersects the ray `origin + t * dir` with `facet`, returning the hit with
/// `t > EPSILON` inside the polygon (edges inclusive).
pub fn ray_facet_intersection(origin: Vec3, dir: Vec3, facet: &Facet) -> Option<Hit> {
    let t = facet.plane_hit(origin, dir)?;
    if t <= EPSILON {
        return None;
    }
    let point = origin + dir * t;
    facet.contains(point, Boundary::Inclusive).then_some(Hit { t, point })
}
