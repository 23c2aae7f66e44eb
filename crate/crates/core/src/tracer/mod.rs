//! Exhaustive path-candidate enumeration and image-method path solving.

mod enumeration;
mod validity;

pub use enumeration::{order_count, CandidateEnumeration, PathCandidate, DEFAULT_CANDIDATE_BUDGET};
pub use validity::{validity_bits, validity_vector, ValidityVector};

use crate::geometry::{mirror_point, segment_occluded, Boundary, Scene, Vec3, EPSILON};

/// A solved specular path from TX through the reflection points to RX.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedPath {
    pub vertices: Vec<Vec3>,
    pub length: f64,
}

/// Solves `candidate` between `tx` and `rx` with the image method.
///
/// The transmitter is mirrored across each facet plane in order; reflection
/// points are then recovered backwards from the receiver. The path is
/// returned only if every reflection point lies strictly inside its facet,
/// both neighbours of each reflection lie on the same (reflective) side of
/// the facet, and no segment is blocked by a facet other than the ones at its
/// endpoints.
pub fn trace_candidate(tx: Vec3, rx: Vec3, candidate: &[usize], scene: &Scene) -> Option<TracedPath> {
    let k = candidate.len();
    let mut images = Vec::with_capacity(k + 1);
    images.push(tx);
    for &f in candidate {
        let last = *images.last().unwrap();
        images.push(mirror_point(last, &scene.facet(f).plane));
    }

    let mut points = vec![Vec3::ZERO; k + 2];
    points[0] = tx;
    points[k + 1] = rx;
    let mut current = rx;
    for i in (0..k).rev() {
        let facet = scene.facet(candidate[i]);
        let image = images[i + 1];
        let dc = facet.plane.signed_distance(current);
        let di = facet.plane.signed_distance(image);
        if dc.abs() <= EPSILON || di.abs() <= EPSILON || (dc > 0.0) == (di > 0.0) {
            return None;
        }
        let p = current + (image - current) * (dc / (dc - di));
        if !facet.contains(p, Boundary::Strict) {
            return None;
        }
        points[i + 1] = p;
        current = p;
    }

    for i in 1..=k {
        let facet = scene.facet(candidate[i - 1]);
        let before = facet.plane.signed_distance(points[i - 1]);
        let after = facet.plane.signed_distance(points[i + 1]);
        if before.abs() <= EPSILON || after.abs() <= EPSILON || (before > 0.0) != (after > 0.0) {
            return None;
        }
        if facet.one_sided && before < 0.0 {
            return None;
        }
    }

    let mut length = 0.0;
    let mut ignore = Vec::with_capacity(2);
    for s in 0..=k {
        ignore.clear();
        if s > 0 {
            ignore.push(candidate[s - 1]);
        }
        if s < k {
            ignore.push(candidate[s]);
        }
        let (a, b) = (points[s], points[s + 1]);
        if segment_occluded(a, b, scene, &ignore) {
            return None;
        }
        length += a.distance(b);
    }

    Some(TracedPath { vertices: points, length })
}
