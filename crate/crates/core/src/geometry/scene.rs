use super::accel::Bvh;
use super::facet::Facet;
use super::vector::{Aabb, Vec3};

/// An immutable set of facets with an acceleration index.
///
/// Facet ids are dense (`0..len()`) and equal to their position.
#[derive(Debug, Clone)]
pub struct Scene {
    facets: Vec<Facet>,
    accel: Bvh,
    bounds: Aabb,
}

impl Scene {
    /// Builds a scene, reassigning facet ids to their position in `facets`.
    pub fn new(facets: Vec<Facet>) -> Scene {
        let facets: Vec<Facet> = facets.iter().enumerate().map(|(i, f)| f.with_id(i)).collect();
        let accel = Bvh::build(&facets);
        let bounds = facets.iter().fold(Aabb::empty(), |b, f| b.join(f.bounds()));
        Scene { facets, accel, bounds }
    }

    pub fn empty() -> Scene {
        Scene::new(Vec::new())
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, id: usize) -> &Facet {
        &self.facets[id]
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn bounds(&self) -> Aabb {
        self.bounds
    }

    pub fn accel(&self) -> &Bvh {
        &self.accel
    }
}

/// Whether any facet outside `ignore` blocks the open segment `a`–`b`.
///
/// Hits closer than [`EPSILON`](super::EPSILON) to either endpoint do not count.
pub fn segment_occluded(a: Vec3, b: Vec3, scene: &Scene, ignore: &[usize]) -> bool {
    let length = a.distance(b);
    let Some(dir) = (b - a).normalized() else {
        return false;
    };
    scene.accel.any_on_segment(a, dir, length, |i| {
        !ignore.contains(&i) && scene.facets[i].blocks_segment(a, dir, length)
    })
}

/// Reference implementation of [`segment_occluded`] testing every facet.
pub fn segment_occluded_brute_force(a: Vec3, b: Vec3, scene: &Scene, ignore: &[usize]) -> bool {
    let length = a.distance(b);
    let Some(dir) = (b - a).normalized() else {
        return false;
    };
    scene
        .facets
        .iter()
        .any(|f| !ignore.contains(&f.id) && f.blocks_segment(a, dir, length))
}
