//! Bounding volume hierarchy over facet bounding boxes.
//!
//! Queries are conservative: every facet whose padded box overlaps the query
//! segment is reported, and the exact facet test decides.

use super::facet::{Facet, EPSILON};
use super::vector::{Aabb, Vec3};

const LEAF_SIZE: usize = 4;
const BOX_PADDING: f64 = 10.0 * EPSILON;

#[derive(Debug, Clone)]
enum Node {
    Leaf { bounds: Aabb, start: usize, count: usize },
    Inner { bounds: Aabb, left: usize, right: usize },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Bvh {
    nodes: Vec<Node>,
    indices: Vec<usize>,
}

impl Bvh {
    pub fn build(facets: &[Facet]) -> Bvh {
        let mut bvh = Bvh { nodes: Vec::new(), indices: (0..facets.len()).collect() };
        if facets.is_empty() {
            return bvh;
        }
        let boxes: Vec<Aabb> = facets.iter().map(|f| f.bounds().padded(BOX_PADDING)).collect();
        let centers: Vec<Vec3> = boxes.iter().map(Aabb::center).collect();
        bvh.build_node(&boxes, &centers, 0, facets.len());
        bvh
    }

    fn build_node(&mut self, boxes: &[Aabb], centers: &[Vec3], start: usize, end: usize) -> usize {
        let slice = &mut self.indices[start..end];
        let bounds = slice.iter().fold(Aabb::empty(), |b, &i| b.join(boxes[i]));
        let node_index = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { bounds, start, count: end - start });
            return node_index;
        }

        let centroid_bounds = slice.iter().fold(Aabb::empty(), |b, &i| b.grow(centers[i]));
        let axis = centroid_bounds.largest_axis();
        // Stable sort keeps the tree (and thus traversal order) deterministic.
        slice.sort_by(|&a, &b| centers[a][axis].total_cmp(&centers[b][axis]).then(a.cmp(&b)));
        let mid = start + (end - start) / 2;

        self.nodes.push(Node::Inner { bounds, left: 0, right: 0 });
        let left = self.build_node(boxes, centers, start, mid);
        let right = self.build_node(boxes, centers, mid, end);
        self.nodes[node_index] = Node::Inner { bounds, left, right };
        node_index
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Calls `visit` with every facet index whose box overlaps the segment
    /// `origin + t * dir`, `t` in `[0, length]`. Stops early and returns
    /// `true` as soon as `visit` does.
    pub fn any_on_segment(
        &self,
        origin: Vec3,
        dir: Vec3,
        length: f64,
        mut visit: impl FnMut(usize) -> bool,
    ) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let inv = Vec3::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !node.bounds().overlaps_segment(origin, dir, inv, 0.0, length) {
                continue;
            }
            match *node {
                Node::Leaf { start, count, .. } => {
                    if self.indices[start..start + count].iter().any(|&i| visit(i)) {
                        return true;
                    }
                }
                Node::Inner { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        false
    }

    /// All candidate facet indices for the segment `a`–`b`, sorted.
    pub fn segment_candidates(&self, a: Vec3, b: Vec3) -> Vec<usize> {
        let length = a.distance(b);
        let Some(dir) = (b - a).normalized() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        self.any_on_segment(a, dir, length, |i| {
            out.push(i);
            false
        });
        out.sort_unstable();
        out
    }
}
