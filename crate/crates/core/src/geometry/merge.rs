//! Merging of edge-adjacent coplanar facets (triangles into quadrilaterals).

use std::collections::{BTreeMap, HashMap};

use super::facet::{Facet, COPLANAR_TOLERANCE};
use super::vector::Vec3;
use crate::error::{Error, Result};

/// Vertices closer than this (per coordinate) are welded together.
const WELD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Polygon {
    verts: Vec<usize>,
    one_sided: bool,
    facet: Facet,
}

struct Welded {
    points: Vec<Vec3>,
    polygons: Vec<Polygon>,
}

fn weld(facets: &[Facet]) -> Welded {
    let mut points = Vec::new();
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let polygons = facets
        .iter()
        .map(|f| {
            let verts = f
                .vertices
                .iter()
                .map(|v| {
                    let key = [v.x, v.y, v.z].map(|c| (c / WELD_TOLERANCE).round() as i64);
                    *index.entry(key).or_insert_with(|| {
                        points.push(*v);
                        points.len() - 1
                    })
                })
                .collect();
            Polygon { verts, one_sided: f.one_sided, facet: f.clone() }
        })
        .collect();
    Welded { points, polygons }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn edge_owners(polygons: &[Option<Polygon>]) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (pi, poly) in polygons.iter().enumerate() {
        let Some(poly) = poly else { continue };
        let n = poly.verts.len();
        for i in 0..n {
            owners
                .entry(edge_key(poly.verts[i], poly.verts[(i + 1) % n]))
                .or_default()
                .push(pi);
        }
    }
    owners
}

/// Rejects meshes where an edge is shared by more than two facets.
pub fn check_manifold(facets: &[Facet]) -> Result<()> {
    let welded = weld(facets);
    let polygons: Vec<Option<Polygon>> = welded.polygons.into_iter().map(Some).collect();
    for ((a, b), owners) in edge_owners(&polygons) {
        if owners.len() > 2 {
            return Err(Error::NonManifoldEdge {
                a: welded.points[a],
                b: welded.points[b],
                facets: owners.iter().map(|&i| facets[i].id).collect(),
            });
        }
    }
    Ok(())
}

/// Repeatedly merges pairs of facets that share an edge, are coplanar and
/// whose union is a convex polygon of at most four vertices.
///
/// Output facets are rotated to start at their lexicographically smallest
/// vertex and sorted by that vertex; ids are reassigned in that order.
pub fn merge_coplanar_facets(facets: &[Facet]) -> Result<Vec<Facet>> {
    check_manifold(facets)?;
    let Welded { points, polygons } = weld(facets);
    let mut polygons: Vec<Option<Polygon>> = polygons.into_iter().map(Some).collect();

    loop {
        let owners = edge_owners(&polygons);
        let mut touched = vec![false; polygons.len()];
        let mut merged_any = false;
        for (&(p, q), owner) in &owners {
            let &[a, b] = owner.as_slice() else { continue };
            if a == b || touched[a] || touched[b] {
                continue;
            }
            let (Some(pa), Some(pb)) = (&polygons[a], &polygons[b]) else { continue };
            if let Some(merged) = try_merge(&points, pa, pb, p, q)? {
                polygons[a] = Some(merged);
                polygons[b] = None;
                touched[a] = true;
                touched[b] = true;
                merged_any = true;
            }
        }
        if !merged_any {
            break;
        }
    }

    let mut out: Vec<Vec<Vec3>> = Vec::new();
    let mut sided: Vec<bool> = Vec::new();
    for poly in polygons.into_iter().flatten() {
        let mut verts: Vec<Vec3> = poly.verts.iter().map(|&i| points[i]).collect();
        let first = (0..verts.len())
            .min_by(|&i, &j| verts[i].lex_cmp(&verts[j]))
            .unwrap_or(0);
        verts.rotate_left(first);
        out.push(verts);
        sided.push(poly.one_sided);
    }
    let mut order: Vec<usize> = (0..out.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&out[i], &out[j]);
        a.iter()
            .zip(b.iter())
            .map(|(u, v)| u.lex_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(a.len().cmp(&b.len()))
    });
    order
        .into_iter()
        .enumerate()
        .map(|(id, i)| Facet::new(id, out[i].clone(), sided[i]))
        .collect()
}

fn try_merge(points: &[Vec3], a: &Polygon, b: &Polygon, p: usize, q: usize) -> Result<Option<Polygon>> {
    if a.one_sided != b.one_sided {
        return Ok(None);
    }
    let plane = a.facet.plane;
    if plane.normal.dot(b.facet.plane.normal) < 1.0 - 1e-9 {
        return Ok(None);
    }
    if b.verts.iter().any(|&v| plane.signed_distance(points[v]).abs() > COPLANAR_TOLERANCE) {
        return Ok(None);
    }

    // Orient the shared edge as it runs in `a`: a[i] -> a[i + 1].
    let n = a.verts.len();
    let m = b.verts.len();
    let Some(i) = (0..n).find(|&i| edge_key(a.verts[i], a.verts[(i + 1) % n]) == edge_key(p, q)) else {
        return Ok(None);
    };
    let (from, to) = (a.verts[i], a.verts[(i + 1) % n]);
    // With consistent winding `b` runs the edge backwards: b[j] = to, b[j + 1] = from.
    let Some(j) = (0..m).find(|&j| b.verts[j] == to && b.verts[(j + 1) % m] == from) else {
        return Ok(None);
    };

    let mut loop_: Vec<usize> = (1..=n).map(|k| a.verts[(i + k) % n]).collect();
    loop_.extend((2..m).map(|k| b.verts[(j + k) % m]));
    remove_collinear(points, &mut loop_);
    if loop_.len() > 4 || loop_.len() < 3 {
        return Ok(None);
    }
    let verts: Vec<Vec3> = loop_.iter().map(|&v| points[v]).collect();
    match Facet::new(a.facet.id, verts, a.one_sided) {
        Ok(facet) => Ok(Some(Polygon { verts: loop_, one_sided: a.one_sided, facet })),
        Err(Error::InvalidFacet { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn remove_collinear(points: &[Vec3], verts: &mut Vec<usize>) {
    loop {
        let n = verts.len();
        if n <= 3 {
            return;
        }
        let found = (0..n).find(|&k| {
            let u = points[verts[(k + n - 1) % n]];
            let v = points[verts[k]];
            let w = points[verts[(k + 1) % n]];
            let (e1, e2) = (v - u, w - v);
            e1.cross(e2).norm() <= 1e-9 * e1.norm() * e2.norm() && e1.dot(e2) > 0.0
        });
        match found {
            Some(k) => {
                verts.remove(k);
            }
            None => return,
        }
    }
}
