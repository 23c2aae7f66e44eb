//! Independent oracles shared by the integration and acceptance tests. None
//! of these call into the tracer, the distance transform or the enumerator.

#![allow(dead_code)]

use mlm::cells::{CellId, LabelGrid};
use mlm::geometry::{Facet, Vec3};
use rand::Rng;

/// A rectangle `center ± half_a·axis_a ± half_b·axis_b`.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub center: Vec3,
    pub axis_a: Vec3,
    pub axis_b: Vec3,
    pub half_a: f64,
    pub half_b: f64,
}

impl Rect {
    pub fn normal(&self) -> Vec3 {
        self.axis_a.cross(self.axis_b)
    }

    pub fn corners(&self) -> Vec<Vec3> {
        let (a, b) = (self.axis_a * self.half_a, self.axis_b * self.half_b);
        let c = self.center;
        vec![c - a - b, c + a - b, c + a + b, c - a + b]
    }

    pub fn facet(&self, id: usize, one_sided: bool) -> Facet {
        Facet::new(id, self.corners(), one_sided).unwrap()
    }

    pub fn at(&self, u: f64, v: f64) -> Vec3 {
        self.center + self.axis_a * (self.half_a * (2.0 * u - 1.0)) + self.axis_b * (self.half_b * (2.0 * v - 1.0))
    }
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_rect(rng: &mut impl Rng, center_range: f64, half: std::ops::Range<f64>) -> Rect {
    let normal = random_unit(rng);
    let helper = if normal.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let axis_a = normal.cross(helper).normalized().unwrap();
    let axis_b = normal.cross(axis_a);
    let c = center_range;
    Rect {
        center: Vec3::new(rng.gen_range(-c..c), rng.gen_range(-c..c), rng.gen_range(-c..c)),
        axis_a,
        axis_b,
        half_a: rng.gen_range(half.clone()),
        half_b: rng.gen_range(half),
    }
}

/// Shortest `tx -> p -> rx` over an `n × n` lattice of points `p` on the
/// rectangle, with the lattice index of the minimizer.
pub fn fermat_minimum(tx: Vec3, rx: Vec3, rect: &Rect, n: usize) -> (f64, (usize, usize)) {
    let mut best = (f64::INFINITY, (0, 0));
    for i in 0..n {
        for j in 0..n {
            let p = rect.at((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            let len = tx.distance(p) + p.distance(rx);
            if len < best.0 {
                best = (len, (i, j));
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
    /// Too close to an edge or plane to call.
    Ambiguous,
}

/// Facet data in plain form: unit normal from the first corner and the
/// polygon in local 2-D coordinates.
struct Flat {
    origin: Vec3,
    normal: Vec3,
    u: Vec3,
    v: Vec3,
    poly: Vec<(f64, f64)>,
    one_sided: bool,
}

impl Flat {
    fn of(f: &Facet) -> Flat {
        let p = &f.vertices;
        let normal = (p[1] - p[0]).cross(p[2] - p[1]).normalized().unwrap();
        let u = (p[1] - p[0]).normalized().unwrap();
        let v = normal.cross(u);
        let poly = p.iter().map(|q| ((*q - p[0]).dot(u), (*q - p[0]).dot(v))).collect();
        Flat { origin: p[0], normal, u, v, poly, one_sided: f.one_sided }
    }

    fn height(&self, q: Vec3) -> f64 {
        (q - self.origin).dot(self.normal)
    }

    /// Even-odd containment of the projection of `q`, and its distance to
    /// the nearest polygon edge.
    fn locate(&self, q: Vec3) -> (bool, f64) {
        let (x, y) = ((q - self.origin).dot(self.u), (q - self.origin).dot(self.v));
        let mut inside = false;
        let mut edge = f64::INFINITY;
        let n = self.poly.len();
        for k in 0..n {
            let (ax, ay) = self.poly[k];
            let (bx, by) = self.poly[(k + 1) % n];
            if (ay > y) != (by > y) && x < ax + (y - ay) * (bx - ax) / (by - ay) {
                inside = !inside;
            }
            let (ex, ey) = (bx - ax, by - ay);
            let t = (((x - ax) * ex + (y - ay) * ey) / (ex * ex + ey * ey)).clamp(0.0, 1.0);
            edge = edge.min(((x - ax - t * ex).powi(2) + (y - ay - t * ey).powi(2)).sqrt());
        }
        (inside, edge)
    }
}

const MARGIN: f64 = 1e-4;
const SEGMENT_SAMPLES: usize = 4000;

/// Validity of one candidate path, decided without the crate's tracer: the
/// reflection points come from explicit mirror images and each segment is
/// checked for occlusion by sampling it densely against every facet plane.
pub fn oracle_validity(tx: Vec3, rx: Vec3, sequence: &[usize], facets: &[Facet]) -> Verdict {
    let flats: Vec<Flat> = facets.iter().map(Flat::of).collect();
    let mut images = vec![tx];
    for &f in sequence {
        let fl = &flats[f];
        let last = *images.last().unwrap();
        images.push(last - fl.normal * (2.0 * fl.height(last)));
    }

    let k = sequence.len();
    let mut points = vec![tx; k + 2];
    points[k + 1] = rx;
    for i in (0..k).rev() {
        let fl = &flats[sequence[i]];
        let (cur, img) = (points[i + 2], images[i + 1]);
        let (hc, hi) = (fl.height(cur), fl.height(img));
        if hc.abs() < MARGIN || hi.abs() < MARGIN {
            return Verdict::Ambiguous;
        }
        if hc.signum() == hi.signum() {
            return Verdict::Invalid;
        }
        let p = cur + (img - cur) * (hc / (hc - hi));
        let (inside, edge) = fl.locate(p);
        if edge < MARGIN {
            return Verdict::Ambiguous;
        }
        if !inside {
            return Verdict::Invalid;
        }
        points[i + 1] = p;
    }

    for i in 1..=k {
        let fl = &flats[sequence[i - 1]];
        let (before, after) = (fl.height(points[i - 1]), fl.height(points[i + 1]));
        if before.abs() < MARGIN || after.abs() < MARGIN {
            return Verdict::Ambiguous;
        }
        if before.signum() != after.signum() || (fl.one_sided && before < 0.0) {
            return Verdict::Invalid;
        }
    }

    for s in 0..=k {
        let (a, b) = (points[s], points[s + 1]);
        for (f, fl) in flats.iter().enumerate() {
            let at_start = s > 0 && sequence[s - 1] == f;
            let at_end = s < k && sequence[s] == f;
            if at_start || at_end {
                continue;
            }
            let mut prev = fl.height(a);
            for step in 1..=SEGMENT_SAMPLES {
                let t = step as f64 / SEGMENT_SAMPLES as f64;
                let h = fl.height(a + (b - a) * t);
                if prev == 0.0 || h == 0.0 || prev.signum() != h.signum() {
                    let t0 = (step - 1) as f64 / SEGMENT_SAMPLES as f64;
                    let tc = t0 + (t - t0) * prev / (prev - h);
                    let crossing = a + (b - a) * tc;
                    let (inside, edge) = fl.locate(crossing);
                    let near_end = crossing.distance(a).min(crossing.distance(b)) < MARGIN;
                    if edge < MARGIN || (near_end && inside) {
                        return Verdict::Ambiguous;
                    }
                    if inside {
                        return Verdict::Invalid;
                    }
                }
                prev = h;
            }
        }
    }
    Verdict::Valid
}

/// Every admissible sequence of at most `max_order` facet ids, found by
/// filtering the full product space, in canonical order.
pub fn brute_force_candidates(facets: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 1..=max_order {
        let total = facets.pow(k as u32);
        for code in 0..total {
            let mut seq = Vec::with_capacity(k);
            let mut c = code;
            for _ in 0..k {
                seq.push(c % facets);
                c /= facets;
            }
            seq.reverse();
            if seq.windows(2).all(|w| w[0] != w[1]) {
                out.push(seq);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `d(x)` by comparing every pair of samples.
pub fn brute_force_distance(grid: &LabelGrid) -> Vec<Option<f64>> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = vec![None; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let here = grid.get(i, j);
            let mut best = f64::INFINITY;
            for q in 0..ny {
                for p in 0..nx {
                    if grid.get(p, q) != here {
                        let x = (p as i64 - i as i64) as f64 * grid.pitch_x;
                        let y = (q as i64 - j as i64) as f64 * grid.pitch_y;
                        best = best.min(x * x + y * y);
                    }
                }
            }
            if best.is_finite() {
                out[j * nx + i] = Some(best.sqrt());
            }
        }
    }
    out
}

pub fn label(n: u8) -> CellId {
    CellId::from_parts([n; 32], false)
}

/// A random label grid painted with overlapping rectangles, so labels often
/// split into several regions.
pub fn random_label_grid(rng: &mut impl Rng, max_side: usize) -> LabelGrid {
    let nx = rng.gen_range(1..=max_side);
    let ny = rng.gen_range(1..=max_side);
    let labels = rng.gen_range(1..=6u8);
    let mut cells = vec![0u8; nx * ny];
    for _ in 0..rng.gen_range(0..12) {
        let (x0, y0) = (rng.gen_range(0..nx), rng.gen_range(0..ny));
        let (x1, y1) = (rng.gen_range(x0..nx), rng.gen_range(y0..ny));
        let l = rng.gen_range(0..labels);
        for j in y0..=y1 {
            for i in x0..=x1 {
                cells[j * nx + i] = l;
            }
        }
    }
    let px = rng.gen_range(0.05..3.0);
    let py = if rng.gen_bool(0.3) { px } else { rng.gen_range(0.05..3.0) };
    LabelGrid::new(nx, ny, px, py, Vec3::ZERO, cells.into_iter().map(label).collect())
}
