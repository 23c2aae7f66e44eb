use serde::{Deserialize, Serialize};

use super::file::{Domain, SceneDocument, SceneMetadata};
use crate::error::{Error, Result};
use crate::geometry::{Facet, Scene, Vec3};

pub const HEIGHT_RANGE: (f64, f64) = (20.0, 50.0);
pub const DEFAULT_TX_ALTITUDE: f64 = 32.0;
pub const DEFAULT_RX_ALTITUDE: f64 = 1.5;

/// Street-canyon layout. The area is centered on the origin with the main
/// street running along +y through x = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanyonParams {
    /// Extent across (x) and along (y) the main street, in meters.
    pub area: [f64; 2],
    pub main_street_width: f64,
    pub cross_street_width: f64,
    /// Building footprint across (x) and along (y) the main street.
    pub building_footprint: [f64; 2],
    /// West side south to north, then east side south to north.
    pub building_heights: [f64; 6],
    pub ground: bool,
    pub one_sided_buildings: bool,
}

impl Default for CanyonParams {
    fn default() -> Self {
        CanyonParams {
            area: [120.0, 185.0],
            main_street_width: 20.0,
            cross_street_width: 15.0,
            building_footprint: [30.0, 30.0],
            building_heights: [25.0, 28.0, 30.0, 22.0, 26.0, 29.0],
            ground: true,
            one_sided_buildings: true,
        }
    }
}

impl CanyonParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let positive = [
            ("area width", self.area[0]),
            ("area length", self.area[1]),
            ("main street width", self.main_street_width),
            ("footprint width", self.building_footprint[0]),
            ("footprint length", self.building_footprint[1]),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.cross_street_width.is_finite() && self.cross_street_width >= 0.0) {
            return bad(format!("cross street width must be non-negative, got {}", self.cross_street_width));
        }
        for h in self.building_heights {
            if !(HEIGHT_RANGE.0..=HEIGHT_RANGE.1).contains(&h) {
                return bad(format!(
                    "building height {h} outside [{}, {}] m",
                    HEIGHT_RANGE.0, HEIGHT_RANGE.1
                ));
            }
        }
        let across = self.main_street_width + 2.0 * self.building_footprint[0];
        if across > self.area[0] {
            return bad(format!("layout is {across} m wide but the area only {} m", self.area[0]));
        }
        if self.row_length() > self.area[1] {
            return bad(format!(
                "layout is {} m long but the area only {} m",
                self.row_length(),
                self.area[1]
            ));
        }
        Ok(())
    }

    /// Length of one side's row of three buildings and two cross streets.
    pub fn row_length(&self) -> f64 {
        3.0 * self.building_footprint[1] + 2.0 * self.cross_street_width
    }

    pub fn domain(&self) -> Domain {
        Domain {
            x_min: -self.area[0] / 2.0,
            x_max: self.area[0] / 2.0,
            y_min: -self.area[1] / 2.0,
            y_max: self.area[1] / 2.0,
        }
    }

    fn side_spans(&self) -> [(f64, f64); 2] {
        let inner = self.main_street_width / 2.0;
        let outer = inner + self.building_footprint[0];
        [(-outer, -inner), (inner, outer)]
    }

    fn metadata(&self, name: &str) -> SceneMetadata {
        let d = self.domain();
        SceneMetadata {
            name: name.to_string(),
            generator: serde_json::to_value(self).ok(),
            domain: Some(d),
            tx_path: Some([[0.0, d.y_min, DEFAULT_TX_ALTITUDE], [0.0, d.y_max, DEFAULT_TX_ALTITUDE]]),
            rx_altitude: Some(DEFAULT_RX_ALTITUDE),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct BoxSpec {
    min: Vec3,
    max: Vec3,
    /// Neighbour height behind the -y / +y face when the neighbour touches it.
    touching: [Option<f64>; 2],
}

struct Builder {
    facets: Vec<Facet>,
}

impl Builder {
    /// Adds the quad `a b c d`, wound so that its normal points along `outward`.
    fn quad(&mut self, mut v: Vec<Vec3>, outward: Vec3, one_sided: bool) -> Result<()> {
        let facet = Facet::new(self.facets.len(), v.clone(), one_sided)?;
        if facet.plane.normal.dot(outward) < 0.0 {
            v.reverse();
        }
        self.facets.push(Facet::new(self.facets.len(), v, one_sided)?);
        Ok(())
    }

    /// Axis-aligned box without a bottom face: -x, +x, -y, +y, top.
    fn building(&mut self, b: BoxSpec, one_sided: bool) -> Result<()> {
        let (x0, y0, x1, y1, h) = (b.min.x, b.min.y, b.max.x, b.max.y, b.max.z);
        let p = Vec3::new;
        self.quad(vec![p(x0, y0, 0.0), p(x0, y1, 0.0), p(x0, y1, h), p(x0, y0, h)], p(-1.0, 0.0, 0.0), one_sided)?;
        self.quad(vec![p(x1, y0, 0.0), p(x1, y1, 0.0), p(x1, y1, h), p(x1, y0, h)], p(1.0, 0.0, 0.0), one_sided)?;
        for (side, y, outward) in [(0, y0, -1.0), (1, y1, 1.0)] {
            // A face against a touching neighbour is only exposed above it.
            let z0 = match b.touching[side] {
                Some(other) if other >= h => continue,
                Some(other) => other,
                None => 0.0,
            };
            self.quad(vec![p(x0, y, z0), p(x1, y, z0), p(x1, y, h), p(x0, y, h)], p(0.0, outward, 0.0), one_sided)?;
        }
        self.quad(vec![p(x0, y0, h), p(x1, y0, h), p(x1, y1, h), p(x0, y1, h)], p(0.0, 0.0, 1.0), one_sided)
    }

    fn ground(&mut self, d: Domain) -> Result<()> {
        let p = Vec3::new;
        self.quad(
            vec![p(d.x_min, d.y_min, 0.0), p(d.x_max, d.y_min, 0.0), p(d.x_max, d.y_max, 0.0), p(d.x_min, d.y_max, 0.0)],
            p(0.0, 0.0, 1.0),
            true,
        )
    }
}

/// Six-building street canyon: three buildings on each side of the main
/// street, separated by cross streets.
pub fn generate_canyon_6b(params: &CanyonParams) -> Result<Scene> {
    params.validate()?;
    let mut builder = Builder { facets: Vec::new() };
    let fy = params.building_footprint[1];
    let y_start = -params.row_length() / 2.0;
    let touching = params.cross_street_width == 0.0;
    for (side, (x0, x1)) in params.side_spans().into_iter().enumerate() {
        let heights = &params.building_heights[side * 3..side * 3 + 3];
        for k in 0..3 {
            let y0 = y_start + k as f64 * (fy + params.cross_street_width);
            let neighbour = |idx: Option<usize>| idx.filter(|_| touching).map(|i| heights[i]);
            let b = BoxSpec {
                min: Vec3::new(x0, y0, 0.0),
                max: Vec3::new(x1, y0 + fy, heights[k]),
                touching: [neighbour(k.checked_sub(1)), neighbour((k < 2).then_some(k + 1))],
            };
            builder.building(b, params.one_sided_buildings)?;
        }
    }
    if params.ground {
        builder.ground(params.domain())?;
    }
    Ok(Scene::new(builder.facets))
}

/// Two-building simplification: each side's row of buildings becomes one box
/// spanning the whole row, as tall as the tallest building it replaces.
pub fn generate_canyon_2b(params: &CanyonParams) -> Result<Scene> {
    params.validate()?;
    let mut builder = Builder { facets: Vec::new() };
    let half = params.row_length() / 2.0;
    for (side, (x0, x1)) in params.side_spans().into_iter().enumerate() {
        let h = params.building_heights[side * 3..side * 3 + 3]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let b = BoxSpec { min: Vec3::new(x0, -half, 0.0), max: Vec3::new(x1, half, h), touching: [None, None] };
        builder.building(b, params.one_sided_buildings)?;
    }
    if params.ground {
        builder.ground(params.domain())?;
    }
    Ok(Scene::new(builder.facets))
}

pub const FIG2_WALL_HALF_HEIGHT: f64 = 50.0;

/// Two vertical two-sided walls around a transmitter at the origin; traced at
/// z = 0 the walls act as line segments in the plane.
pub fn generate_fig2_scene() -> Scene {
    generate_fig2_scene_with_height(FIG2_WALL_HALF_HEIGHT)
}

pub fn generate_fig2_scene_with_height(half_height: f64) -> Scene {
    let wall = |id: usize, (x0, y): (f64, f64), x1: f64| {
        Facet::new(
            id,
            vec![
                Vec3::new(x0, y, -half_height),
                Vec3::new(x1, y, -half_height),
                Vec3::new(x1, y, half_height),
                Vec3::new(x0, y, half_height),
            ],
            false,
        )
        .expect("fig2 walls are valid quads")
    };
    Scene::new(vec![wall(0, (0.5, 0.75), 1.5), wall(1, (0.25, -0.75), 1.25)])
}

pub fn fig2_domain() -> Domain {
    Domain { x_min: -0.5, x_max: 2.5, y_min: -1.5, y_max: 1.5 }
}

/// The built-in scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    Canyon6b,
    Canyon2b,
    Fig2,
}

/// Generates a scene together with the metadata written to scene files.
pub fn generate_document(kind: SceneKind, params: &CanyonParams) -> Result<SceneDocument> {
    Ok(match kind {
        SceneKind::Canyon6b => SceneDocument { metadata: params.metadata("canyon6b"), scene: generate_canyon_6b(params)? },
        SceneKind::Canyon2b => SceneDocument { metadata: params.metadata("canyon2b"), scene: generate_canyon_2b(params)? },
        SceneKind::Fig2 => SceneDocument {
            metadata: SceneMetadata {
                name: "fig2".into(),
                generator: None,
                domain: Some(fig2_domain()),
                tx_path: Some([[0.0; 3], [0.0; 3]]),
                rx_altitude: Some(0.0),
            },
            scene: generate_fig2_scene(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::check_manifold;

    #[test]
    fn default_6b_has_31_quads() {
        let s = generate_canyon_6b(&CanyonParams::default()).unwrap();
        assert_eq!(s.len(), 31);
        assert!(s.facets().iter().all(|f| f.vertices.len() == 4));
        let no_ground = generate_canyon_6b(&CanyonParams { ground: false, ..Default::default() }).unwrap();
        assert_eq!(no_ground.len(), 30);
    }

    #[test]
    fn facing_walls_are_street_width_apart() {
        for scene in [
            generate_canyon_6b(&CanyonParams::default()).unwrap(),
            generate_canyon_2b(&CanyonParams::default()).unwrap(),
        ] {
            let inner: Vec<f64> = scene
                .facets()
                .iter()
                .filter(|f| f.plane.normal.x.abs() > 0.99 && f.vertices[0].x.abs() < 11.0)
                .map(|f| f.vertices[0].x)
                .collect();
            let west = inner.iter().copied().fold(f64::INFINITY, f64::min);
            let east = inner.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(east - west, 20.0);
        }
    }

    #[test]
    fn two_building_rows_are_120m_long() {
        let s = generate_canyon_2b(&CanyonParams::default()).unwrap();
        assert_eq!(s.len(), 11);
        let roofs: Vec<&Facet> = s.facets().iter().filter(|f| f.plane.normal.z > 0.99 && f.vertices[0].z > 0.0).collect();
        assert_eq!(roofs.len(), 2);
        for r in roofs {
            let b = r.bounds();
            assert_eq!(b.max.y - b.min.y, 120.0);
        }
    }

    #[test]
    fn fewer_inner_walls_in_2b() {
        let inner = |s: &Scene| {
            s.facets()
                .iter()
                .filter(|f| f.plane.normal.x.abs() > 0.99 && f.vertices[0].x.abs() == 10.0)
                .count()
        };
        let six = generate_canyon_6b(&CanyonParams::default()).unwrap();
        let two = generate_canyon_2b(&CanyonParams::default()).unwrap();
        assert_eq!(inner(&six), 6);
        assert_eq!(inner(&two), 2);
    }

    #[test]
    fn outward_normals() {
        let s = generate_canyon_6b(&CanyonParams::default()).unwrap();
        for f in s.facets().iter().take(30) {
            let c = f.vertices.iter().fold(Vec3::ZERO, |a, v| a + *v) / 4.0;
            let b = s.facets()[f.id / 5 * 5].bounds().join(s.facets()[f.id / 5 * 5 + 4].bounds());
            let inside = b.center();
            let to_center = Vec3::new(inside.x - c.x, inside.y - c.y, 0.0);
            if f.plane.normal.z.abs() < 0.5 {
                assert!(f.plane.normal.dot(to_center) < 0.0, "facet {} points inwards", f.id);
            }
        }
    }

    #[test]
    fn touching_buildings_stay_manifold() {
        let params = CanyonParams { cross_street_width: 0.0, ..Default::default() };
        let s = generate_canyon_6b(&params).unwrap();
        check_manifold(s.facets()).unwrap();
        // Interior faces vanish or shrink to the exposed part above the lower neighbour.
        assert!(s.len() < 31);
        for f in s.facets() {
            assert!(f.area() > 0.0);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let bad = [
            CanyonParams { main_street_width: -5.0, ..Default::default() },
            CanyonParams { area: [50.0, 185.0], ..Default::default() },
            CanyonParams { cross_street_width: 60.0, ..Default::default() },
            CanyonParams { building_heights: [10.0, 25.0, 25.0, 25.0, 25.0, 25.0], ..Default::default() },
        ];
        for p in bad {
            assert!(generate_canyon_6b(&p).is_err());
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let p = CanyonParams::default();
        assert_eq!(generate_canyon_6b(&p).unwrap().facets(), generate_canyon_6b(&p).unwrap().facets());
    }

    #[test]
    fn fig2_has_two_walls() {
        let s = generate_fig2_scene();
        assert_eq!(s.len(), 2);
        assert!(s.facets().iter().all(|f| !f.one_sided));
    }
}
