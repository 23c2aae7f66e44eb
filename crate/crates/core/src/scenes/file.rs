//! JSON scene files.
//!
//! ```json
//! {
//!   "version": "mlm-scene/1",
//!   "metadata": { "name": "fig2", "domain": { ... }, ... },
//!   "vertices": [[x, y, z], ...],
//!   "facets": [{ "vertices": [0, 1, 2, 3], "one_sided": false }, ...]
//! }
//! ```
//!
//! Coordinates are written in shortest round-trip decimal form, so a
//! save/load cycle reproduces every vertex bit for bit.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_manifold, Facet, Scene, Vec3};

pub const SCENE_FILE_VERSION: &str = "mlm-scene/1";

/// Rectangle of the horizontal plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SceneMetadata {
    pub name: String,
    /// Parameters of the generator that produced the scene.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<serde_json::Value>,
    /// Suggested receiver-grid extent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    /// Suggested transmitter start and end positions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_path: Option<[[f64; 3]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rx_altitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub vertices: Vec<usize>,
    #[serde(default)]
    pub one_sided: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub version: String,
    pub metadata: SceneMetadata,
    pub vertices: Vec<[f64; 3]>,
    pub facets: Vec<FacetRecord>,
}

/// A scene plus the metadata stored alongside it.
#[derive(Debug, Clone)]
pub struct SceneDocument {
    pub metadata: SceneMetadata,
    pub scene: Scene,
}

impl SceneFile {
    pub fn from_document(doc: &SceneDocument) -> SceneFile {
        let mut vertices: Vec<[f64; 3]> = Vec::new();
        let mut index: HashMap<[u64; 3], usize> = HashMap::new();
        let facets = doc
            .scene
            .facets()
            .iter()
            .map(|f| FacetRecord {
                vertices: f
                    .vertices
                    .iter()
                    .map(|v| {
                        let a = v.to_array();
                        *index.entry(a.map(f64::to_bits)).or_insert_with(|| {
                            vertices.push(a);
                            vertices.len() - 1
                        })
                    })
                    .collect(),
                one_sided: f.one_sided,
            })
            .collect();
        SceneFile { version: SCENE_FILE_VERSION.into(), metadata: doc.metadata.clone(), vertices, facets }
    }

    pub fn into_document(self) -> Result<SceneDocument> {
        if self.version != SCENE_FILE_VERSION {
            return Err(Error::SceneParse(format!(
                "unsupported version {:?} (expected {SCENE_FILE_VERSION:?})",
                self.version
            )));
        }
        for (k, f) in self.facets.iter().enumerate() {
            if let Some(&i) = f.vertices.iter().find(|&&i| i >= self.vertices.len()) {
                return Err(Error::SceneParse(format!(
                    "facet {k}: vertex index {i} out of range ({} vertices)",
                    self.vertices.len()
                )));
            }
        }

        let mut facets = Vec::with_capacity(self.facets.len());
        let mut problems = Vec::new();
        for (k, f) in self.facets.iter().enumerate() {
            let verts: Vec<Vec3> = f.vertices.iter().map(|&i| Vec3::from(self.vertices[i])).collect();
            match Facet::new(k, verts, f.one_sided) {
                Ok(facet) => facets.push(facet),
                Err(e) => problems.push(e.to_string()),
            }
        }
        if problems.is_empty() {
            if let Err(e) = check_manifold(&facets) {
                problems.push(e.to_string());
            }
        }
        if !problems.is_empty() {
            return Err(Error::SceneValidation(problems));
        }
        Ok(SceneDocument { metadata: self.metadata, scene: Scene::new(facets) })
    }
}

pub fn scene_to_json(doc: &SceneDocument) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SceneFile::from_document(doc))?)
}

pub fn scene_from_json(text: &str) -> Result<SceneDocument> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| Error::SceneParse(e.to_string()))?;
    file.into_document()
}

pub fn save_scene(doc: &SceneDocument, path: &Path) -> Result<()> {
    let mut text = scene_to_json(doc)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_scene(path: &Path) -> Result<SceneDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    scene_from_json(&text).map_err(|e| match e {
        Error::SceneParse(m) => Error::SceneParse(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes::{generate_document, CanyonParams, SceneKind};

    #[test]
    fn fig2_round_trip() {
        let doc = generate_document(SceneKind::Fig2, &CanyonParams::default()).unwrap();
        let back = scene_from_json(&scene_to_json(&doc).unwrap()).unwrap();
        assert_eq!(back.scene.facets(), doc.scene.facets());
        assert_eq!(back.metadata, doc.metadata);
    }

    #[test]
    fn awkward_coordinates_round_trip_bit_exactly() {
        let v = [
            Vec3::new(0.1, 1.0 / 3.0, -2.0e-7),
            Vec3::new(std::f64::consts::PI, 1.0 / 3.0, -2.0e-7),
            Vec3::new(std::f64::consts::PI, 7.123456789012345, -2.0e-7),
        ];
        let doc = SceneDocument {
            metadata: SceneMetadata { name: "odd".into(), ..Default::default() },
            scene: Scene::new(vec![Facet::new(0, v.to_vec(), true).unwrap()]),
        };
        let back = scene_from_json(&scene_to_json(&doc).unwrap()).unwrap();
        for (a, b) in back.scene.facet(0).vertices.iter().zip(&v) {
            assert_eq!(a.to_array().map(f64::to_bits), b.to_array().map(f64::to_bits));
        }
        assert!(back.scene.facet(0).one_sided);
    }

    fn square_file(facet: Vec<usize>) -> String {
        serde_json::json!({
            "version": SCENE_FILE_VERSION,
            "metadata": { "name": "t" },
            "vertices": [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [-0.5, 0.5, 0.0]],
            "facets": [{ "vertices": facet }]
        })
        .to_string()
    }

    #[test]
    fn five_vertex_facet_is_a_validation_error() {
        let err = scene_from_json(&square_file(vec![0, 1, 2, 3, 4])).unwrap_err();
        assert!(matches!(err, Error::SceneValidation(ref p) if p[0].contains("facet 0")), "{err}");
    }

    #[test]
    fn out_of_range_index_is_a_parse_error() {
        let err = scene_from_json(&square_file(vec![0, 1, 17])).unwrap_err();
        assert!(matches!(err, Error::SceneParse(ref m) if m.contains("17")), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = scene_from_json("{\n  \"version\": \"mlm-scene/1\",\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
