//! Parametric street-canyon and two-wall scenes, and the scene file format.

mod file;
mod generate;

pub use file::{
    load_scene, save_scene, scene_from_json, scene_to_json, Domain, FacetRecord, SceneDocument, SceneFile,
    SceneMetadata, SCENE_FILE_VERSION,
};
pub use generate::{
    fig2_domain, generate_canyon_2b, generate_canyon_6b, generate_document, generate_fig2_scene,
    generate_fig2_scene_with_height, CanyonParams, SceneKind, DEFAULT_RX_ALTITUDE, DEFAULT_TX_ALTITUDE,
    FIG2_WALL_HALF_HEIGHT, HEIGHT_RANGE,
};
