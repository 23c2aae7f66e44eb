//! Multipath cells: hashing validity vectors into stable identities, labeling
//! receiver grids, counting connected regions and assigning colors.

mod grid;
mod id;
mod regions;
mod registry;

pub use grid::{label_grid, GridSpec, LabelGrid, LabelOptions, Labeling};
pub use id::{cell_id, color_of, CellHasher, CellId, Rgba, CELL_LIGHTNESS, CELL_SATURATION};
pub use regions::{component_labels, connected_regions, Connectivity};
pub use registry::{CellEntry, CellRegistry};
