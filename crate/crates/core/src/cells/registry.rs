use std::collections::BTreeMap;

use super::grid::Labeling;
use super::id::{color_of, CellId, Rgba};
use crate::tracer::ValidityVector;

#[derive(Debug, Clone, PartialEq)]
pub struct CellEntry {
    pub color: Rgba,
    pub first_seen_snapshot: usize,
    pub no_multipath: bool,
    pub vector: Option<ValidityVector>,
}

/// Every cell seen over a sweep, with its color and the first snapshot it
/// appeared in. Colors are recomputed from the id, never stored state.
#[derive(Debug, Clone, Default)]
pub struct CellRegistry {
    cells: BTreeMap<CellId, CellEntry>,
}

impl CellRegistry {
    pub fn new() -> CellRegistry {
        CellRegistry::default()
    }

    /// Records the cells of one snapshot. Snapshots should be observed in order.
    pub fn observe(&mut self, snapshot: usize, labeling: &Labeling) {
        let (palette, _) = labeling.grid.intern();
        for id in palette {
            let entry = self.cells.entry(id).or_insert_with(|| CellEntry {
                color: color_of(&id),
                first_seen_snapshot: snapshot,
                no_multipath: id.is_no_multipath(),
                vector: None,
            });
            entry.first_seen_snapshot = entry.first_seen_snapshot.min(snapshot);
            if entry.vector.is_none() {
                entry.vector = labeling.vectors.get(&id).cloned();
            }
        }
    }

    pub fn get(&self, id: &CellId) -> Option<&CellEntry> {
        self.cells.get(id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellId, &CellEntry)> {
        self.cells.iter()
    }

    pub fn vectors(&self) -> BTreeMap<CellId, ValidityVector> {
        self.cells
            .iter()
            .filter_map(|(id, e)| e.vector.clone().map(|v| (*id, v)))
            .collect()
    }
}
