use std::collections::{BTreeMap, VecDeque};

use super::grid::LabelGrid;
use super::id::CellId;

/// Which neighbouring samples are considered connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    /// North, south, east and west neighbours.
    Four,
    /// All eight surrounding samples.
    #[default]
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Connectivity::Eight => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)],
        }
    }
}

/// Labels connected components of equal-label samples. Returns the component
/// index of every sample (numbered in raster order of their first sample)
/// and the number of components.
pub fn component_labels(grid: &LabelGrid, connectivity: Connectivity) -> (Vec<u32>, usize) {
    let (_, ids) = grid.intern();
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut component = vec![u32::MAX; ids.len()];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..ids.len() {
        if component[start] != u32::MAX {
            continue;
        }
        component[start] = count;
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            let (i, j) = ((s % grid.nx) as isize, (s / grid.nx) as isize);
            for &(di, dj) in connectivity.offsets() {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a >= nx || b >= ny {
                    continue;
                }
                let n = (b * nx + a) as usize;
                if component[n] == u32::MAX && ids[n] == ids[s] {
                    component[n] = count;
                    queue.push_back(n);
                }
            }
        }
        count += 1;
    }
    (component, count as usize)
}

/// Number of connected regions of each cell.
pub fn connected_regions(grid: &LabelGrid, connectivity: Connectivity) -> BTreeMap<CellId, usize> {
    let (component, count) = component_labels(grid, connectivity);
    let mut owner: Vec<Option<CellId>> = vec![None; count];
    for (s, &c) in component.iter().enumerate() {
        owner[c as usize].get_or_insert(grid.labels[s]);
    }
    let mut regions = BTreeMap::new();
    for id in owner.into_iter().flatten() {
        *regions.entry(id).or_insert(0) += 1;
    }
    regions
}
