use std::collections::BTreeMap;

use bitvec::prelude::*;
use rayon::prelude::*;

use super::id::{CellHasher, CellId};
use crate::error::{Error, Result};
use crate::geometry::{Scene, Vec3};
use crate::tracer::{validity_bits, CandidateEnumeration, ValidityVector};

/// A regular receiver grid on a horizontal plane, bounds inclusive: sample
/// `(0, 0)` sits at `(x_min, y_min)` and sample `(nx - 1, ny - 1)` at
/// `(x_max, y_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub altitude: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid must be at least 2x2, got {}x{}",
                self.nx, self.ny
            )));
        }
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max, self.altitude]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::InvalidParameter(format!(
                "grid bounds [{}, {}] x [{}, {}] are empty or not finite",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        Ok(())
    }

    pub fn pitch_x(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn pitch_y(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn origin(&self) -> Vec3 {
        Vec3::new(self.x_min, self.y_min, self.altitude)
    }

    /// Position of sample `(i, j)`; the last sample lands exactly on the upper bound.
    pub fn sample(&self, i: usize, j: usize) -> Vec3 {
        let x = if i + 1 == self.nx { self.x_max } else { self.x_min + i as f64 * self.pitch_x() };
        let y = if j + 1 == self.ny { self.y_max } else { self.y_min + j as f64 * self.pitch_y() };
        Vec3::new(x, y, self.altitude)
    }
}

/// Cell identity of every sample of a receiver grid, row-major with row 0
/// at the minimum y.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelGrid {
    pub nx: usize,
    pub ny: usize,
    pub pitch_x: f64,
    pub pitch_y: f64,
    /// Position of sample (0, 0); `z` is the receiver altitude.
    pub origin: Vec3,
    /// Transmitter position the grid was traced for.
    pub tx: Vec3,
    pub labels: Vec<CellId>,
}

impl LabelGrid {
    /// # Panics
    /// Panics if `labels.len() != nx * ny` or a pitch is not positive.
    pub fn new(nx: usize, ny: usize, pitch_x: f64, pitch_y: f64, origin: Vec3, labels: Vec<CellId>) -> LabelGrid {
        assert_eq!(labels.len(), nx * ny, "label count does not match grid size");
        assert!(pitch_x > 0.0 && pitch_y > 0.0, "pitch must be positive");
        LabelGrid { nx, ny, pitch_x, pitch_y, origin, tx: Vec3::ZERO, labels }
    }

    pub fn altitude(&self) -> f64 {
        self.origin.z
    }

    pub fn get(&self, i: usize, j: usize) -> CellId {
        self.labels[j * self.nx + i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Distinct labels, sorted, and the index of each sample's label in that list.
    pub fn intern(&self) -> (Vec<CellId>, Vec<u32>) {
        let mut palette: Vec<CellId> = self.labels.clone();
        palette.sort_unstable();
        palette.dedup();
        let index: BTreeMap<CellId, u32> = palette.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
        let ids = self.labels.iter().map(|c| index[c]).collect();
        (palette, ids)
    }

    pub fn distinct_cells(&self) -> usize {
        self.intern().0.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelOptions {
    /// Candidates evaluated and hashed per step, per sample.
    pub chunk_size: usize,
    /// Worker threads; 0 runs on the ambient rayon pool.
    pub workers: usize,
    /// Keep one validity vector per distinct cell.
    pub retain_vectors: bool,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions { chunk_size: 4096, workers: 0, retain_vectors: false }
    }
}

#[derive(Debug, Clone)]
pub struct Labeling {
    pub grid: LabelGrid,
    /// Validity vector of each cell, when requested.
    pub vectors: BTreeMap<CellId, ValidityVector>,
}

/// Labels every grid sample with the [`CellId`] of its validity vector.
///
/// Candidates are traced `chunk_size` at a time and streamed into the
/// sample's hash state, so the digest equals hashing the whole vector.
pub fn label_grid(
    tx: Vec3,
    spec: &GridSpec,
    enumeration: &CandidateEnumeration,
    scene: &Scene,
    options: &LabelOptions,
) -> Result<Labeling> {
    spec.validate()?;
    if options.chunk_size == 0 {
        return Err(Error::InvalidParameter("chunk size must be at least 1".into()));
    }
    if enumeration.facet_count() != scene.len() {
        return Err(Error::InvalidParameter(format!(
            "enumeration built for {} facets, scene has {}",
            enumeration.facet_count(),
            scene.len()
        )));
    }

    let run = || label_rows(tx, spec, enumeration, scene, options);
    let rows = if options.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {} workers: {e}", options.workers)))?
            .install(run)
    } else {
        run()
    };

    let mut labels = Vec::with_capacity(spec.nx * spec.ny);
    let mut vectors = BTreeMap::new();
    for (row_labels, row_vectors) in rows {
        labels.extend(row_labels);
        for (id, v) in row_vectors {
            vectors.entry(id).or_insert(v);
        }
    }
    let grid = LabelGrid {
        nx: spec.nx,
        ny: spec.ny,
        pitch_x: spec.pitch_x(),
        pitch_y: spec.pitch_y(),
        origin: spec.origin(),
        tx,
        labels,
    };
    Ok(Labeling { grid, vectors })
}

type Row = (Vec<CellId>, Vec<(CellId, ValidityVector)>);

fn label_rows(
    tx: Vec3,
    spec: &GridSpec,
    enumeration: &CandidateEnumeration,
    scene: &Scene,
    options: &LabelOptions,
) -> Vec<Row> {
    let total = enumeration.total_count();
    (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            let mut chunk: BitVec<u8, Lsb0> = BitVec::with_capacity(options.chunk_size.min(total));
            let mut labels = Vec::with_capacity(spec.nx);
            let mut kept: Vec<(CellId, ValidityVector)> = Vec::new();
            for i in 0..spec.nx {
                let rx = spec.sample(i, j);
                let mut hasher = CellHasher::new(total);
                let mut full: Option<Vec<bool>> = options.retain_vectors.then(|| Vec::with_capacity(total));
                let mut start = 0;
                while start < total {
                    let end = total.min(start.saturating_add(options.chunk_size));
                    chunk.clear();
                    validity_bits(tx, rx, enumeration, start..end, scene, |b| chunk.push(b));
                    hasher.absorb(&chunk);
                    if let Some(full) = full.as_mut() {
                        full.extend(chunk.iter().by_vals());
                    }
                    start = end;
                }
                let id = hasher.finish();
                if let Some(full) = full {
                    if !kept.iter().any(|(k, _)| *k == id) {
                        kept.push((id, ValidityVector::from_bits(full)));
                    }
                }
                labels.push(id);
            }
            (labels, kept)
        })
        .collect()
}
