//! Cell lifetime metrics: area, distance to leave the cell, pooled sweep
//! statistics and histograms.

mod distance;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

pub use distance::{min_intercell_distance_field, DistanceField};

use crate::cells::{connected_regions, CellId, Connectivity, LabelGrid};
use crate::error::{Error, Result};
use crate::tracer::ValidityVector;

fn serialize_cell<S: Serializer>(id: &CellId, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&id.hex())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMetrics {
    #[serde(serialize_with = "serialize_cell")]
    pub cell: CellId,
    pub no_multipath: bool,
    pub sample_count: usize,
    /// Covered area in square meters.
    pub area_m2: f64,
    /// Mean distance to leave the cell; `None` if the cell fills the grid.
    pub avg_min_dist_m: Option<f64>,
    pub region_count: usize,
}

pub fn cell_areas(grid: &LabelGrid) -> BTreeMap<CellId, f64> {
    let pixel = grid.pitch_x * grid.pitch_y;
    sample_counts(grid)
        .into_iter()
        .map(|(id, n)| (id, n as f64 * pixel))
        .collect()
}

fn sample_counts(grid: &LabelGrid) -> BTreeMap<CellId, usize> {
    let mut counts = BTreeMap::new();
    for id in &grid.labels {
        *counts.entry(*id).or_insert(0) += 1;
    }
    counts
}

/// Mean of the defined distances over the samples of each cell. Cells without
/// any defined distance are left out.
pub fn avg_min_intercell_distance(field: &DistanceField, grid: &LabelGrid) -> BTreeMap<CellId, f64> {
    let mut sums: BTreeMap<CellId, (f64, usize)> = BTreeMap::new();
    for (id, d) in grid.labels.iter().zip(&field.values) {
        if let Some(d) = d {
            let e = sums.entry(*id).or_insert((0.0, 0));
            e.0 += d;
            e.1 += 1;
        }
    }
    sums.into_iter().map(|(id, (s, n))| (id, s / n as f64)).collect()
}

/// All per-cell metrics of one snapshot, ordered by cell id.
pub fn cell_metrics(grid: &LabelGrid, connectivity: Connectivity) -> Vec<CellMetrics> {
    let field = min_intercell_distance_field(grid);
    let avg = avg_min_intercell_distance(&field, grid);
    let regions = connected_regions(grid, connectivity);
    let pixel = grid.pitch_x * grid.pitch_y;
    sample_counts(grid)
        .into_iter()
        .map(|(cell, n)| CellMetrics {
            cell,
            no_multipath: cell.is_no_multipath(),
            sample_count: n,
            area_m2: n as f64 * pixel,
            avg_min_dist_m: avg.get(&cell).copied(),
            region_count: regions[&cell],
        })
        .collect()
}

/// Radius of the disk with the given area.
pub fn disk_equivalent_radius(area_m2: f64) -> f64 {
    (area_m2 / std::f64::consts::PI).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HammingStats {
    /// Hamming distance -> number of adjacent sample pairs.
    pub histogram: BTreeMap<usize, usize>,
    pub pairs: usize,
    /// Share of pairs at distance exactly 1; `None` without transitions.
    pub fraction_at_one: Option<f64>,
}

/// Hamming distances between the validity vectors of 4-adjacent samples that
/// carry different labels.
pub fn hamming_transition_stats(
    grid: &LabelGrid,
    vectors: &BTreeMap<CellId, ValidityVector>,
) -> Result<HammingStats> {
    let lookup = |id: &CellId| vectors.get(id).ok_or_else(|| Error::MissingVector(id.hex()));
    let mut histogram = BTreeMap::new();
    let mut cache: BTreeMap<(CellId, CellId), usize> = BTreeMap::new();
    let mut pairs = 0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let a = grid.get(i, j);
            let right = (i + 1 < grid.nx).then(|| grid.get(i + 1, j));
            let up = (j + 1 < grid.ny).then(|| grid.get(i, j + 1));
            for b in [right, up].into_iter().flatten() {
                if a == b {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                let d = match cache.get(&key) {
                    Some(&d) => d,
                    None => {
                        let (va, vb) = (lookup(&a)?, lookup(&b)?);
                        let d = va.hamming(vb).ok_or_else(|| {
                            Error::InvalidParameter("validity vectors of different lengths".into())
                        })?;
                        cache.insert(key, d);
                        d
                    }
                };
                *histogram.entry(d).or_insert(0) += 1;
                pairs += 1;
            }
        }
    }
    let fraction_at_one = (pairs > 0).then(|| *histogram.get(&1).unwrap_or(&0) as f64 / pairs as f64);
    Ok(HammingStats { histogram, pairs, fraction_at_one })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary { count: 0, mean: None, median: None };
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 { sorted[n / 2] } else { 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]) };
        Summary { count: n, mean: Some(mean), median: Some(median) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    /// Mass-normalized density per bin; integrates to 1.
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn integral(&self) -> f64 {
        self.densities
            .iter()
            .zip(self.edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum()
    }
}

pub const HISTOGRAM_BINS: usize = 30;

/// Equal-width density histogram over `[min, max]`; the maximum falls in
/// the last bin. If all values are equal the result is one bin of width 1
/// starting at that value.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
    }
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::InvalidParameter("histogram needs at least one finite value".into()));
    }
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Ok(Histogram { edges: vec![lo, lo + 1.0], densities: vec![1.0] });
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in &finite {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let edges = (0..=bins).map(|k| if k == bins { hi } else { lo + k as f64 * width }).collect();
    let total = finite.len() as f64;
    let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    Ok(Histogram { edges, densities })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PoolingOptions {
    /// Pool the no-multipath cell together with the others.
    pub include_no_multipath: bool,
}

/// Pooled statistics over every (snapshot, cell) pair of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub snapshots: Vec<Vec<CellMetrics>>,
    pub area_m2: Summary,
    pub avg_min_dist_m: Summary,
    pub area_histogram: Option<Histogram>,
    pub distance_histogram: Option<Histogram>,
}

/// The pooled observations, one per (snapshot, cell) pair and unweighted:
/// areas of every cell, and the mean distances that are defined. The
/// no-multipath cell is left out of both unless asked for.
pub fn pooled_observations(snapshots: &[Vec<CellMetrics>], options: PoolingOptions) -> (Vec<f64>, Vec<f64>) {
    let kept = || {
        snapshots
            .iter()
            .flatten()
            .filter(move |m| options.include_no_multipath || !m.no_multipath)
    };
    (kept().map(|m| m.area_m2).collect(), kept().filter_map(|m| m.avg_min_dist_m).collect())
}

pub fn aggregate_sweep(snapshots: Vec<Vec<CellMetrics>>, options: PoolingOptions) -> SweepReport {
    let (areas, dists) = pooled_observations(&snapshots, options);
    SweepReport {
        area_m2: Summary::of(&areas),
        avg_min_dist_m: Summary::of(&dists),
        area_histogram: histogram(&areas, HISTOGRAM_BINS).ok(),
        distance_histogram: histogram(&dists, HISTOGRAM_BINS).ok(),
        snapshots,
    }
}
