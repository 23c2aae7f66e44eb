//! Transmitter sweeps: one label grid per transmitter position, with the
//! per-snapshot archives, images and metrics written to an output directory.
//!
//! Output layout:
//!
//! - `snapshot_NNN.mlmgrid`, `snapshot_NNN.png` per snapshot
//! - `cells.json` (digest, color, first snapshot, validity vector) and
//!   `cells.csv` (the color legend)
//! - `metrics.csv`, one row per (snapshot, cell)
//! - `summary.json`, per-snapshot counts and the pooled statistics
//!
//! Nothing written depends on the worker count or chunk size.

mod archive;
mod report;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use archive::{decode_label_grid, encode_label_grid, read_label_grid, write_label_grid};
pub use report::{build_report, load_sweep_metrics, report_table, write_report, Report, SweepSeries};

use crate::cells::{label_grid, CellRegistry, Connectivity, GridSpec, LabelOptions};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::metrics::{
    aggregate_sweep, cell_metrics, disk_equivalent_radius, hamming_transition_stats, CellMetrics, HammingStats,
    Histogram, PoolingOptions, Summary,
};
use crate::render::{render_mlm, RenderOptions};
use crate::scenes::{SceneDocument, SceneMetadata, DEFAULT_RX_ALTITUDE, DEFAULT_TX_ALTITUDE};
use crate::tracer::{CandidateEnumeration, DEFAULT_CANDIDATE_BUDGET};

pub const SUMMARY_FORMAT: &str = "mlm-sweep/1";
pub const DEFAULT_TX_COUNT: usize = 50;
pub const DEFAULT_GRID_SIZE: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub tx_start: Vec3,
    pub tx_end: Vec3,
    pub tx_count: usize,
    pub grid: GridSpec,
    pub max_order: usize,
    pub budget: u64,
    pub chunk_size: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub retain_vectors: bool,
    pub connectivity: Connectivity,
    pub pooling: PoolingOptions,
    pub render: RenderOptions,
}

impl SweepConfig {
    /// A configuration taking the grid extent, receiver altitude and
    /// transmitter path from scene metadata where present.
    pub fn from_metadata(metadata: &SceneMetadata) -> SweepConfig {
        let domain = metadata.domain;
        let [start, end] = metadata.tx_path.unwrap_or_else(|| match domain {
            Some(d) => [[0.0, d.y_min, DEFAULT_TX_ALTITUDE], [0.0, d.y_max, DEFAULT_TX_ALTITUDE]],
            None => [[0.0, 0.0, DEFAULT_TX_ALTITUDE]; 2],
        });
        let (x_min, x_max, y_min, y_max) = domain.map_or((-1.0, 1.0, -1.0, 1.0), |d| (d.x_min, d.x_max, d.y_min, d.y_max));
        SweepConfig {
            tx_start: start.into(),
            tx_end: end.into(),
            tx_count: DEFAULT_TX_COUNT,
            grid: GridSpec {
                nx: DEFAULT_GRID_SIZE,
                ny: DEFAULT_GRID_SIZE,
                x_min,
                x_max,
                y_min,
                y_max,
                altitude: metadata.rx_altitude.unwrap_or(DEFAULT_RX_ALTITUDE),
            },
            max_order: 1,
            budget: DEFAULT_CANDIDATE_BUDGET,
            chunk_size: LabelOptions::default().chunk_size,
            workers: 0,
            retain_vectors: true,
            connectivity: Connectivity::default(),
            pooling: PoolingOptions::default(),
            render: RenderOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tx_count == 0 {
            return Err(Error::InvalidParameter("tx count must be at least 1".into()));
        }
        let finite = |v: Vec3| v.to_array().iter().all(|c| c.is_finite());
        if !finite(self.tx_start) || !finite(self.tx_end) {
            return Err(Error::InvalidParameter("transmitter path must be finite".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidParameter("chunk size must be at least 1".into()));
        }
        self.grid.validate()
    }
}

/// `count` transmitter positions evenly spaced from `start` to `end`, both
/// included.
pub fn tx_positions(start: Vec3, end: Vec3, count: usize) -> Vec<Vec3> {
    (0..count)
        .map(|i| match i {
            0 => start,
            _ if i == count - 1 => end,
            _ => start + (end - start) * (i as f64 / (count - 1) as f64),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    pub index: usize,
    pub tx: [f64; 3],
    /// Distinct cells, the no-multipath cell included.
    pub cells: usize,
    pub regions: usize,
    pub cells_excluding_no_multipath: usize,
    pub regions_excluding_no_multipath: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamming: Option<HammingSummary>,
}

/// Hamming statistics in a JSON-friendly shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HammingSummary {
    pub pairs: usize,
    pub fraction_at_one: Option<f64>,
    /// `[distance, pair count]`, ascending by distance.
    pub histogram: Vec<[usize; 2]>,
}

impl From<&HammingStats> for HammingSummary {
    fn from(h: &HammingStats) -> Self {
        HammingSummary {
            pairs: h.pairs,
            fraction_at_one: h.fraction_at_one,
            histogram: h.histogram.iter().map(|(&d, &n)| [d, n]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PooledSummary {
    pub area_m2: Summary,
    pub avg_min_dist_m: Summary,
    /// Disk-equivalent radius of the mean and median area.
    pub disk_radius_m: Summary,
    pub area_histogram: Option<Histogram>,
    pub distance_histogram: Option<Histogram>,
}

impl PooledSummary {
    fn new(area: Summary, dist: Summary, area_histogram: Option<Histogram>, distance_histogram: Option<Histogram>) -> Self {
        let disk_radius_m = Summary {
            count: area.count,
            mean: area.mean.map(disk_equivalent_radius),
            median: area.median.map(disk_equivalent_radius),
        };
        PooledSummary { area_m2: area, avg_min_dist_m: dist, disk_radius_m, area_histogram, distance_histogram }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct GridRecord {
    nx: usize,
    ny: usize,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    altitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SummaryFile<'a> {
    format: &'static str,
    scene: &'a str,
    facets: usize,
    max_order: usize,
    candidates: usize,
    grid: GridRecord,
    connectivity: &'static str,
    include_no_multipath: bool,
    distinct_cells: usize,
    snapshots: &'a [SnapshotSummary],
    pooled: &'a PooledSummary,
}

/// One row of `metrics.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub snapshot: usize,
    pub cell: String,
    pub sample_count: usize,
    pub area_m2: f64,
    pub avg_min_dist_m: Option<f64>,
    pub region_count: usize,
    pub no_multipath: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CellRecord {
    cell: String,
    color: String,
    no_multipath: bool,
    first_seen_snapshot: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<VectorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct VectorRecord {
    bits: usize,
    /// LSB-first packed bytes.
    hex: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct LegendRow<'a> {
    cell: &'a str,
    color: &'a str,
    no_multipath: bool,
    first_seen_snapshot: usize,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub snapshots: Vec<SnapshotSummary>,
    pub metrics: Vec<Vec<CellMetrics>>,
    pub pooled: PooledSummary,
    pub registry: CellRegistry,
    pub out_dir: PathBuf,
}

pub fn snapshot_stem(index: usize) -> String {
    format!("snapshot_{index:03}")
}

/// Runs a sweep and writes its artifacts into `out_dir`, calling
/// `progress(done, total)` after each snapshot.
pub fn run_sweep(
    doc: &SceneDocument,
    config: &SweepConfig,
    out_dir: &Path,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<SweepOutcome> {
    config.validate()?;
    let scene = &doc.scene;
    let enumeration = CandidateEnumeration::with_budget(scene.len(), config.max_order, config.budget)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if config.workers > 0 {
        pool = pool.num_threads(config.workers);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {} workers: {e}", config.workers)))?;
    let options = LabelOptions { chunk_size: config.chunk_size, workers: 0, retain_vectors: config.retain_vectors };

    let positions = tx_positions(config.tx_start, config.tx_end, config.tx_count);
    let mut registry = CellRegistry::new();
    let mut snapshots = Vec::with_capacity(positions.len());
    let mut all_metrics = Vec::with_capacity(positions.len());
    for (index, &tx) in positions.iter().enumerate() {
        let labeling = pool.install(|| label_grid(tx, &config.grid, &enumeration, scene, &options))?;
        let metrics = pool.install(|| cell_metrics(&labeling.grid, config.connectivity));
        let hamming = match config.retain_vectors {
            true => Some(HammingSummary::from(&hamming_transition_stats(&labeling.grid, &labeling.vectors)?)),
            false => None,
        };
        registry.observe(index, &labeling);

        let stem = snapshot_stem(index);
        write_label_grid(&labeling.grid, enumeration.len(), &out_dir.join(format!("{stem}.mlmgrid")))?;
        let png_path = out_dir.join(format!("{stem}.png"));
        fs::write(&png_path, render_mlm(&labeling.grid, &config.render)?).map_err(|e| Error::io(&png_path, e))?;

        let regions: usize = metrics.iter().map(|m| m.region_count).sum();
        let none = metrics.iter().find(|m| m.no_multipath);
        snapshots.push(SnapshotSummary {
            index,
            tx: tx.to_array(),
            cells: metrics.len(),
            regions,
            cells_excluding_no_multipath: metrics.len() - none.map_or(0, |_| 1),
            regions_excluding_no_multipath: regions - none.map_or(0, |m| m.region_count),
            hamming,
        });
        all_metrics.push(metrics);
        progress(index + 1, positions.len());
    }

    let report = aggregate_sweep(all_metrics, config.pooling);
    let pooled =
        PooledSummary::new(report.area_m2, report.avg_min_dist_m, report.area_histogram, report.distance_histogram);
    let all_metrics = report.snapshots;

    write_metrics_csv(&all_metrics, &out_dir.join("metrics.csv"))?;
    write_cells(&registry, out_dir)?;
    let summary = SummaryFile {
        format: SUMMARY_FORMAT,
        scene: &doc.metadata.name,
        facets: scene.len(),
        max_order: config.max_order,
        candidates: enumeration.len(),
        grid: GridRecord {
            nx: config.grid.nx,
            ny: config.grid.ny,
            x_min: config.grid.x_min,
            x_max: config.grid.x_max,
            y_min: config.grid.y_min,
            y_max: config.grid.y_max,
            altitude: config.grid.altitude,
        },
        connectivity: match config.connectivity {
            Connectivity::Four => "four",
            Connectivity::Eight => "eight",
        },
        include_no_multipath: config.pooling.include_no_multipath,
        distinct_cells: registry.len(),
        snapshots: &snapshots,
        pooled: &pooled,
    };
    write_json(&summary, &out_dir.join("summary.json"))?;

    Ok(SweepOutcome { snapshots, metrics: all_metrics, pooled, registry, out_dir: out_dir.to_path_buf() })
}

pub(crate) fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_metrics_csv(snapshots: &[Vec<CellMetrics>], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    for (snapshot, metrics) in snapshots.iter().enumerate() {
        for m in metrics {
            w.serialize(MetricsRow {
                snapshot,
                cell: m.cell.hex(),
                sample_count: m.sample_count,
                area_m2: m.area_m2,
                avg_min_dist_m: m.avg_min_dist_m,
                region_count: m.region_count,
                no_multipath: m.no_multipath,
            })?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_cells(registry: &CellRegistry, out_dir: &Path) -> Result<()> {
    let records: Vec<CellRecord> = registry
        .iter()
        .map(|(id, e)| CellRecord {
            cell: id.hex(),
            color: e.color.hex(),
            no_multipath: e.no_multipath,
            first_seen_snapshot: e.first_seen_snapshot,
            vector: e.vector.as_ref().map(|v| VectorRecord { bits: v.len(), hex: hex::encode(v.to_bytes()) }),
        })
        .collect();
    write_json(&records, &out_dir.join("cells.json"))?;

    let path = out_dir.join("cells.csv");
    let mut w = csv_writer(&path)?;
    for r in &records {
        w.serialize(LegendRow {
            cell: &r.cell,
            color: &r.color,
            no_multipath: r.no_multipath,
            first_seen_snapshot: r.first_seen_snapshot,
        })?;
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tx_positions_include_both_ends() {
        let (a, b) = (Vec3::new(0.0, -92.5, 32.0), Vec3::new(0.0, 92.5, 32.0));
        let p = tx_positions(a, b, 50);
        assert_eq!((p[0], p[49]), (a, b));
        for w in p.windows(2) {
            assert!(((w[1].y - w[0].y) - 185.0 / 49.0).abs() < 1e-9);
        }
        assert_eq!(tx_positions(a, b, 1), vec![a]);
    }

    #[test]
    fn zero_snapshots_are_rejected() {
        let mut c = SweepConfig::from_metadata(&SceneMetadata::default());
        c.tx_count = 0;
        assert!(c.validate().is_err());
    }
}
