//! Pooled histograms and mean/median tables over one or more finished sweeps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{write_json, MetricsRow};
use crate::cells::CellId;
use crate::error::{Error, Result};
use crate::metrics::{
    disk_equivalent_radius, histogram, pooled_observations, CellMetrics, Histogram, PoolingOptions, Summary,
    HISTOGRAM_BINS,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSeries {
    pub name: String,
    pub snapshots: usize,
    pub area_m2: Summary,
    pub avg_min_dist_m: Summary,
    pub area_histogram: Option<Histogram>,
    pub distance_histogram: Option<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub bins: usize,
    pub include_no_multipath: bool,
    pub series: Vec<SweepSeries>,
}

fn corrupt(path: &Path, message: impl Into<String>) -> Error {
    Error::Archive { path: path.to_path_buf(), message: message.into() }
}

/// Reads `metrics.csv` of a sweep directory, grouped by snapshot, together
/// with the scene name recorded in `summary.json`.
pub fn load_sweep_metrics(dir: &Path) -> Result<(String, Vec<Vec<CellMetrics>>)> {
    let summary_path = dir.join("summary.json");
    let text = fs::read_to_string(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
    let summary: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| corrupt(&summary_path, e.to_string()))?;
    let name = summary
        .get("scene")
        .and_then(|s| s.as_str())
        .ok_or_else(|| corrupt(&summary_path, "no scene name"))?
        .to_string();

    let path = dir.join("metrics.csv");
    let file = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    let mut snapshots: Vec<Vec<CellMetrics>> = Vec::new();
    for row in csv::Reader::from_reader(file).deserialize() {
        let row: MetricsRow = row.map_err(|e| corrupt(&path, e.to_string()))?;
        let digest: [u8; 32] = hex::decode(&row.cell)
            .ok()
            .and_then(|b| b.try_into().ok())
            .ok_or_else(|| corrupt(&path, format!("bad cell digest {:?}", row.cell)))?;
        if row.snapshot >= snapshots.len() {
            snapshots.resize_with(row.snapshot + 1, Vec::new);
        }
        snapshots[row.snapshot].push(CellMetrics {
            cell: CellId::from_parts(digest, row.no_multipath),
            no_multipath: row.no_multipath,
            sample_count: row.sample_count,
            area_m2: row.area_m2,
            avg_min_dist_m: row.avg_min_dist_m,
            region_count: row.region_count,
        });
    }
    if snapshots.is_empty() {
        return Err(corrupt(&path, "no metrics rows"));
    }
    Ok((name, snapshots))
}

/// Pools each sweep directory into one histogram series.
pub fn build_report(dirs: &[PathBuf], pooling: PoolingOptions) -> Result<Report> {
    if dirs.is_empty() {
        return Err(Error::InvalidParameter("no sweep directories given".into()));
    }
    let mut series: Vec<SweepSeries> = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let (mut name, snapshots) = load_sweep_metrics(dir)?;
        if series.iter().any(|s| s.name == name) {
            name = dir.display().to_string();
        }
        let (areas, dists) = pooled_observations(&snapshots, pooling);
        series.push(SweepSeries {
            name,
            snapshots: snapshots.len(),
            area_m2: Summary::of(&areas),
            avg_min_dist_m: Summary::of(&dists),
            area_histogram: histogram(&areas, HISTOGRAM_BINS).ok(),
            distance_histogram: histogram(&dists, HISTOGRAM_BINS).ok(),
        });
    }
    Ok(Report { bins: HISTOGRAM_BINS, include_no_multipath: pooling.include_no_multipath, series })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.2}"))
}

/// Mean and median of S and d-bar, one column pair per sweep.
pub fn report_table(report: &Report) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<8}", "");
    for s in &report.series {
        let _ = write!(out, " | {:^21}", s.name);
    }
    out.push('\n');
    let _ = write!(out, "{:<8}", "");
    for _ in &report.series {
        let _ = write!(out, " | {:>10} {:>10}", "S (m^2)", "d (m)");
    }
    out.push('\n');
    for (label, pick) in [("Mean", 0), ("Median", 1)] {
        let _ = write!(out, "{label:<8}");
        for s in &report.series {
            let get = |m: &Summary| if pick == 0 { m.mean } else { m.median };
            let _ = write!(out, " | {:>10} {:>10}", cell(get(&s.area_m2)), cell(get(&s.avg_min_dist_m)));
        }
        out.push('\n');
    }
    for s in &report.series {
        let _ = writeln!(
            out,
            "{}: disk-equivalent radius {} m (mean S), {} m (median S); {} cells over {} snapshots",
            s.name,
            cell(s.area_m2.mean.map(disk_equivalent_radius)),
            cell(s.area_m2.median.map(disk_equivalent_radius)),
            s.area_m2.count,
            s.snapshots,
        );
    }
    out
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    series: &'a str,
    metric: &'a str,
    bin: usize,
    left: f64,
    right: f64,
    density: f64,
}

/// Writes `report.json`, `histograms.csv` and `table.txt` into `out_dir`.
pub fn write_report(report: &Report, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_json(report, &out_dir.join("report.json"))?;

    let path = out_dir.join("histograms.csv");
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = csv::Writer::from_writer(file);
    for s in &report.series {
        for (metric, h) in [("area_m2", &s.area_histogram), ("avg_min_dist_m", &s.distance_histogram)] {
            let Some(h) = h else { continue };
            for (bin, (d, e)) in h.densities.iter().zip(h.edges.windows(2)).enumerate() {
                w.serialize(HistogramRow { series: &s.name, metric, bin, left: e[0], right: e[1], density: *d })?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = out_dir.join("table.txt");
    fs::write(&path, report_table(report)).map_err(|e| Error::io(&path, e))
}
