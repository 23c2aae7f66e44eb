//! C ABI over `mlm-core`.
//!
//! Scenes and label grids are opaque handles created by `mlm_*` functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`MlmStatus`]; on failure [`mlm_last_error`] describes the problem on the
//! calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mlm::cells::{color_of, connected_regions, label_grid, Connectivity, GridSpec, LabelGrid, LabelOptions};
use mlm::geometry::Vec3;
use mlm::metrics::{cell_metrics, disk_equivalent_radius};
use mlm::render::{render_mlm, RenderOptions};
use mlm::scenes::{generate_document, load_scene, save_scene, CanyonParams, SceneDocument, SceneKind};
use mlm::tracer::{CandidateEnumeration, DEFAULT_CANDIDATE_BUDGET};
use mlm::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidScene = 3,
    BudgetExceeded = 4,
    Io = 5,
    OutOfRange = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlmSceneKind {
    Canyon6b = 0,
    Canyon2b = 1,
    Fig2 = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlmConnectivity {
    Four = 0,
    Eight = 1,
}

/// Receiver grid: `nx` by `ny` samples spanning the bounds, both ends included.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlmGridSpec {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub altitude: f64,
}

/// Metrics of one cell. `avg_min_dist_m` is NaN when undefined.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlmCellMetrics {
    pub digest: [u8; 32],
    pub no_multipath: bool,
    pub sample_count: usize,
    pub area_m2: f64,
    pub avg_min_dist_m: f64,
    pub region_count: usize,
}

pub struct MlmScene(SceneDocument);

pub struct MlmLabelGrid(LabelGrid);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(error: &Error) -> MlmStatus {
    match error {
        Error::InvalidParameter(_) => MlmStatus::InvalidArgument,
        Error::InvalidFacet { .. } | Error::NonManifoldEdge { .. } | Error::SceneParse(_) | Error::SceneValidation(_) => {
            MlmStatus::InvalidScene
        }
        Error::BudgetExceeded { .. } => MlmStatus::BudgetExceeded,
        Error::Io { .. } | Error::Archive { .. } => MlmStatus::Io,
        _ => MlmStatus::Internal,
    }
}

struct Failure(MlmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MlmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MlmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MlmStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            MlmStatus::Panic
        }
    }
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(Path::new)
        .map_err(|_| Failure(MlmStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn connectivity(c: MlmConnectivity) -> Connectivity {
    match c {
        MlmConnectivity::Four => Connectivity::Four,
        MlmConnectivity::Eight => Connectivity::Eight,
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mlm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mlm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn mlm_disk_equivalent_radius(area_m2: f64) -> f64 {
    disk_equivalent_radius(area_m2)
}

/// Generates a built-in scene with default parameters.
///
/// # Safety
/// `out_scene` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn mlm_scene_generate(kind: MlmSceneKind, out_scene: *mut *mut MlmScene) -> MlmStatus {
    guard(|| {
        let slot = out(out_scene, "out_scene")?;
        let kind = match kind {
            MlmSceneKind::Canyon6b => SceneKind::Canyon6b,
            MlmSceneKind::Canyon2b => SceneKind::Canyon2b,
            MlmSceneKind::Fig2 => SceneKind::Fig2,
        };
        let doc = generate_document(kind, &CanyonParams::default())?;
        *slot = Box::into_raw(Box::new(MlmScene(doc)));
        Ok(())
    })
}

/// Loads and validates a scene file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_scene` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_scene_load(path: *const c_char, out_scene: *mut *mut MlmScene) -> MlmStatus {
    guard(|| {
        let slot = out(out_scene, "out_scene")?;
        let doc = load_scene(path_arg(path)?)?;
        *slot = Box::into_raw(Box::new(MlmScene(doc)));
        Ok(())
    })
}

/// # Safety
/// `scene` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mlm_scene_save(scene: *const MlmScene, path: *const c_char) -> MlmStatus {
    guard(|| {
        let scene = handle(scene, "scene")?;
        save_scene(&scene.0, path_arg(path)?)?;
        Ok(())
    })
}

/// # Safety
/// `scene` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_scene_facet_count(scene: *const MlmScene, out_count: *mut usize) -> MlmStatus {
    guard(|| {
        *out(out_count, "out_count")? = handle(scene, "scene")?.0.scene.len();
        Ok(())
    })
}

/// # Safety
/// `scene` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mlm_scene_free(scene: *mut MlmScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Labels a receiver grid for a transmitter at `tx[0..3]`, tracing paths of
/// up to `max_order` reflections. `workers` = 0 uses every core.
///
/// # Safety
/// `scene` must be a live handle, `tx` point to three doubles, `spec` be
/// valid and `out_grid` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_label_grid(
    scene: *const MlmScene,
    tx: *const f64,
    spec: *const MlmGridSpec,
    max_order: usize,
    workers: usize,
    out_grid: *mut *mut MlmLabelGrid,
) -> MlmStatus {
    guard(|| {
        let scene = &handle(scene, "scene")?.0.scene;
        if tx.is_null() {
            return Err(null("tx"));
        }
        let tx = Vec3::new(*tx, *tx.add(1), *tx.add(2));
        let s = handle(spec, "spec")?;
        let slot = out(out_grid, "out_grid")?;
        let spec = GridSpec {
            nx: s.nx,
            ny: s.ny,
            x_min: s.x_min,
            x_max: s.x_max,
            y_min: s.y_min,
            y_max: s.y_max,
            altitude: s.altitude,
        };
        let enumeration = CandidateEnumeration::with_budget(scene.len(), max_order, DEFAULT_CANDIDATE_BUDGET)?;
        let options = LabelOptions { workers, ..LabelOptions::default() };
        let labeling = label_grid(tx, &spec, &enumeration, scene, &options)?;
        *slot = Box::into_raw(Box::new(MlmLabelGrid(labeling.grid)));
        Ok(())
    })
}

/// # Safety
/// `grid` must be a live handle; `nx` and `ny` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_dimensions(grid: *const MlmLabelGrid, nx: *mut usize, ny: *mut usize) -> MlmStatus {
    guard(|| {
        let g = &handle(grid, "grid")?.0;
        *out(nx, "nx")? = g.nx;
        *out(ny, "ny")? = g.ny;
        Ok(())
    })
}

/// Number of distinct cells, the no-multipath cell included.
///
/// # Safety
/// `grid` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_cell_count(grid: *const MlmLabelGrid, out_count: *mut usize) -> MlmStatus {
    guard(|| {
        *out(out_count, "out_count")? = handle(grid, "grid")?.0.distinct_cells();
        Ok(())
    })
}

/// Number of connected regions over all cells, the no-multipath cell included.
///
/// # Safety
/// `grid` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_region_count(
    grid: *const MlmLabelGrid,
    connectivity_kind: MlmConnectivity,
    out_count: *mut usize,
) -> MlmStatus {
    guard(|| {
        let g = &handle(grid, "grid")?.0;
        let slot = out(out_count, "out_count")?;
        *slot = connected_regions(g, connectivity(connectivity_kind)).values().sum();
        Ok(())
    })
}

unsafe fn sample<'a>(grid: *const MlmLabelGrid, i: usize, j: usize) -> Result<&'a LabelGrid, Failure> {
    let g = &handle(grid, "grid")?.0;
    if i >= g.nx || j >= g.ny {
        return Err(Failure(MlmStatus::OutOfRange, format!("sample ({i}, {j}) outside a {}x{} grid", g.nx, g.ny)));
    }
    Ok(g)
}

/// Cell digest of sample `(i, j)`, `j` = 0 being the minimum y.
///
/// # Safety
/// `grid` must be a live handle, `digest_out` point to 32 writable bytes and
/// `no_multipath_out` be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_label(
    grid: *const MlmLabelGrid,
    i: usize,
    j: usize,
    digest_out: *mut u8,
    no_multipath_out: *mut bool,
) -> MlmStatus {
    guard(|| {
        let id = sample(grid, i, j)?.get(i, j);
        if digest_out.is_null() {
            return Err(null("digest_out"));
        }
        ptr::copy_nonoverlapping(id.digest().as_ptr(), digest_out, 32);
        if let Some(flag) = no_multipath_out.as_mut() {
            *flag = id.is_no_multipath();
        }
        Ok(())
    })
}

/// RGBA color of sample `(i, j)`.
///
/// # Safety
/// `grid` must be a live handle and `rgba_out` point to 4 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_color(grid: *const MlmLabelGrid, i: usize, j: usize, rgba_out: *mut u8) -> MlmStatus {
    guard(|| {
        let color = color_of(&sample(grid, i, j)?.get(i, j));
        if rgba_out.is_null() {
            return Err(null("rgba_out"));
        }
        ptr::copy_nonoverlapping(color.0.as_ptr(), rgba_out, 4);
        Ok(())
    })
}

/// Per-cell metrics ordered by digest. `out_total` receives the number of
/// cells; at most `capacity` entries are written to `metrics_out`, which may
/// be null when `capacity` is 0.
///
/// # Safety
/// `grid` must be a live handle, `metrics_out` hold `capacity` entries and
/// `out_total` be writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_metrics(
    grid: *const MlmLabelGrid,
    connectivity_kind: MlmConnectivity,
    metrics_out: *mut MlmCellMetrics,
    capacity: usize,
    out_total: *mut usize,
) -> MlmStatus {
    guard(|| {
        let g = &handle(grid, "grid")?.0;
        let total = out(out_total, "out_total")?;
        if capacity > 0 && metrics_out.is_null() {
            return Err(null("metrics_out"));
        }
        let metrics = cell_metrics(g, connectivity(connectivity_kind));
        *total = metrics.len();
        for (k, m) in metrics.iter().take(capacity).enumerate() {
            metrics_out.add(k).write(MlmCellMetrics {
                digest: *m.cell.digest(),
                no_multipath: m.no_multipath,
                sample_count: m.sample_count,
                area_m2: m.area_m2,
                avg_min_dist_m: m.avg_min_dist_m.unwrap_or(f64::NAN),
                region_count: m.region_count,
            });
        }
        Ok(())
    })
}

/// Encodes the map as an RGBA PNG. The buffer is owned by the caller and
/// must be released with [`mlm_buffer_free`].
///
/// # Safety
/// `grid` must be a live handle; `out_data` and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_render_png(
    grid: *const MlmLabelGrid,
    scale: u32,
    overlay_tx: bool,
    out_data: *mut *mut u8,
    out_len: *mut usize,
) -> MlmStatus {
    guard(|| {
        let g = &handle(grid, "grid")?.0;
        let data = out(out_data, "out_data")?;
        let len = out(out_len, "out_len")?;
        let options = RenderOptions { scale, overlay_tx, ..RenderOptions::default() };
        let bytes = render_mlm(g, &options)?.into_boxed_slice();
        *len = bytes.len();
        *data = Box::into_raw(bytes).cast();
        Ok(())
    })
}

/// # Safety
/// `data` and `len` must come from one call to [`mlm_grid_render_png`], or
/// `data` be null.
#[no_mangle]
pub unsafe extern "C" fn mlm_buffer_free(data: *mut u8, len: usize) {
    if !data.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(data, len)));
    }
}

/// # Safety
/// `grid` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mlm_grid_free(grid: *mut MlmLabelGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}
