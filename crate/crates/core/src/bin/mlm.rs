use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mlm::cells::Connectivity;
use mlm::geometry::Vec3;
use mlm::metrics::PoolingOptions;
use mlm::scenes::{generate_document, load_scene, save_scene, CanyonParams, SceneKind};
use mlm::sweep::{build_report, report_table, run_sweep, write_report, SweepConfig};
use mlm::{Error, Result};

#[derive(Parser)]
#[command(name = "mlm", version, about = "Multipath lifetime maps: scenes, sweeps and reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in scene file.
    Scene(SceneArgs),
    /// Label a receiver grid for a series of transmitter positions.
    Sweep(Box<SweepArgs>),
    /// Pool one or more sweeps into histograms and a mean/median table.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Canyon6b,
    Canyon2b,
    Fig2,
}

#[derive(Args)]
struct SceneArgs {
    kind: Kind,
    /// Output scene file.
    #[arg(short, long)]
    out: PathBuf,
    /// Area width (across the main street) and length, in meters.
    #[arg(long, num_args = 2, value_names = ["WIDTH", "LENGTH"], allow_negative_numbers = true)]
    area: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    main_street_width: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    cross_street_width: Option<f64>,
    /// Building footprint width and length, in meters.
    #[arg(long, num_args = 2, value_names = ["WIDTH", "LENGTH"], allow_negative_numbers = true)]
    footprint: Option<Vec<f64>>,
    /// Six comma-separated building heights in meters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    heights: Option<Vec<f64>>,
    /// Leave out the ground plane.
    #[arg(long)]
    no_ground: bool,
    /// Let building faces reflect from both sides.
    #[arg(long)]
    two_sided_buildings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConnectivityArg {
    Four,
    Eight,
}

#[derive(Args)]
struct SweepArgs {
    /// Scene file to trace.
    #[arg(long)]
    scene: PathBuf,
    /// Output directory.
    #[arg(short, long)]
    out: PathBuf,
    /// First transmitter position `x,y,z` (default from the scene file).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    tx_start: Option<Vec3>,
    /// Last transmitter position `x,y,z` (default from the scene file).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    tx_end: Option<Vec3>,
    /// Override the altitude of both transmitter endpoints.
    #[arg(long, allow_negative_numbers = true)]
    tx_altitude: Option<f64>,
    #[arg(long, default_value_t = mlm::sweep::DEFAULT_TX_COUNT)]
    tx_count: usize,
    #[arg(long, default_value_t = mlm::sweep::DEFAULT_GRID_SIZE)]
    nx: usize,
    #[arg(long, default_value_t = mlm::sweep::DEFAULT_GRID_SIZE)]
    ny: usize,
    /// Grid extent `x_min,x_max,y_min,y_max` (default from the scene file).
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    bounds: Option<[f64; 4]>,
    /// Receiver altitude (default from the scene file).
    #[arg(long, allow_negative_numbers = true)]
    rx_altitude: Option<f64>,
    #[arg(long, default_value_t = 1)]
    max_order: usize,
    /// Largest number of path candidates allowed.
    #[arg(long, default_value_t = mlm::tracer::DEFAULT_CANDIDATE_BUDGET)]
    budget: u64,
    /// Candidates traced per step for each sample.
    #[arg(long, default_value_t = 4096)]
    chunk_size: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "MLM_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value = "eight")]
    connectivity: ConnectivityArg,
    /// Pool the no-multipath cell with the others.
    #[arg(long)]
    include_no_multipath: bool,
    /// Do not keep validity vectors (skips the Hamming statistics).
    #[arg(long)]
    no_vectors: bool,
    /// Image pixels per grid sample.
    #[arg(long, default_value_t = 1)]
    scale: u32,
    /// Mark the transmitter in the images.
    #[arg(long)]
    overlay_tx: bool,
    /// No progress line.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep output directories; several are overlaid.
    #[arg(required = true)]
    sweeps: Vec<PathBuf>,
    /// Directory for report.json, histograms.csv and table.txt.
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    include_no_multipath: bool,
}

fn parse_numbers<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    values.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_vec3(s: &str) -> std::result::Result<Vec3, String> {
    parse_numbers::<3>(s).map(Vec3::from)
}

fn parse_bounds(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_numbers::<4>(s)
}

fn cmd_scene(args: SceneArgs) -> Result<()> {
    let mut p = CanyonParams::default();
    if let Some(a) = args.area {
        p.area = [a[0], a[1]];
    }
    if let Some(w) = args.main_street_width {
        p.main_street_width = w;
    }
    if let Some(w) = args.cross_street_width {
        p.cross_street_width = w;
    }
    if let Some(f) = args.footprint {
        p.building_footprint = [f[0], f[1]];
    }
    if let Some(h) = args.heights {
        p.building_heights = h
            .try_into()
            .map_err(|h: Vec<f64>| Error::InvalidParameter(format!("expected 6 building heights, got {}", h.len())))?;
    }
    p.ground = !args.no_ground;
    p.one_sided_buildings = !args.two_sided_buildings;
    let kind = match args.kind {
        Kind::Canyon6b => SceneKind::Canyon6b,
        Kind::Canyon2b => SceneKind::Canyon2b,
        Kind::Fig2 => SceneKind::Fig2,
    };
    let doc = generate_document(kind, &p)?;
    save_scene(&doc, &args.out)?;
    println!("{}: {} facets -> {}", doc.metadata.name, doc.scene.len(), args.out.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let doc = load_scene(&args.scene)?;
    let mut config = SweepConfig::from_metadata(&doc.metadata);
    if let Some(v) = args.tx_start {
        config.tx_start = v;
    }
    if let Some(v) = args.tx_end {
        config.tx_end = v;
    }
    if let Some(z) = args.tx_altitude {
        config.tx_start.z = z;
        config.tx_end.z = z;
    }
    if let Some([x_min, x_max, y_min, y_max]) = args.bounds {
        (config.grid.x_min, config.grid.x_max, config.grid.y_min, config.grid.y_max) = (x_min, x_max, y_min, y_max);
    }
    if let Some(z) = args.rx_altitude {
        config.grid.altitude = z;
    }
    config.tx_count = args.tx_count;
    config.grid.nx = args.nx;
    config.grid.ny = args.ny;
    config.max_order = args.max_order;
    config.budget = args.budget;
    config.chunk_size = args.chunk_size;
    config.workers = args.workers;
    config.retain_vectors = !args.no_vectors;
    config.connectivity = match args.connectivity {
        ConnectivityArg::Four => Connectivity::Four,
        ConnectivityArg::Eight => Connectivity::Eight,
    };
    config.pooling = PoolingOptions { include_no_multipath: args.include_no_multipath };
    config.render.scale = args.scale;
    config.render.overlay_tx = args.overlay_tx;

    let quiet = args.quiet;
    let mut progress = |done: usize, total: usize| {
        if !quiet {
            eprint!("\rsnapshot {done}/{total}");
            if done == total {
                eprintln!();
            }
            let _ = std::io::stderr().flush();
        }
    };
    let outcome = run_sweep(&doc, &config, &args.out, &mut progress)?;
    for s in &outcome.snapshots {
        println!(
            "snapshot {:03}: {} cells, {} regions ({} / {} without the no-multipath cell)",
            s.index, s.cells, s.regions, s.cells_excluding_no_multipath, s.regions_excluding_no_multipath
        );
    }
    let p = &outcome.pooled;
    let show = |v: Option<f64>| v.map_or_else(|| "n/a".into(), |v| format!("{v:.2}"));
    println!(
        "pooled over {} cells: S mean {} median {} m^2, d mean {} median {} m",
        p.area_m2.count,
        show(p.area_m2.mean),
        show(p.area_m2.median),
        show(p.avg_min_dist_m.mean),
        show(p.avg_min_dist_m.median),
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let report = build_report(&args.sweeps, PoolingOptions { include_no_multipath: args.include_no_multipath })?;
    write_report(&report, &args.out)?;
    print!("{}", report_table(&report));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Scene(a) => cmd_scene(a),
        Command::Sweep(a) => cmd_sweep(*a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 1 } else { 2 })
        }
    }
}
