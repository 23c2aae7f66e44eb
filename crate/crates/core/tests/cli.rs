use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mlm::scenes::load_scene;

fn mlm(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlm")).args(args).current_dir(cwd).env_remove("MLM_WORKERS").output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn scene_command_writes_loadable_scenes() {
    let tmp = tempfile::tempdir().unwrap();
    ok(&mlm(&["scene", "fig2", "-o", "fig2.json"], tmp.path()));
    assert_eq!(load_scene(&tmp.path().join("fig2.json")).unwrap().scene.len(), 2);
    ok(&mlm(&["scene", "canyon6b", "-o", "c6.json"], tmp.path()));
    assert_eq!(load_scene(&tmp.path().join("c6.json")).unwrap().scene.len(), 31);
    ok(&mlm(&["scene", "canyon2b", "--no-ground", "-o", "c2.json"], tmp.path()));
    assert_eq!(load_scene(&tmp.path().join("c2.json")).unwrap().scene.len(), 10);
    ok(&mlm(&["scene", "canyon6b", "--heights", "20,30,40,50,45,35", "-o", "tall.json"], tmp.path()));
}

#[test]
fn bad_parameters_exit_with_user_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = mlm(&["scene", "canyon6b", "--main-street-width", "-5", "-o", "x.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("main street width"));
    assert!(!tmp.path().join("x.json").exists());

    let out = mlm(&["scene", "canyon6b", "--heights", "25,25", "-o", "x.json"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(mlm(&["scene", "nowhere", "-o", "x.json"], tmp.path()).status.code(), Some(1));
    assert_eq!(mlm(&["sweep", "--scene", "missing.json", "-o", "out"], tmp.path()).status.code(), Some(1));
    assert_eq!(mlm(&["--help"], tmp.path()).status.code(), Some(0));

    fs::write(tmp.path().join("broken.json"), "{ \"version\": \"mlm-scene/1\",\n  \"facets\": oops }").unwrap();
    let out = mlm(&["sweep", "--scene", "broken.json", "-o", "out"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn fig2_sweep_reports_seven_cells_and_eleven_regions() {
    let tmp = tempfile::tempdir().unwrap();
    ok(&mlm(&["scene", "fig2", "-o", "fig2.json"], tmp.path()));
    let stdout = ok(&mlm(
        &["sweep", "--scene", "fig2.json", "-o", "f2", "--tx-count", "1", "--nx", "600", "--ny", "300", "-q"],
        tmp.path(),
    ));
    assert!(stdout.contains("7 cells, 11 regions"), "{stdout}");
    let s = summary(&tmp.path().join("f2"));
    assert_eq!(s["snapshots"][0]["cells"], 7);
    assert_eq!(s["snapshots"][0]["regions"], 11);
    assert_eq!(s["distinct_cells"], 7);
    for name in ["snapshot_000.mlmgrid", "snapshot_000.png", "cells.json", "cells.csv", "metrics.csv"] {
        assert!(tmp.path().join("f2").join(name).exists(), "{name}");
    }
}

#[test]
fn budget_overflow_names_the_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    ok(&mlm(&["scene", "canyon6b", "-o", "c6.json"], tmp.path()));
    let out = mlm(&["sweep", "--scene", "c6.json", "-o", "o", "--max-order", "6", "--nx", "4", "--ny", "4"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("N = 31") && err.contains("K = 6") && err.contains("10000000"), "{err}");
}

#[test]
fn worker_count_does_not_change_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    ok(&mlm(&["scene", "canyon6b", "-o", "c6.json"], tmp.path()));
    let base = ["sweep", "--scene", "c6.json", "--tx-count", "3", "--nx", "40", "--ny", "60", "-q", "-o"];
    let one = Command::new(env!("CARGO_BIN_EXE_mlm"))
        .args(base)
        .arg("one")
        .env("MLM_WORKERS", "1")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    ok(&one);
    ok(&mlm(&[&base[..], &["many", "--workers", "3", "--chunk-size", "5"]].concat(), tmp.path()));
    let names: Vec<_> = fs::read_dir(tmp.path().join("one")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 3 * 2 + 4);
    for name in names {
        let a = fs::read(tmp.path().join("one").join(&name)).unwrap();
        let b = fs::read(tmp.path().join("many").join(&name)).unwrap();
        assert!(a == b, "{name:?} differs");
    }
}

#[test]
fn report_overlays_sweeps() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    ok(&mlm(&["scene", "canyon6b", "-o", "c6.json"], t));
    ok(&mlm(&["scene", "canyon2b", "-o", "c2.json"], t));
    for (scene, out) in [("c6.json", "s6"), ("c2.json", "s2")] {
        ok(&mlm(&["sweep", "--scene", scene, "-o", out, "--tx-count", "3", "--nx", "60", "--ny", "60", "-q"], t));
    }
    let table = ok(&mlm(&["report", "s6", "s2", "-o", "rep"], t));
    assert!(table.contains("canyon6b") && table.contains("canyon2b") && table.contains("Median"), "{table}");

    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(t.join("rep/report.json")).unwrap()).unwrap();
    let series = report["series"].as_array().unwrap();
    assert_eq!(series.len(), 2);
    for s in series {
        for key in ["area_histogram", "distance_histogram"] {
            let h = &s[key];
            let edges: Vec<f64> = h["edges"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
            let dens: Vec<f64> = h["densities"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
            assert_eq!(dens.len(), 30);
            let integral: f64 = dens.iter().zip(edges.windows(2)).map(|(d, e)| d * (e[1] - e[0])).sum();
            assert!((integral - 1.0).abs() < 1e-9, "{integral}");
        }
    }
    let csv = fs::read_to_string(t.join("rep/histograms.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 30);
    assert!(t.join("rep/table.txt").exists());
}

#[test]
fn single_cell_sweep_has_equal_mean_and_median() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    ok(&mlm(&["scene", "fig2", "-o", "fig2.json"], t));
    // Left of both walls every receiver sees the transmitter and nothing else.
    ok(&mlm(
        &["sweep", "--scene", "fig2.json", "-o", "one", "--tx-count", "1", "--nx", "20", "--ny", "20", "--bounds", "-0.5,0.2,-0.3,0.3", "-q"],
        t,
    ));
    assert_eq!(summary(&t.join("one"))["snapshots"][0]["cells"], 1);
    let table = ok(&mlm(&["report", "one", "-o", "rep"], t));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(t.join("rep/report.json")).unwrap()).unwrap();
    let area = &report["series"][0]["area_m2"];
    assert_eq!(area["count"], 1);
    assert_eq!(area["mean"], area["median"]);
    let pixel = (0.7 / 19.0) * (0.6 / 19.0);
    assert!((area["mean"].as_f64().unwrap() - 400.0 * pixel).abs() < 1e-9);
    assert!(table.contains("n/a"), "{table}");
}

#[test]
fn report_rejects_missing_or_corrupt_sweeps() {
    let tmp = tempfile::tempdir().unwrap();
    let t = tmp.path();
    assert_eq!(mlm(&["report", "nothing", "-o", "rep"], t).status.code(), Some(1));
    fs::create_dir(t.join("bad")).unwrap();
    fs::write(t.join("bad/summary.json"), "{\"scene\": \"x\"}").unwrap();
    fs::write(t.join("bad/metrics.csv"), "snapshot,cell\n0,zz\n").unwrap();
    let out = mlm(&["report", "bad", "-o", "rep"], t);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("metrics.csv"));
}
