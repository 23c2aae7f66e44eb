//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "mlm.h"

int main(void) {
    MlmScene *scene = NULL;
    if (mlm_scene_generate(MLM_SCENE_KIND_FIG2, &scene) != MLM_STATUS_OK) return 10;
    MlmGridSpec spec = { 120, 60, -0.5, 2.5, -1.5, 1.5, 0.0 };
    double tx[3] = { 0.0, 0.0, 0.0 };
    MlmLabelGrid *grid = NULL;
    if (mlm_label_grid(scene, tx, &spec, 1, 1, &grid) != MLM_STATUS_OK) return 11;
    size_t cells = 0;
    if (mlm_grid_cell_count(grid, &cells) != MLM_STATUS_OK) return 12;
    if (mlm_grid_color(grid, 500, 0, (uint8_t[4]){0}) != MLM_STATUS_OUT_OF_RANGE) return 13;
    printf("%zu %s\n", cells, mlm_last_error() ? "err" : "none");
    mlm_grid_free(grid);
    mlm_scene_free(scene);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(cc.status.success());

    let lib = target_dir().join("libmlm_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");

    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "7 err");
}
