//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "bvtn.h"

int main(void) {
    double nodes[2] = {0.25, 0.5};
    BvtnBd *bd = NULL;
    if (bvtn_bd_new(nodes, 2, 1, &bd) != BVTN_STATUS_OK) return 1;
    double b[2] = {1.0, 0.0}, x[2];
    if (bvtn_bd_solve(bd, b, 2, x, 2) != BVTN_STATUS_OK) return 2;
    double ev[2];
    BvtnPolicy p = bvtn_policy_default();
    if (bvtn_bd_eigenvalues(bd, &p, ev, 2, NULL) != BVTN_STATUS_OK) return 3;
    bvtn_bd_free(bd);
    if (bvtn_bd_new(nodes, 2, 5, &bd) != BVTN_STATUS_DEGREE_EXCEEDS_ROWS) return 4;
    printf("%g %g %g %g %s\n", x[0], x[1], ev[0], ev[1], bvtn_last_error_message());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/c_header-<hash> -> target/<profile>/libbvtn_ffi.a
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libbvtn_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lmpfr", "-lgmp", "-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "cc failed");

    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("2 -2 1 0.25 basis degree 5 exceeds"),
        "{text}"
    );
}
