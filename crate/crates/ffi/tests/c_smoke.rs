//! Compiles a C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "spectral_tail.h"

int main(void) {
    double v = 0.0;
    if (st_bound_legendre(5, 1.5, 1.0, &v) != ST_OK || !(v > 0.0)) return 10;
    if (st_log_gamma(-1.0, &v) != ST_ERR_DOMAIN) return 11;
    char msg[256];
    if (st_last_error_message(msg, sizeof msg) < 2) return 12;
    StQuadratureRule *rule = NULL;
    if (st_quadrature_rule_new(8, 0.5, 0.5, &rule) != ST_OK) return 13;
    size_t n = st_quadrature_rule_len(rule);
    double x[8], w[8];
    if (n != 8 || st_quadrature_rule_copy(rule, x, w, n) != ST_OK) return 14;
    double s = 0.0;
    for (size_t i = 0; i < n; i++) s += w[i] * x[i] * x[i];
    st_quadrature_rule_free(rule);
    /* ∫ x² √(1-x²) dx = π/8 */
    if (fabs(s - 3.14159265358979323846 / 8.0) > 1e-14) return 15;
    StThetaProfile *p = NULL;
    if (st_theta_profile_new(10, 0.0, 100, &p) != ST_OK) return 16;
    double tmax; size_t arg;
    if (st_theta_profile_max(p, &tmax, &arg) != ST_OK || tmax < 3.5 || tmax > 4.5) return 17;
    st_theta_profile_free(p);
    printf("ok\n");
    return 0;
}
"#;

fn profile_dir() -> PathBuf {
    // target/<profile>/deps/c_smoke-<hash>
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

fn find_cc() -> Option<String> {
    let candidates = [std::env::var("CC").ok(), Some("cc".into())];
    candidates.into_iter().flatten().find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = find_cc() else {
        eprintln!("no C compiler found; C smoke test not run");
        return;
    };
    let lib = profile_dir().join("libspectral_tail_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("st-c-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spectral_tail.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let names: Vec<&str> = src
        .lines()
        .filter_map(|l| l.strip_prefix("pub unsafe extern \"C\" fn "))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(names.len() >= 18);
    for n in names {
        assert!(header.contains(&format!("{n}(")), "{n} missing from header");
    }
    for c in ["ST_OK", "ST_ERR_DOMAIN", "ST_ERR_ANALYTICITY", "ST_ERR_PRECISION", "ST_ERR_NUMERICAL", "ST_ERR_NULL_POINTER", "ST_ERR_PANIC"] {
        assert!(header.contains(&format!("#define {c} ")), "{c}");
    }
}
