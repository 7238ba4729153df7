use std::ffi::{c_char, CStr};
use std::ptr;

use zetacert_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { zc_string_free(s) };
    out
}

fn last_error() -> String {
    take_string(zc_last_error_message())
}

#[test]
fn bernoulli_and_version() {
    let mut s = ptr::null_mut();
    assert_eq!(zc_bernoulli(12, &mut s), ZcErrorCode::Ok);
    assert_eq!(take_string(s), "-691/2730");
    assert_eq!(zc_bernoulli(-1, &mut s), ZcErrorCode::InvalidInput);
    assert!(last_error().contains("nonnegative"));
    let v = unsafe { CStr::from_ptr(zc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_and_negative_inputs() {
    assert_eq!(zc_bernoulli(3, ptr::null_mut()), ZcErrorCode::NullPointer);
    assert!(last_error().contains("null"));
    let mut t = ptr::null_mut();
    assert_eq!(zc_form_table_build(-5, 1, 124, true, &mut t), ZcErrorCode::InvalidInput);
    assert!(t.is_null());
    assert_eq!(zc_form_table_build(5, 1, 100, true, &mut t), ZcErrorCode::Construction);
    assert_eq!(zc_form_table_build(5, 1, 124, false, &mut t), ZcErrorCode::Hypothesis);
    let mut pass = false;
    assert_eq!(zc_form_table_verify_integrality(ptr::null(), &mut pass), ZcErrorCode::NullPointer);
    assert_eq!(zc_certificate_compute(5, 8, 1, 1000, &mut ptr::null_mut()), ZcErrorCode::NotAdmissible);
    unsafe {
        zc_form_table_free(ptr::null_mut());
        zc_certificate_free(ptr::null_mut());
        zc_string_free(ptr::null_mut());
    }
}

#[test]
fn error_message_cleared_on_success() {
    let mut s = ptr::null_mut();
    assert_eq!(zc_bernoulli(-2, &mut s), ZcErrorCode::InvalidInput);
    assert_eq!(zc_bernoulli(2, &mut s), ZcErrorCode::Ok);
    assert_eq!(take_string(s), "1/6");
    assert!(zc_last_error_message().is_null());
}

#[test]
fn table_roundtrip() {
    let mut t = ptr::null_mut();
    assert_eq!(zc_form_table_build(5, 1, 124, true, &mut t), ZcErrorCode::Ok);
    let (mut e, mut n) = (0, 0);
    assert_eq!(zc_form_table_dims(t, &mut e, &mut n), ZcErrorCode::Ok);
    assert_eq!((e, n), (5, 124));
    let mut s = ptr::null_mut();
    assert_eq!(zc_form_table_rho(t, 1, &mut s), ZcErrorCode::Ok);
    assert_eq!(take_string(s), "0");
    assert_eq!(zc_form_table_r(t, 6, 1, &mut s), ZcErrorCode::InvalidInput);
    assert_eq!(zc_form_table_r(t, 5, 124, &mut s), ZcErrorCode::Ok);
    assert!(!take_string(s).is_empty());
    let mut pass = false;
    assert_eq!(zc_form_table_verify_integrality(t, &mut pass), ZcErrorCode::Ok);
    assert!(pass);
    assert_eq!(zc_form_table_to_json(t, false, &mut s), ZcErrorCode::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["params"]["M_0"], 124);
    assert!(json.get("timing_ms").is_none());
    unsafe { zc_form_table_free(t) };
}

#[test]
fn constants_and_zeta() {
    let mut c = ZcConstants {
        p: 0,
        varpi: 0.0,
        c_p: 0.0,
        greatest_odd_le_cp: 0,
        s_min: 0,
        bounds_ok: false,
        odd_threshold_ok: false,
    };
    assert_eq!(zc_constants(5, &mut c), ZcErrorCode::Ok);
    assert_eq!((c.greatest_odd_le_cp, c.s_min), (13, 10));
    assert!((c.c_p - 14.6698).abs() < 1e-4 && c.bounds_ok && c.odd_threshold_ok);
    assert_eq!(zc_constants(4, &mut c), ZcErrorCode::InvalidInput);

    let (mut v, mut has) = (0, false);
    let mut d = ptr::null_mut();
    assert_eq!(zc_zeta_digits(5, 3, 20, &mut v, &mut has, &mut d), ZcErrorCode::Ok);
    assert!(has);
    assert_eq!(v, 0);
    assert_eq!(take_string(d), "2,4,1,2,3,1,4,2,0,2,0,0,2,3,3,0,0,4,2,4");
    assert_eq!(zc_zeta_digits(5, 2, 20, &mut v, &mut has, &mut d), ZcErrorCode::Ok);
    assert!(!has);
    take_string(d);
    assert_eq!(zc_zeta_digits(5, 1, 20, &mut v, &mut has, &mut d), ZcErrorCode::InvalidInput);
}

#[test]
fn certificate_handle() {
    let mut c = ptr::null_mut();
    assert_eq!(zc_certificate_compute(5, 1, 3, 660, &mut c), ZcErrorCode::Ok);
    let mut pass = false;
    assert_eq!(zc_certificate_passed(c, &mut pass), ZcErrorCode::Ok);
    assert!(pass);
    let (mut pred, mut comp, mut has) = (0, 0, false);
    assert_eq!(zc_certificate_valuations(c, &mut pred, &mut comp, &mut has), ZcErrorCode::Ok);
    assert_eq!((pred, comp, has), (649, 649, true));
    let mut s = ptr::null_mut();
    assert_eq!(zc_certificate_to_json(c, true, &mut s), ZcErrorCode::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["N"], 3);
    assert!(json.get("timings").is_none());
    unsafe { zc_certificate_free(c) };
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/zetacert.h")).unwrap();
    for needle in [
        "#ifndef ZETACERT_H",
        "typedef struct ZcFormTable ZcFormTable;",
        "typedef struct ZcCertificate ZcCertificate;",
        "ZC_ERROR_CODE_OK = 0",
        "ZC_ERROR_CODE_INVALID_INPUT = 1",
        "ZC_ERROR_CODE_PANIC = 11",
        "typedef struct ZcConstants",
        "char *zc_last_error_message(void);",
        "void zc_string_free(char *s);",
        "zc_form_table_build(int64_t p,",
        "void zc_form_table_free(struct ZcFormTable *table);",
        "zc_certificate_compute(",
        "void zc_certificate_free(struct ZcCertificate *cert);",
        "zc_zeta_digits(",
        "zc_bernoulli(int64_t n, char **out);",
        "zc_constants(int64_t p, struct ZcConstants *out);",
    ] {
        assert!(header.contains(needle), "header lacks {needle:?}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "zetacert.h"

int main(void) {
    char *b = NULL;
    if (zc_bernoulli(12, &b) != ZC_ERROR_CODE_OK) return 1;
    printf("%s\n", b);
    zc_string_free(b);
    ZcConstants c;
    if (zc_constants(5, &c) != ZC_ERROR_CODE_OK) return 2;
    printf("%lld %lld\n", (long long)c.greatest_odd_le_cp, (long long)c.s_min);
    ZcFormTable *t = NULL;
    ZcErrorCode rc = zc_form_table_build(5, 1, -3, true, &t);
    char *msg = zc_last_error_message();
    printf("%d %s\n", (int)rc, msg);
    zc_string_free(msg);
    return t == NULL ? 0 : 3;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let Ok(cc) = std::env::var("CC").or_else(|_| which("cc").ok_or(())) else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // target/<profile>/deps/ffi-* -> target/<profile>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libzetacert_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = std::env::temp_dir().join(format!("zetacert-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = std::process::Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "-691/2730\n13 10\n1 n must be nonnegative, got -3\n");
    std::fs::remove_dir_all(&dir).ok();
}

fn which(name: &str) -> Option<String> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|d| d.join(name))
        .find(|p| p.is_file())
        .map(|p| p.to_string_lossy().into_owned())
}
