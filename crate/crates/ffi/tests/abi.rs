use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use levelh_ffi::*;

fn hvector(v: &[u64]) -> *mut LhHVector {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { lh_hvector_new(v.as_ptr(), v.len(), &mut h) }, LhStatus::Ok);
    h
}

fn entries(h: *const LhHVector) -> Vec<u64> {
    let mut buf = [0u64; 32];
    let mut len = 0;
    assert_eq!(unsafe { lh_hvector_entries(h, buf.as_mut_ptr(), buf.len(), &mut len) }, LhStatus::Ok);
    buf[..len].to_vec()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lh_last_error_message()) }.to_str().unwrap().to_owned()
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { lh_string_free(s) };
    out
}

#[test]
fn decide_returns_a_verified_witness() {
    let h = hvector(&[1, 5, 11, 21, 36, 21, 11, 5, 2]);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { lh_decide(h, 0, 8, &mut c) }, LhStatus::Ok);
    let mut v = LhVerdict::Unknown;
    assert_eq!(unsafe { lh_certificate_verdict(c, &mut v) }, LhStatus::Ok);
    assert_eq!(v, LhVerdict::Level);

    let mut m = ptr::null_mut();
    assert_eq!(unsafe { lh_certificate_witness(c, &mut m) }, LhStatus::Ok);
    assert!(!m.is_null());
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { lh_module_hvector(m, &mut back) }, LhStatus::Ok);
    assert_eq!(entries(back), [1, 5, 11, 21, 36, 21, 11, 5, 2]);
    let mut socle = [0u64; 9];
    let mut len = 0;
    assert_eq!(unsafe { lh_module_socle(m, socle.as_mut_ptr(), socle.len(), &mut len) }, LhStatus::Ok);
    assert_eq!(socle[..len], [0, 0, 0, 0, 0, 0, 0, 0, 2]);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { lh_certificate_to_json(c, &mut json) }, LhStatus::Ok);
    let value: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(value["verdict"], "Level");
    unsafe {
        lh_hvector_free(back);
        lh_module_free(m);
        lh_certificate_free(c);
        lh_hvector_free(h);
    }
}

#[test]
fn not_level_certificate_names_its_stage() {
    let h = hvector(&[1, 3, 6, 10, 9, 7, 5, 2]);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { lh_decide(h, 0, 8, &mut c) }, LhStatus::Ok);
    let mut stage = ptr::null_mut();
    assert_eq!(unsafe { lh_certificate_stage(c, &mut stage) }, LhStatus::Ok);
    assert_eq!(take_string(stage), "three-part-screen");
    let mut m = ptr::dangling_mut();
    assert_eq!(unsafe { lh_certificate_witness(c, &mut m) }, LhStatus::Ok);
    assert!(m.is_null());
    unsafe {
        lh_certificate_free(c);
        lh_hvector_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut h = ptr::null_mut();
    let bad = [2u64, 3];
    assert_eq!(unsafe { lh_hvector_new(bad.as_ptr(), bad.len(), &mut h) }, LhStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { lh_hvector_new(ptr::null(), 0, &mut h) }, LhStatus::NullPointer);

    let text = CString::new("y1^2 +").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { lh_module_parse(text.as_ptr(), &mut m) }, LhStatus::Parse);

    let mut x = 0;
    assert_eq!(unsafe { lh_macaulay_upper(u64::MAX, 1, &mut x) }, LhStatus::Overflow);
    assert_eq!(unsafe { lh_macaulay_upper(7, 3, &mut x) }, LhStatus::Ok);
    assert_eq!(x, 9);
    assert!(last_error().is_empty());

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lh_max_hvector(6, 6, 6, &mut out) }, LhStatus::HypothesisNotMet);

    let h = hvector(&[1, 3, 4, 3, 2]);
    let mut small = [0u64; 2];
    let mut len = 0;
    assert_eq!(unsafe { lh_hvector_entries(h, small.as_mut_ptr(), small.len(), &mut len) }, LhStatus::BufferTooSmall);
    assert_eq!(len, 5);
    unsafe { lh_hvector_free(h) };
}

#[test]
fn module_text_parses() {
    let text = CString::new("y1^4 + y2^4\ny3^4\n").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { lh_module_parse(text.as_ptr(), &mut m) }, LhStatus::Ok);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { lh_module_hvector(m, &mut h) }, LhStatus::Ok);
    assert_eq!(entries(h), [1, 3, 3, 3, 2]);
    let mut ok = false;
    assert_eq!(unsafe { lh_is_o_sequence(h, &mut ok) }, LhStatus::Ok);
    assert!(ok);
    unsafe {
        lh_hvector_free(h);
        lh_module_free(m);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "levelh.h"

int main(void) {
    uint64_t v[] = {1, 3, 6, 10, 9, 7, 5, 2};
    LhHVector *h = NULL;
    LhCertificate *c = NULL;
    LhVerdict verdict;
    char *stage = NULL;
    if (lh_hvector_new(v, 8, &h) != LH_STATUS_OK) return 2;
    if (lh_decide(h, 0, 8, &c) != LH_STATUS_OK) return 3;
    if (lh_certificate_verdict(c, &verdict) != LH_STATUS_OK) return 4;
    if (lh_certificate_stage(c, &stage) != LH_STATUS_OK) return 5;
    printf("%d %s\n", (int)verdict, stage);
    lh_string_free(stage);
    lh_certificate_free(c);
    lh_hvector_free(h);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let libdir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    if !libdir.join("liblevelh_ffi.so").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or shared library");
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&libdir)
        .arg("-llevelh_ffi")
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &libdir).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 three-part-screen\n");
    std::fs::remove_dir_all(dir).ok();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("levelh-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
