use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use posethopf_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { ph_string_free(p) };
    s
}

fn last_error() -> String {
    let p = ph_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn parse(text: &str) -> *mut PhPoset {
    let c = CString::new(text).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ph_poset_parse(c.as_ptr(), &mut h) }, PhStatus::Ok);
    h
}

#[test]
fn poset_handle_round_trip() {
    let h = parse("3:1-3,2-3");
    let mut n = 0usize;
    assert_eq!(unsafe { ph_poset_size(h, &mut n) }, PhStatus::Ok);
    assert_eq!(n, 3);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_poset_to_text(h, &mut s) }, PhStatus::Ok);
    assert_eq!(take_string(s), "3:1-3,2-3");
    let mut psi = 0u64;
    assert_eq!(unsafe { ph_num_templates(h, &mut psi) }, PhStatus::Ok);
    assert_eq!(psi, 1);
    unsafe { ph_poset_free(h) };
}

#[test]
fn coproduct_json_has_all_splittings() {
    let h = parse("2:1-2");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_coproduct_json(h, &mut s) }, PhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    unsafe { ph_poset_free(h) };
}

#[test]
fn errors_set_status_and_message() {
    let c = CString::new("2:1-2,2-1").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ph_poset_parse(c.as_ptr(), &mut h) }, PhStatus::Cycle);
    assert!(h.is_null());
    assert!(last_error().contains("cycle"));

    let mut n = 0usize;
    assert_eq!(unsafe { ph_enumerate_count(12, &mut n) }, PhStatus::SizeExceeded);
    assert_eq!(unsafe { ph_poset_size(ptr::null(), &mut n) }, PhStatus::NullPointer);
    assert_eq!(unsafe { ph_poset_parse(ptr::null(), &mut h) }, PhStatus::NullPointer);

    let bad = CString::new("{\"t\": [\"0\"]}").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_grow_json(bad.as_ptr(), 3, &mut s) }, PhStatus::Model);
    assert!(s.is_null());
}

#[test]
fn counts_and_growth() {
    let mut n = 0usize;
    assert_eq!(unsafe { ph_enumerate_count(4, &mut n) }, PhStatus::Ok);
    assert_eq!(n, 16);

    let c = CString::new("{\"t\": [\"1\", \"1\"]}").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_grow_json(c.as_ptr(), 3, &mut s) }, PhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    // forests on three elements: antichain, chain plus point, V, chain
    assert_eq!(v.as_array().unwrap().len(), 4);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_check_subhopf_json(c.as_ptr(), 4, &mut s) }, PhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["status"], "closed");

    let c = CString::new("{\"t\": [\"1\", \"1\", \"2\"]}").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_check_subhopf_json(c.as_ptr(), 4, &mut s) }, PhStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(v["status"], "notclosed");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ph_qbinom_text(4, 2, &mut s) }, PhStatus::Ok);
    assert_eq!(take_string(s), "q^4 + q^3 + 2*q^2 + q + 1");
}

#[test]
fn header_declares_every_export() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/posethopf.h")).unwrap();
    for f in [
        "ph_last_error_message",
        "ph_string_free",
        "ph_poset_parse",
        "ph_poset_free",
        "ph_poset_size",
        "ph_poset_to_text",
        "ph_num_templates",
        "ph_coproduct_json",
        "ph_enumerate_count",
        "ph_grow_json",
        "ph_check_subhopf_json",
        "ph_qbinom_text",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct PhPoset PhPoset;"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "posethopf.h"

int main(void) {
    PhPoset *p = NULL;
    if (ph_poset_parse("4:1-2,3-4", &p) != PH_STATUS_OK) return 1;
    size_t n = 0;
    if (ph_poset_size(p, &n) != PH_STATUS_OK || n != 4) return 2;
    char *text = NULL;
    if (ph_poset_to_text(p, &text) != PH_STATUS_OK) return 3;
    printf("%s\n", text);
    ph_string_free(text);
    ph_poset_free(p);
    if (ph_poset_parse("2:1-2,2-1", &p) != PH_STATUS_CYCLE) return 4;
    printf("%s\n", ph_last_error_message());
    return 0;
}
"#;

/// Compiles a small C program against the generated header and the shared
/// library. Needs a C compiler on the path.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target =
        std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| manifest.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let libdir = target.join(profile);
    if !libdir.join("libposethopf_ffi.so").exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or shared library in {}", libdir.display());
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let exe = tmp.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&libdir)
        .arg("-lposethopf_ffi")
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).env("LD_LIBRARY_PATH", &libdir).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next(), Some("4:1-2,3-4"));
    assert!(stdout.contains("cycle"));
}
