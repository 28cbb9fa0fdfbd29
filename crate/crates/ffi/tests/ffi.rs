use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use alba_ffi::*;

fn take(s: *mut c_char) -> Option<String> {
    if s.is_null() {
        return None;
    }
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { alba_string_free(s) };
    Some(out)
}

fn run(input: &str) -> (AlbaStatus, *mut AlbaHandle) {
    let c = CString::new(input).unwrap();
    let mut h = ptr::null_mut();
    let status = unsafe { alba_run(c.as_ptr(), &mut h) };
    (status, h)
}

#[test]
fn worked_example_through_the_c_abi() {
    let (status, h) = run("T <= box(box p -> p)");
    assert_eq!(status, AlbaStatus::Ok);
    unsafe {
        assert_eq!(alba_result_status(h), AlbaStatus::Ok);
        assert_eq!(alba_result_quasi_count(h), 1);
        assert_eq!(
            take(alba_result_quasi(h, 0)).unwrap(),
            "box m1 <= m0 & i1 -> m2 <= m1 & bdiam i1 <= m2 => i0 <= m0"
        );
        assert!(take(alba_result_quasi(h, 1)).is_none());
        assert_eq!(take(alba_result_fo(h, true)).unwrap(), "A i0. A i1. (R(i0,i1) -> R(i1,i1))");
        let json: serde_json::Value = serde_json::from_str(&take(alba_result_fo_json(h, true)).unwrap()).unwrap();
        assert_eq!(json["text"], "A i0. A i1. (R(i0,i1) -> R(i1,i1))");
        let trace: serde_json::Value = serde_json::from_str(&take(alba_result_trace_json(h)).unwrap()).unwrap();
        assert_eq!(trace.as_array().unwrap().len(), 1);
        assert!(take(alba_result_failure(h)).is_none());
        assert_eq!(alba_result_verify(h, 3), AlbaStatus::Ok);
        assert_eq!(alba_result_verify(h, 0), AlbaStatus::OutOfRange);
        alba_result_free(h);
    }
}

#[test]
fn failures_and_errors() {
    let (status, h) = run("p <= q");
    assert_eq!(status, AlbaStatus::Failure);
    assert!(!h.is_null());
    unsafe {
        assert_eq!(alba_result_status(h), AlbaStatus::Failure);
        assert_eq!(alba_result_quasi_count(h), 0);
        assert!(take(alba_result_failure(h)).unwrap().starts_with("not an inductive inequality"));
        assert!(take(alba_result_fo(h, true)).is_none());
        assert_eq!(alba_result_verify(h, 2), AlbaStatus::Failure);
        alba_result_free(h);
    }

    let (status, h) = run("p <= (");
    assert_eq!(status, AlbaStatus::ParseError);
    assert!(h.is_null());
    assert!(take(alba_last_error()).unwrap().contains("parse error"));

    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(alba_run(ptr::null(), &mut h), AlbaStatus::NullArgument);
        let c = CString::new("p <= p").unwrap();
        assert_eq!(alba_run(c.as_ptr(), ptr::null_mut()), AlbaStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(alba_run(bad.as_ptr() as *const c_char, &mut h), AlbaStatus::InvalidUtf8);
        assert_eq!(alba_result_status(ptr::null()), AlbaStatus::NullArgument);
        assert_eq!(alba_result_quasi_count(ptr::null()), 0);
        alba_result_free(ptr::null_mut());
        alba_string_free(ptr::null_mut());
    }
}

#[test]
fn classification_json() {
    let mut out = ptr::null_mut();
    let c = CString::new("box p <= box box p").unwrap();
    assert_eq!(unsafe { alba_check_inductive(c.as_ptr(), &mut out) }, AlbaStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out).unwrap()).unwrap();
    assert_eq!(v["inductive"], true);

    let c = CString::new("p <= q").unwrap();
    assert_eq!(unsafe { alba_check_inductive(c.as_ptr(), &mut out) }, AlbaStatus::Failure);
    let v: serde_json::Value = serde_json::from_str(&take(out).unwrap()).unwrap();
    assert_eq!(v["failure"]["reason"], "polarity");
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/alba.h")).unwrap();
    for name in [
        "alba_run",
        "alba_result_status",
        "alba_result_quasi_count",
        "alba_result_quasi",
        "alba_result_failure",
        "alba_result_fo",
        "alba_result_fo_json",
        "alba_result_trace_json",
        "alba_result_verify",
        "alba_check_inductive",
        "alba_last_error",
        "alba_result_free",
        "alba_string_free",
        "typedef struct AlbaHandle AlbaHandle;",
        "ALBA_STATUS_COUNTEREXAMPLE = 3",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // the test binary lives in <target>/<profile>/deps
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libalba_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = profile_dir.join(format!("alba-ffi-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("A i0. A i1. (R(i0,i1) -> R(i1,i1))\n"));
    assert!(text.contains("parse error"));
}
