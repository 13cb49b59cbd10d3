use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use duflo_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    duflo_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(duflo_last_error()).to_string_lossy().into_owned()
}

#[test]
fn algebra_handles() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(duflo_algebra_catalog(c("sl2").as_ptr(), &mut alg), DUFLO_OK);
        let mut dim = 0usize;
        assert_eq!(duflo_algebra_dim(alg, &mut dim), DUFLO_OK);
        assert_eq!(dim, 3);
        let mut ok = false;
        assert_eq!(duflo_algebra_validate(alg, &mut ok), DUFLO_OK);
        assert!(ok);
        assert!(duflo_last_error().is_null());
        duflo_algebra_free(alg);

        assert_eq!(duflo_algebra_catalog(c("gl9").as_ptr(), &mut alg), DUFLO_ERR_LOOKUP);
        assert!(last_error().contains("gl9"));
        assert_eq!(duflo_algebra_catalog(ptr::null(), &mut alg), DUFLO_ERR_NULL);
        assert_eq!(duflo_algebra_dim(ptr::null(), &mut dim), DUFLO_ERR_NULL);
        assert_eq!(duflo_algebra_catalog(c("sl2").as_ptr(), ptr::null_mut()), DUFLO_ERR_NULL);
        let bad = [0xffu8, 0];
        assert_eq!(duflo_algebra_catalog(bad.as_ptr().cast(), &mut alg), DUFLO_ERR_UTF8);
        duflo_algebra_free(ptr::null_mut());
    }
}

#[test]
fn json_algebras() {
    unsafe {
        let text = c(r#"{"name": "h", "labels": ["x", "y", "z"], "brackets": [{"i": 1, "j": 2, "coeffs": ["0", "0", "1"]}]}"#);
        let mut alg = ptr::null_mut();
        assert_eq!(duflo_algebra_from_json(text.as_ptr(), &mut alg), DUFLO_OK);
        let mut ok = false;
        duflo_algebra_validate(alg, &mut ok);
        assert!(ok);
        duflo_algebra_free(alg);

        assert_eq!(duflo_algebra_from_json(c("{").as_ptr(), &mut alg), DUFLO_ERR_JSON);
        let empty = c(r#"{"name": "e", "labels": []}"#);
        assert_eq!(duflo_algebra_from_json(empty.as_ptr(), &mut alg), DUFLO_ERR_STRUCTURAL);

        // [e1, e2] = e1 + e3, [e2, e3] = e2, [e1, e3] = 0 breaks Jacobi
        let broken = c(r#"{"name": "b", "labels": ["a", "b", "c"], "brackets": [
            {"i": 1, "j": 2, "coeffs": ["1", "0", "1"]}, {"i": 2, "j": 3, "coeffs": ["0", "1", "0"]}]}"#);
        assert_eq!(duflo_algebra_from_json(broken.as_ptr(), &mut alg), DUFLO_OK);
        duflo_algebra_validate(alg, &mut ok);
        assert!(!ok);
        let mut report = ptr::null_mut();
        assert_eq!(duflo_verify(alg, 0, 0, 0, &mut report), DUFLO_ERR_INVALID_ALGEBRA);
        duflo_algebra_free(alg);
    }
}

#[test]
fn verification_report() {
    unsafe {
        let mut alg = ptr::null_mut();
        duflo_algebra_catalog(c("aff1").as_ptr(), &mut alg);
        let mut report = ptr::null_mut();
        assert_eq!(duflo_verify(alg, 0, 0, 0, &mut report), DUFLO_OK);
        let mut ok = false;
        assert_eq!(duflo_report_ok(report, &mut ok), DUFLO_OK);
        assert!(ok);
        let mut json = ptr::null_mut();
        assert_eq!(duflo_report_json(report, &mut json), DUFLO_OK);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["config"]["d_max"], 3);
        assert_eq!(v["config"]["search_bound"], 5);
        assert_eq!(v["algebra"], "aff1");
        duflo_report_free(report);
        duflo_algebra_free(alg);
    }
}

#[test]
fn star_and_weights() {
    unsafe {
        let mut alg = ptr::null_mut();
        duflo_algebra_catalog(c("aff1").as_ptr(), &mut alg);
        let (mut ab, mut ba) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(duflo_star(alg, c("e1").as_ptr(), c("e2").as_ptr(), &mut ab), DUFLO_OK);
        assert_eq!(duflo_star(alg, c("e2").as_ptr(), c("e1").as_ptr(), &mut ba), DUFLO_OK);
        assert_ne!(take(ab), take(ba));
        let mut s = ptr::null_mut();
        assert_eq!(duflo_star(alg, c("e1+").as_ptr(), c("e2").as_ptr(), &mut s), DUFLO_ERR_PARSE);
        assert_eq!(duflo_star(alg, c("q").as_ptr(), c("e2").as_ptr(), &mut s), DUFLO_ERR_PARSE);
        duflo_algebra_free(alg);

        let mut d = ptr::null_mut();
        assert_eq!(duflo_bernoulli_difference(0, &mut d), DUFLO_OK);
        assert_eq!(take(d), "1");
        duflo_bernoulli_difference(3, &mut d);
        assert_eq!(take(d), "0");

        let mut est = DufloWeightEstimate::default();
        assert_eq!(duflo_weight_mc(c("1->G1, 1->G2").as_ptr(), 20_000, 9, &mut est), DUFLO_OK);
        assert_eq!((est.samples, est.seed), (20_000, 9));
        assert!((est.mean - 0.5).abs() < 4.0 * est.std_error);
        let mut again = DufloWeightEstimate::default();
        duflo_weight_mc(c("1->G1, 1->G2").as_ptr(), 20_000, 9, &mut again);
        assert_eq!(est.mean, again.mean);
        assert_eq!(duflo_weight_mc(c("1->1").as_ptr(), 10, 1, &mut est), DUFLO_ERR_STRUCTURAL);
        assert_eq!(duflo_weight_mc(c("1->G1, 1->G2").as_ptr(), 0, 1, &mut est), DUFLO_ERR_PARAMETER);
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/duflo.h");
    assert!(header.exists(), "header not generated");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["duflo_algebra_catalog", "duflo_verify", "duflo_weight_mc", "DufloWeightEstimate", "DUFLO_ERR_PANIC"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let lib = target_dir().join("libduflo_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link check: no C compiler or static library");
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("ok|"), "{stdout}");
}
