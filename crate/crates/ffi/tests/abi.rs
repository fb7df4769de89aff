use pdd_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

const YES: &str = "#tree\n((a:4,b:2)u:1,c:7)r;\n#web\na b\n#params k=2 D=8\n";

fn parse(doc: &str) -> (PddStatus, *mut PddInstance) {
    let doc = CString::new(doc).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { pdd_instance_parse(doc.as_ptr(), &mut out) };
    (status, out)
}

fn last_error() -> String {
    let p = pdd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn solve(inst: *const PddInstance, algorithm: Option<&str>, optimize: bool) -> (PddStatus, *mut PddResult) {
    let name = algorithm.map(|a| CString::new(a).unwrap());
    let opts = PddOptions {
        algorithm: name.as_ref().map_or(ptr::null(), |c| c.as_ptr()),
        optimize,
        ..pdd_options_default()
    };
    let mut out = ptr::null_mut();
    let status = unsafe { pdd_solve(inst, &opts, &mut out) };
    (status, out)
}

fn verify_names(inst: *const PddInstance, names: &[&str]) -> (PddStatus, bool) {
    let owned: Vec<CString> = names.iter().map(|n| CString::new(*n).unwrap()).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut passed = false;
    let status = unsafe { pdd_verify(inst, ptrs.as_ptr(), ptrs.len(), &mut passed) };
    (status, passed)
}

#[test]
fn solve_round_trip() {
    let (status, inst) = parse(YES);
    assert_eq!(status, PddStatus::Ok);
    assert!(pdd_last_error().is_null());
    assert_eq!(unsafe { pdd_instance_num_taxa(inst) }, 3);
    let (status, res) = solve(inst, None, true);
    assert_eq!(status, PddStatus::Ok);
    unsafe {
        assert!(pdd_result_is_yes(res));
        assert_eq!(pdd_result_pd(res), 12);
        let mut opt = 0;
        assert!(pdd_result_optimum(res, &mut opt));
        assert_eq!(opt, 12);
        let names: Vec<String> = (0..pdd_result_witness_len(res))
            .map(|i| CStr::from_ptr(pdd_result_witness_name(res, i)).to_str().unwrap().to_string())
            .collect();
        assert_eq!(names.len(), 2);
        assert!(pdd_result_witness_name(res, 2).is_null());
        let json = CStr::from_ptr(pdd_result_json(res)).to_str().unwrap();
        let rec: serde_json::Value = serde_json::from_str(json).unwrap();
        assert_eq!(rec["decision"], "yes");
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert_eq!(verify_names(inst, &refs), (PddStatus::Ok, true));
        pdd_result_free(res);
        pdd_instance_free(inst);
    }
}

#[test]
fn no_instance_and_defaults() {
    let (_, inst) = parse("#tree\n((a:4,b:2)u:1,c:7)r;\n#web\na b\n#params k=2 D=13\n");
    let mut res = ptr::null_mut();
    assert_eq!(unsafe { pdd_solve(inst, ptr::null(), &mut res) }, PddStatus::Ok);
    unsafe {
        assert!(!pdd_result_is_yes(res));
        assert_eq!(pdd_result_pd(res), 0);
        assert_eq!(pdd_result_witness_len(res), 0);
        let mut opt = 0;
        assert!(!pdd_result_optimum(res, &mut opt));
        pdd_result_free(res);
        pdd_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    let (status, inst) = parse("#tree\n(a:1");
    assert_eq!(status, PddStatus::Parse);
    assert!(inst.is_null());
    assert!(last_error().contains("parse error"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pdd_instance_parse(ptr::null(), &mut out) }, PddStatus::NullArgument);
    let bad = [0x23u8, 0xff, 0];
    assert_eq!(unsafe { pdd_instance_parse(bad.as_ptr().cast(), &mut out) }, PddStatus::InvalidUtf8);

    let (_, inst) = parse(YES);
    assert_eq!(solve(inst, Some("simplex"), false).0, PddStatus::Domain);
    assert!(last_error().contains("simplex"));
    let (status, res) = solve(inst, Some("tw"), false);
    assert!(matches!(status, PddStatus::Precondition | PddStatus::Refusal), "{status:?}");
    assert!(res.is_null());
    assert_eq!(solve(ptr::null(), None, false).0, PddStatus::NullArgument);

    assert_eq!(verify_names(inst, &["zz"]).0, PddStatus::Domain);
    assert_eq!(verify_names(inst, &["b"]), (PddStatus::Ok, false));
    assert_eq!(unsafe { pdd_verify(inst, ptr::null(), 0, &mut false) }, PddStatus::Ok);
    assert_eq!(unsafe { pdd_verify(inst, ptr::null(), 1, &mut false) }, PddStatus::NullArgument);
    unsafe { pdd_instance_free(inst) };

    unsafe {
        pdd_instance_free(ptr::null_mut());
        pdd_result_free(ptr::null_mut());
        assert_eq!(pdd_instance_num_taxa(ptr::null()), 0);
        assert!(!pdd_result_is_yes(ptr::null()));
        assert!(pdd_result_json(ptr::null()).is_null());
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pdd.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for f in [
        "pdd_last_error",
        "pdd_options_default",
        "pdd_instance_parse",
        "pdd_instance_free",
        "pdd_instance_num_taxa",
        "pdd_solve",
        "pdd_result_free",
        "pdd_result_is_yes",
        "pdd_result_pd",
        "pdd_result_optimum",
        "pdd_result_witness_len",
        "pdd_result_witness_name",
        "pdd_result_json",
        "pdd_verify",
    ] {
        assert!(text.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(text.contains("typedef struct PddInstance PddInstance;"));
    assert!(text.contains("PDD_STATUS_REFUSAL = 6"));
}

/// Compiles the C smoke program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libpdd_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let bin = dir.join("pdd_smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/smoke.c");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["optimum"], 12);
}
