//! The C ABI called from Rust, and from C through the generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use enricat_ffi::*;

const ARROWS: &str = include_str!("../../core/tests/data/free_arrows.json");
const LOOP: &str = include_str!("../../core/tests/data/free_loop.json");
const INTERVAL: &str = include_str!("../../core/tests/data/bool_interval.json");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(json: &str) -> *mut EnricatInstance {
    let mut h = ptr::null_mut();
    let s = unsafe { enricat_instance_parse(c(json).as_ptr(), &mut h) };
    assert_eq!(s, EnricatStatus::Pass);
    assert!(!h.is_null());
    h
}

/// Takes ownership of a returned string.
fn take(p: *mut c_char) -> serde_json::Value {
    assert!(!p.is_null());
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { enricat_string_free(p) };
    v
}

fn last_error() -> String {
    let p = enricat_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const ATTACH: &str = r#"{"a": "x", "b": "y", "f": "f", "gbar": "gbar"}"#;
const ENDO: &str = r#"{"a": "x", "b": "x", "f": "f", "gbar": "gbar"}"#;

#[test]
fn pushout_statuses_follow_the_cli_exit_codes() {
    let h = parse(ARROWS);
    let mut out = ptr::null_mut();
    let s = unsafe { enricat_pushout(h, c(ATTACH).as_ptr(), 4, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    assert_eq!(take(out)["result"]["category"]["homs"]["x→y"], 2);
    unsafe { enricat_instance_free(h) };

    let h = parse(LOOP);
    let s = unsafe { enricat_pushout(h, c(ENDO).as_ptr(), 2, &mut out) };
    assert_eq!(s, EnricatStatus::Skipped);
    assert_eq!(take(out)["trace"]["stabilized"], false);
    unsafe { enricat_instance_free(h) };
}

#[test]
fn check_and_validate() {
    let h = parse(INTERVAL);
    let mut out = ptr::null_mut();
    let s = unsafe { enricat_check(c("dk").as_ptr(), h, ptr::null(), 6, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    assert_eq!(take(out)["verdict"]["status"], "pass");
    let s = unsafe {
        enricat_check(
            c("interval").as_ptr(),
            h,
            c(r#"{"category": "point"}"#).as_ptr(),
            6,
            &mut out,
        )
    };
    assert_eq!(s, EnricatStatus::InputError);
    assert!(out.is_null());
    let s = unsafe { enricat_validate(h, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    take(out);
    let s = unsafe { enricat_pi0(h, c(r#"{"category": "interval"}"#).as_ptr(), &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    assert_eq!(take(out)["homs"]["0,1"], 1);
    unsafe { enricat_instance_free(h) };
}

#[test]
fn trace_and_free_commands() {
    let h = parse(ARROWS);
    let mut out = ptr::null_mut();
    let s = unsafe { enricat_trace_export(h, c(ATTACH).as_ptr(), 4, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    assert_eq!(take(out)["stabilized"], true);
    unsafe { enricat_instance_free(h) };
    let h = parse(include_str!("../../core/tests/data/chain_graph.json"));
    let s = unsafe { enricat_free(h, ptr::null(), 4, false, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    assert_eq!(
        take(out)["category"]["homs"]["a→b"]["dims"],
        serde_json::json!([1, 0, 0])
    );
    unsafe { enricat_instance_free(h) };
}

#[test]
fn proptest_runs_a_suite() {
    let mut out = ptr::null_mut();
    let s = unsafe { enricat_proptest(c("pi0-oracle").as_ptr(), 4, 7, &mut out) };
    assert_eq!(s, EnricatStatus::Pass);
    let v = take(out);
    assert_eq!(v["passed"], 4);
    let s = unsafe { enricat_proptest(c("nope").as_ptr(), 4, 7, &mut out) };
    assert_eq!(s, EnricatStatus::InputError);
    assert!(last_error().contains("nope"));
}

#[test]
fn bad_arguments_map_to_error_codes() {
    let mut h = ptr::null_mut();
    let s = unsafe { enricat_instance_parse(c("{\"schema\": 1,").as_ptr(), &mut h) };
    assert_eq!(s, EnricatStatus::InputError);
    assert!(h.is_null());
    assert!(last_error().contains("parse error"));

    let s = unsafe { enricat_instance_parse(ptr::null(), &mut h) };
    assert_eq!(s, EnricatStatus::NullArgument);

    let bad = [0xffu8, 0];
    let s = unsafe { enricat_instance_parse(bad.as_ptr().cast(), &mut h) };
    assert_eq!(s, EnricatStatus::InvalidUtf8);

    let mut out = ptr::null_mut();
    let s = unsafe { enricat_validate(ptr::null(), &mut out) };
    assert_eq!(s, EnricatStatus::NullArgument);
    let hh = parse(ARROWS);
    let s = unsafe { enricat_pushout(hh, c(r#"{"colour": "x"}"#).as_ptr(), 4, &mut out) };
    assert_eq!(s, EnricatStatus::InputError);
    assert!(last_error().contains("colour"));
    unsafe {
        enricat_instance_free(hh);
        enricat_instance_free(ptr::null_mut());
        enricat_string_free(ptr::null_mut());
    }
}

#[test]
fn successful_calls_clear_the_last_error() {
    let mut h = ptr::null_mut();
    unsafe { enricat_instance_parse(c("[").as_ptr(), &mut h) };
    assert!(!enricat_last_error().is_null());
    let h = parse(ARROWS);
    assert!(enricat_last_error().is_null());
    unsafe { enricat_instance_free(h) };
    let v = unsafe { CStr::from_ptr(enricat_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let here = Path::new(env!("CARGO_MANIFEST_DIR"));
    // Test builds leave the static library in deps/ without uplifting it.
    let lib = ["deps/libenricat_ffi.a", "libenricat_ffi.a"]
        .iter()
        .map(|p| target_dir().join(p))
        .find(|p| p.exists())
        .expect("the static library is built alongside the tests");
    let bin = std::env::temp_dir().join(format!("enricat_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let built = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(here.join("include"))
        .arg(here.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    match built {
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            eprintln!("no C compiler ({cc}); skipping");
            return;
        }
        r => assert!(r.unwrap().success(), "C smoke program builds"),
    }
    let run = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
