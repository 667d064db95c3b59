use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use modsm_ffi::*;

fn parse(src: &str) -> *mut ModsmModule {
    let c = CString::new(src).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { modsm_module_parse_text(c.as_ptr(), &mut m) }, ModsmStatus::Ok);
    m
}

fn last_error() -> String {
    let p = modsm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn models(m: *const ModsmModule) -> Vec<String> {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { modsm_stable_models(m, 0, &mut set) }, ModsmStatus::Ok);
    let n = unsafe { modsm_model_set_len(set) };
    let out = (0..n)
        .map(|i| {
            unsafe { CStr::from_ptr(modsm_model_set_get(set, i)) }
                .to_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert!(unsafe { modsm_model_set_get(set, n) }.is_null());
    unsafe { modsm_model_set_free(set) };
    out
}

#[test]
fn solve_splitting_program() {
    let m = parse("a :- not b. b :- not a. c :- a.");
    assert_eq!(models(m), ["{a,c}", "{b}"]);
    assert_eq!(unsafe { modsm_module_rule_count(m) }, 3);
    let (mut i, mut o, mut h) = (9, 9, 9);
    assert_eq!(
        unsafe { modsm_module_signature_sizes(m, &mut i, &mut o, &mut h) },
        ModsmStatus::Ok
    );
    assert_eq!((i, o, h), (0, 3, 0));
    unsafe { modsm_module_free(m) };
}

#[test]
fn text_and_numeric_round_trip() {
    let m = parse("#input b.\n#output a.\na :- b.\n");
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { modsm_module_print_text(m, &mut text) }, ModsmStatus::Ok);
    assert_eq!(
        unsafe { CStr::from_ptr(text) }.to_str().unwrap(),
        "#input b.\n#output a.\na :- b.\n"
    );
    unsafe { modsm_string_free(text) };

    let (mut data, mut len) = (ptr::null_mut(), 0usize);
    assert_eq!(
        unsafe { modsm_module_encode_smodels(m, &mut data, &mut len) },
        ModsmStatus::Ok
    );
    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { modsm_module_decode_smodels(data, len, &mut back) },
        ModsmStatus::Ok
    );
    let mut same = false;
    assert_eq!(
        unsafe { modsm_modular_eq(m, back, ModsmMethod::Generator as u32, 0, &mut same) },
        ModsmStatus::Ok
    );
    assert!(same);
    unsafe {
        modsm_bytes_free(data, len);
        modsm_module_free(back);
        modsm_module_free(m);
    }
}

#[test]
fn composition_status_codes() {
    let p = parse("#input b. #output a. a :- b.");
    let q = parse("#input a. #output b. b :- a.");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { modsm_join(p, q, &mut out) }, ModsmStatus::Composition);
    assert!(out.is_null());
    assert_eq!(last_error(), "MutualDependence({a,b})");
    assert_eq!(unsafe { modsm_compose(p, q, &mut out) }, ModsmStatus::Ok);
    assert!(modsm_last_error().is_null());
    assert_eq!(models(out), ["{}"]);
    unsafe {
        modsm_module_free(out);
        modsm_module_free(p);
        modsm_module_free(q);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("a :- , b.").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { modsm_module_parse_text(bad.as_ptr(), &mut m) },
        ModsmStatus::Syntax
    );
    assert!(last_error().starts_with("1:6:"));
    assert_eq!(
        unsafe { modsm_module_parse_text(ptr::null(), &mut m) },
        ModsmStatus::NullArgument
    );
    let junk = b"1 2 3\n";
    assert_eq!(
        unsafe { modsm_module_decode_smodels(junk.as_ptr(), junk.len(), &mut m) },
        ModsmStatus::Format
    );
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { modsm_module_parse_text(invalid.as_ptr().cast(), &mut m) },
        ModsmStatus::InvalidUtf8
    );

    let wide = parse(&(0..12).map(|i| format!("{{x{i}}}.")).collect::<String>());
    let mut set = ptr::null_mut();
    assert_eq!(
        unsafe { modsm_stable_models(wide, 8, &mut set) },
        ModsmStatus::CapExceeded
    );
    let mut flag = false;
    assert_eq!(
        unsafe { modsm_modular_eq(wide, wide, 7, 0, &mut flag) },
        ModsmStatus::Unsupported
    );
    assert_eq!(
        unsafe { modsm_eva(ptr::null(), 0, &mut flag) },
        ModsmStatus::NullArgument
    );
    unsafe {
        modsm_module_free(wide);
        modsm_module_free(ptr::null_mut());
        modsm_model_set_free(ptr::null_mut());
        modsm_string_free(ptr::null_mut());
    }
}

#[test]
fn eva_flag() {
    let p = parse("#output a. #hidden h. {h}. a :- h.");
    let mut holds = true;
    assert_eq!(unsafe { modsm_eva(p, 0, &mut holds) }, ModsmStatus::Ok);
    assert!(!holds);
    unsafe { modsm_module_free(p) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(modsm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn c_program_links_against_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let archive = deps.join("libmodsm_ffi.a");
    assert!(archive.exists(), "{} missing", archive.display());
    let work = tempfile::tempdir().unwrap();
    let exe = work.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "{a,c}\n{b}\njoin: 6 MutualDependence({a,b})\n"
    );
}
