use std::ffi::{c_char, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ltlrl_ffi::*;

const FGY: &str = include_str!("../../core/fixtures/fgy.ldba");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { ltlrl_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&b| b as u8).collect();
    String::from_utf8(bytes).unwrap()
}

#[test]
fn ldba_and_formula_round_trip() {
    let text = c(FGY);
    let mut aut = ptr::null_mut();
    let mut phi = ptr::null_mut();
    let mut n = 0usize;
    let mut h = 0usize;
    let mut agree = 0usize;
    unsafe {
        assert_eq!(ltlrl_ldba_parse(text.as_ptr(), &mut aut), LtlrlStatus::Ok);
        assert_eq!(ltlrl_ldba_num_states(aut, &mut n), LtlrlStatus::Ok);
        assert_eq!(ltlrl_ldba_min_horizon(aut, &mut h), LtlrlStatus::Ok);
        assert_eq!(ltlrl_formula_parse(c("FGy").as_ptr(), &mut phi), LtlrlStatus::Ok);
        assert_eq!(ltlrl_oracle_agreement(aut, phi, 300, 9, &mut agree), LtlrlStatus::Ok);
        ltlrl_formula_free(phi);
        ltlrl_ldba_free(aut);
    }
    assert_eq!((n, h, agree), (3, 1, 300));
}

#[test]
fn errors_are_reported() {
    let mut aut = ptr::null_mut();
    let mut phi = ptr::null_mut();
    unsafe {
        assert_eq!(ltlrl_ldba_parse(ptr::null(), &mut aut), LtlrlStatus::NullPointer);
        assert_eq!(ltlrl_ldba_parse(c("states: x").as_ptr(), &mut aut), LtlrlStatus::ParseError);
        assert!(aut.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ltlrl_formula_parse(c("G (y").as_ptr(), &mut phi), LtlrlStatus::ParseError);
        let bad = [0xffu8, 0];
        assert_eq!(ltlrl_formula_parse(bad.as_ptr().cast(), &mut phi), LtlrlStatus::InvalidUtf8);
        let mut r = LtlrlMyopiaReport::default();
        assert_eq!(ltlrl_two_choice_report(0.9, 1.0, &mut r), LtlrlStatus::InvalidArgument);
        assert!(last_error().contains("gamma"));
        assert_eq!(ltlrl_ldba_num_states(ptr::null(), ptr::null_mut()), LtlrlStatus::NullPointer);
        ltlrl_ldba_free(ptr::null_mut());
        ltlrl_formula_free(ptr::null_mut());
        ltlrl_chain_free(ptr::null_mut());
    }
}

#[test]
fn last_error_truncates() {
    unsafe {
        ltlrl_two_choice_report(0.9, 2.0, ptr::null_mut());
        let full = ltlrl_last_error(ptr::null_mut(), 0);
        let mut buf = [0x7f as c_char; 4];
        assert_eq!(ltlrl_last_error(buf.as_mut_ptr(), 4), full);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn two_choice_values() {
    let mut r = LtlrlMyopiaReport::default();
    unsafe {
        assert_eq!(ltlrl_two_choice_report(0.9, 0.99, &mut r), LtlrlStatus::Ok);
    }
    assert!((r.eventual[0] - 100.0).abs() < 1e-6 && (r.eventual[1] - 90.0).abs() < 1e-6);
    assert!((r.standard[0] - 50.2513).abs() < 1e-4 && (r.standard[1] - 90.0).abs() < 1e-6);
    assert!((r.p_sat[0] - 1.0).abs() < 1e-9 && (r.p_sat[1] - 0.9).abs() < 1e-9);
}

#[test]
fn chain_queries() {
    // 0 -> {1, 2} evenly; 1 accepting self-loop; 2 rejecting self-loop.
    let offsets = [0usize, 2, 3, 4];
    let cols = [1usize, 2, 1, 2];
    let probs = [0.5, 0.5, 1.0, 1.0];
    let acc = [0u8, 1, 0];
    let mut chain = ptr::null_mut();
    let mut p = 0.0;
    let mut b = LtlrlBoundReport::default();
    unsafe {
        let s = ltlrl_chain_new(3, offsets.as_ptr(), cols.as_ptr(), probs.as_ptr(), acc.as_ptr(), &mut chain);
        assert_eq!(s, LtlrlStatus::Ok);
        assert_eq!(ltlrl_chain_satisfaction(chain, &mut p), LtlrlStatus::Ok);
        assert_eq!(ltlrl_chain_lemma1(chain, 0.9, &mut b), LtlrlStatus::Ok);
        assert_eq!(ltlrl_chain_lemma1(chain, 0.0, &mut b), LtlrlStatus::InvalidArgument);
        ltlrl_chain_free(chain);

        let bad = [0.5, 0.4, 1.0, 1.0];
        let s = ltlrl_chain_new(3, offsets.as_ptr(), cols.as_ptr(), bad.as_ptr(), acc.as_ptr(), &mut chain);
        assert_eq!(s, LtlrlStatus::InvalidArgument);
        let s = ltlrl_chain_new(0, offsets.as_ptr(), cols.as_ptr(), probs.as_ptr(), acc.as_ptr(), &mut chain);
        assert_eq!(s, LtlrlStatus::InvalidArgument);
    }
    assert!((p - 0.5).abs() < 1e-12);
    assert!(b.pass && b.lhs <= b.mid + 1e-8 && b.mid <= b.rhs + 1e-8, "{b:?}");
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_header_compiles_and_links() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libltlrl_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ltlrl_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "c smoke ok");
}
