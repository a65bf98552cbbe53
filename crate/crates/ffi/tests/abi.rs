use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cyclelab_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cyclelab_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cyclelab_last_error()).to_string_lossy().into_owned()
}

#[test]
fn catalog_group_round_trip() {
    unsafe {
        let name = CString::new("S4").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(cyclelab_group_from_catalog(name.as_ptr(), &mut g), CyclelabStatus::Ok);
        let mut degree = 0;
        assert_eq!(cyclelab_group_degree(g, &mut degree), CyclelabStatus::Ok);
        assert_eq!(degree, 4);
        let mut s = ptr::null_mut();
        assert_eq!(cyclelab_group_order(g, &mut s), CyclelabStatus::Ok);
        assert_eq!(take(s), "24");
        assert_eq!(cyclelab_group_census(g, &mut s), CyclelabStatus::Ok);
        assert_eq!(take(s), "1/4");
        let mut violated = true;
        assert_eq!(cyclelab_verify_bound_json(g, name.as_ptr(), 16, &mut violated, &mut s), CyclelabStatus::Ok);
        assert!(!violated);
        let rep: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(rep["chains"][0]["bound"], "1/4");
        cyclelab_group_free(g);
    }
}

#[test]
fn spec_json_and_errors() {
    unsafe {
        let json = CString::new(r#"{"name":"C5","degree":5,"generators":[[1,2,3,4,0]]}"#).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(cyclelab_group_from_json(json.as_ptr(), &mut g), CyclelabStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cyclelab_group_census(g, &mut s), CyclelabStatus::Ok);
        assert_eq!(take(s), "4/5");
        cyclelab_group_free(g);

        let bad = CString::new("Q8").unwrap();
        assert_eq!(cyclelab_group_from_catalog(bad.as_ptr(), &mut g), CyclelabStatus::InvalidInput);
        assert!(last_error().contains("unknown group name"));
        assert_eq!(cyclelab_group_from_catalog(ptr::null(), &mut g), CyclelabStatus::NullArgument);
        assert!(last_error().contains("name"));
        assert_eq!(cyclelab_group_degree(ptr::null(), &mut 0), CyclelabStatus::NullArgument);
        cyclelab_group_free(ptr::null_mut());
        cyclelab_string_free(ptr::null_mut());
    }
}

#[test]
fn polynomials_and_scans() {
    unsafe {
        let mut irreducible = false;
        let x2_plus_1 = [1u64, 0, 1];
        assert_eq!(cyclelab_fp_is_irreducible(3, x2_plus_1.as_ptr(), 3, &mut irreducible), CyclelabStatus::Ok);
        assert!(irreducible);
        assert_eq!(cyclelab_fp_is_irreducible(5, x2_plus_1.as_ptr(), 3, &mut irreducible), CyclelabStatus::Ok);
        assert!(!irreducible);
        assert_eq!(cyclelab_fp_is_irreducible(4, x2_plus_1.as_ptr(), 3, &mut irreducible), CyclelabStatus::Domain);

        let seq = CString::new(r#"{"f": "-2 0 1", "a": 0}"#).unwrap();
        let mut depth = 0;
        assert_eq!(cyclelab_stable_depth(seq.as_ptr(), 3, 10, &mut depth), CyclelabStatus::Ok);
        assert_eq!(depth, 10);
        assert_eq!(cyclelab_stable_depth(seq.as_ptr(), 7, 10, &mut depth), CyclelabStatus::Ok);
        assert_eq!(depth, 0);

        let mut s = ptr::null_mut();
        assert_eq!(cyclelab_scan_json(seq.as_ptr(), 1000, 4, 2, &mut s), CyclelabStatus::Ok);
        let rep: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(rep["prime_count"], 168);
        assert_eq!(cyclelab_scan_json(seq.as_ptr(), 10, 4, 2, &mut s), CyclelabStatus::Domain);
        assert_eq!(cyclelab_scan_json(seq.as_ptr(), 1_000_000, 4096, 0, &mut s), CyclelabStatus::ResourceCap);

        assert_eq!(cyclelab_cmax(16, &mut s), CyclelabStatus::Ok);
        assert_eq!(take(s), "32768");
        assert_eq!(cyclelab_cmax(0, &mut s), CyclelabStatus::Domain);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/cyclelab.h");
    let lib = include_str!("../src/lib.rs");
    let exported: Vec<&str> = lib
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exported.len(), 13);
    for name in exported {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct CyclelabGroup CyclelabGroup;"));
    assert!(header.contains("CYCLELAB_STATUS_RESOURCE_CAP = 4"));
}
