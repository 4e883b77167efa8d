use std::ffi::{CStr, CString};
use std::ptr;

use bh_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(bh_last_error_message()) }.to_string_lossy().into_owned()
}

fn family(name: &str, params: Option<&str>) -> *mut BhPoly {
    let name = CString::new(name).unwrap();
    let params = params.map(|p| CString::new(p).unwrap());
    let mut out = ptr::null_mut();
    let st = unsafe {
        bh_family_make(
            name.as_ptr(),
            params.as_ref().map_or(ptr::null(), |p| p.as_ptr()),
            0,
            &mut out,
        )
    };
    assert_eq!(st, BhStatus::Ok, "{}", last_error());
    out
}

#[test]
fn p4_info_norm_and_bound() {
    let p = family("p4", None);
    let (mut n, mut d, mut t) = (0usize, 0u32, 0usize);
    assert_eq!(unsafe { bh_poly_info(p, &mut n, &mut d, &mut t) }, BhStatus::Ok);
    assert_eq!((n, d, t), (2, 4, 2));

    let (mut v, mut c, mut h) = (0.0, 0.0, 9u8);
    assert_eq!(unsafe { bh_poly_sup_norm(p, 0, &mut v, &mut c, &mut h) }, BhStatus::Ok);
    assert!((v - 2.0 * 3f64.sqrt() / 9.0).abs() < 1e-12);
    assert!(c <= v + 1e-15);
    assert_eq!(h, 0);

    let mut b = BhBound::default();
    assert_eq!(unsafe { bh_poly_lower_bound(p, &mut b) }, BhStatus::Ok);
    assert_eq!(b.m, 4);
    assert!((b.value - 2f64.powf(5.0 / 8.0) / (2.0 * 3f64.sqrt() / 9.0)).abs() < 1e-10);
    assert!((b.mth_root.powi(4) - b.value).abs() < 1e-9);
    unsafe { bh_poly_free(p) };
}

#[test]
fn serialize_parse_pow_eval() {
    let p = family("pab", Some("a=1;b=-0.5"));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bh_poly_serialize(p, &mut s) }, BhStatus::Ok);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { bh_poly_parse(s, &mut q) }, BhStatus::Ok);
    unsafe { bh_string_free(s) };

    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { bh_poly_pow(q, 2, &mut sq) }, BhStatus::Ok);
    let x = [0.3, -0.7];
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { bh_poly_eval(p, x.as_ptr(), 2, &mut a) }, BhStatus::Ok);
    assert_eq!(unsafe { bh_poly_eval(sq, x.as_ptr(), 2, &mut b) }, BhStatus::Ok);
    assert!((a * a - b).abs() < 1e-15);

    // (1, -1/2, -1/2, 1) in l_1
    let (mut v, mut lg) = (0.0, 0.0);
    assert_eq!(unsafe { bh_poly_lp_norm(q, 1, 1, &mut v, &mut lg) }, BhStatus::Ok);
    assert!((v - 3.0).abs() < 1e-15 && (lg - 3f64.ln()).abs() < 1e-15);
    unsafe {
        bh_poly_free(p);
        bh_poly_free(q);
        bh_poly_free(sq);
    }
}

#[test]
fn power_bound_table_row() {
    let name = CString::new("p5").unwrap();
    let mut b = BhBound::default();
    assert_eq!(unsafe { bh_power_bound(name.as_ptr(), ptr::null(), 2, 0, &mut b) }, BhStatus::Ok);
    assert_eq!((b.m, b.power), (10, 2));
    assert!((b.value / 48.03065 - 1.0).abs() < 5e-4);
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("BHPOLY 1 n=2 m=3 terms=1 coeff=int\n1 1 5\n").unwrap();
    assert_eq!(unsafe { bh_poly_parse(bad.as_ptr(), &mut out) }, BhStatus::ParseError);
    assert!(last_error().starts_with("ParseError"), "{}", last_error());
    assert!(out.is_null());

    assert_eq!(unsafe { bh_poly_parse(ptr::null(), &mut out) }, BhStatus::NullPointer);

    let name = CString::new("pab").unwrap();
    let params = CString::new("a=1").unwrap();
    assert_eq!(
        unsafe { bh_family_make(name.as_ptr(), params.as_ptr(), 0, &mut out) },
        BhStatus::InvalidParameter
    );
    assert_eq!(
        unsafe { bh_family_make(name.as_ptr(), ptr::null(), 10, &mut out) },
        BhStatus::InvalidParameter
    );

    let p = family("p4", None);
    let x = [1.0];
    let mut v = 0.0;
    assert_eq!(unsafe { bh_poly_eval(p, x.as_ptr(), 1, &mut v) }, BhStatus::DimensionMismatch);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { bh_poly_pow(p, 0, &mut q) }, BhStatus::InvalidParameter);
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { bh_poly_lp_norm(p, 1, 2, &mut a, &mut b) }, BhStatus::InvalidParameter);
    assert_eq!(unsafe { bh_poly_info(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) }, BhStatus::NullPointer);
    unsafe {
        bh_poly_free(p);
        bh_poly_free(ptr::null_mut());
        bh_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/bh.h")).unwrap();
    for f in [
        "bh_poly_parse",
        "bh_family_make",
        "bh_poly_free",
        "bh_poly_serialize",
        "bh_string_free",
        "bh_poly_info",
        "bh_poly_pow",
        "bh_poly_eval",
        "bh_poly_lp_norm",
        "bh_poly_sup_norm",
        "bh_poly_lower_bound",
        "bh_power_bound",
        "bh_last_error_message",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct BhPoly BhPoly;"));
}
