use std::ffi::{CStr, CString};
use std::ptr;

use cube_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cube_string_free(p) };
    s
}

fn last_error() -> String {
    let p = cube_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn json_round_trip_and_arithmetic() {
    let src = CString::new(r#"{"terms":[{"coeff":"1/3","monomial":{}},{"coeff":"2","monomial":{"x[0,0,0]":1}}]}"#).unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { cube_poly_from_json(src.as_ptr(), &mut a) }, CubeStatus::Ok);

    let mut sq = ptr::null_mut();
    assert_eq!(unsafe { cube_poly_mul(a, a, &mut sq) }, CubeStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { cube_poly_div(sq, a, &mut back) }, CubeStatus::Ok);
    assert!(unsafe { cube_poly_equal(a, back) });

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cube_poly_to_json(back, &mut json) }, CubeStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    let w: serde_json::Value = serde_json::from_str(src.to_str().unwrap()).unwrap();
    assert_eq!(v, w);

    unsafe {
        cube_poly_free(a);
        cube_poly_free(sq);
        cube_poly_free(back);
    }
}

#[test]
fn inexact_division_reports_status() {
    let one = CString::new(r#"{"terms":[{"coeff":"1","monomial":{}}]}"#).unwrap();
    let x_plus_1 = CString::new(r#"{"terms":[{"coeff":"1","monomial":{"x[0,0,0]":1}},{"coeff":"1","monomial":{}}]}"#).unwrap();
    let (mut a, mut b, mut q) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(cube_poly_from_json(one.as_ptr(), &mut a), CubeStatus::Ok);
        assert_eq!(cube_poly_from_json(x_plus_1.as_ptr(), &mut b), CubeStatus::Ok);
        assert_eq!(cube_poly_div(a, b, &mut q), CubeStatus::NotDivisible);
        assert!(q.is_null());
        cube_poly_free(a);
        cube_poly_free(b);
    }
    assert!(last_error().contains("divisible"));
}

#[test]
fn null_and_bad_input() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cube_poly_from_json(ptr::null(), &mut p) }, CubeStatus::NullPointer);
    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { cube_poly_from_json(bad.as_ptr(), &mut p) }, CubeStatus::Parse);
    let kind = CString::new("sphere").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cube_state_new(kind.as_ptr(), 0, 3, &mut s) }, CubeStatus::InvalidRegion);
    unsafe {
        cube_poly_free(ptr::null_mut());
        cube_state_free(ptr::null_mut());
        cube_string_free(ptr::null_mut());
    }
}

#[test]
fn triangle_value_with_assignment() {
    let kind = CString::new("triangle").unwrap();
    let three = CString::new("3").unwrap();
    let mut s = ptr::null_mut();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(cube_state_new(kind.as_ptr(), 0, 5, &mut s), CubeStatus::Ok);
        // every interior initial value: c = x[1,3,1] is 3, the rest 1
        for (i, j, k) in [(1, 1, 3), (1, 2, 2), (2, 1, 2), (2, 2, 1), (3, 1, 1)] {
            let one = CString::new("1").unwrap();
            assert_eq!(cube_state_assign(s, i, j, k, one.as_ptr()), CubeStatus::Ok);
        }
        assert_eq!(cube_state_assign(s, 1, 3, 1, three.as_ptr()), CubeStatus::Ok);
        assert_eq!(cube_state_value(s, 2, 2, 1, 7, &mut p), CubeStatus::Ok);
        let mut txt = ptr::null_mut();
        assert_eq!(cube_poly_to_string(p, &mut txt), CubeStatus::Ok);
        assert_eq!(take_string(txt), "13");
        cube_poly_free(p);

        assert_eq!(cube_state_value(s, 2, 2, 1, 6, &mut p), CubeStatus::BadParity);
        assert_eq!(cube_state_value(s, 9, 0, -4, 7, &mut p), CubeStatus::OutOfRegion);
        cube_state_free(s);
    }
}

#[test]
fn plethysm_of_smallest_cylinder() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cube_qpoly_json(1, 2, 2, &mut out) }, CubeStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let want = serde_json::json!({"coeffs":[
        {"terms":[{"coeff":"-1","monomial":{}}]},
        {"terms":[{"coeff":"1","monomial":{}}]}
    ]});
    assert_eq!(v, want);
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cube.h")).unwrap();
    for name in ["cube_poly_from_json", "cube_state_value", "cube_last_error", "typedef struct CubePoly CubePoly;"] {
        assert!(h.contains(name), "{name}");
    }
}
