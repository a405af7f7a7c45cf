use std::ffi::CStr;
use std::ptr;

use cfunc_ffi::*;

#[test]
fn jacobi_sum_at_seven() {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { cfunc_jacobi_sum(7, 3, 2, &mut re, &mut im) }, CfuncStatus::Ok);
    assert!((re - 2.0).abs() < 1e-12 && (im.abs() - 3f64.sqrt()).abs() < 1e-12);
    assert!(cfunc_last_error().is_null());
}

#[test]
fn errors_set_status_and_message() {
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { cfunc_jacobi_sum(9, 1, 1, &mut re, &mut im) }, CfuncStatus::NotPrime);
    let msg = unsafe { CStr::from_ptr(cfunc_last_error()) }.to_str().unwrap();
    assert!(msg.contains("not prime"));
    assert_eq!(unsafe { cfunc_jacobi_sum(7, 1, 1, ptr::null_mut(), &mut im) }, CfuncStatus::NullPointer);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cfunc_solve(4, CfuncMethod::Fiber, 0, &mut out) }, CfuncStatus::InvalidArgument);
    assert!(out.is_null());
}

#[test]
fn dft_is_unitary() {
    let mut re = vec![1.0, 2.0, -0.5, 0.0, 3.0];
    let mut im = vec![0.0, 1.0, 0.5, -2.0, 0.0];
    let before: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
    assert_eq!(unsafe { cfunc_dft(re.as_mut_ptr(), im.as_mut_ptr(), 5) }, CfuncStatus::Ok);
    let after: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
    assert!((before - after).abs() < 1e-12);
    let mean = (1.0 + 2.0 - 0.5 + 3.0) / 5f64.sqrt();
    assert!((re[0] - mean).abs() < 1e-12);
}

#[test]
fn character_is_c_function() {
    // The quadratic character mod 7 is odd.
    let legendre = [0.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0];
    let zeros = [0.0; 7];
    let mut out = false;
    assert_eq!(unsafe { cfunc_is_c_function(legendre.as_ptr(), zeros.as_ptr(), 7, 1e-10, &mut out) }, CfuncStatus::Ok);
    assert!(out);
    let mut bad = legendre;
    bad[1] = 2.0;
    assert_eq!(unsafe { cfunc_is_c_function(bad.as_ptr(), zeros.as_ptr(), 7, 1e-10, &mut out) }, CfuncStatus::Ok);
    assert!(!out);
}

#[test]
fn solution_set_handle() {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { cfunc_solve(7, CfuncMethod::Fiber, 1, &mut set) }, CfuncStatus::Ok);
    let mut c = CfuncCounts::default();
    assert_eq!(unsafe { cfunc_solution_set_counts(set, &mut c) }, CfuncStatus::Ok);
    assert_eq!((c.total, c.distinct, c.dirichlet), (6, 3, 3));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cfunc_solution_set_to_json(set, &mut json) }, CfuncStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"solutions\""));
    unsafe {
        cfunc_free_string(json);
        cfunc_solution_set_free(set);
        cfunc_solution_set_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cfunc.h")).unwrap();
    for name in [
        "cfunc_solve",
        "cfunc_solution_set_free",
        "cfunc_jacobi_sum",
        "cfunc_dft",
        "cfunc_last_error",
        "CFUNC_STATUS_OK",
    ] {
        assert!(h.contains(name), "{name}");
    }
}
