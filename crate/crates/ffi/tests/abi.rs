use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use landau_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(landau_last_error()).to_string_lossy().into_owned() }
}

fn params(h: f64, m: f64, w: f64) -> *mut LandauParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { landau_params_new(h, m, w, &mut p) }, LandauStatus::Ok);
    p
}

#[test]
fn wigner_and_marginal_values() {
    let p = params(1.0, 1.0, 1.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(landau_wigner_eval(0, 0, 0.0, 0.0, 0.0, 0.0, p, &mut v), LandauStatus::Ok);
        assert_eq!(v, 4.0);
        assert_eq!(landau_marginal_1d(2, 1, LandauAxis::Q1, 0.0, p, &mut v), LandauStatus::Ok);
        let nq = std::f64::consts::PI.powf(1.5) / 2f64.sqrt();
        assert!((v - 7.0 * nq / 4.0).abs() <= 1e-12 * v);
        assert_eq!(landau_uncertainty_product(2, 1, 1, p, &mut v), LandauStatus::Ok);
        assert!((v - 2.0).abs() <= 1e-12);
        landau_params_free(p);
    }
}

#[test]
fn invalid_inputs_report_status_and_message() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(landau_params_new(0.0, 1.0, 1.0, &mut p), LandauStatus::InvalidArgument);
        assert!(p.is_null());
        assert!(last_error().contains("hbar"));
        let mut g = 0.0;
        assert_eq!(landau_params_gamma(ptr::null(), &mut g), LandauStatus::NullPointer);

        let mut s = ptr::null_mut();
        let bad = CString::new("wigner:one,2").unwrap();
        assert_eq!(landau_state_from_label(bad.as_ptr(), 8, &mut s), LandauStatus::Parse);
        let big = CString::new("wigner:7,1").unwrap();
        assert_eq!(landau_state_from_label(big.as_ptr(), 8, &mut s), LandauStatus::CutoffConflict);
        assert!(s.is_null());
    }
}

#[test]
fn state_handles_round_trip() {
    let label = CString::new("wigner:1,2").unwrap();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(landau_state_from_label(label.as_ptr(), 6, &mut s), LandauStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(landau_state_trace(s, &mut re, &mut im), LandauStatus::Ok);
        assert!((re - 1.0).abs() <= 1e-14 && im.abs() <= 1e-14);

        // W ⋆ W = W
        let mut sq = ptr::null_mut();
        assert_eq!(landau_state_star(s, s, &mut sq), LandauStatus::Ok);
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(landau_state_to_json(s, &mut a), LandauStatus::Ok);
        assert_eq!(landau_state_to_json(sq, &mut b), LandauStatus::Ok);
        assert_eq!(CStr::from_ptr(a), CStr::from_ptr(b));

        let mut back = ptr::null_mut();
        assert_eq!(landau_state_from_json(a, &mut back), LandauStatus::Ok);
        let mut n = 0usize;
        assert_eq!(landau_state_cutoff(back, &mut n), LandauStatus::Ok);
        assert_eq!(n, 6);

        let p = params(1.0, 1.0, 1.0);
        let mut direct = 0.0;
        landau_wigner_eval(1, 2, 0.3, -0.2, 0.1, 0.4, p, &mut direct);
        assert_eq!(landau_state_eval(back, 0.3, -0.2, 0.1, 0.4, p, &mut re, &mut im), LandauStatus::Ok);
        assert!((re - direct).abs() <= 1e-12 && im.abs() <= 1e-12);

        let truncated = CString::new(&CStr::from_ptr(a).to_bytes()[..20]).unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(landau_state_from_json(truncated.as_ptr(), &mut none), LandauStatus::Parse);
        assert!(none.is_null());
        assert!(last_error().contains("column"));

        landau_string_free(a);
        landau_string_free(b);
        landau_state_free(s);
        landau_state_free(sq);
        landau_state_free(back);
        landau_params_free(p);
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/landau.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "landau_last_error",
        "landau_params_new",
        "landau_params_free",
        "landau_wigner_eval",
        "landau_marginal_1d",
        "landau_uncertainty_product",
        "landau_state_from_label",
        "landau_state_from_json",
        "landau_state_star",
        "landau_state_to_json",
        "landau_string_free",
        "typedef struct LandauState LandauState;",
        "LANDAU_STATUS_CUTOFF_CONFLICT = 4",
    ] {
        assert!(text.contains(name), "{name}");
    }
    // the header must stand alone as C; skipped when no compiler is present
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
