//! C ABI over `landau-core`.
//!
//! Every fallible function returns a [`LandauStatus`] and writes its result
//! through an out pointer. On failure the message is available from
//! [`landau_last_error`] on the same thread until the next call.
//! Handles are opaque and must be released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use landau_core::marginals::{marginal_1d, MarginalAxis};
use landau_core::star::FockRep;
use landau_core::states::{wigner_eval, StateLabel, WignerLabel};
use landau_core::uncertainty::uncertainty_product;
use landau_core::{Error, PhasePoint, PhysParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandauStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    CutoffConflict = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandauAxis {
    Q1 = 0,
    Q2 = 1,
    P1 = 2,
    P2 = 3,
}

impl From<LandauAxis> for MarginalAxis {
    fn from(a: LandauAxis) -> Self {
        match a {
            LandauAxis::Q1 => MarginalAxis::Q1,
            LandauAxis::Q2 => MarginalAxis::Q2,
            LandauAxis::P1 => MarginalAxis::P1,
            LandauAxis::P2 => MarginalAxis::P2,
        }
    }
}

/// Physical parameters (ħ, m, ω).
pub struct LandauParams(PhysParams);

/// A state in the truncated matrix representation.
pub struct LandauState(FockRep);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(LandauStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => LandauStatus::Parse,
            Error::LabelExceedsCutoff { .. } | Error::CutoffMismatch { .. } => LandauStatus::CutoffConflict,
            Error::InvalidParameter { .. }
            | Error::IndexOutOfRange(_)
            | Error::InvalidLaguerre { .. }
            | Error::QuadratureOrder(_)
            | Error::MomentOrder(_) => LandauStatus::InvalidArgument,
            _ => LandauStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LandauStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LandauStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LandauStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LandauStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(LandauStatus::Parse, format!("{what} is not valid UTF-8")))
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn landau_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_params_new(hbar: f64, mass: f64, omega: f64, out: *mut *mut LandauParams) -> LandauStatus {
    guard(|| {
        let p = PhysParams::new(hbar, mass, omega)?;
        put(out, Box::into_raw(Box::new(LandauParams(p))))
    })
}

/// # Safety
/// `params` must come from `landau_params_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn landau_params_free(params: *mut LandauParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Length scale γ = sqrt(2ħ / (mω)).
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_params_gamma(params: *const LandauParams, out: *mut f64) -> LandauStatus {
    guard(|| put(out, deref(params, "params")?.0.gamma()))
}

/// Wigner function of the level `(n, l)` at a phase-space point.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_wigner_eval(
    n: usize,
    l: usize,
    q1: f64,
    q2: f64,
    p1: f64,
    p2: f64,
    params: *const LandauParams,
    out: *mut f64,
) -> LandauStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, wigner_eval(WignerLabel::new(n, l), &PhasePoint::new(q1, q2, p1, p2), p))
    })
}

/// One-dimensional marginal density of the level `(n, l)`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_marginal_1d(
    n: usize,
    l: usize,
    axis: LandauAxis,
    x: f64,
    params: *const LandauParams,
    out: *mut f64,
) -> LandauStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, marginal_1d(n, l, axis.into(), x, p)?)
    })
}

/// Δq_pair Δp_pair for the level `(n, l)`; `pair` is 1 or 2.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_uncertainty_product(
    n: usize,
    l: usize,
    pair: usize,
    params: *const LandauParams,
    out: *mut f64,
) -> LandauStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, uncertainty_product(WignerLabel::new(n, l), pair, p)?)
    })
}

/// Builds a state from a label such as `wigner:2,1` or `coherent:1,0,0.5,0`.
///
/// # Safety
/// `label` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_from_label(label: *const c_char, cutoff: usize, out: *mut *mut LandauState) -> LandauStatus {
    guard(|| {
        let label: StateLabel = text(label, "label")?.parse()?;
        if cutoff == 0 {
            return Err(Failure(LandauStatus::InvalidArgument, "cutoff must be positive".into()));
        }
        let needed = label.max_quantum_number() + 2;
        if needed > cutoff {
            return Err(Failure(
                LandauStatus::CutoffConflict,
                format!("label {label} needs cutoff at least {needed}, got {cutoff}"),
            ));
        }
        put(out, Box::into_raw(Box::new(LandauState(label.fock(cutoff)?))))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_from_json(json: *const c_char, out: *mut *mut LandauState) -> LandauStatus {
    guard(|| {
        let rep = FockRep::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(LandauState(rep))))
    })
}

/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn landau_state_free(state: *mut LandauState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_cutoff(state: *const LandauState, out: *mut usize) -> LandauStatus {
    guard(|| put(out, deref(state, "state")?.0.cutoff()))
}

/// Phase-space trace, normalized so that a pure state gives 1.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_trace(state: *const LandauState, re: *mut f64, im: *mut f64) -> LandauStatus {
    guard(|| {
        let t = deref(state, "state")?.0.trace();
        put(re, t.re)?;
        put(im, t.im)
    })
}

/// Value of the state's phase-space function at a point.
///
/// # Safety
/// Handles must be live; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_eval(
    state: *const LandauState,
    q1: f64,
    q2: f64,
    p1: f64,
    p2: f64,
    params: *const LandauParams,
    re: *mut f64,
    im: *mut f64,
) -> LandauStatus {
    guard(|| {
        let s = &deref(state, "state")?.0;
        let p = &deref(params, "params")?.0;
        let v = s.eval(&PhasePoint::new(q1, q2, p1, p2), p);
        put(re, v.re)?;
        put(im, v.im)
    })
}

/// Star product `lhs ⋆ rhs` as a new handle.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_star(
    lhs: *const LandauState,
    rhs: *const LandauState,
    out: *mut *mut LandauState,
) -> LandauStatus {
    guard(|| {
        let v = deref(lhs, "lhs")?.0.star(&deref(rhs, "rhs")?.0)?;
        put(out, Box::into_raw(Box::new(LandauState(v))))
    })
}

/// JSON form of the state. Release the string with `landau_string_free`.
///
/// # Safety
/// `state` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn landau_state_to_json(state: *const LandauState, out: *mut *mut c_char) -> LandauStatus {
    guard(|| {
        let s = deref(state, "state")?.0.to_json();
        let c = CString::new(s).map_err(|e| Failure(LandauStatus::Numerical, e.to_string()))?;
        put(out, c.into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn landau_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn error_slot_is_cleared_on_success() {
        let mut p = ptr::null_mut();
        unsafe {
            assert_eq!(landau_params_new(-1.0, 1.0, 1.0, &mut p), LandauStatus::InvalidArgument);
            assert!(!CStr::from_ptr(landau_last_error()).to_bytes().is_empty());
            assert_eq!(landau_params_new(1.0, 1.0, 1.0, &mut p), LandauStatus::Ok);
            assert!(CStr::from_ptr(landau_last_error()).to_bytes().is_empty());
            landau_params_free(p);
        }
    }
}
