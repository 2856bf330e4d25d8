//! C ABI over the isofan toolkit.
//!
//! Every function returns an [`IsofanStatus`]; results come back through out
//! pointers. On failure the message is available from [`isofan_last_error`]
//! on the same thread. Handles are opaque and released with their `_free`
//! function; strings returned by the library are released with
//! [`isofan_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isofan::riemann::{classify_detailed, solve_standard, verify_standard, RiemannProblem, StandardSolution};
use isofan::subsolution::search_feasible;
use isofan::wedge::{build, OrientedWedge, WedgeOptions};
use isofan::{oracles, Error, GasLaw, State, Tolerances};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsofanStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotFound = 2,
    Numeric = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsofanState {
    pub rho: f64,
    pub v1: f64,
    pub v2: f64,
}

/// Riemann data: a gas law and two states.
pub struct IsofanProblem(RiemannProblem);

/// Standard solution of a problem.
pub struct IsofanSolution(StandardSolution);

/// Wedge construction, possibly built on the rotated data.
pub struct IsofanWedge(OrientedWedge);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> IsofanStatus {
    match e {
        Error::NonPositive { .. }
        | Error::NonFinite { .. }
        | Error::InvalidLaw(_)
        | Error::TangentialMismatch { .. }
        | Error::Precondition(_)
        | Error::CriterionViolated(_)
        | Error::NoVacuumForIsothermal
        | Error::InvalidArgument(_) => IsofanStatus::InvalidArgument,
        _ => IsofanStatus::Numeric,
    }
}

fn fail(status: IsofanStatus, message: impl Into<String>) -> IsofanStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> IsofanStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning panics into `Panic` and clearing the error slot first.
fn guard(f: impl FnOnce() -> IsofanStatus) -> IsofanStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(IsofanStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, IsofanStatus> {
    p.as_ref().ok_or_else(|| fail(IsofanStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, IsofanStatus> {
    p.as_mut().ok_or_else(|| fail(IsofanStatus::NullPointer, format!("{what} is null")))
}

fn to_c(s: &State) -> IsofanState {
    IsofanState { rho: s.rho, v1: s.v1, v2: s.v2 }
}

fn json_out(text: serde_json::Result<String>, dst: &mut *mut c_char) -> IsofanStatus {
    let text = text.expect("report types serialize");
    match CString::new(text) {
        Ok(c) => {
            *dst = c.into_raw();
            IsofanStatus::Ok
        }
        Err(_) => fail(IsofanStatus::Numeric, "report contains a NUL byte"),
    }
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn isofan_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofan_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validates the data and returns a new problem handle in `*out_problem`.
///
/// # Safety
/// `left`, `right` and `out_problem` must be valid pointers or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_problem_new(
    k: f64,
    gamma: f64,
    left: *const IsofanState,
    right: *const IsofanState,
    out_problem: *mut *mut IsofanProblem,
) -> IsofanStatus {
    guard(|| {
        let l = try_ffi!(deref(left, "left"));
        let r = try_ffi!(deref(right, "right"));
        let dst = try_ffi!(out(out_problem, "out"));
        let built = GasLaw::new(k, gamma).and_then(|law| {
            let l = State::new(l.rho, l.v1, l.v2)?;
            let r = State::new(r.rho, r.v1, r.v2)?;
            RiemannProblem::new(law, l, r)
        });
        match built {
            Ok(p) => {
                *dst = Box::into_raw(Box::new(IsofanProblem(p)));
                IsofanStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `p` must be null or a handle from [`isofan_problem_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofan_problem_free(p: *mut IsofanProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Case number 1 to 7 in `*case_number`, 0 for constant data.
/// `*near_boundary` (if not null) flags data within rounding of a case boundary.
///
/// # Safety
/// Pointers must be valid or null; `near_boundary` may be null.
#[no_mangle]
pub unsafe extern "C" fn isofan_classify(
    p: *const IsofanProblem,
    case_number: *mut i32,
    near_boundary: *mut bool,
) -> IsofanStatus {
    guard(|| {
        let p = try_ffi!(deref(p, "problem"));
        let dst = try_ffi!(out(case_number, "case_number"));
        match classify_detailed(&p.0) {
            Ok(c) => {
                *dst = c.case.number().map_or(0, i32::from);
                if let Some(nb) = near_boundary.as_mut() {
                    *nb = c.near_boundary;
                }
                IsofanStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `p` and `out_solution` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_solve_standard(
    p: *const IsofanProblem,
    out_solution: *mut *mut IsofanSolution,
) -> IsofanStatus {
    guard(|| {
        let p = try_ffi!(deref(p, "problem"));
        let dst = try_ffi!(out(out_solution, "out"));
        match solve_standard(&p.0) {
            Ok(s) => {
                *dst = Box::into_raw(Box::new(IsofanSolution(s)));
                IsofanStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from [`isofan_solve_standard`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofan_solution_free(s: *mut IsofanSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Middle state of a two-wave solution. `NotFound` for single waves,
/// constant data and vacuum.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_solution_middle(s: *const IsofanSolution, middle: *mut IsofanState) -> IsofanStatus {
    guard(|| {
        let s = try_ffi!(deref(s, "solution"));
        let dst = try_ffi!(out(middle, "middle"));
        match s.0.middle_state() {
            Some(m) => {
                *dst = to_c(&m);
                IsofanStatus::Ok
            }
            None => fail(IsofanStatus::NotFound, "solution has no middle state"),
        }
    })
}

/// Checks the solution against the problem. Nonpositive tolerances select
/// the defaults. `*pass` receives the overall verdict.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_solution_verify(
    p: *const IsofanProblem,
    s: *const IsofanSolution,
    tol_eq: f64,
    tol_strict: f64,
    pass: *mut bool,
) -> IsofanStatus {
    guard(|| {
        let p = try_ffi!(deref(p, "problem"));
        let s = try_ffi!(deref(s, "solution"));
        let dst = try_ffi!(out(pass, "pass"));
        let d = Tolerances::default();
        let tol = Tolerances {
            equation: if tol_eq > 0.0 { tol_eq } else { d.equation },
            strict: if tol_strict > 0.0 { tol_strict } else { d.strict },
        };
        *dst = verify_standard(&p.0, &s.0, &tol).overall;
        IsofanStatus::Ok
    })
}

/// JSON form of the solution; free with [`isofan_string_free`].
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_solution_json(s: *const IsofanSolution, json: *mut *mut c_char) -> IsofanStatus {
    guard(|| {
        let s = try_ffi!(deref(s, "solution"));
        let dst = try_ffi!(out(json, "json"));
        json_out(serde_json::to_string(&s.0), dst)
    })
}

/// Direct search for a fan subsolution. `NotFound` when the search is empty.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_search_subsolution(
    p: *const IsofanProblem,
    rho1: *mut f64,
    delta2: *mut f64,
) -> IsofanStatus {
    guard(|| {
        let p = try_ffi!(deref(p, "problem"));
        let r = try_ffi!(out(rho1, "rho1"));
        let d = try_ffi!(out(delta2, "delta2"));
        match search_feasible(&p.0) {
            Ok(Some((a, b))) => {
                *r = a;
                *d = b;
                IsofanStatus::Ok
            }
            Ok(None) => fail(IsofanStatus::NotFound, "no feasible point found"),
            Err(e) => from_error(e),
        }
    })
}

/// Wedge construction with default options. Mirrored data is rotated first.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_wedge_build(p: *const IsofanProblem, out_wedge: *mut *mut IsofanWedge) -> IsofanStatus {
    guard(|| {
        let p = try_ffi!(deref(p, "problem"));
        let dst = try_ffi!(out(out_wedge, "out"));
        match build(&p.0, &WedgeOptions::default()) {
            Ok(w) => {
                *dst = Box::into_raw(Box::new(IsofanWedge(w)));
                IsofanStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `w` must be null or a handle from [`isofan_wedge_build`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isofan_wedge_free(w: *mut IsofanWedge) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Auxiliary state, glue margin and whether the data was rotated.
/// Any out pointer may be null.
///
/// # Safety
/// `w` must be a valid handle; other pointers valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_wedge_summary(
    w: *const IsofanWedge,
    aux: *mut IsofanState,
    glue_margin: *mut f64,
    rotated: *mut bool,
) -> IsofanStatus {
    guard(|| {
        let w = try_ffi!(deref(w, "wedge"));
        let c = &w.0.construction;
        if let Some(a) = aux.as_mut() {
            *a = to_c(&c.u2);
        }
        if let Some(g) = glue_margin.as_mut() {
            *g = c.glue_margin;
        }
        if let Some(r) = rotated.as_mut() {
            *r = w.0.rotated;
        }
        IsofanStatus::Ok
    })
}

/// JSON form of the construction; free with [`isofan_string_free`].
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_wedge_json(w: *const IsofanWedge, json: *mut *mut c_char) -> IsofanStatus {
    guard(|| {
        let w = try_ffi!(deref(w, "wedge"));
        let dst = try_ffi!(out(json, "json"));
        json_out(serde_json::to_string(&w.0), dst)
    })
}

/// Seeded lemma suite. `*all_pass` receives the verdict.
///
/// # Safety
/// `all_pass` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn isofan_lemma_suite(seed: u64, samples: usize, all_pass: *mut bool) -> IsofanStatus {
    guard(|| {
        let dst = try_ffi!(out(all_pass, "all_pass"));
        if samples == 0 {
            return fail(IsofanStatus::InvalidArgument, "samples must be positive");
        }
        *dst = oracles::run_suite(seed, samples).all_pass();
        IsofanStatus::Ok
    })
}
