//! C interface to `crossed-spectrum`.
//!
//! Every entry point returns a [`CsStatus`] and writes results through out
//! pointers. Handles are opaque and must be released with their `_free`
//! function. On failure, [`cs_last_error_message`] describes what went wrong
//! on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use crossed_spectrum::scenario::{Built, Scenario};
use crossed_spectrum::so_branching::{verify_branching, weyl_dimension, HighestWeight};
use crossed_spectrum::spectrum::{MultiplicityReport, Spectrum};
use crossed_spectrum::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    Internal = 5,
    OutOfRange = 6,
}

/// A parsed and validated scenario.
pub struct CsScenario {
    built: Built,
}

/// The multiplicity report of one scenario.
pub struct CsReport {
    report: MultiplicityReport,
    violations: Vec<String>,
}

/// One row of a report. The stratum label is available through
/// `cs_report_point_stratum`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CsPointSummary {
    pub stabilizer_order: usize,
    pub v: usize,
    pub dim_v: usize,
    pub m_u: u32,
    pub witness_order: usize,
    pub witness_r: usize,
    pub dim_r: usize,
    pub index_sz_h: usize,
    pub fell: bool,
    pub in_o_char: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> CsStatus {
    match err {
        Error::Json(_) | Error::Scenario(_) => CsStatus::ParseError,
        Error::Overflow(_) => CsStatus::OutOfRange,
        e if e.is_input_error() => CsStatus::InvalidInput,
        _ => CsStatus::Internal,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (CsStatus, String)>) -> CsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside crossed-spectrum");
            CsStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (CsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CsStatus, String) {
    (CsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (CsStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_c_string(s: String) -> Result<*mut c_char, (CsStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(|_| (CsStatus::Internal, "string contains NUL".into()))
}

unsafe fn weight_arg(n: usize, entries: *const i64, len: usize) -> Result<HighestWeight, (CsStatus, String)> {
    let slice = if len == 0 {
        &[][..]
    } else if entries.is_null() {
        return Err(null("entries"));
    } else {
        std::slice::from_raw_parts(entries, len)
    };
    HighestWeight::new(n, slice.to_vec()).map_err(lib_err)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and builds a scenario from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cs_scenario_from_json(json: *const c_char, out: *mut *mut CsScenario) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let built = Scenario::from_json(text).and_then(|s| s.build()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CsScenario { built }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from `cs_scenario_from_json` or be null.
#[no_mangle]
pub unsafe extern "C" fn cs_scenario_free(scenario: *mut CsScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Number of strata of the scenario's space.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_scenario_num_strata(scenario: *const CsScenario, out: *mut usize) -> CsStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = s.built.space.strata().len();
        Ok(())
    })
}

/// Computes the multiplicity report. Bound violations do not make this call
/// fail; count them with `cs_report_num_violations`.
///
/// # Safety
/// `scenario` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_analyze(scenario: *const CsScenario, out: *mut *mut CsReport) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let b = &s.built;
        let spectrum = Spectrum::new(&b.space, b.group_table.clone(), b.settings.tolerances).map_err(lib_err)?;
        spectrum.char_open_set().map_err(lib_err)?;
        let report = spectrum.report().map_err(lib_err)?;
        let mut violations = report.bound_violations();
        violations.extend(spectrum.corollary_violations(&report).map_err(lib_err)?);
        *out = Box::into_raw(Box::new(CsReport { report, violations }));
        Ok(())
    })
}

/// # Safety
/// `report` must come from `cs_analyze` or be null.
#[no_mangle]
pub unsafe extern "C" fn cs_report_free(report: *mut CsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_report_num_points(report: *const CsReport, out: *mut usize) -> CsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = r.report.points.len();
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_report_point(report: *const CsReport, index: usize, out: *mut CsPointSummary) -> CsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = r
            .report
            .points
            .get(index)
            .ok_or_else(|| (CsStatus::OutOfRange, format!("point {index} of {}", r.report.points.len())))?;
        *out = CsPointSummary {
            stabilizer_order: p.stabilizer_order,
            v: p.v,
            dim_v: p.dim_v,
            m_u: p.m_u,
            witness_order: p.witness_h.order,
            witness_r: p.witness_r,
            dim_r: p.dim_r,
            index_sz_h: p.index_sz_h,
            fell: p.fell,
            in_o_char: p.in_o_char,
        };
        Ok(())
    })
}

/// Stratum label of a point, as a string to release with `cs_string_free`.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_report_point_stratum(
    report: *const CsReport,
    index: usize,
    out: *mut *mut c_char,
) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let p = r.report.points.get(index).ok_or_else(|| (CsStatus::OutOfRange, format!("point {index}")))?;
        *out = to_c_string(p.stratum.clone())?;
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle; either out pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn cs_report_is_fell(
    report: *const CsReport,
    fell: *mut bool,
    continuous_trace: *mut bool,
) -> CsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if let Some(f) = fell.as_mut() {
            *f = r.report.is_fell;
        }
        if let Some(c) = continuous_trace.as_mut() {
            *c = r.report.is_continuous_trace;
        }
        Ok(())
    })
}

/// Number of bound or corollary violations found by `cs_analyze`.
///
/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cs_report_num_violations(report: *const CsReport, out: *mut usize) -> CsStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        *out.as_mut().ok_or_else(|| null("out"))? = r.violations.len();
        Ok(())
    })
}

/// The report as pretty JSON, identical to the CLI output.
///
/// # Safety
/// `report` must be a live handle and `out` writable. Free the string with
/// `cs_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cs_report_to_json(report: *const CsReport, out: *mut *mut c_char) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let json = serde_json::to_string_pretty(&r.report).map_err(|e| (CsStatus::Internal, e.to_string()))?;
        *out = to_c_string(json)?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Weyl dimension of the `SO(n)` representation with the given highest
/// weight (`n / 2` entries).
///
/// # Safety
/// `entries` must point to `len` readable values and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_so_weyl_dimension(n: usize, entries: *const i64, len: usize, out: *mut u64) -> CsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let w = weight_arg(n, entries, len)?;
        *out = weyl_dimension(&w).map_err(lib_err)?;
        Ok(())
    })
}

/// Whether restriction to `SO(n-1)` is multiplicity free with matching
/// dimensions.
///
/// # Safety
/// `entries` must point to `len` readable values and `passed` be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_so_verify_branching(
    n: usize,
    entries: *const i64,
    len: usize,
    passed: *mut bool,
) -> CsStatus {
    guard(|| {
        let passed = passed.as_mut().ok_or_else(|| null("passed"))?;
        let w = weight_arg(n, entries, len)?;
        *passed = verify_branching(&w).map_err(lib_err)?.passed;
        Ok(())
    })
}
