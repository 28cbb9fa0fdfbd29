//! C ABI over `alba-core`.
//!
//! Results live behind an opaque [`AlbaHandle`]. Every function that can
//! fail returns an [`AlbaStatus`]; the message for the most recent failure
//! on the calling thread is available from [`alba_last_error`]. Strings
//! returned to the caller are owned by the caller and must be released with
//! [`alba_string_free`]; handles with [`alba_result_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use alba::engine::TraceStepJson;
use alba::{check_inductive, correspondence_check, correspondent, parse_inequality, run, AlbaResult, Inequality, Status};
use serde_json::json;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlbaStatus {
    Ok = 0,
    /// The input is not inductive or the reduction got stuck.
    Failure = 1,
    ParseError = 2,
    /// Verification found a frame where inequality and correspondent differ.
    Counterexample = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque result of one run.
pub struct AlbaHandle {
    input: Inequality,
    result: AlbaResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: AlbaStatus, msg: impl Into<String>) -> AlbaStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> AlbaStatus) -> AlbaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(AlbaStatus::Panic, "internal panic"))
}

fn guarded_ptr(f: impl FnOnce() -> *mut c_char) -> *mut c_char {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        ptr::null_mut()
    })
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs replaced").into_raw()
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, AlbaStatus> {
    if s.is_null() {
        return Err(fail(AlbaStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(AlbaStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn parse(s: *const c_char) -> Result<Inequality, AlbaStatus> {
    let text = read_str(s)?;
    parse_inequality(text).map_err(|e| fail(AlbaStatus::ParseError, e.to_string()))
}

unsafe fn handle<'a>(h: *const AlbaHandle) -> Option<&'a AlbaHandle> {
    if h.is_null() {
        set_error("null handle");
    }
    h.as_ref()
}

/// Parses `input` and runs the reduction. On `ALBA_STATUS_OK` or
/// `ALBA_STATUS_FAILURE` a handle is stored in `*out`; on other statuses
/// `*out` is set to NULL.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn alba_run(input: *const c_char, out: *mut *mut AlbaHandle) -> AlbaStatus {
    guarded(|| {
        if out.is_null() {
            return fail(AlbaStatus::NullArgument, "null output pointer");
        }
        *out = ptr::null_mut();
        let ineq = match parse(input) {
            Ok(i) => i,
            Err(status) => return status,
        };
        let result = run(&ineq);
        let status = match (&result.status, &result.failure) {
            (Status::Success, _) => AlbaStatus::Ok,
            (Status::Failure, reason) => fail(
                AlbaStatus::Failure,
                reason.as_ref().map(ToString::to_string).unwrap_or_default(),
            ),
        };
        *out = Box::into_raw(Box::new(AlbaHandle { input: ineq, result }));
        status
    })
}

/// `ALBA_STATUS_OK` for a successful run, `ALBA_STATUS_FAILURE` otherwise.
///
/// # Safety
/// `h` must be NULL or a live handle from [`alba_run`].
#[no_mangle]
pub unsafe extern "C" fn alba_result_status(h: *const AlbaHandle) -> AlbaStatus {
    match handle(h) {
        Some(h) if h.result.status == Status::Success => AlbaStatus::Ok,
        Some(_) => AlbaStatus::Failure,
        None => AlbaStatus::NullArgument,
    }
}

/// Number of quasi-inequalities produced (0 after a failed run).
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_quasi_count(h: *const AlbaHandle) -> usize {
    handle(h).map_or(0, |h| h.result.quasis.len())
}

/// The `index`-th quasi-inequality in text form, or NULL if out of range.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_quasi(h: *const AlbaHandle, index: usize) -> *mut c_char {
    guarded_ptr(|| match handle(h) {
        Some(h) => match h.result.quasis.get(index) {
            Some(q) => into_c(q.to_string()),
            None => {
                set_error(format!("quasi-inequality index {index} out of range"));
                ptr::null_mut()
            }
        },
        None => ptr::null_mut(),
    })
}

/// The failure reason of a failed run, or NULL after success.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_failure(h: *const AlbaHandle) -> *mut c_char {
    guarded_ptr(|| match handle(h).and_then(|h| h.result.failure.as_ref()) {
        Some(f) => into_c(f.to_string()),
        None => ptr::null_mut(),
    })
}

/// The first-order correspondent in text form, or NULL after a failed run.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_fo(h: *const AlbaHandle, simplify: bool) -> *mut c_char {
    guarded_ptr(|| match handle(h) {
        Some(h) if h.result.status == Status::Success => match correspondent(&h.result.quasis, simplify) {
            Ok(s) => into_c(s.to_string()),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        },
        Some(_) => {
            set_error("run failed; no correspondent");
            ptr::null_mut()
        }
        None => ptr::null_mut(),
    })
}

/// The correspondent as JSON `{"text": ..., "ast": ...}`, or NULL after a
/// failed run.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_fo_json(h: *const AlbaHandle, simplify: bool) -> *mut c_char {
    guarded_ptr(|| match handle(h) {
        Some(h) if h.result.status == Status::Success => match correspondent(&h.result.quasis, simplify) {
            Ok(s) => into_c(json!({"text": s.to_string(), "ast": s}).to_string()),
            Err(e) => {
                set_error(e.to_string());
                ptr::null_mut()
            }
        },
        Some(_) => {
            set_error("run failed; no correspondent");
            ptr::null_mut()
        }
        None => ptr::null_mut(),
    })
}

/// Rewrite traces as a JSON array with one `{"initial", "steps"}` object per
/// system.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_trace_json(h: *const AlbaHandle) -> *mut c_char {
    guarded_ptr(|| match handle(h) {
        Some(h) => {
            let traces: Vec<_> = h
                .result
                .systems
                .iter()
                .zip(&h.result.traces)
                .map(|(sys, trace)| {
                    json!({
                        "initial": sys.inequalities.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
                        "steps": trace.iter().map(TraceStepJson::from).collect::<Vec<_>>(),
                    })
                })
                .collect();
            into_c(serde_json::Value::from(traces).to_string())
        }
        None => ptr::null_mut(),
    })
}

/// Checks the simplified correspondent against the input on every frame with
/// at most `max_n` worlds. Returns `ALBA_STATUS_OK` on agreement,
/// `ALBA_STATUS_COUNTEREXAMPLE` otherwise.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn alba_result_verify(h: *const AlbaHandle, max_n: usize) -> AlbaStatus {
    guarded(|| {
        let Some(h) = handle(h) else {
            return AlbaStatus::NullArgument;
        };
        if h.result.status != Status::Success {
            return fail(AlbaStatus::Failure, "run failed; nothing to verify");
        }
        let s = match correspondent(&h.result.quasis, true) {
            Ok(s) => s,
            Err(e) => return fail(AlbaStatus::Failure, e.to_string()),
        };
        match correspondence_check(&h.input, &s, max_n) {
            Ok(report) if report.agrees() => AlbaStatus::Ok,
            Ok(report) => fail(AlbaStatus::Counterexample, report.to_string()),
            Err(e) => fail(AlbaStatus::OutOfRange, e.to_string()),
        }
    })
}

/// Classifies `input` and stores a JSON certificate or failure reason in
/// `*out_json` (caller frees). Returns `ALBA_STATUS_OK` if inductive,
/// `ALBA_STATUS_FAILURE` if not.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn alba_check_inductive(input: *const c_char, out_json: *mut *mut c_char) -> AlbaStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(AlbaStatus::NullArgument, "null output pointer");
        }
        *out_json = ptr::null_mut();
        let ineq = match parse(input) {
            Ok(i) => i,
            Err(status) => return status,
        };
        let (value, status) = match check_inductive(&ineq) {
            Ok(cert) => (json!({"inductive": true, "certificate": cert}), AlbaStatus::Ok),
            Err(reason) => {
                let msg = reason.to_string();
                (
                    json!({"inductive": false, "failure": reason, "message": msg}),
                    fail(AlbaStatus::Failure, msg),
                )
            }
        };
        *out_json = into_c(value.to_string());
        status
    })
}

/// Message for the most recent failure on this thread, or NULL. The caller
/// owns the returned copy.
#[no_mangle]
pub extern "C" fn alba_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `h` must be NULL or a handle from [`alba_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn alba_result_free(h: *mut AlbaHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn alba_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
