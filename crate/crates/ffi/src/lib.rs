//! C interface: sessions fill holes in `.syn` sources and return JSON.
//!
//! Every function returns an [`HfStatus`]; on failure a message is
//! available from [`hf_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;

use holeforge::driver::{base_program, fill_source, FillConfig};
use holeforge::parser::ErrorCode;
use holeforge::program::Program;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    ParseError = 1,
    TypeError = 2,
    NoCandidates = 3,
    InvalidArgument = 4,
    Panic = 5,
}

/// Opaque synthesis session.
pub struct HfSession {
    base: Program,
    config: FillConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> HfStatus) -> HfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {msg}"));
            HfStatus::Panic
        }
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a session with the default budget, optionally loading the
/// bundled prelude.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_session_new(with_prelude: bool, out: *mut *mut HfSession) -> HfStatus {
    guard(|| {
        if out.is_null() {
            set_error("`out` is NULL");
            return HfStatus::InvalidArgument;
        }
        match base_program(with_prelude) {
            Ok(base) => {
                let s = Box::new(HfSession {
                    base,
                    config: FillConfig::default(),
                });
                *out = Box::into_raw(s);
                HfStatus::Ok
            }
            Err(e) => {
                set_error(e);
                HfStatus::ParseError
            }
        }
    })
}

/// Sets the search budget. Every value must be positive.
///
/// # Safety
/// `session` must come from [`hf_session_new`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn hf_session_set_budget(
    session: *mut HfSession,
    max_app_depth: usize,
    max_case_depth: usize,
    max_candidates: usize,
) -> HfStatus {
    guard(|| {
        let Some(s) = session.as_mut() else {
            set_error("`session` is NULL");
            return HfStatus::InvalidArgument;
        };
        if max_app_depth == 0 || max_case_depth == 0 || max_candidates == 0 {
            set_error("budget values must be positive");
            return HfStatus::InvalidArgument;
        }
        s.config.budget.max_app_depth = max_app_depth;
        s.config.budget.max_case_depth = max_case_depth;
        s.config.budget.max_candidates = max_candidates;
        HfStatus::Ok
    })
}

/// Fills every hole of the NUL-terminated source `src` and stores a JSON
/// report in `*out_json` (free it with [`hf_string_free`]). The report is
/// also produced when some hole has no candidates, in which case the
/// status is `NoCandidates`.
///
/// # Safety
/// `session` must come from [`hf_session_new`]; `src` must be a valid
/// NUL-terminated string; `out_json` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hf_session_fill_json(session: *const HfSession, src: *const c_char, out_json: *mut *mut c_char) -> HfStatus {
    guard(|| {
        let (Some(s), false, false) = (session.as_ref(), src.is_null(), out_json.is_null()) else {
            set_error("NULL argument");
            return HfStatus::InvalidArgument;
        };
        *out_json = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(src).to_str() else {
            set_error("source is not valid UTF-8");
            return HfStatus::InvalidArgument;
        };
        let report = match fill_source(&s.base, text, &s.config) {
            Ok(r) => r,
            Err(d) => {
                set_error(d.render("<input>"));
                return match d.code {
                    ErrorCode::Type | ErrorCode::Unbound | ErrorCode::NonExhaustive => HfStatus::TypeError,
                    _ => HfStatus::ParseError,
                };
            }
        };
        let json = match serde_json::to_string(&report.to_json()) {
            Ok(j) => j,
            Err(e) => {
                set_error(e.to_string());
                return HfStatus::Panic;
            }
        };
        match CString::new(json) {
            Ok(c) => *out_json = c.into_raw(),
            Err(e) => {
                set_error(e.to_string());
                return HfStatus::Panic;
            }
        }
        if report.exit_code() == 0 {
            HfStatus::Ok
        } else {
            set_error("some hole has no candidates");
            HfStatus::NoCandidates
        }
    })
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Frees a session. NULL is ignored.
///
/// # Safety
/// `session` must be NULL or come from [`hf_session_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hf_session_free(session: *mut HfSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}
