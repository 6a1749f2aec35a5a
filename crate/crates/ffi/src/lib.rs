//! C ABI over `critlocus`.
//!
//! Representations cross the boundary as opaque handles built from JSON.
//! Every function returns a [`CritlocusStatus`]; on failure the message is
//! available from [`critlocus_last_error`] until the next call on the same
//! thread. Strings handed out by the library are freed with
//! [`critlocus_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use critlocus::cli::{parse_point, CliError};
use critlocus::hilbtan::compare_tangents;
use critlocus::koszul::{koszul, massey_vanishing_report, verify_product_table};
use critlocus::potential::{eval_potential, FramedRep};
use critlocus::stability::{is_critical, is_stable};
use critlocus::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CritlocusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Invariant = 4,
    Panic = 5,
}

/// Opaque framed representation.
pub struct CritlocusRep {
    inner: FramedRep,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

struct Failure(CritlocusStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match CliError::from(e) {
            CliError::Input(m) => Failure(CritlocusStatus::InvalidInput, m),
            CliError::Invariant(m) => Failure(CritlocusStatus::Invariant, m),
        }
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let code = match e {
            CliError::Input(_) => CritlocusStatus::InvalidInput,
            CliError::Invariant(_) => CritlocusStatus::Invariant,
        };
        Failure(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CritlocusStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CritlocusStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            CritlocusStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(CritlocusStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(CritlocusStatus::InvalidUtf8, e.to_string()))
}

unsafe fn rep_ref<'a>(rep: *const CritlocusRep) -> Result<&'a FramedRep, Failure> {
    rep.as_ref().map(|r| &r.inner).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, v: &T) -> Result<(), Failure> {
    let text = serde_json::to_string(v).map_err(|e| Failure(CritlocusStatus::Invariant, e.to_string()))?;
    let c = CString::new(text).map_err(|e| Failure(CritlocusStatus::Invariant, e.to_string()))?;
    write_out(out, c.into_raw())
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; do not free.
#[no_mangle]
pub extern "C" fn critlocus_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn critlocus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{n, r, A, B, C, V}` JSON into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_from_json(json: *const c_char, out: *mut *mut CritlocusRep) -> CritlocusStatus {
    guard(|| {
        let text = read_str(json)?;
        let inner: FramedRep =
            serde_json::from_str(text).map_err(|e| Failure(CritlocusStatus::InvalidInput, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(CritlocusRep { inner })))
    })
}

/// # Safety
/// `rep` must be null or a handle from [`critlocus_rep_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_free(rep: *mut CritlocusRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// # Safety
/// `rep` must be a live handle; `n` and `r` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_shape(rep: *const CritlocusRep, n: *mut usize, r: *mut usize) -> CritlocusStatus {
    guard(|| {
        let rep = rep_ref(rep)?;
        write_out(n, rep.n())?;
        write_out(r, rep.r())
    })
}

/// `Tr A[B,C]` as a JSON scalar (`"p/q"` or `{"re","im"}`).
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable. Free the result
/// with [`critlocus_string_free`].
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_eval_potential(rep: *const CritlocusRep, out: *mut *mut c_char) -> CritlocusStatus {
    guard(|| write_json(out, &eval_potential(rep_ref(rep)?)))
}

/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_is_stable(rep: *const CritlocusRep, out: *mut bool) -> CritlocusStatus {
    guard(|| write_out(out, is_stable(rep_ref(rep)?)))
}

/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_rep_is_critical(rep: *const CritlocusRep, out: *mut bool) -> CritlocusStatus {
    guard(|| write_out(out, is_critical(rep_ref(rep)?)))
}

/// Tangent comparison over all monomial ideals of colength `n` (1..=6).
/// Writes the JSON table to `out` and whether every row agrees to `all_equal`.
///
/// # Safety
/// `out` and `all_equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_hilb_compare(n: usize, out: *mut *mut c_char, all_equal: *mut bool) -> CritlocusStatus {
    guard(|| {
        if out.is_null() || all_equal.is_null() {
            return Err(null());
        }
        if n == 0 || n > 6 {
            return Err(Failure(CritlocusStatus::InvalidInput, format!("n = {n} outside 1..=6")));
        }
        let r = compare_tangents(n)?;
        write_out(all_equal, r.all_equal)?;
        write_json(out, &r)
    })
}

/// Hat-element product table and Massey report at the point `"a,b,c"`.
/// `all_hold` receives whether every relation in the table holds.
///
/// # Safety
/// `point` must be a NUL-terminated string; `out` and `all_hold` writable.
#[no_mangle]
pub unsafe extern "C" fn critlocus_koszul_table(
    point: *const c_char,
    out: *mut *mut c_char,
    all_hold: *mut bool,
) -> CritlocusStatus {
    guard(|| {
        if out.is_null() || all_hold.is_null() {
            return Err(null());
        }
        let p = parse_point(read_str(point)?)?;
        let k = koszul(&p);
        let table = verify_product_table(&k)?;
        let massey = massey_vanishing_report(&k)?;
        write_out(all_hold, table.all_hold)?;
        write_json(out, &serde_json::json!({ "table": table, "massey": massey }))
    })
}
