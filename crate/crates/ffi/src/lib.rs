//! C ABI over `levelh`.
//!
//! Every fallible call returns an [`LhStatus`] and writes its result through
//! an out-pointer. Handles are opaque and owned by the caller, who releases
//! them with the matching `*_free`. Strings returned through out-pointers are
//! released with [`lh_string_free`]. After a non-OK status,
//! [`lh_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use levelh::invsys::{hvector_of_module, socle_vector, InverseModule};
use levelh::level2::{decide, Certificate, Verdict};
use levelh::{Error, HVector};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    HypothesisNotMet = 4,
    Genericity = 5,
    BufferTooSmall = 6,
    Overflow = 7,
    Internal = 8,
}

/// Outcome of the type-2 level decision.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhVerdict {
    Level = 0,
    NotLevel = 1,
    Unknown = 2,
}

/// Opaque h-vector handle.
pub struct LhHVector(HVector);

/// Opaque decision certificate handle.
pub struct LhCertificate(Certificate);

/// Opaque inverse-system module handle.
pub struct LhModule(InverseModule);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> LhStatus {
    match err {
        Error::InvalidInput(_) => LhStatus::InvalidArgument,
        Error::Parse { .. } => LhStatus::Parse,
        Error::HypothesisNotMet(_) => LhStatus::HypothesisNotMet,
        Error::Genericity { .. } => LhStatus::Genericity,
        Error::Internal(_) => LhStatus::Internal,
    }
}

struct Fail(LhStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(LhStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, recording failures and converting panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LhStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside levelh");
            LhStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(LhStatus::Internal, "string contains a NUL byte".into()))
}

unsafe fn copy_out(values: &[u64], buf: *mut u64, cap: usize, len: *mut usize) -> Result<(), Fail> {
    write(len, values.len())?;
    if values.len() > cap {
        return Err(Fail(
            LhStatus::BufferTooSmall,
            format!("need {} entries, buffer holds {cap}", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an h-vector from `len` entries; trailing zeros are dropped.
///
/// # Safety
/// `entries` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_hvector_new(entries: *const u64, len: usize, out: *mut *mut LhHVector) -> LhStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null());
        }
        let h = HVector::new(std::slice::from_raw_parts(entries, len).to_vec())?;
        write(out, boxed(LhHVector(h)))
    })
}

/// Number of entries `e + 1`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_hvector_len(h: *const LhHVector, out: *mut usize) -> LhStatus {
    guard(|| write(out, deref(h)?.0.len()))
}

/// Copies the entries into `buf`. `*len` receives the entry count even when
/// the buffer is too small.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_hvector_entries(
    h: *const LhHVector,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> LhStatus {
    guard(|| copy_out(deref(h)?.0.entries(), buf, cap, len))
}

/// # Safety
/// `h` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lh_hvector_free(h: *mut LhHVector) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Whether `h` satisfies Macaulay's growth condition in every degree.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_is_o_sequence(h: *const LhHVector, out: *mut bool) -> LhStatus {
    guard(|| write(out, deref(h)?.0.is_o_sequence()))
}

/// `n^<i>`, the largest growth from degree `i` to `i + 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_macaulay_upper(n: u64, i: u64, out: *mut u64) -> LhStatus {
    guard(|| {
        let v = levelh::macaulay::macaulay_upper(n, i)?;
        let v = u64::try_from(&v).map_err(|_| Fail(LhStatus::Overflow, format!("{n}^<{i}> = {v} exceeds 64 bits")))?;
        write(out, v)
    })
}

/// Entrywise-maximal level h-vector `(1, r, ..., a, 2)` of socle degree `e`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_max_hvector(r: u64, a: u64, e: u64, out: *mut *mut LhHVector) -> LhStatus {
    guard(|| {
        let (h, _) = levelh::bounds::max_hvector(r, a, e)?;
        write(out, boxed(LhHVector(h)))
    })
}

/// Decides whether `h` is the h-vector of a type-2 level algebra.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_decide(
    h: *const LhHVector,
    seed: u64,
    retries: usize,
    out: *mut *mut LhCertificate,
) -> LhStatus {
    guard(|| {
        let c = decide(&deref(h)?.0, seed, retries)?;
        write(out, boxed(LhCertificate(c)))
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_certificate_verdict(c: *const LhCertificate, out: *mut LhVerdict) -> LhStatus {
    guard(|| {
        let v = match deref(c)?.0.verdict {
            Verdict::Level => LhVerdict::Level,
            Verdict::NotLevel => LhVerdict::NotLevel,
            Verdict::Unknown => LhVerdict::Unknown,
        };
        write(out, v)
    })
}

/// Name of the stage that produced the verdict, as an owned string.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_certificate_stage(c: *const LhCertificate, out: *mut *mut c_char) -> LhStatus {
    guard(|| write(out, c_string(deref(c)?.0.stage.clone())?))
}

/// Full certificate, with trace and any witness, as an owned JSON string.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_certificate_to_json(c: *const LhCertificate, out: *mut *mut c_char) -> LhStatus {
    guard(|| write(out, c_string(deref(c)?.0.to_json().to_string())?))
}

/// The witness module of a Level certificate; `*out` is null otherwise.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_certificate_witness(c: *const LhCertificate, out: *mut *mut LhModule) -> LhStatus {
    guard(|| {
        let m = deref(c)?.0.witness.as_ref().map_or(ptr::null_mut(), |w| boxed(LhModule(w.module.clone())));
        write(out, m)
    })
}

/// # Safety
/// `c` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lh_certificate_free(c: *mut LhCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Parses a module from the text format read by `levelh hvector --module`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_module_parse(text: *const c_char, out: *mut *mut LhModule) -> LhStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Fail(LhStatus::Parse, format!("module text is not UTF-8: {e}")))?;
        write(out, boxed(LhModule(InverseModule::parse(text)?)))
    })
}

/// Hilbert function of the quotient determined by the module.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_module_hvector(m: *const LhModule, out: *mut *mut LhHVector) -> LhStatus {
    guard(|| write(out, boxed(LhHVector(hvector_of_module(&deref(m)?.0)))))
}

/// Copies the socle vector into `buf`. `*len` receives the entry count even
/// when the buffer is too small.
///
/// # Safety
/// `m` must be a live handle; `buf` must hold `cap` values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lh_module_socle(m: *const LhModule, buf: *mut u64, cap: usize, len: *mut usize) -> LhStatus {
    guard(|| copy_out(socle_vector(&deref(m)?.0).entries(), buf, cap, len))
}

/// # Safety
/// `m` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lh_module_free(m: *mut LhModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}
