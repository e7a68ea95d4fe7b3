//! C interface to `posethopf`.
//!
//! Every fallible call returns a [`PhStatus`] and writes its result through
//! an out pointer. On failure the message is kept per thread and can be read
//! with [`ph_last_error_message`]. Strings handed out must be released with
//! [`ph_string_free`], posets with [`ph_poset_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use posethopf::counting::num_templates;
use posethopf::growth::{grow_distribution, CouplingsJson, GrowthRule};
use posethopf::hopf::{coproduct, PosetVector};
use posethopf::poset::enumerate;
use posethopf::subhopf::check_closure;
use posethopf::{Error, Poset};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Cycle = 4,
    SizeExceeded = 5,
    Domain = 6,
    Model = 7,
    Internal = 8,
}

/// Opaque handle to an unlabelled poset.
pub struct PhPoset {
    inner: Poset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PhStatus {
    match e {
        Error::Parse(_) => PhStatus::Parse,
        Error::CycleDetected => PhStatus::Cycle,
        Error::SizeExceeded { .. } => PhStatus::SizeExceeded,
        Error::DomainError(_) | Error::NotAForest | Error::IndexOutOfRange { .. } => PhStatus::Domain,
        _ => PhStatus::Model,
    }
}

struct Failure(PhStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PhStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            PhStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(PhStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(PhStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(PhStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(PhStatus::Internal, "string contains nul".into()))?;
    if out.is_null() {
        return Err(Failure(PhStatus::NullPointer, "null output pointer".into()));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn poset_ref<'a>(p: *const PhPoset) -> Result<&'a Poset, Failure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| Failure(PhStatus::NullPointer, "null poset handle".into()))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(PhStatus::Internal, e.to_string()))
}

fn rule_from_json(text: &str) -> Result<GrowthRule, Failure> {
    let j: CouplingsJson = serde_json::from_str(text).map_err(|e| Failure(PhStatus::Parse, e.to_string()))?;
    Ok(GrowthRule::Csg(j.to_couplings()?))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ph_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ph_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a poset from the text form `n:a-b,c-d` (1-based covers) or JSON.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_poset_parse(text: *const c_char, out: *mut *mut PhPoset) -> PhStatus {
    guard(|| {
        let p: Poset = read_str(text)?.parse()?;
        write_out(out, Box::into_raw(Box::new(PhPoset { inner: p })))
    })
}

/// Releases a poset handle. Null is ignored.
///
/// # Safety
/// `p` must come from [`ph_poset_parse`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ph_poset_free(p: *mut PhPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_poset_size(p: *const PhPoset, out: *mut usize) -> PhStatus {
    guard(|| write_out(out, poset_ref(p)?.len()))
}

/// Canonical text form of the poset.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_poset_to_text(p: *const PhPoset, out: *mut *mut c_char) -> PhStatus {
    guard(|| write_string(out, poset_ref(p)?.to_text()))
}

/// Number of natural labellings up to isomorphism.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_num_templates(p: *const PhPoset, out: *mut u64) -> PhStatus {
    guard(|| write_out(out, num_templates(poset_ref(p)?) as u64))
}

/// Coproduct as a JSON list of `{"left", "right", "coeff"}`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_coproduct_json(p: *const PhPoset, out: *mut *mut c_char) -> PhStatus {
    guard(|| {
        let d = coproduct(poset_ref(p)?);
        write_string(out, to_json(&d.to_json())?)
    })
}

/// Number of posets with `n` elements.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_enumerate_count(n: usize, out: *mut usize) -> PhStatus {
    guard(|| write_out(out, enumerate(n)?.len()))
}

/// Distribution of the grown poset with `n` elements, as a JSON list of
/// `{"poset", "coeff"}`. `couplings_json` is `{"t": [...], "s": [...]}`.
///
/// # Safety
/// `couplings_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_grow_json(couplings_json: *const c_char, n: usize, out: *mut *mut c_char) -> PhStatus {
    guard(|| {
        let rule = rule_from_json(read_str(couplings_json)?)?;
        let v = grow_distribution(n, &rule, None)?;
        write_string(out, to_json(&v.to_json())?)
    })
}

/// Closure report for the generators of a classical growth model up to
/// degree `n_max`, as JSON. The status field tells whether they close.
///
/// # Safety
/// `couplings_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_check_subhopf_json(
    couplings_json: *const c_char,
    n_max: usize,
    out: *mut *mut c_char,
) -> PhStatus {
    guard(|| {
        let rule = rule_from_json(read_str(couplings_json)?)?;
        let mut series = vec![PosetVector::zero()];
        for n in 1..=n_max {
            series.push(grow_distribution(n, &rule, None)?);
        }
        let report = check_closure(&series, n_max)?;
        write_string(out, to_json(&report.to_json())?)
    })
}

/// Gaussian binomial coefficient `[n choose k]_q` as text.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_qbinom_text(n: usize, k: usize, out: *mut *mut c_char) -> PhStatus {
    guard(|| write_string(out, posethopf::algebra::qbinom(n, k).to_string()))
}
