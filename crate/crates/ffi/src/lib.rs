//! C ABI over trunc-spaces.
//!
//! Descriptors and sequences cross the boundary as opaque handles. Every
//! fallible call returns a [`TsStatus`]; the message of the last failure on
//! the calling thread is available from [`ts_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trunc_spaces::embeddings::{embeds, Status};
use trunc_spaces::norms::trunc_norm_for;
use trunc_spaces::params::{
    canonicalize_descriptor, dual_descriptor, lift_descriptor, parse_descriptor, Num, ParamError, SpaceDescriptor,
};
use trunc_spaces::sequences::WaveletSequence;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// descriptor or sequence text did not parse or failed validation
    Parse = 3,
    /// parameters outside the range a statement covers
    OutOfRange = 4,
    Unsupported = 5,
    /// a norm or predicate rejected its input
    Domain = 6,
    Panic = 7,
}

/// Embedding verdict status.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsVerdict {
    Holds = 0,
    Fails = 1,
    Unknown = 2,
}

/// Opaque space descriptor.
pub struct TsDescriptor(SpaceDescriptor);

/// Opaque wavelet-coefficient sequence.
pub struct TsSequence(WaveletSequence);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(code: TsStatus, msg: impl Into<String>) -> TsStatus {
    set_error(msg);
    code
}

fn param_status(e: &ParamError) -> TsStatus {
    match e {
        ParamError::Invalid(_) => TsStatus::Parse,
        ParamError::OutOfPaperRange(_) => TsStatus::OutOfRange,
        ParamError::Unsupported(_) => TsStatus::Unsupported,
    }
}

/// Runs `f`, turning panics into `TsStatus::Panic`.
fn guard(f: impl FnOnce() -> TsStatus) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(TsStatus::Panic, "internal panic"),
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, TsStatus> {
    if p.is_null() {
        return Err(fail(TsStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TsStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> TsStatus {
    *out = Box::into_raw(Box::new(value));
    TsStatus::Ok
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread (empty if none).
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library (or be null) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the descriptor DSL, e.g. `TB(s=1,p=2,q=1,r=2,b=1/2,d=1)`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_parse(text: *const c_char, out: *mut *mut TsDescriptor) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null out pointer");
        }
        let t = match c_str(text) {
            Ok(t) => t,
            Err(c) => return c,
        };
        match parse_descriptor(t) {
            Ok(d) => put(out, TsDescriptor(d)),
            Err(e) => fail(TsStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `d` must come from this library (or be null) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_free(d: *mut TsDescriptor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// DSL text of a descriptor; free with `ts_string_free`. Null on a null handle.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_to_string(d: *const TsDescriptor) -> *mut c_char {
    match d.as_ref() {
        Some(d) => owned_string(d.0.to_string()),
        None => {
            set_error("null descriptor");
            ptr::null_mut()
        }
    }
}

unsafe fn map_descriptor(
    d: *const TsDescriptor,
    out: *mut *mut TsDescriptor,
    f: impl FnOnce(&SpaceDescriptor) -> Result<SpaceDescriptor, ParamError>,
) -> TsStatus {
    guard(|| {
        let (Some(d), false) = (d.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        match f(&d.0) {
            Ok(x) => put(out, TsDescriptor(x)),
            Err(e) => fail(param_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_dual(d: *const TsDescriptor, out: *mut *mut TsDescriptor) -> TsStatus {
    map_descriptor(d, out, dual_descriptor)
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_canonicalize(d: *const TsDescriptor, out: *mut *mut TsDescriptor) -> TsStatus {
    map_descriptor(d, out, |x| canonicalize_descriptor(x).map(|c| c.desc))
}

/// Lift by σ given as text (`1/2`, `0.25`, …).
///
/// # Safety
/// `d` must be a live handle, `sigma` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_descriptor_lift(
    d: *const TsDescriptor,
    sigma: *const c_char,
    out: *mut *mut TsDescriptor,
) -> TsStatus {
    let s = match c_str(sigma) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let sigma = match Num::parse(s) {
        Ok(n) => n,
        Err(e) => return fail(TsStatus::Parse, e),
    };
    map_descriptor(d, out, |x| lift_descriptor(x, &sigma))
}

/// Embedding verdict; `condition` (optional) receives the clause label, free with `ts_string_free`.
///
/// # Safety
/// `src`, `dst` must be live handles; `verdict` writable; `condition` writable or null.
#[no_mangle]
pub unsafe extern "C" fn ts_embeds(
    src: *const TsDescriptor,
    dst: *const TsDescriptor,
    verdict: *mut TsVerdict,
    condition: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let (Some(a), Some(b), false) = (src.as_ref(), dst.as_ref(), verdict.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        match embeds(&a.0, &b.0) {
            Ok(v) => {
                *verdict = match v.status {
                    Status::Holds => TsVerdict::Holds,
                    Status::Fails => TsVerdict::Fails,
                    Status::UnknownPerPaper => TsVerdict::Unknown,
                };
                if !condition.is_null() {
                    *condition = owned_string(v.condition);
                }
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::Unsupported, e.to_string()),
        }
    })
}

/// Empty sequence in dimension `d` ≥ 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sequence_new(d: u32, out: *mut *mut TsSequence) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null out pointer");
        }
        if d == 0 {
            return fail(TsStatus::Domain, "dimension must be positive");
        }
        put(out, TsSequence(WaveletSequence::new(d)))
    })
}

/// Sequence from its JSON form `{"dim":d,"entries":[{"j":..,"G":..,"m":[..],"v":..}]}`.
///
/// # Safety
/// `json` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sequence_from_json(json: *const c_char, out: *mut *mut TsSequence) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "null out pointer");
        }
        let t = match c_str(json) {
            Ok(t) => t,
            Err(c) => return c,
        };
        match WaveletSequence::from_json(t) {
            Ok(s) => put(out, TsSequence(s)),
            Err(e) => fail(TsStatus::Parse, e.to_string()),
        }
    })
}

/// Adds `v` at level `j`, gender mask `g`, position `m[0..d]`.
///
/// # Safety
/// `seq` must be a live handle; `m` must point to `d` readable integers.
#[no_mangle]
pub unsafe extern "C" fn ts_sequence_insert(seq: *mut TsSequence, j: u32, g: u32, m: *const i64, v: f64) -> TsStatus {
    guard(|| {
        let (Some(s), false) = (seq.as_mut(), m.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let pos = std::slice::from_raw_parts(m, s.0.dim() as usize).to_vec();
        match s.0.insert(j, g, pos, v) {
            Ok(()) => TsStatus::Ok,
            Err(e) => fail(TsStatus::Domain, e.to_string()),
        }
    })
}

/// # Safety
/// `seq` must come from this library (or be null) and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ts_sequence_free(seq: *mut TsSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Norm of `seq` in the (canonicalized) space `d`.
///
/// # Safety
/// Live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_norm(seq: *const TsSequence, d: *const TsDescriptor, out: *mut f64) -> TsStatus {
    guard(|| {
        let (Some(s), Some(d), false) = (seq.as_ref(), d.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        if s.0.dim() != d.0.d {
            return fail(TsStatus::Domain, "sequence and descriptor dimensions differ");
        }
        let c = match canonicalize_descriptor(&d.0) {
            Ok(c) if !c.inner_truncated && !c.desc.family.is_lorentz() => c,
            Ok(_) => return fail(TsStatus::Unsupported, "no sequence norm for this family"),
            Err(e) => return fail(param_status(&e), e.to_string()),
        };
        match trunc_norm_for(&s.0, &c.desc) {
            Ok(v) => {
                *out = v.value;
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::Domain, e.to_string()),
        }
    })
}
