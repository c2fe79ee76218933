//! C interface to `tropnewton`.
//!
//! Fans are passed around as opaque `TnFan` handles built from the JSON fan
//! format. Every fallible call returns a `TnStatus`; on failure the message
//! is kept per thread and can be read with `tn_last_error_message`.
//! Strings returned through out-pointers must be released with
//! `tn_string_free`, handles with `tn_fan_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropnewton::fan::TropicalCollection;
use tropnewton::format::{fan_from_str, fan_to_json, ledger_to_json, FormatError};
use tropnewton::linalg::{Int, IntMatrix};
use tropnewton::newton::{auto_seed, complete_polytope, multidegree, ray_shoot, SearchOptions};
use tropnewton::pushforward::hadamard_square;
use tropnewton::symmetry::CoordSymmetryGroup;
use tropnewton::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Fan = 4,
    Pushforward = 5,
    Search = 6,
    Hull = 7,
    Symmetry = 8,
    Arithmetic = 9,
    Overflow = 10,
    Panic = 11,
}

/// Opaque handle to a weighted fan.
pub struct TnFan {
    inner: TropicalCollection,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> TnStatus {
    if e.variant_name() == "DimensionMismatch" {
        return TnStatus::InvalidInput;
    }
    match e {
        Error::Linalg(_) => TnStatus::Arithmetic,
        Error::Fan(_) => TnStatus::Fan,
        Error::Push(_) => TnStatus::Pushforward,
        Error::Newton(_) | Error::Oracle(_) => TnStatus::Search,
        Error::Hull(_) => TnStatus::Hull,
        Error::Symmetry(_) => TnStatus::Symmetry,
        Error::Format(FormatError::Fan(_)) => TnStatus::Fan,
        Error::Format(FormatError::Symmetry(_)) => TnStatus::Symmetry,
        Error::Format(_) | Error::Io { .. } | Error::Usage(_) => TnStatus::InvalidInput,
    }
}

struct Failure(TnStatus, String);

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        Failure(status_of(&e), format!("{}: {e}", e.variant_name()))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TnStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(TnStatus::NullPointer, "null pointer argument".into())
}

unsafe fn fan_ref<'a>(fan: *const TnFan) -> Result<&'a TropicalCollection, Failure> {
    fan.as_ref().map(|f| &f.inner).ok_or_else(null)
}

unsafe fn ints_in(p: *const i64, len: usize) -> Result<Vec<Int>, Failure> {
    if len == 0 {
        return Ok(vec![]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len).iter().map(|&x| Int::from(x)).collect())
}

unsafe fn ints_out(v: &[Int], out: *mut i64, out_len: usize) -> Result<(), Failure> {
    if out_len < v.len() {
        return Err(Failure(TnStatus::InvalidInput, format!("output buffer holds {out_len}, need {}", v.len())));
    }
    if v.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(null());
    }
    let dst = std::slice::from_raw_parts_mut(out, v.len());
    for (d, x) in dst.iter_mut().zip(v) {
        *d = i64::try_from(x).map_err(|_| Failure(TnStatus::Overflow, format!("{x} does not fit in 64 bits")))?;
    }
    Ok(())
}

unsafe fn string_out(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| Failure(TnStatus::InvalidInput, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn fan_out(t: TropicalCollection, out: *mut *mut TnFan) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(TnFan { inner: t }));
    Ok(())
}

/// Parses a fan from NUL-terminated JSON.
///
/// # Safety
/// `json` must be a valid C string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tn_fan_from_json(json: *const c_char, out: *mut *mut TnFan) -> TnStatus {
    guard(|| {
        if json.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Failure(TnStatus::InvalidUtf8, "input is not UTF-8".into()))?;
        fan_out(fan_from_str(s)?, out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `fan` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tn_fan_free(fan: *mut TnFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// Serializes a fan; free the result with `tn_string_free`.
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tn_fan_to_json(fan: *const TnFan, out: *mut *mut c_char) -> TnStatus {
    guard(|| string_out(fan_to_json(fan_ref(fan)?).to_string(), out))
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `fan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_fan_ambient_dim(fan: *const TnFan) -> usize {
    fan.as_ref().map_or(0, |f| f.inner.ambient_dim())
}

/// Number of maximal cones, or 0 for a null handle.
///
/// # Safety
/// `fan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_fan_cone_count(fan: *const TnFan) -> usize {
    fan.as_ref().map_or(0, |f| f.inner.len())
}

/// Vertex maximizing `objective`; writes `ambient_dim` entries to `out`.
///
/// # Safety
/// `objective` must hold `len` values and `out` room for `out_len`.
#[no_mangle]
pub unsafe extern "C" fn tn_ray_shoot(
    fan: *const TnFan,
    objective: *const i64,
    len: usize,
    out: *mut i64,
    out_len: usize,
) -> TnStatus {
    guard(|| {
        let t = fan_ref(fan)?;
        let w = ints_in(objective, len)?;
        let wit = ray_shoot(t, &w)?;
        ints_out(&wit.vertex, out, out_len)
    })
}

/// `grading · vertex` for a row-major `rows × cols` grading matrix.
///
/// # Safety
/// `grading` must hold `rows*cols` values, `vertex` `cols` values and
/// `out` room for `rows`.
#[no_mangle]
pub unsafe extern "C" fn tn_multidegree(
    grading: *const i64,
    rows: usize,
    cols: usize,
    vertex: *const i64,
    out: *mut i64,
) -> TnStatus {
    guard(|| {
        let size = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure(TnStatus::InvalidInput, "grading size overflows".into()))?;
        let entries = ints_in(grading, size)?;
        let g = IntMatrix::new(rows, cols, entries);
        let v = ints_in(vertex, cols)?;
        let d = multidegree(&g, &v)?;
        ints_out(&d, out, rows)
    })
}

/// Tropical Hadamard square with weights divided by `delta`.
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tn_hadamard_square(
    fan: *const TnFan,
    delta: u64,
    seed: u64,
    out: *mut *mut TnFan,
) -> TnStatus {
    guard(|| {
        let t = fan_ref(fan)?;
        fan_out(hadamard_square(t, delta, seed)?, out)
    })
}

/// Vertices and facets of the Newton polytope as a JSON ledger, starting
/// from a shot at a seeded random objective.
///
/// # Safety
/// `fan` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tn_complete_polytope(fan: *const TnFan, seed: u64, out: *mut *mut c_char) -> TnStatus {
    guard(|| {
        let t = fan_ref(fan)?;
        let opts = SearchOptions { seed, ..Default::default() };
        let start = auto_seed(t, &opts)?;
        let ledger = complete_polytope(t, &[start], &CoordSymmetryGroup::trivial(t.ambient_dim()), &opts)?;
        string_out(ledger_to_json(&ledger).to_string(), out)
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
