//! C interface. Groups are opaque handles released with
//! `cyclelab_group_free`; strings returned through out-parameters are
//! released with `cyclelab_string_free`. Every call returns a
//! `CyclelabStatus`; on failure `cyclelab_last_error` describes the error
//! raised on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cyclelab::arith::fmt_ratio;
use cyclelab::blocks::{max_cyclic_tower_order, verify_bound};
use cyclelab::ffpoly::{is_irreducible, FpPoly};
use cyclelab::group::DEFAULT_ENUMERATION_CAP;
use cyclelab::stability::{density_scan, stable_depth, ScanOptions, SequenceSpec};
use cyclelab::{catalog, Error, GroupSpec, PermGroup};

/// Result of every exported call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclelabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    Domain = 3,
    ResourceCap = 4,
    Precondition = 5,
    Internal = 6,
}

/// Opaque permutation group.
pub struct CyclelabGroup {
    inner: PermGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CyclelabStatus {
    match e {
        Error::ResourceCap(_) | Error::Size(_) | Error::TooLargeToEnumerate { .. } | Error::NotEnumerated(_) => {
            CyclelabStatus::ResourceCap
        }
        Error::Domain(_) | Error::BadDenominator(_) | Error::LeadingCoeffVanishes(_) | Error::ModulusMismatch(..) => {
            CyclelabStatus::Domain
        }
        Error::Precondition(_) | Error::Intransitive => CyclelabStatus::Precondition,
        _ => CyclelabStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CyclelabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CyclelabStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed as {what}"));
            CyclelabStatus::NullArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            CyclelabStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Lib(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn put<T>(out: *mut T, v: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Lib(Error::Parse("string holds a nul byte".into())))?;
    put(out, c.into_raw(), "out")
}

unsafe fn group_ref<'a>(g: *const CyclelabGroup) -> Result<&'a PermGroup, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or(Failure::Null("group"))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cyclelab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a bundled or named group (`S4`, `AGL1(7)`, `C3wrC2`, `M11`, ...).
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_from_catalog(name: *const c_char, out: *mut *mut CyclelabGroup) -> CyclelabStatus {
    guard(|| {
        let g = catalog::load(text(name, "name")?)?;
        put(out, Box::into_raw(Box::new(CyclelabGroup { inner: g })), "out")
    })
}

/// Builds a group from group-spec JSON (`{name, degree, generators}`,
/// 0-based images).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_from_json(json: *const c_char, out: *mut *mut CyclelabGroup) -> CyclelabStatus {
    guard(|| {
        let g = GroupSpec::from_json(text(json, "json")?)?.build(DEFAULT_ENUMERATION_CAP)?;
        put(out, Box::into_raw(Box::new(CyclelabGroup { inner: g })), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_free(g: *mut CyclelabGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_degree(g: *const CyclelabGroup, out: *mut usize) -> CyclelabStatus {
    guard(|| put(out, group_ref(g)?.degree(), "out"))
}

/// Group order as a decimal string.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_order(g: *const CyclelabGroup, out: *mut *mut c_char) -> CyclelabStatus {
    guard(|| put_string(out, group_ref(g)?.order().to_string()))
}

/// Proportion of full cycles as `"num/den"`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_group_census(g: *const CyclelabGroup, out: *mut *mut c_char) -> CyclelabStatus {
    guard(|| put_string(out, fmt_ratio(&group_ref(g)?.full_cycle_census()?.proportion)))
}

/// Bound report for every maximal chain, as JSON. `*violated` is set when
/// some chain's bound is exceeded.
///
/// # Safety
/// `g` must be a live handle, `name` a nul-terminated string, and both
/// out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_verify_bound_json(
    g: *const CyclelabGroup,
    name: *const c_char,
    chain_limit: usize,
    violated: *mut bool,
    out: *mut *mut c_char,
) -> CyclelabStatus {
    guard(|| {
        let rep = verify_bound(text(name, "name")?, group_ref(g)?, chain_limit)?;
        put(violated, rep.violated, "violated")?;
        put_string(out, serde_json::to_string(&rep).map_err(Error::from)?)
    })
}

/// Largest order of a transitive tower of cyclic groups of degree `n`, as
/// a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_cmax(n: u64, out: *mut *mut c_char) -> CyclelabStatus {
    guard(|| put_string(out, max_cyclic_tower_order(n)?.to_string()))
}

/// Irreducibility over `F_p` of `sum coeffs[i] x^i`.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_fp_is_irreducible(
    p: u64,
    coeffs: *const u64,
    len: usize,
    out: *mut bool,
) -> CyclelabStatus {
    guard(|| {
        if coeffs.is_null() {
            return Err(Failure::Null("coeffs"));
        }
        let c = std::slice::from_raw_parts(coeffs, len).to_vec();
        put(out, is_irreducible(&FpPoly::new(p, c)?)?, "out")
    })
}

/// Stable depth of the prime `p` for a sequence spec, up to `max_depth`.
///
/// # Safety
/// `sequence_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_stable_depth(
    sequence_json: *const c_char,
    p: u64,
    max_depth: usize,
    out: *mut usize,
) -> CyclelabStatus {
    guard(|| {
        let seq = SequenceSpec::from_json(text(sequence_json, "sequence_json")?)?.build()?;
        put(out, stable_depth(&seq, p, max_depth)?.depth, "out")
    })
}

/// Stable depth for every prime up to `prime_bound`, as a JSON report.
/// `workers == 0` uses one thread per core.
///
/// # Safety
/// `sequence_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cyclelab_scan_json(
    sequence_json: *const c_char,
    prime_bound: u64,
    max_depth: usize,
    workers: usize,
    out: *mut *mut c_char,
) -> CyclelabStatus {
    guard(|| {
        let seq = SequenceSpec::from_json(text(sequence_json, "sequence_json")?)?.build()?;
        let opts = ScanOptions {
            workers,
            ..ScanOptions::default()
        };
        let rep = density_scan(&seq, prime_bound, max_depth, opts)?;
        put_string(out, serde_json::to_string(&rep).map_err(Error::from)?)
    })
}
