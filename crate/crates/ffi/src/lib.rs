//! C ABI over `psghost`.
//!
//! Objects are opaque handles created by `psg_*_new`/`psg_*_parse` and
//! released with the matching `psg_*_free`. Every fallible call returns a
//! `PsgStatus`; on failure `psg_last_error()` describes the error until the
//! next call on the same thread. Strings returned through `char **` out
//! parameters are owned by the caller and released with `psg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use psghost::tomo::Solver;
use psghost::{Error, FieldSpec, HomPoly, Plane, PointMultiset, ProjLine, ProjPoint};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidField = 2,
    FieldMismatch = 3,
    Domain = 4,
    Parse = 5,
    Integrity = 6,
    Io = 7,
    DivisionByZero = 8,
    InvalidUtf8 = 9,
    Inconsistent = 10,
    Panic = 11,
}

pub struct PsgField(Arc<FieldSpec>);
pub struct PsgPlane(Plane);
pub struct PsgMultiset(PointMultiset);
pub struct PsgPoly(HomPoly);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PsgStatus {
    match e {
        Error::FieldMismatch(..) => PsgStatus::FieldMismatch,
        Error::InvalidField(_) => PsgStatus::InvalidField,
        Error::DivisionByZero => PsgStatus::DivisionByZero,
        Error::Domain(_) => PsgStatus::Domain,
        Error::Parse { .. } => PsgStatus::Parse,
        Error::Integrity(_) => PsgStatus::Integrity,
        Error::Io(_) => PsgStatus::Io,
    }
}

struct Fail(PsgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(PsgStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PsgStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PsgStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(PsgStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|_| Fail(PsgStatus::Integrity, "interior NUL".into()))?.into_raw();
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread ("" if none). Owned by
/// the library; valid until the next call.
#[no_mangle]
pub extern "C" fn psg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn psg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// GF(p^h) with the built-in modulus.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_field_new(p: u32, h: u32, out: *mut *mut PsgField) -> PsgStatus {
    guard(|| put(out, PsgField(Arc::new(FieldSpec::new(p, h)?))))
}

/// Field from "p", "p^h" or a prime power.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_field_parse(spec: *const c_char, out: *mut *mut PsgField) -> PsgStatus {
    guard(|| put(out, PsgField(Arc::new(text(spec)?.parse()?))))
}

/// Field order q, or 0 for a null handle.
///
/// # Safety
/// `field` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn psg_field_order(field: *const PsgField) -> u32 {
    field.as_ref().map_or(0, |f| f.0.order())
}

/// # Safety
/// `field` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn psg_field_free(field: *mut PsgField) {
    free(field)
}

/// # Safety
/// `field` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_plane_new(field: *const PsgField, out: *mut *mut PsgPlane) -> PsgStatus {
    guard(|| put(out, PsgPlane(Plane::new(arg(field)?.0.clone()))))
}

/// Number of points (and of lines), or 0 for a null handle.
///
/// # Safety
/// `plane` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn psg_plane_size(plane: *const PsgPlane) -> usize {
    plane.as_ref().map_or(0, |p| p.0.size())
}

/// # Safety
/// `plane` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn psg_plane_free(plane: *mut PsgPlane) {
    free(plane)
}

/// Empty multiset over a field.
///
/// # Safety
/// `field` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_multiset_new(field: *const PsgField, out: *mut *mut PsgMultiset) -> PsgStatus {
    guard(|| put(out, PsgMultiset(PointMultiset::empty(arg(field)?.0.clone()))))
}

/// Multiset from the `# mset q=...` text format.
///
/// # Safety
/// `field` must be a live handle, `src` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn psg_multiset_parse(
    field: *const PsgField,
    src: *const c_char,
    out: *mut *mut PsgMultiset,
) -> PsgStatus {
    guard(|| put(out, PsgMultiset(PointMultiset::parse(text(src)?, &arg(field)?.0)?)))
}

/// Adds `m` copies of the point (a,b,c); multiplicities are kept mod p.
///
/// # Safety
/// `set` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn psg_multiset_add(set: *mut PsgMultiset, a: u32, b: u32, c: u32, m: u32) -> PsgStatus {
    guard(|| {
        let s = &mut set.as_mut().ok_or_else(null)?.0;
        let pt = ProjPoint::from_values(s.field(), [a, b, c])?;
        let p = s.field().characteristic();
        s.add_point(&pt, m % p);
        Ok(())
    })
}

/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_multiset_to_text(set: *const PsgMultiset, out: *mut *mut c_char) -> PsgStatus {
    guard(|| put_string(out, arg(set)?.0.to_text()))
}

/// # Safety
/// `set` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn psg_multiset_free(set: *mut PsgMultiset) {
    free(set)
}

/// The power sum polynomial of a multiset.
///
/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_power_sum(set: *const PsgMultiset, out: *mut *mut PsgPoly) -> PsgStatus {
    guard(|| put(out, PsgPoly(psghost::phi(&arg(set)?.0))))
}

/// # Safety
/// `set` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_is_ghost(set: *const PsgMultiset, out: *mut bool) -> PsgStatus {
    guard(|| {
        let g = psghost::is_ghost(&arg(set)?.0);
        *out.as_mut().ok_or_else(null)? = g;
        Ok(())
    })
}

/// Polynomial from the `# psp q=...` text format.
///
/// # Safety
/// `field` must be a live handle, `src` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn psg_poly_parse(field: *const PsgField, src: *const c_char, out: *mut *mut PsgPoly) -> PsgStatus {
    guard(|| put(out, PsgPoly(HomPoly::parse(text(src)?, &arg(field)?.0)?)))
}

/// Value at the line [a,b,c] as the integer encoding of a field element.
///
/// # Safety
/// `poly` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_poly_evaluate(poly: *const PsgPoly, a: u32, b: u32, c: u32, out: *mut u32) -> PsgStatus {
    guard(|| {
        let g = &arg(poly)?.0;
        let line = ProjLine::from_values(g.field(), [a, b, c])?;
        *out.as_mut().ok_or_else(null)? = g.evaluate(&line).value();
        Ok(())
    })
}

/// # Safety
/// `poly` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_poly_is_zero(poly: *const PsgPoly, out: *mut bool) -> PsgStatus {
    guard(|| {
        let z = arg(poly)?.0.is_zero();
        *out.as_mut().ok_or_else(null)? = z;
        Ok(())
    })
}

/// # Safety
/// `poly` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_poly_to_text(poly: *const PsgPoly, out: *mut *mut c_char) -> PsgStatus {
    guard(|| put_string(out, arg(poly)?.0.to_text()))
}

/// # Safety
/// `poly` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn psg_poly_free(poly: *mut PsgPoly) {
    free(poly)
}

/// Rank, ghost exponent and kernel basis as a JSON document.
///
/// # Safety
/// `field` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psg_ghost_report_json(field: *const PsgField, out: *mut *mut c_char) -> PsgStatus {
    guard(|| {
        let report = psghost::ghost_report(arg(field)?.0.clone())?;
        put_string(out, report.to_json().to_string())
    })
}

/// One multiset with the given polynomial plus the ghost exponent of the
/// solution coset. Returns `Inconsistent` (and writes nothing) when no
/// multiset has this polynomial.
///
/// # Safety
/// `poly` must be a live handle; `particular` and `exponent` valid.
#[no_mangle]
pub unsafe extern "C" fn psg_solve(
    poly: *const PsgPoly,
    particular: *mut *mut PsgMultiset,
    exponent: *mut usize,
) -> PsgStatus {
    guard(|| {
        let g = &arg(poly)?.0;
        if particular.is_null() || exponent.is_null() {
            return Err(null());
        }
        let coset = Solver::new(g.field().clone())?.solve(g)?;
        let Some(x) = coset.particular else {
            return Err(Fail(PsgStatus::Inconsistent, "no multiset has this power sum polynomial".into()));
        };
        *exponent = coset.exponent;
        put(particular, PsgMultiset(x))
    })
}
