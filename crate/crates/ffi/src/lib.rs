//! C ABI over twistfuse. All handles are opaque; free them with the matching `*_free`.
//! Strings returned through out-pointers are owned by the caller and released with `tf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use twistfuse::cartan::{cartan, CartanDatum, LieType};
use twistfuse::fold::{build_folding, Twist};
use twistfuse::fusion::{FusionEngine, MethodSelect, Pattern, DEFAULT_INTEGER_TOLERANCE};
use twistfuse::smatrix::{twisted_sector_s, untwisted_s, ModularMatrix, SOptions};
use twistfuse::Error;

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BadInput = 3,
    CheckFailed = 4,
    OutOfRange = 5,
    Panic = 6,
}

pub struct TfDatum {
    inner: Arc<CartanDatum>,
}

pub struct TfMatrix {
    inner: ModularMatrix,
}

pub struct TfFusion {
    inner: FusionEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TfStatus {
    match e {
        Error::MethodMismatch { .. }
        | Error::NotInteger { .. }
        | Error::NegativeCoefficient(_)
        | Error::NegativeMultiplicity(_) => TfStatus::CheckFailed,
        Error::IndexOutOfRange(_) => TfStatus::OutOfRange,
        _ => TfStatus::BadInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), TfStatus>) -> TfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            TfStatus::Panic
        }
    }
}

fn lift<T>(r: twistfuse::Result<T>) -> Result<T, TfStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, TfStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(TfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        TfStatus::InvalidUtf8
    })
}

unsafe fn weight<'a>(p: *const i64, len: usize) -> Result<&'a [i64], TfStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        set_error("null weight pointer");
        return Err(TfStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn check_out<T>(p: *mut T) -> Result<(), TfStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(TfStatus::NullPointer);
    }
    Ok(())
}

fn string_out(out: *mut *mut c_char, s: String) -> Result<(), TfStatus> {
    check_out(out)?;
    let c = CString::new(s).map_err(|_| TfStatus::Panic)?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn untwisted(s: &str) -> twistfuse::Result<LieType> {
    let t = LieType::parse(s)?;
    LieType::affine(t.family, t.rank, 1)
}

/// Message for the last failing call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn tf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cartan datum for a type such as `A3`, `A3^(1)`, `D4^(3)`.
///
/// # Safety
/// `type_name` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_datum_new(type_name: *const c_char, out: *mut *mut TfDatum) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let t = lift(LieType::parse(text(type_name)?))?;
        let d = lift(cartan(t))?;
        *out = Box::into_raw(Box::new(TfDatum { inner: d }));
        Ok(())
    })
}

/// # Safety
/// `d` must come from `tf_datum_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn tf_datum_free(d: *mut TfDatum) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Finite rank `l`.
///
/// # Safety
/// `d` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_datum_rank(d: *const TfDatum, out: *mut usize) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let d = d.as_ref().ok_or(TfStatus::NullPointer)?;
        *out = d.inner.rank();
        Ok(())
    })
}

/// Dual Coxeter number; zero for finite types.
///
/// # Safety
/// `d` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_datum_hdual(d: *const TfDatum, out: *mut i64) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let d = d.as_ref().ok_or(TfStatus::NullPointer)?;
        *out = d.inner.hdual;
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_datum_json(d: *const TfDatum, out: *mut *mut c_char) -> TfStatus {
    guard(|| {
        let d = d.as_ref().ok_or(TfStatus::NullPointer)?;
        string_out(out, d.inner.to_json().to_string())
    })
}

/// Untwisted S-matrix at level `k`. `precision_bits` 0 means double precision.
///
/// # Safety
/// `type_name` a valid C string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_smatrix_new(
    type_name: *const c_char,
    level: i64,
    precision_bits: u32,
    out: *mut *mut TfMatrix,
) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let t = lift(untwisted(text(type_name)?))?;
        let d = lift(cartan(t))?;
        if level < 0 {
            set_error("level must be non-negative");
            return Err(TfStatus::BadInput);
        }
        let opts = SOptions {
            precision_bits: (precision_bits as usize).max(53),
            ..SOptions::default()
        };
        let m = lift(untwisted_s(&d, level, &opts))?;
        *out = Box::into_raw(Box::new(TfMatrix { inner: m }));
        Ok(())
    })
}

/// Twisted-sector S-matrix for `twist` = `"diagram"` or `"triality"`.
///
/// # Safety
/// Valid C strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_twisted_smatrix_new(
    type_name: *const c_char,
    twist: *const c_char,
    level: i64,
    precision_bits: u32,
    out: *mut *mut TfMatrix,
) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let t = lift(untwisted(text(type_name)?))?;
        let tw = lift(Twist::parse(text(twist)?))?;
        if level < 0 {
            set_error("level must be non-negative");
            return Err(TfStatus::BadInput);
        }
        let f = lift(build_folding(t, tw))?;
        let opts = SOptions {
            precision_bits: (precision_bits as usize).max(53),
            ..SOptions::default()
        };
        let m = lift(twisted_sector_s(&f, level, &opts))?;
        *out = Box::into_raw(Box::new(TfMatrix { inner: m }));
        Ok(())
    })
}

/// # Safety
/// `m` from a `*_smatrix_new` call or null.
#[no_mangle]
pub unsafe extern "C" fn tf_matrix_free(m: *mut TfMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` live; `rows`, `cols` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_matrix_shape(m: *const TfMatrix, rows: *mut usize, cols: *mut usize) -> TfStatus {
    guard(|| {
        check_out(rows)?;
        check_out(cols)?;
        let m = m.as_ref().ok_or(TfStatus::NullPointer)?;
        *rows = m.inner.n_rows();
        *cols = m.inner.n_cols();
        Ok(())
    })
}

/// # Safety
/// `m` live; `re`, `im` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_matrix_entry(
    m: *const TfMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> TfStatus {
    guard(|| {
        check_out(re)?;
        check_out(im)?;
        let m = m.as_ref().ok_or(TfStatus::NullPointer)?;
        let z = m.inner.entries.get(row).and_then(|r| r.get(col)).ok_or_else(|| {
            set_error(&format!("entry ({row}, {col}) out of range"));
            TfStatus::OutOfRange
        })?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// # Safety
/// `m` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_matrix_unitarity_residual(m: *const TfMatrix, out: *mut f64) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let m = m.as_ref().ok_or(TfStatus::NullPointer)?;
        *out = m.inner.unitarity_residual();
        Ok(())
    })
}

/// # Safety
/// `m` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_matrix_json(m: *const TfMatrix, out: *mut *mut c_char) -> TfStatus {
    guard(|| {
        let m = m.as_ref().ok_or(TfStatus::NullPointer)?;
        string_out(out, m.inner.to_json())
    })
}

/// Fusion engine for an untwisted algebra, level and twist (`"none"`, `"diagram"`, `"triality"`).
///
/// # Safety
/// Valid C strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_fusion_new(
    type_name: *const c_char,
    twist: *const c_char,
    level: i64,
    out: *mut *mut TfFusion,
) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let t = lift(untwisted(text(type_name)?))?;
        let tw = lift(Twist::parse(text(twist)?))?;
        let e = lift(FusionEngine::new(
            t,
            tw,
            level,
            &SOptions::default(),
            DEFAULT_INTEGER_TOLERANCE,
        ))?;
        *out = Box::into_raw(Box::new(TfFusion { inner: e }));
        Ok(())
    })
}

/// # Safety
/// `e` from `tf_fusion_new` or null.
#[no_mangle]
pub unsafe extern "C" fn tf_fusion_free(e: *mut TfFusion) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// One coefficient for a pattern such as `"1,s,s"`, checked by both methods where available.
///
/// # Safety
/// `e` live; weight pointers valid for their lengths; `out` writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn tf_fusion_coefficient(
    e: *const TfFusion,
    pattern: *const c_char,
    w1: *const i64,
    len1: usize,
    w2: *const i64,
    len2: usize,
    w3: *const i64,
    len3: usize,
    out: *mut i64,
) -> TfStatus {
    guard(|| {
        check_out(out)?;
        let e = &e.as_ref().ok_or(TfStatus::NullPointer)?.inner;
        let p = lift(Pattern::parse(text(pattern)?, e.order()))?;
        let ws = [weight(w1, len1)?, weight(w2, len2)?, weight(w3, len3)?];
        let (n, _) = lift(e.coefficient(p, ws, MethodSelect::Both))?;
        *out = n;
        Ok(())
    })
}

/// Whole table for a pattern, as JSON.
///
/// # Safety
/// `e` live; `pattern` valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_fusion_table_json(
    e: *const TfFusion,
    pattern: *const c_char,
    out: *mut *mut c_char,
) -> TfStatus {
    guard(|| {
        let e = &e.as_ref().ok_or(TfStatus::NullPointer)?.inner;
        let p = lift(Pattern::parse(text(pattern)?, e.order()))?;
        let t = lift(e.table(p, MethodSelect::Both))?;
        string_out(out, t.to_json())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
