//! C ABI over `bh-core`.
//!
//! Polynomials cross the boundary as opaque `BhPoly` handles owned by the
//! caller and released with `bh_poly_free`. Every function returns a
//! `BhStatus`; on failure `bh_last_error_message` describes the error for
//! the calling thread. Strings returned through out-parameters are released
//! with `bh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bh_core::bounds::{bh_lower_bound, power_bound, BoundRecord};
use bh_core::families::{make_family, FamilySpec};
use bh_core::numeric::Precision;
use bh_core::poly::{coeff_lp_norm, HomogeneousPoly};
use bh_core::supnorm::{sup_norm_auto, OptimizerConfig};
use bh_core::Error;
use rug::Rational;

/// Opaque polynomial handle.
pub struct BhPoly {
    inner: HomogeneousPoly,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    NotHomogeneous = 3,
    DimensionMismatch = 4,
    InvalidParameter = 5,
    ParseError = 6,
    ConvergenceFailure = 7,
    InvariantViolated = 8,
    IoError = 9,
    Panic = 10,
}

/// A lower bound. `log_value` is exact in range; `value` overflows to
/// infinity past the double range.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BhBound {
    pub m: u32,
    pub power: u32,
    pub value: f64,
    pub log_value: f64,
    pub mth_root: f64,
    /// Nonzero when the sup norm came from a heuristic search.
    pub heuristic: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> BhStatus {
    match e {
        Error::NotHomogeneous { .. } => BhStatus::NotHomogeneous,
        Error::DimensionMismatch { .. } => BhStatus::DimensionMismatch,
        Error::InvalidParameter(_) => BhStatus::InvalidParameter,
        Error::Parse { .. } => BhStatus::ParseError,
        Error::ConvergenceFailure(_) => BhStatus::ConvergenceFailure,
        Error::InvariantViolated(_) => BhStatus::InvariantViolated,
        Error::Io(_) | Error::Csv(_) => BhStatus::IoError,
    }
}

enum Fail {
    Status(BhStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F>(f: F) -> BhStatus
where
    F: FnOnce() -> Result<(), Fail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BhStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&format!("{}: {e}", e.name()));
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside bh-core");
            BhStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(BhStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(BhStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn poly_arg<'a>(p: *const BhPoly) -> Result<&'a HomogeneousPoly, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null("poly"))
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn precision(digits: u32) -> Result<Precision, Fail> {
    if digits == 0 {
        Ok(Precision::default())
    } else {
        Ok(Precision::from_digits(digits)?)
    }
}

unsafe fn family_spec(family: *const c_char, params: *const c_char) -> Result<FamilySpec, Fail> {
    let name = str_arg(family, "family")?;
    let params: Vec<&str> = if params.is_null() {
        Vec::new()
    } else {
        str_arg(params, "params")?.split(';').filter(|s| !s.trim().is_empty()).collect()
    };
    Ok(FamilySpec::parse(name, &params)?)
}

fn boxed(p: HomogeneousPoly) -> *mut BhPoly {
    Box::into_raw(Box::new(BhPoly { inner: p }))
}

fn bound_of(r: &BoundRecord, heuristic: bool) -> BhBound {
    BhBound {
        m: r.m,
        power: r.power,
        value: r.value.to_f64(),
        log_value: r.value.clone().ln().to_f64(),
        mth_root: r.mth_root.to_f64(),
        heuristic: heuristic as u8,
    }
}

/// Message for the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse the text serialization of a polynomial.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_parse(text: *const c_char, out: *mut *mut BhPoly) -> BhStatus {
    guard(|| {
        let p = HomogeneousPoly::deserialize(str_arg(text, "text")?)?;
        write_out(out, boxed(p), "out")
    })
}

/// Build a named family member. `params` is `key=value;key=value` or null;
/// `precision_digits` 0 selects the default.
///
/// # Safety
/// String arguments must be NUL-terminated or null; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_family_make(
    family: *const c_char,
    params: *const c_char,
    precision_digits: u32,
    out: *mut *mut BhPoly,
) -> BhStatus {
    guard(|| {
        let spec = family_spec(family, params)?;
        let p = make_family(&spec, precision(precision_digits)?)?;
        write_out(out, boxed(p), "out")
    })
}

/// # Safety
/// `poly` must come from this library and not be freed twice. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_free(poly: *mut BhPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle and `out` a valid pointer. The string is
/// released with `bh_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_serialize(poly: *const BhPoly, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let text = poly_arg(poly)?.serialize();
        let c = CString::new(text).map_err(|_| Fail::Status(BhStatus::InvalidUtf8, "NUL in output".into()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn bh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Variable count, degree and number of nonzero terms.
///
/// # Safety
/// `poly` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_info(
    poly: *const BhPoly,
    n_vars: *mut usize,
    degree: *mut u32,
    terms: *mut usize,
) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?;
        write_out(n_vars, p.n(), "n_vars")?;
        write_out(degree, p.degree(), "degree")?;
        write_out(terms, p.len(), "terms")
    })
}

/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_pow(poly: *const BhPoly, k: u32, out: *mut *mut BhPoly) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?.pow(k)?;
        write_out(out, boxed(p), "out")
    })
}

/// # Safety
/// `x` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_eval(poly: *const BhPoly, x: *const f64, len: usize, out: *mut f64) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?;
        if x.is_null() && len > 0 {
            return Err(null("x"));
        }
        let xs = if len == 0 { &[][..] } else { std::slice::from_raw_parts(x, len) };
        write_out(out, p.eval_precise(xs)?.to_f64(), "out")
    })
}

/// Coefficient `ℓ_p` norm with `p = p_num / p_den`.
///
/// # Safety
/// `poly` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_lp_norm(
    poly: *const BhPoly,
    p_num: u64,
    p_den: u64,
    out_value: *mut f64,
    out_log: *mut f64,
) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?;
        if p_den == 0 {
            return Err(Error::InvalidParameter("p_den is zero".into()).into());
        }
        let norm = coeff_lp_norm(p, &Rational::from((p_num, p_den)))?;
        write_out(out_value, norm.value.to_f64(), "out_value")?;
        write_out(out_log, norm.log_value.to_f64(), "out_log")
    })
}

/// Sup norm over the cube and the attained value at the reported maximizer.
///
/// # Safety
/// `poly` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_sup_norm(
    poly: *const BhPoly,
    seed: u64,
    out_value: *mut f64,
    out_certified: *mut f64,
    out_heuristic: *mut u8,
) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?;
        let cfg = OptimizerConfig {
            seed,
            ..OptimizerConfig::default()
        };
        let r = sup_norm_auto(p, &cfg)?;
        write_out(out_value, r.value.to_f64(), "out_value")?;
        write_out(out_certified, r.certified_lower.to_f64(), "out_certified")?;
        write_out(out_heuristic, r.method.is_heuristic() as u8, "out_heuristic")
    })
}

/// `|P|_{2m/(m+1)} / ‖P‖` with the sup norm chosen automatically.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_poly_lower_bound(poly: *const BhPoly, out: *mut BhBound) -> BhStatus {
    guard(|| {
        let p = poly_arg(poly)?;
        let norm = sup_norm_auto(p, &OptimizerConfig::default())?;
        let r = bh_lower_bound(p, &norm)?;
        write_out(out, bound_of(&r, norm.method.is_heuristic()), "out")
    })
}

/// Bound from the `power`-th power of a family member.
///
/// # Safety
/// String arguments must be NUL-terminated or null; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_power_bound(
    family: *const c_char,
    params: *const c_char,
    power: u32,
    precision_digits: u32,
    out: *mut BhBound,
) -> BhStatus {
    guard(|| {
        let spec = family_spec(family, params)?;
        let r = power_bound(&spec, power, precision(precision_digits)?, &OptimizerConfig::default(), None)?;
        let heuristic = r.method == "multistart";
        write_out(out, bound_of(&r, heuristic), "out")
    })
}
