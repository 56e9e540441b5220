//! C interface to `fracspline`.
//!
//! Every function returns an [`FsStatus`]; results are written through out
//! pointers. Splines are opaque handles created with [`fs_bspline_new`] and
//! released with [`fs_bspline_free`]. Strings returned by the library must be
//! released with [`fs_string_free`].

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fracspline::bspline::ComplexBSpline;
use fracspline::verify::{all_passed, run_suite, Suite};
use fracspline::{Error, C64};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidOrder = 2,
    Pole = 3,
    InvalidArgument = 4,
    Numerical = 5,
    VerificationFailed = 6,
    Panic = 7,
}

/// A complex number.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for FsComplex {
    fn from(z: C64) -> Self {
        FsComplex { re: z.re, im: z.im }
    }
}

/// Opaque complex B-spline handle.
pub struct FsBSpline {
    inner: ComplexBSpline,
}

fn status(e: &Error) -> FsStatus {
    match e {
        Error::InvalidOrder { .. } => FsStatus::InvalidOrder,
        Error::Pole(_) | Error::SingularAtZero(_) | Error::LatticePointSingularity(_) => FsStatus::Pole,
        Error::NoConvergence(_) | Error::NoDecay(_) | Error::TailNotNegligible { .. } | Error::NonIntegrable(_) => {
            FsStatus::Numerical
        }
        _ => FsStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> FsStatus) -> FsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(FsStatus::Panic)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fs_status_message(status: FsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FsStatus::Ok => c"ok",
        FsStatus::NullPointer => c"null pointer argument",
        FsStatus::InvalidOrder => c"order outside the admissible range",
        FsStatus::Pole => c"argument at or near a pole",
        FsStatus::InvalidArgument => c"invalid argument",
        FsStatus::Numerical => c"numerical method did not converge",
        FsStatus::VerificationFailed => c"at least one identity failed",
        FsStatus::Panic => c"internal error",
    };
    s.as_ptr()
}

/// `Γ(re + i im)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fs_gamma(re: f64, im: f64, out: *mut FsComplex) -> FsStatus {
    if out.is_null() {
        return FsStatus::NullPointer;
    }
    guarded(|| match fracspline::numerics::gamma(C64::new(re, im)) {
        Ok(v) => {
            // SAFETY: checked non-null above; the caller guarantees validity.
            unsafe { out.write(v.into()) };
            FsStatus::Ok
        }
        Err(e) => status(&e),
    })
}

/// Creates a spline of order `re + i im` (`re > 1`).
///
/// # Safety
/// `out` must be null or valid for writes. On success the handle written to
/// `out` must be released with [`fs_bspline_free`].
#[no_mangle]
pub unsafe extern "C" fn fs_bspline_new(re: f64, im: f64, out: *mut *mut FsBSpline) -> FsStatus {
    if out.is_null() {
        return FsStatus::NullPointer;
    }
    guarded(|| match ComplexBSpline::new(C64::new(re, im)) {
        Ok(inner) => {
            let h = Box::into_raw(Box::new(FsBSpline { inner }));
            // SAFETY: checked non-null above.
            unsafe { out.write(h) };
            FsStatus::Ok
        }
        Err(e) => status(&e),
    })
}

/// Releases a spline handle. Null is ignored.
///
/// # Safety
/// `spline` must be null or a handle from [`fs_bspline_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_bspline_free(spline: *mut FsBSpline) {
    if !spline.is_null() {
        // SAFETY: the caller passes a live handle created by Box::into_raw.
        drop(unsafe { Box::from_raw(spline) });
    }
}

/// Time-domain value at `x`. `accuracy_loss` (optional) receives 1 when the
/// series lost accuracy to cancellation and the Fourier inversion was used.
///
/// # Safety
/// `spline` must be a live handle; `out` valid for writes; `accuracy_loss`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fs_bspline_eval_time(
    spline: *const FsBSpline,
    x: f64,
    out: *mut FsComplex,
    accuracy_loss: *mut c_int,
) -> FsStatus {
    if spline.is_null() || out.is_null() {
        return FsStatus::NullPointer;
    }
    if !x.is_finite() {
        return FsStatus::InvalidArgument;
    }
    guarded(|| {
        // SAFETY: checked non-null; the caller guarantees a live handle.
        let s = unsafe { &(*spline).inner };
        let t = s.eval_time(x);
        let v = if t.accuracy_loss { s.eval_time_fourier(x) } else { t.value };
        // SAFETY: pointers checked above or by the caller.
        unsafe {
            out.write(v.into());
            if !accuracy_loss.is_null() {
                accuracy_loss.write(c_int::from(t.accuracy_loss));
            }
        }
        FsStatus::Ok
    })
}

/// Spectrum `Ω(ω)^z` at `w`.
///
/// # Safety
/// `spline` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fs_bspline_eval_freq(spline: *const FsBSpline, w: f64, out: *mut FsComplex) -> FsStatus {
    if spline.is_null() || out.is_null() {
        return FsStatus::NullPointer;
    }
    if !w.is_finite() {
        return FsStatus::InvalidArgument;
    }
    guarded(|| {
        // SAFETY: checked non-null; the caller guarantees a live handle.
        let v = unsafe { (*spline).inner.eval_freq(w) };
        // SAFETY: checked non-null above.
        unsafe { out.write(v.into()) };
        FsStatus::Ok
    })
}

fn parse_suite(name: &str) -> Option<Suite> {
    Some(match name {
        "all" => Suite::All,
        "bspline" => Suite::Bspline,
        "fractional" => Suite::Fractional,
        "differences" => Suite::Differences,
        "dirichlet" => Suite::Dirichlet,
        "weighted" => Suite::Weighted,
        "multivariate" => Suite::Multivariate,
        _ => return None,
    })
}

/// Runs a verification suite and writes the JSON report to `json_out`
/// (release with [`fs_string_free`]). Returns `VerificationFailed` when an
/// identity failed; the report is written in that case too.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `json_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fs_verify_suite(suite: *const c_char, seed: u64, json_out: *mut *mut c_char) -> FsStatus {
    if suite.is_null() || json_out.is_null() {
        return FsStatus::NullPointer;
    }
    guarded(|| {
        // SAFETY: the caller passes a NUL-terminated string.
        let name = unsafe { CStr::from_ptr(suite) };
        let Some(suite) = name.to_str().ok().and_then(parse_suite) else {
            return FsStatus::InvalidArgument;
        };
        let reports = run_suite(suite, seed);
        let Ok(bytes) = fracspline::cli::reports_json(&reports) else {
            return FsStatus::Numerical;
        };
        let Ok(s) = CString::new(bytes) else {
            return FsStatus::Numerical;
        };
        // SAFETY: checked non-null above.
        unsafe { json_out.write(s.into_raw()) };
        if all_passed(&reports) {
            FsStatus::Ok
        } else {
            FsStatus::VerificationFailed
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the string was created by CString::into_raw.
        drop(unsafe { CString::from_raw(s) });
    }
}
