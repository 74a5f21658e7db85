//! C ABI for the bound evaluators and the extremal search.
//!
//! Every function returns a [`BiunivStatus`] and writes results through out
//! pointers. Parameter sets travel as opaque `BiunivParams` handles created
//! by [`biuniv_params_new`] and released by [`biuniv_params_free`]. Panics
//! never cross the boundary; they surface as `Panic` status codes. The
//! build script regenerates `include/biuniv.h` from these signatures.

use std::ffi::{c_char, c_double, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use biuniv::bounds::{
    derived_a2_bound, derived_a3_bound, derived_fs_bound, printed_a2_bound, printed_a3_bound,
    printed_fs_bound, sigma_derived, sigma_printed, FsCase, FsReading,
};
use biuniv::chebyshev::{h_coeffs, t_poly, u_poly, u_poly_trig, ChebyshevArg};
use biuniv::class_gsigma::{induced_pair, membership_residual};
use biuniv::schwarz::AdmissibilityMode;
use biuniv::search::{maximize, Functional, SearchConfig};
use biuniv::series::PowerSeries;
use biuniv::{ClassParams, Error};
use num_complex::Complex64;

/// Result of every API call. Zero is success; everything else names the
/// failure. `biuniv_status_message` renders a static description.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiunivStatus {
    Ok = 0,
    NullArgument = 1,
    Domain = 2,
    NotNormalized = 3,
    NonzeroConstantTerm = 4,
    BoundUndefined = 5,
    DegenerateDenominator = 6,
    InconsistentPair = 7,
    Panic = 8,
    InvalidArgument = 9,
}

pub const BIUNIV_FUNCTIONAL_A2: c_int = 0;
pub const BIUNIV_FUNCTIONAL_A3: c_int = 1;
pub const BIUNIV_FUNCTIONAL_FS: c_int = 2;

pub const BIUNIV_MODE_PAPER: c_int = 0;
pub const BIUNIV_MODE_SCHUR: c_int = 1;

pub const BIUNIV_FS_CASE_SMALL_SIGMA: c_int = 0;
pub const BIUNIV_FS_CASE_LARGE_SIGMA: c_int = 1;

/// Opaque handle for one validated parameter point.
pub struct BiunivParams {
    inner: ClassParams,
}

/// Outcome of one extremal run. When `no_feasible_sample` is set the argmax
/// fields hold zeros and `empirical_max` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BiunivExtremal {
    pub empirical_max: c_double,
    pub bound_printed: c_double,
    pub bound_derived: c_double,
    pub margin_derived: c_double,
    pub p1_re: c_double,
    pub p1_im: c_double,
    pub p2_re: c_double,
    pub p2_im: c_double,
    pub q2_re: c_double,
    pub q2_im: c_double,
    pub feasible_samples: u64,
    pub violation_printed: bool,
    pub violation_derived: bool,
    pub no_feasible_sample: bool,
}

fn status_of(e: &Error) -> BiunivStatus {
    match e {
        Error::Domain(_) => BiunivStatus::Domain,
        Error::NotNormalized(_) => BiunivStatus::NotNormalized,
        Error::NonzeroConstantTerm(_) => BiunivStatus::NonzeroConstantTerm,
        Error::BoundUndefined(_) => BiunivStatus::BoundUndefined,
        Error::DegenerateDenominator(_) => BiunivStatus::DegenerateDenominator,
        Error::InconsistentPair(_) => BiunivStatus::InconsistentPair,
    }
}

fn guarded(f: impl FnOnce() -> BiunivStatus) -> BiunivStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(BiunivStatus::Panic)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn biuniv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn biuniv_status_message(status: BiunivStatus) -> *const c_char {
    let msg: &'static str = match status {
        BiunivStatus::Ok => "ok\0",
        BiunivStatus::NullArgument => "a required pointer was null\0",
        BiunivStatus::Domain => "argument outside the admissible domain\0",
        BiunivStatus::NotNormalized => "series is not normalized\0",
        BiunivStatus::NonzeroConstantTerm => "inner series has a nonzero constant term\0",
        BiunivStatus::BoundUndefined => "bound formula is undefined here\0",
        BiunivStatus::DegenerateDenominator => "denominator degenerates here\0",
        BiunivStatus::InconsistentPair => "pair violates q1 = -p1\0",
        BiunivStatus::Panic => "internal panic\0",
        BiunivStatus::InvalidArgument => "invalid enum or size argument\0",
    };
    msg.as_ptr() as *const c_char
}

unsafe fn eval_cheby(
    t: c_double,
    out: *mut c_double,
    f: impl Fn(ChebyshevArg) -> f64,
) -> BiunivStatus {
    if out.is_null() {
        return BiunivStatus::NullArgument;
    }
    guarded(|| match ChebyshevArg::new(t) {
        Ok(arg) => {
            unsafe { *out = f(arg) };
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Writes U_n(t) to `out`.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_cheby_u(n: u32, t: c_double, out: *mut c_double) -> BiunivStatus {
    eval_cheby(t, out, |arg| u_poly(n, arg))
}

/// Writes U_n(t) in trigonometric form to `out`.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_cheby_u_trig(
    n: u32,
    t: c_double,
    out: *mut c_double,
) -> BiunivStatus {
    eval_cheby(t, out, |arg| u_poly_trig(n, arg))
}

/// Writes T_n(t) to `out`.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_cheby_t(n: u32, t: c_double, out: *mut c_double) -> BiunivStatus {
    eval_cheby(t, out, |arg| t_poly(n, arg))
}

/// Writes the first `order + 1` coefficients of 1/(1 - 2tz + z^2) to `out`.
///
/// # Safety
/// `out` must point to at least `order + 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn biuniv_h_coeffs(
    t: c_double,
    order: usize,
    out: *mut c_double,
) -> BiunivStatus {
    if out.is_null() {
        return BiunivStatus::NullArgument;
    }
    guarded(|| match ChebyshevArg::new(t) {
        Ok(arg) => {
            let series = h_coeffs(arg, order);
            for k in 0..=order {
                unsafe { *out.add(k) = series.coeff(k).re };
            }
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Validates (delta, t, m) and writes a fresh handle to `out`.
///
/// # Safety
/// `out` must point to a writable pointer slot. The handle must be released
/// with `biuniv_params_free`.
#[no_mangle]
pub unsafe extern "C" fn biuniv_params_new(
    delta: c_double,
    t: c_double,
    m: u32,
    out: *mut *mut BiunivParams,
) -> BiunivStatus {
    if out.is_null() {
        return BiunivStatus::NullArgument;
    }
    guarded(|| match ClassParams::new(delta, t, m) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(BiunivParams { inner })) };
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `params` must be null or a handle from `biuniv_params_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn biuniv_params_free(params: *mut BiunivParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Writes the coefficient weight for index `k` to `out`.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_params_weight(
    params: *const BiunivParams,
    k: u32,
    out: *mut c_double,
) -> BiunivStatus {
    if params.is_null() || out.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    guarded(|| {
        unsafe { *out = params.weight(k) };
        BiunivStatus::Ok
    })
}

unsafe fn eval_bound(
    params: *const BiunivParams,
    out: *mut c_double,
    f: impl Fn(&ClassParams) -> Result<f64, Error>,
) -> BiunivStatus {
    if params.is_null() || out.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    guarded(|| match f(params) {
        Ok(v) => {
            unsafe { *out = v };
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Printed |a2| bound.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_printed_a2_bound(
    params: *const BiunivParams,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, printed_a2_bound)
}

/// Printed |a3| bound.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_printed_a3_bound(
    params: *const BiunivParams,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, |p| Ok(printed_a3_bound(p)))
}

/// Derived |a2| bound.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_derived_a2_bound(
    params: *const BiunivParams,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, |p| Ok(derived_a2_bound(p)))
}

/// Derived |a3| bound.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_derived_a3_bound(
    params: *const BiunivParams,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, |p| Ok(derived_a3_bound(p)))
}

/// Printed sigma(r).
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_sigma_printed(
    params: *const BiunivParams,
    r: c_double,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, |p| sigma_printed(p, r))
}

/// Derived sigma(r).
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_sigma_derived(
    params: *const BiunivParams,
    r: c_double,
    out: *mut c_double,
) -> BiunivStatus {
    eval_bound(params, out, |p| sigma_derived(p, r))
}

fn case_code(case: FsCase) -> c_int {
    match case {
        FsCase::SmallSigma => BIUNIV_FS_CASE_SMALL_SIGMA,
        FsCase::LargeSigma => BIUNIV_FS_CASE_LARGE_SIGMA,
    }
}

/// Printed Fekete-Szego bound at weight `r`. `literal` keeps the division
/// in the large-sigma branch. `out_case` may be null.
///
/// # Safety
/// `params` must be a live handle; `out_value` must point to a writable
/// double; `out_case`, when non-null, to a writable int.
#[no_mangle]
pub unsafe extern "C" fn biuniv_printed_fs_bound(
    params: *const BiunivParams,
    r: c_double,
    literal: bool,
    out_value: *mut c_double,
    out_case: *mut c_int,
) -> BiunivStatus {
    if params.is_null() || out_value.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    let reading = if literal {
        FsReading::Literal
    } else {
        FsReading::Continuous
    };
    guarded(|| match printed_fs_bound(params, r, reading) {
        Ok((value, case)) => {
            unsafe { *out_value = value };
            if !out_case.is_null() {
                unsafe { *out_case = case_code(case) };
            }
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Derived Fekete-Szego bound at weight `r`. `out_case` may be null.
///
/// # Safety
/// `params` must be a live handle; `out_value` must point to a writable
/// double; `out_case`, when non-null, to a writable int.
#[no_mangle]
pub unsafe extern "C" fn biuniv_derived_fs_bound(
    params: *const BiunivParams,
    r: c_double,
    out_value: *mut c_double,
    out_case: *mut c_int,
) -> BiunivStatus {
    if params.is_null() || out_value.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    guarded(|| match derived_fs_bound(params, r) {
        Ok((value, case)) => {
            unsafe { *out_value = value };
            if !out_case.is_null() {
                unsafe { *out_case = case_code(case) };
            }
            BiunivStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Inverts z + coeffs[0] z^2 + ... and writes the inverse coefficients for
/// z^2 through z^order (that is, `order - 1` doubles) to `out`.
///
/// # Safety
/// `coeffs` must point to `len` readable doubles (null only if `len` is 0);
/// `out` must point to `order - 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn biuniv_invert(
    coeffs: *const c_double,
    len: usize,
    order: usize,
    out: *mut c_double,
) -> BiunivStatus {
    if out.is_null() || (coeffs.is_null() && len > 0) {
        return BiunivStatus::NullArgument;
    }
    if order < 2 || len > order - 1 {
        return BiunivStatus::InvalidArgument;
    }
    let tail = if len == 0 {
        &[]
    } else {
        unsafe { std::slice::from_raw_parts(coeffs, len) }
    };
    guarded(|| {
        let mut c = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        c.extend(tail.iter().map(|&x| Complex64::new(x, 0.0)));
        c.resize(order + 1, Complex64::new(0.0, 0.0));
        match PowerSeries::new(c).reverse() {
            Ok(inverse) => {
                for k in 2..=order {
                    unsafe { *out.add(k - 2) = inverse.coeff(k).re };
                }
                BiunivStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Residual of the two subordination expansions for the pair closed over
/// (p1, p2); zero (up to rounding) exactly when the pair sits on the
/// constraint system.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn biuniv_membership_residual(
    params: *const BiunivParams,
    p1_re: c_double,
    p1_im: c_double,
    p2_re: c_double,
    p2_im: c_double,
    out: *mut c_double,
) -> BiunivStatus {
    if params.is_null() || out.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    guarded(|| {
        let pair = induced_pair(
            Complex64::new(p1_re, p1_im),
            Complex64::new(p2_re, p2_im),
            params,
            AdmissibilityMode::Paper,
        );
        match membership_residual(&pair, params) {
            Ok(v) => {
                unsafe { *out = v };
                BiunivStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Runs one seeded extremal search. `functional` is one of the
/// BIUNIV_FUNCTIONAL_* codes (`r` only matters for the Fekete-Szego one);
/// `mode` is one of the BIUNIV_MODE_* codes.
///
/// # Safety
/// `params` must be a live handle; `out` must point to a writable
/// `BiunivExtremal`.
#[no_mangle]
pub unsafe extern "C" fn biuniv_maximize(
    params: *const BiunivParams,
    functional: c_int,
    r: c_double,
    mode: c_int,
    samples: u64,
    seed: u64,
    refine_steps: u32,
    refine_shrink: c_double,
    out: *mut BiunivExtremal,
) -> BiunivStatus {
    if params.is_null() || out.is_null() {
        return BiunivStatus::NullArgument;
    }
    let params = unsafe { &(*params).inner };
    let functional = match functional {
        BIUNIV_FUNCTIONAL_A2 => Functional::A2,
        BIUNIV_FUNCTIONAL_A3 => Functional::A3,
        BIUNIV_FUNCTIONAL_FS => Functional::Fs(r),
        _ => return BiunivStatus::InvalidArgument,
    };
    let mode = match mode {
        BIUNIV_MODE_PAPER => AdmissibilityMode::Paper,
        BIUNIV_MODE_SCHUR => AdmissibilityMode::Schur,
        _ => return BiunivStatus::InvalidArgument,
    };
    guarded(|| {
        let config = SearchConfig {
            samples,
            seed,
            mode,
            refine_steps,
            refine_shrink,
        };
        match maximize(params, functional, &config) {
            Ok(report) => {
                let (p1, p2, q2) = report
                    .argmax
                    .as_ref()
                    .map(|pair| (pair.p1, pair.p2, pair.q2))
                    .unwrap_or((
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                        Complex64::new(0.0, 0.0),
                    ));
                unsafe {
                    *out = BiunivExtremal {
                        empirical_max: report.empirical_max,
                        bound_printed: report.bound_printed,
                        bound_derived: report.bound_derived,
                        margin_derived: report.margin_derived,
                        p1_re: p1.re,
                        p1_im: p1.im,
                        p2_re: p2.re,
                        p2_im: p2.im,
                        q2_re: q2.re,
                        q2_im: q2.im,
                        feasible_samples: report.feasible_samples,
                        violation_printed: report.violation_printed,
                        violation_derived: report.violation_derived,
                        no_feasible_sample: report.no_feasible_sample,
                    };
                }
                BiunivStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
