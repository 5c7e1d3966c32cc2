//! C ABI for the optonet engine: opaque handles, integer status codes, and a
//! thread-local last-error message. All functions are panic-safe.
//!
//! Ownership: `optonet_params_new`/`optonet_solve` return handles that must be
//! released with the matching `_free` function. Strings returned by this
//! library stay valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use optonet::entanglement::{pair_report, ModePair};
use optonet::error::Error;
use optonet::lyapunov::CovarianceMatrix;
use optonet::model::{Mode, NetworkParams};
use optonet::report::{solve_point, to_json, PointReport, Tolerances};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptonetStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A parameter violated its invariant (see the last-error message).
    InvalidParam = 3,
    /// Key/value level configuration problem (unknown key, bad value).
    Config = 4,
    /// The drift matrix is unstable: no steady state exists.
    Unstable = 5,
    /// The drift matrix is marginally stable: no unique steady state.
    Marginal = 6,
    /// Numerical failure (eigenvalue iteration, singular solve).
    Numerical = 7,
    /// Shape or usage contract violation.
    Contract = 8,
    /// Unknown mode name (valid names: b1, b2, as, a).
    UnknownMode = 9,
    /// The mode is not present in this system (three-mode mask).
    ModeAbsent = 10,
    /// Degenerate coupling configuration.
    Degenerate = 11,
    /// Unsupported configuration for the requested analysis.
    Unsupported = 12,
    /// The covariance is not a valid two-mode Gaussian state.
    Unphysical = 13,
    /// The output buffer is too small.
    BufferTooSmall = 14,
    /// The requested quantity is unavailable (e.g. covariance of an
    /// unstable point).
    Unavailable = 15,
    /// Internal panic; file a bug.
    Internal = 16,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> OptonetStatus {
    match err {
        Error::InvalidParam { .. } => OptonetStatus::InvalidParam,
        Error::Config { .. } => OptonetStatus::Config,
        Error::Unstable { .. } => OptonetStatus::Unstable,
        Error::Marginal { .. } => OptonetStatus::Marginal,
        Error::Numerical(_) => OptonetStatus::Numerical,
        Error::Contract(_) => OptonetStatus::Contract,
        Error::UnknownMode(_) => OptonetStatus::UnknownMode,
        Error::ModeAbsent(_) => OptonetStatus::ModeAbsent,
        Error::DegenerateConfiguration(_) => OptonetStatus::Degenerate,
        Error::UnsupportedConfiguration(_) => OptonetStatus::Unsupported,
        Error::UnphysicalCovariance(_) => OptonetStatus::Unphysical,
        Error::UnknownPreset { .. } | Error::Sweep(_) => OptonetStatus::Config,
        Error::Io(_) => OptonetStatus::Internal,
    }
}

fn fail(err: &Error) -> OptonetStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn guard(body: impl FnOnce() -> OptonetStatus) -> OptonetStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            OptonetStatus::Internal
        }
    }
}

unsafe fn parse_str<'a>(ptr: *const c_char) -> Result<&'a str, OptonetStatus> {
    if ptr.is_null() {
        set_last_error("null string argument");
        return Err(OptonetStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string argument is not valid UTF-8");
        OptonetStatus::InvalidUtf8
    })
}

fn parse_mode(name: &str) -> Result<Mode, OptonetStatus> {
    name.parse::<Mode>().map_err(|e| fail(&e))
}

/// Opaque parameter-set handle.
pub struct OptonetParams {
    inner: NetworkParams,
}

/// Opaque solve-result handle.
pub struct OptonetReport {
    report: PointReport,
    covariance: Option<CovarianceMatrix>,
    json: CString,
}

/// Last error message for this thread (empty string when none). Valid until
/// the next library call on the same thread.
#[no_mangle]
pub extern "C" fn optonet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Short name of a status code.
#[no_mangle]
pub extern "C" fn optonet_status_name(status: OptonetStatus) -> *const c_char {
    let name: &'static CStr = match status {
        OptonetStatus::Ok => c"ok",
        OptonetStatus::NullArgument => c"null_argument",
        OptonetStatus::InvalidUtf8 => c"invalid_utf8",
        OptonetStatus::InvalidParam => c"invalid_param",
        OptonetStatus::Config => c"config",
        OptonetStatus::Unstable => c"unstable",
        OptonetStatus::Marginal => c"marginal",
        OptonetStatus::Numerical => c"numerical",
        OptonetStatus::Contract => c"contract",
        OptonetStatus::UnknownMode => c"unknown_mode",
        OptonetStatus::ModeAbsent => c"mode_absent",
        OptonetStatus::Degenerate => c"degenerate",
        OptonetStatus::Unsupported => c"unsupported",
        OptonetStatus::Unphysical => c"unphysical",
        OptonetStatus::BufferTooSmall => c"buffer_too_small",
        OptonetStatus::Unavailable => c"unavailable",
        OptonetStatus::Internal => c"internal",
    };
    name.as_ptr()
}

/// Create a parameter set with the library defaults (decoupled, stable).
#[no_mangle]
pub extern "C" fn optonet_params_new() -> *mut OptonetParams {
    Box::into_raw(Box::new(OptonetParams {
        inner: NetworkParams::default(),
    }))
}

/// Release a parameter set. Null is accepted and ignored.
///
/// # Safety
/// `params` must be a pointer from [`optonet_params_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optonet_params_free(params: *mut OptonetParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Set one parameter by key name (the config-file keys). `aux_present`
/// accepts 0.0/1.0.
///
/// # Safety
/// `params` must be a live handle; `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn optonet_params_set(
    params: *mut OptonetParams,
    key: *const c_char,
    value: f64,
) -> OptonetStatus {
    guard(|| {
        let Some(params) = params.as_mut() else {
            set_last_error("null params handle");
            return OptonetStatus::NullArgument;
        };
        let key = match parse_str(key) {
            Ok(k) => k,
            Err(status) => return status,
        };
        if key == "aux_present" {
            if value == 0.0 {
                params.inner.aux_present = false;
            } else if value == 1.0 {
                params.inner.aux_present = true;
            } else {
                set_last_error(&format!("aux_present takes 0 or 1, got {value}"));
                return OptonetStatus::Config;
            }
            return OptonetStatus::Ok;
        }
        match optonet::config::set_numeric_field(&mut params.inner, key, value) {
            Ok(()) => OptonetStatus::Ok,
            Err(err) => fail(&err),
        }
    })
}

/// Read one parameter back by key name (`aux_present` reads as 0.0/1.0).
///
/// # Safety
/// `params` must be a live handle; `key` NUL-terminated; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn optonet_params_get(
    params: *const OptonetParams,
    key: *const c_char,
    out: *mut f64,
) -> OptonetStatus {
    guard(|| {
        let (Some(params), Some(out)) = (params.as_ref(), out.as_mut()) else {
            set_last_error("null argument");
            return OptonetStatus::NullArgument;
        };
        let key = match parse_str(key) {
            Ok(k) => k,
            Err(status) => return status,
        };
        let p = &params.inner;
        let value = match key {
            "omega1" => p.omega1,
            "omega2" => p.omega2,
            "gamma1" => p.gamma1,
            "gamma2" => p.gamma2,
            "kappa" => p.kappa,
            "kappa_s" => p.kappa_s,
            "delta_c" => p.delta_c,
            "delta_s" => p.delta_s,
            "g1" => p.g1,
            "g2" => p.g2,
            "gs1" => p.gs1,
            "gs2" => p.gs2,
            "j_hop" => p.j_hop,
            "eta_hop" => p.eta_hop,
            "nbar1" => p.nbar1,
            "nbar2" => p.nbar2,
            "aux_present" => {
                if p.aux_present {
                    1.0
                } else {
                    0.0
                }
            }
            other => {
                set_last_error(&format!("unknown key `{other}`"));
                return OptonetStatus::Config;
            }
        };
        *out = value;
        OptonetStatus::Ok
    })
}

/// Check the parameter invariants without solving.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn optonet_params_validate(params: *const OptonetParams) -> OptonetStatus {
    guard(|| {
        let Some(params) = params.as_ref() else {
            set_last_error("null params handle");
            return OptonetStatus::NullArgument;
        };
        match params.inner.validate() {
            Ok(()) => OptonetStatus::Ok,
            Err(err) => fail(&err),
        }
    })
}

/// Run the stability -> Lyapunov -> negativity pipeline. Succeeds even when
/// the point is unstable: the report then carries the spectrum but no
/// covariance, and the covariance accessors return `Unavailable`.
///
/// # Safety
/// `params` must be a live handle; `out` non-null. The returned handle must
/// be released with [`optonet_report_free`].
#[no_mangle]
pub unsafe extern "C" fn optonet_solve(
    params: *const OptonetParams,
    out: *mut *mut OptonetReport,
) -> OptonetStatus {
    guard(|| {
        let Some(params) = params.as_ref() else {
            set_last_error("null params handle");
            return OptonetStatus::NullArgument;
        };
        if out.is_null() {
            set_last_error("null output handle");
            return OptonetStatus::NullArgument;
        }
        let tol = Tolerances::default();
        let report = match solve_point(&params.inner, &tol) {
            Ok(r) => r,
            Err(err) => return fail(&err),
        };
        // rebuild the covariance handle for pair queries
        let covariance = if report.is_stable() {
            let dd = match optonet::model::build_drift_diffusion(&params.inner) {
                Ok(dd) => dd,
                Err(err) => return fail(&err),
            };
            match optonet::lyapunov::solve_lyapunov(&dd) {
                Ok(cov) => Some(cov),
                Err(err) => return fail(&err),
            }
        } else {
            None
        };
        let json = CString::new(to_json(&report)).unwrap_or_default();
        *out = Box::into_raw(Box::new(OptonetReport {
            report,
            covariance,
            json,
        }));
        OptonetStatus::Ok
    })
}

/// Release a report handle. Null is accepted and ignored.
///
/// # Safety
/// `report` must be a pointer from [`optonet_solve`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_free(report: *mut OptonetReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 1 if the drift matrix is strictly stable, else 0.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_is_stable(report: *const OptonetReport) -> i32 {
    report
        .as_ref()
        .map_or(0, |r| if r.report.is_stable() { 1 } else { 0 })
}

/// Largest real part of the drift spectrum.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_max_re_eig(report: *const OptonetReport) -> f64 {
    report
        .as_ref()
        .map_or(f64::NAN, |r| r.report.stability.max_re)
}

/// Quadrature dimension of the system (8, or 6 with the auxiliary cavity
/// masked out).
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_dim(report: *const OptonetReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.ordering.len())
}

/// Copy the steady-state covariance into `buf` (row-major, `dim * dim`
/// entries).
///
/// # Safety
/// `report` must be a live handle; `buf` must point to at least `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_covariance(
    report: *const OptonetReport,
    buf: *mut f64,
    len: usize,
) -> OptonetStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            set_last_error("null report handle");
            return OptonetStatus::NullArgument;
        };
        let Some(cov) = &r.covariance else {
            set_last_error("no covariance: the point has no steady state");
            return OptonetStatus::Unavailable;
        };
        if buf.is_null() {
            set_last_error("null buffer");
            return OptonetStatus::NullArgument;
        }
        let n = cov.dim();
        if len < n * n {
            set_last_error(&format!("buffer holds {len} doubles, need {}", n * n));
            return OptonetStatus::BufferTooSmall;
        }
        for i in 0..n {
            for j in 0..n {
                *buf.add(i * n + j) = cov.v[(i, j)];
            }
        }
        OptonetStatus::Ok
    })
}

/// Residual of the Lyapunov solve, `Unavailable` for unstable points.
///
/// # Safety
/// `report` must be a live handle; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_residual(
    report: *const OptonetReport,
    out: *mut f64,
) -> OptonetStatus {
    guard(|| {
        let (Some(r), Some(out)) = (report.as_ref(), out.as_mut()) else {
            set_last_error("null argument");
            return OptonetStatus::NullArgument;
        };
        match r.report.residual {
            Some(res) => {
                *out = res;
                OptonetStatus::Ok
            }
            None => {
                set_last_error("no residual: the point has no steady state");
                OptonetStatus::Unavailable
            }
        }
    })
}

unsafe fn pair_quantity(
    report: *const OptonetReport,
    mode_a: *const c_char,
    mode_b: *const c_char,
    out: *mut f64,
    pick: impl Fn(f64, f64) -> f64,
) -> OptonetStatus {
    let (Some(r), Some(out)) = (report.as_ref(), out.as_mut()) else {
        set_last_error("null argument");
        return OptonetStatus::NullArgument;
    };
    let first = match parse_str(mode_a).and_then(parse_mode) {
        Ok(m) => m,
        Err(status) => return status,
    };
    let second = match parse_str(mode_b).and_then(parse_mode) {
        Ok(m) => m,
        Err(status) => return status,
    };
    let Some(cov) = &r.covariance else {
        set_last_error("no covariance: the point has no steady state");
        return OptonetStatus::Unavailable;
    };
    let pair = match ModePair::new(first, second) {
        Ok(p) => p,
        Err(err) => return fail(&err),
    };
    match pair_report(cov, pair) {
        Ok(rep) => {
            *out = pick(rep.sigma_minus, rep.log_neg);
            OptonetStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Logarithmic negativity of a mode pair (mode names: b1, b2, as, a).
///
/// # Safety
/// `report` must be a live handle; mode names NUL-terminated; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_log_negativity(
    report: *const OptonetReport,
    mode_a: *const c_char,
    mode_b: *const c_char,
    out: *mut f64,
) -> OptonetStatus {
    guard(|| pair_quantity(report, mode_a, mode_b, out, |_, en| en))
}

/// Smallest partially-transposed symplectic eigenvalue of a mode pair.
///
/// # Safety
/// `report` must be a live handle; mode names NUL-terminated; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_sigma_minus(
    report: *const OptonetReport,
    mode_a: *const c_char,
    mode_b: *const c_char,
    out: *mut f64,
) -> OptonetStatus {
    guard(|| pair_quantity(report, mode_a, mode_b, out, |sigma, _| sigma))
}

/// Full report as a JSON document (same shape as `optonet solve --format
/// json`). The pointer stays valid until the report is freed.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn optonet_report_json(report: *const OptonetReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Evaluate the dark-mode existence conditions: writes M1, M2 and the
/// verdict (1 = a dark mode exists). Pass `tol <= 0` for the default
/// tolerance.
///
/// # Safety
/// `params` must be a live handle; output pointers non-null.
#[no_mangle]
pub unsafe extern "C" fn optonet_dark_mode(
    params: *const OptonetParams,
    tol: f64,
    m1: *mut f64,
    m2: *mut f64,
    exists: *mut i32,
) -> OptonetStatus {
    guard(|| {
        let Some(params) = params.as_ref() else {
            set_last_error("null params handle");
            return OptonetStatus::NullArgument;
        };
        if m1.is_null() || m2.is_null() || exists.is_null() {
            set_last_error("null output pointer");
            return OptonetStatus::NullArgument;
        }
        let tol = if tol > 0.0 {
            tol
        } else {
            optonet::darkmode::DEFAULT_DARK_MODE_TOL
        };
        match optonet::darkmode::dark_mode_conditions(&params.inner, tol) {
            Ok(rep) => {
                *m1 = rep.m1;
                *m2 = rep.m2;
                *exists = if rep.dark_mode_exists { 1 } else { 0 };
                OptonetStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}
